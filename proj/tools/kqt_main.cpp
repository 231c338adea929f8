#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kqt/digraph.hpp"
#include "kqt/engine.hpp"
#include "kqt/errors.hpp"
#include "kqt/rng.hpp"
#include "kqt/structure.hpp"
#include "kqt/verifier.hpp"

namespace {

using namespace kqt;

Digraph load_digraph(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw usage_error("cannot open " + file);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_edge_list(buf.str());
}

std::uint64_t pick_seed(const std::optional<std::uint64_t>& requested) {
    if (requested) return *requested;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int cmd_check(const std::string& file, int k) {
    Digraph d = load_digraph(file);
    std::cout << "strong: " << (is_strong(d) ? "yes" : "no") << "\n";
    auto diam = diameter(d);
    std::cout << "diameter: " << (diam ? std::to_string(*diam) : "infinite") << "\n";
    auto violation = find_violation(d, k);
    std::cout << "k-quasi-transitive: " << (violation ? "no" : "yes") << "\n";
    if (violation) {
        std::cout << "violation: " << path_witness(violation->path) << "\n";
        return 1;
    }
    return 0;
}

int cmd_classify(const std::string& file, int k, const std::string& dot_file) {
    Digraph d = load_digraph(file);
    if (!dot_file.empty()) {
        std::ofstream out(dot_file);
        if (!out) throw usage_error("cannot write " + dot_file);
        out << to_dot(d);
    }
    AnalysisResult res = classify_all(d, k);
    if (!res.hypotheses_ok()) {
        std::cout << "hypothesis failed: " << res.hypothesis_failure << "\n";
        return 2;
    }
    const ShortestPathFrame& f = *res.frame;
    std::cout << "frame vertices:";
    for (int v : f.path) std::cout << " " << v;
    std::cout << "\n";
    std::cout << "frame: " << verdict_name(res.frame_class.verdict)
              << (frame_bipartition_matches(f, res.frame_class) ? " (O|E)" : "") << "\n";
    std::cout << "outside: " << verdict_name(res.outside_class.verdict) << "\n";
    const OutsidePartition& p = res.partition;
    std::cout << "partition: I=" << p.I.size() << " W=" << p.W.size() << " B=" << p.B.size()
              << " I1=" << p.I1.size() << " I2=" << p.I2.size() << " W1=" << p.W1.size()
              << " W2=" << p.W2.size() << " B1=" << p.B1.size() << " B2=" << p.B2.size()
              << " Itilde=" << p.I_tilde.size() << "\n";
    std::cout << res.checks.to_text();
    return res.checks.all_pass() ? 0 : 1;
}

int cmd_witness(const std::string& file, int k, int s, int t) {
    Digraph d = load_digraph(file);
    if (!(0 <= t && t < s && s <= k + 2))
        throw usage_error("need positions 0 <= t < s <= k+2");
    auto frame = find_frame(d, k);
    if (!frame) throw usage_error("no frame: diameter < k+2");
    try {
        FrameWitness w = (s - t) % 2 == 1 ? witness_path_diff_parity(d, *frame, s, t)
                                          : witness_path_same_parity(d, *frame, s, t);
        for (std::size_t i = 0; i < w.path.size(); ++i)
            std::cout << (i ? " " : "") << w.path[i];
        std::cout << " (length " << w.path.size() - 1 << ")\n";
        return 0;
    } catch (const structural_violation& e) {
        std::cout << "construction failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_generate(int k, int n, double density, std::optional<std::uint64_t> seed_opt,
                 const std::string& out_file) {
    if (k < 5 || k % 2 == 0) throw usage_error("k must be odd and at least 5");
    if (n < k + 3) throw usage_error("n must be at least k+3");
    if (density < 0.0 || density > 1.0) throw usage_error("density must lie in [0,1]");
    std::uint64_t seed = pick_seed(seed_opt);
    std::cout << "seed: " << seed << "\n";
    constexpr int kRetryBudget = 64;
    GenerateResult last;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        last = generate_frame_instance(k, n - (k + 3), density, derive_seed(seed, attempt));
        if (!last.ok()) continue;
        const Digraph& g = *last.graph;
        std::cout << "attempts: " << attempt + 1 << "\n";
        std::cout << "order: " << g.order() << "\n";
        std::cout << "arcs: " << g.arc_count() << "\n";
        if (out_file.empty()) {
            std::cout << to_edge_list(g);
        } else {
            std::ofstream out(out_file);
            if (!out) throw usage_error("cannot write " + out_file);
            out << to_edge_list(g);
        }
        return 0;
    }
    std::cout << "attempts: " << kRetryBudget << "\n";
    std::cout << "generation failed: " << last.failed_requirement << " (" << last.detail << ")\n";
    return 1;
}

struct VerifyOptions {
    std::string suite;
    int k = 5;
    std::uint64_t instances = 100;
    std::optional<int> n_min, n_max;
    std::uint64_t trials = 0;  // 0: per-suite default
    int n = 4;
    int jobs = 1;
    bool with_triggers = false;
    std::optional<std::uint64_t> seed;
};

int cmd_verify(const VerifyOptions& opt) {
    if (opt.suite != "theorem3" && opt.suite != "theorem2" && opt.suite != "converse" &&
        opt.suite != "lemma6")
        throw usage_error("unknown suite: " + opt.suite);
    std::uint64_t seed = pick_seed(opt.seed);
    std::cout << "seed: " << seed << "\n";
    SuiteReport rep;
    if (opt.suite == "theorem3") {
        Theorem3Params p;
        p.k = opt.k;
        p.instances = opt.instances;
        p.n_min = opt.n_min.value_or(opt.k + 3);
        p.n_max = opt.n_max.value_or(opt.k + 9);
        p.seed = seed;
        p.jobs = opt.jobs;
        p.with_triggers = opt.with_triggers;
        rep = run_theorem3_suite(p);
    } else if (opt.suite == "theorem2") {
        rep = run_theorem2_scan(opt.n, opt.jobs);
    } else if (opt.suite == "converse") {
        rep = run_converse_suite(opt.k, opt.trials ? opt.trials : 1000, seed, opt.jobs);
    } else if (opt.suite == "lemma6") {
        Lemma6Params p;
        p.n_min = opt.n_min.value_or(4);
        p.n_max = opt.n_max.value_or(8);
        p.trials = opt.trials ? opt.trials : 200;
        p.seed = seed;
        p.jobs = opt.jobs;
        rep = run_lemma6_suite(p);
    } else {
        throw usage_error("unknown suite: " + opt.suite);
    }
    std::cout << rep.to_text();
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural checks for strong k-quasi-transitive digraphs"};
    app.require_subcommand(1);

    std::string file, dot_file, out_file;
    int k = 5, s = 0, t = 0, n = 8;
    double density = 0.2;
    std::optional<std::uint64_t> seed;

    CLI::App* check = app.add_subcommand("check", "strongness, diameter, path condition");
    check->add_option("file", file, "digraph edge list")->required()->check(CLI::ExistingFile);
    check->add_option("-k", k, "path condition parameter")->capture_default_str();

    CLI::App* classify = app.add_subcommand("classify", "full structural analysis");
    classify->add_option("file", file, "digraph edge list")->required()->check(CLI::ExistingFile);
    classify->add_option("-k", k, "path condition parameter")->capture_default_str();
    classify->add_option("--dot", dot_file, "also write a DOT rendering here");

    CLI::App* witness = app.add_subcommand("witness", "frame witness path between positions");
    witness->add_option("file", file, "digraph edge list")->required()->check(CLI::ExistingFile);
    witness->add_option("-k", k, "path condition parameter")->capture_default_str();
    witness->add_option("-s", s, "start position on the frame")->required();
    witness->add_option("-t", t, "end position on the frame")->required();

    CLI::App* generate = app.add_subcommand("generate", "random frame instance");
    generate->add_option("-k", k, "path condition parameter")->capture_default_str();
    generate->add_option("-n", n, "total vertex count (at least k+3)")->capture_default_str();
    generate->add_option("--density", density, "sprinkled arc probability")->capture_default_str();
    generate->add_option("--seed", seed, "master seed (auto-chosen and printed if absent)");
    generate->add_option("-o,--out", out_file, "output edge-list file (stdout if absent)");

    VerifyOptions vopt;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", vopt.suite, "theorem3, theorem2, converse, or lemma6")->required();
    verify->add_option("-k", vopt.k, "path condition parameter")->capture_default_str();
    verify->add_option("--instances", vopt.instances, "valid instances to collect (theorem3)")
        ->capture_default_str();
    verify->add_option("--n-min", vopt.n_min, "smallest instance order");
    verify->add_option("--n-max", vopt.n_max, "largest instance order");
    verify->add_option("--trials", vopt.trials, "trial count (converse, lemma6)");
    verify->add_option("--n", vopt.n, "vertex count for the exhaustive scan (theorem2)")
        ->capture_default_str();
    verify->add_option("--jobs", vopt.jobs, "worker threads")->capture_default_str();
    verify->add_flag("--with-triggers", vopt.with_triggers,
                     "interleave instances with a same-parity frame adjacency (theorem3)");
    verify->add_option("--seed", vopt.seed, "master seed (auto-chosen and printed if absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(file, k);
        if (classify->parsed()) return cmd_classify(file, k, dot_file);
        if (witness->parsed()) return cmd_witness(file, k, s, t);
        if (generate->parsed()) return cmd_generate(k, n, density, seed, out_file);
        vopt.seed = vopt.seed ? vopt.seed : seed;
        return cmd_verify(vopt);
    } catch (const structural_violation& e) {
        std::cout << "violation: " << e.what() << "\n";
        return 1;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
