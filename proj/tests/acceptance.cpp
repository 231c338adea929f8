// Acceptance harness: one line per criterion, exit nonzero iff any line fails.
// Each criterion pins its own workload and tolerance; every tolerance is zero
// mismatches unless the line says otherwise.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kqt/digraph.hpp"
#include "kqt/engine.hpp"
#include "kqt/rng.hpp"
#include "kqt/structure.hpp"
#include "kqt/verifier.hpp"

using namespace kqt;

namespace {

constexpr int kExhaustiveOrder = 4;
constexpr std::uint64_t kRandomTrials = 1000;
constexpr int kRandomMaxOrder = 10;
constexpr std::uint64_t kRandomSeed = 20260816;

constexpr std::uint64_t kCorpusInstancesK5 = 500;
constexpr std::uint64_t kCorpusInstancesK7 = 200;
constexpr std::uint64_t kCorpusSeed = 1;
constexpr std::int64_t kMinTriggerInstances = 50;

constexpr std::uint64_t kConverseTrials = 1000;
constexpr std::uint64_t kLemma6Trials = 200;

int failed = 0;

void line(int criterion, bool pass, const std::string& text) {
    std::printf("criterion %d %s: %s\n", criterion, pass ? "PASS" : "FAIL", text.c_str());
    if (!pass) ++failed;
}

bool name_in(const std::string& name, const std::vector<std::string>& exact,
             const std::vector<std::string>& prefixes) {
    for (const auto& e : exact)
        if (name == e) return true;
    for (const auto& p : prefixes)
        if (name.rfind(p, 0) == 0) return true;
    return false;
}

std::int64_t counter(const SuiteReport& r, const std::string& key) {
    auto it = r.counters.find(key);
    return it == r.counters.end() ? 0 : it->second;
}

// Failure records from both corpus runs whose check name belongs to the set.
std::uint64_t failures_in(const std::vector<const SuiteReport*>& runs,
                          const std::function<bool(const std::string&)>& belongs) {
    std::uint64_t n = 0;
    for (const auto* r : runs)
        for (const auto& f : r->failures)
            if (belongs(f.check)) ++n;
    return n;
}

}  // namespace

int main() {
    // 1. The fast recognizer agrees with its definition-literal oracle,
    //    exhaustively at order 4 (k = 2 and 3) and on seeded random digraphs
    //    up to order 10 (k = 5 and 7).
    {
        std::uint64_t mismatches = 0;
        for (int k : {2, 3}) {
            DigraphEnumerator en(kExhaustiveOrder);
            while (auto d = en.next())
                if (is_k_quasi_transitive(*d, k) != oracle_is_kqt(*d, k)) ++mismatches;
        }
        SplitMix64 rng(kRandomSeed);
        for (std::uint64_t i = 0; i < kRandomTrials; ++i) {
            Digraph d = random_digraph(rng, kRandomMaxOrder);
            for (int k : {5, 7})
                if (is_k_quasi_transitive(d, k) != oracle_is_kqt(d, k)) ++mismatches;
        }
        line(1, mismatches == 0,
             "recognizer matches the oracle on 2x4096 exhaustive digraphs and " +
                 std::to_string(kRandomTrials) + " random ones for k=5 and k=7 (" +
                 std::to_string(mismatches) + " mismatches)");
    }

    // 2. Exhaustive scan at orders 3, 4, 5: every strong 3-quasi-transitive
    //    digraph should classify as semicomplete, semicomplete bipartite, or
    //    the exceptional family. The scan refutes this at orders 4 and 5.
    {
        auto s3 = run_theorem2_scan(3);
        auto s4 = run_theorem2_scan(4);
        auto s5 = run_theorem2_scan(5);
        bool pass = s3.pass() && s4.pass() && s5.pass();
        std::string text;
        if (pass) {
            text = "exhaustive scans at n=3,4,5 report zero exceptions";
        } else {
            text = "exhaustive scans report " + std::to_string(s3.failures.size()) + "/" +
                   std::to_string(s4.failures.size()) + "/" + std::to_string(s5.failures.size()) +
                   " exceptions at n=3/4/5; every exception is the exceptional family plus "
                   "digon-completing arcs on its central 3-cycle, so the claimed trichotomy "
                   "is false from order 4 on; smallest: " +
                   (s4.failures.empty() ? std::string("none") : s4.failures.front().digraph);
        }
        line(2, pass, text);

        // 9 reuses s4/s5 indirectly: rerun determinism for the scan is checked
        // against s4 below.
        static SuiteReport scan4 = s4;

        // 3..5 and 7 read off the two generated-corpus runs.
        Theorem3Params p5;
        p5.k = 5;
        p5.instances = kCorpusInstancesK5;
        p5.n_min = 8;
        p5.n_max = 14;
        p5.seed = kCorpusSeed;
        auto t5 = run_theorem3_suite(p5);

        Theorem3Params p7;
        p7.k = 7;
        p7.instances = kCorpusInstancesK7;
        p7.n_min = 10;
        p7.n_max = 16;
        p7.seed = kCorpusSeed;
        auto t7 = run_theorem3_suite(p7);

        const std::vector<const SuiteReport*> runs = {&t5, &t7};

        auto is_c3 = [](const std::string& n) {
            return name_in(n, {"frame.verdict", "outside.verdict"}, {});
        };
        auto is_c4 = [](const std::string& n) {
            return name_in(n,
                           {"frame.cross-adjacency", "frame.skip-arcs", "witness.diff-parity",
                            "witness.same-parity"},
                           {"frame.forced-arc."});
        };
        auto is_c5 = [](const std::string& n) { return n == "frame.backward-complete"; };
        auto is_c7 = [&](const std::string& n) { return !is_c3(n) && !is_c4(n) && !is_c5(n); };

        const std::uint64_t valid = t5.valid + t7.valid;

        auto c3_bad = failures_in(runs, is_c3);
        line(3, t5.valid == kCorpusInstancesK5 && t7.valid == kCorpusInstancesK7 && c3_bad == 0,
             "frame and outside verdicts stay in their allowed classes on " +
                 std::to_string(valid) + " generated instances for k=5 and k=7 (" +
                 std::to_string(c3_bad) + " verdict failures)");

        auto c4_bad = failures_in(runs, is_c4);
        line(4, c4_bad == 0,
             "forced arcs, cross-parity adjacency, and both witness constructions hold on "
             "every corpus instance (" +
                 std::to_string(c4_bad) + " failures)");

        auto c5_bad = failures_in(runs, is_c5);
        std::int64_t triggered = counter(t5, "trigger.present") + counter(t7, "trigger.present");
        line(5, c5_bad == 0 && triggered >= kMinTriggerInstances,
             "backward completeness holds on " + std::to_string(triggered) +
                 " instances with a same-parity frame adjacency (needed >= " +
                 std::to_string(kMinTriggerInstances) + ", " + std::to_string(c5_bad) +
                 " failures)");

        // 6. Backward-path construction inside random semicomplete shortest
        //    paths, every (j, i, p) triple.
        Lemma6Params l6;
        l6.trials = kLemma6Trials;
        l6.seed = kCorpusSeed;
        auto lem = run_lemma6_suite(l6);
        line(6, lem.pass() && counter(lem, "triples.checked") > 0,
             "backward-path construction succeeded on all " +
                 std::to_string(counter(lem, "triples.checked")) + " triples across " +
                 std::to_string(lem.valid) + " semicomplete path instances");

        auto c7_bad = failures_in(runs, is_c7);
        std::int64_t bip = counter(t5, "frame.semicomplete-bipartite") +
                           counter(t7, "frame.semicomplete-bipartite");
        std::int64_t semi = counter(t5, "frame.semicomplete") + counter(t7, "frame.semicomplete");
        line(7, c7_bad == 0 && bip > 0 && semi > 0,
             "outside-structure laws hold on every corpus instance (" + std::to_string(bip) +
                 " bipartite-frame and " + std::to_string(semi) + " collapsed-frame instances, " +
                 std::to_string(c7_bad) + " failures)");

        // 8. The recognizer verdict is invariant under reversing every arc:
        //    exhaustive at order <= 4 for k = 2 and 3, plus the seeded random
        //    suite at k = 5.
        std::uint64_t converse_bad = 0;
        for (int n = 1; n <= 4; ++n)
            for (int k : {2, 3}) {
                DigraphEnumerator en(n);
                while (auto d = en.next())
                    if (is_k_quasi_transitive(*d, k) != is_k_quasi_transitive(converse(*d), k))
                        ++converse_bad;
            }
        auto conv = run_converse_suite(5, kConverseTrials, kCorpusSeed);
        line(8, converse_bad == 0 && conv.pass(),
             "verdicts are converse-invariant, exhaustively to order 4 and on " +
                 std::to_string(conv.valid) + " random digraphs (" +
                 std::to_string(converse_bad + conv.failures.size()) + " mismatches)");

        // 9. Every suite reproduces its report byte-for-byte from the master
        //    seed, independent of the worker count.
        auto t5_again = run_theorem3_suite(p5);
        Theorem3Params p5_wide = p5;
        p5_wide.jobs = 4;
        auto t5_wide = run_theorem3_suite(p5_wide);
        auto scan_wide = run_theorem2_scan(4, 2);
        auto conv_again = run_converse_suite(5, kConverseTrials, kCorpusSeed);
        auto lem_again = run_lemma6_suite(l6);
        bool det = t5_again.deterministic_text() == t5.deterministic_text() &&
                   t5_wide.deterministic_text() == t5.deterministic_text() &&
                   scan_wide.deterministic_text() == scan4.deterministic_text() &&
                   conv_again.deterministic_text() == conv.deterministic_text() &&
                   lem_again.deterministic_text() == lem.deterministic_text();
        line(9, det,
             det ? "reruns and parallel runs reproduce every suite report byte-for-byte"
                 : "a rerun diverged from its original report");
    }

    if (failed == 0)
        std::printf("acceptance: all 9 criteria hold\n");
    else
        std::printf("acceptance: %d of 9 criteria failing\n", failed);
    return failed == 0 ? 0 : 1;
}
