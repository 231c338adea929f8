#include "kqt/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>

#include "kqt/errors.hpp"

namespace kqt {

namespace {

using Counters = std::map<std::string, std::int64_t>;
using ArcList = std::vector<std::pair<int, int>>;

// ".min" keys keep the smallest value seen, ".max" keys the largest,
// everything else accumulates.
void merge_counter(Counters& into, const std::string& key, std::int64_t value) {
    auto [it, inserted] = into.emplace(key, value);
    if (inserted) return;
    if (key.ends_with(".min"))
        it->second = std::min(it->second, value);
    else if (key.ends_with(".max"))
        it->second = std::max(it->second, value);
    else
        it->second += value;
}

bool oracle_adjacent(const ArcList& arcs, int a, int b) {
    return std::find(arcs.begin(), arcs.end(), std::make_pair(a, b)) != arcs.end() ||
           std::find(arcs.begin(), arcs.end(), std::make_pair(b, a)) != arcs.end();
}

// True when every completion of `path` by exactly `remaining` more arcs ends
// adjacent to the start vertex.
bool oracle_paths_ok(const ArcList& arcs, std::vector<int>& path, int remaining) {
    if (remaining == 0) return oracle_adjacent(arcs, path.front(), path.back());
    for (const auto& arc : arcs) {
        if (arc.first != path.back()) continue;
        if (std::find(path.begin(), path.end(), arc.second) != path.end()) continue;
        path.push_back(arc.second);
        bool ok = oracle_paths_ok(arcs, path, remaining - 1);
        path.pop_back();
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool oracle_is_kqt(const Digraph& d, int k) {
    if (k < 2) throw usage_error("k must be at least 2");
    ArcList arcs = d.arcs();
    for (int v = 0; v < d.order(); ++v) {
        std::vector<int> path{v};
        if (!oracle_paths_ok(arcs, path, k)) return false;
    }
    return true;
}

StructureClass oracle_classify(const Digraph& d, const std::vector<int>& s) {
    std::vector<int> verts = s;
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    int m = static_cast<int>(verts.size());
    if (m > 12) throw usage_error("reference classifier supports at most 12 vertices");
    for (int v : verts)
        if (v < 0 || v >= d.order()) throw usage_error("classification set not a subset of vertices");

    StructureClass sc;
    if (m == 0) {
        sc.verdict = Verdict::Empty;
        return sc;
    }
    if (m == 1) {
        sc.verdict = Verdict::Semicomplete;
        return sc;
    }

    std::optional<std::pair<int, int>> non_adjacent;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (!d.adjacent(verts[i], verts[j]) && !non_adjacent)
                non_adjacent = std::make_pair(verts[i], verts[j]);
    if (!non_adjacent) {
        sc.verdict = Verdict::Semicomplete;
        return sc;
    }

    int arc_count = 0;
    for (int a : verts)
        for (int b : verts)
            if (a != b && d.has_arc(a, b)) ++arc_count;
    if (arc_count == 0) {
        sc.verdict = Verdict::Empty;
        return sc;
    }

    for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
        std::vector<int> a, b;
        for (int i = 0; i < m; ++i) ((mask >> i) & 1u ? a : b).push_back(verts[i]);
        bool good = true;
        for (std::size_t i = 0; i < a.size() && good; ++i)
            for (std::size_t j = i + 1; j < a.size() && good; ++j)
                if (d.adjacent(a[i], a[j])) good = false;
        for (std::size_t i = 0; i < b.size() && good; ++i)
            for (std::size_t j = i + 1; j < b.size() && good; ++j)
                if (d.adjacent(b[i], b[j])) good = false;
        for (std::size_t i = 0; i < a.size() && good; ++i)
            for (std::size_t j = 0; j < b.size() && good; ++j)
                if (!d.adjacent(a[i], b[j])) good = false;
        if (!good) continue;
        if ((mask & 1u) == 0) std::swap(a, b);
        sc.verdict = Verdict::SemicompleteBipartite;
        sc.part_a = std::move(a);
        sc.part_b = std::move(b);
        return sc;
    }

    int n = m - 1;
    if (n >= 3 && arc_count == 2 * n - 1) {
        for (int a : verts)
            for (int b : verts)
                for (int c : verts) {
                    if (a == b || a == c || b == c) continue;
                    if (!d.has_arc(a, b) || !d.has_arc(b, c) || !d.has_arc(c, a)) continue;
                    bool good = true;
                    std::vector<int> map{a, b, c};
                    for (int r : verts) {
                        if (r == a || r == b || r == c) continue;
                        if (!d.has_arc(a, r) || !d.has_arc(r, b)) {
                            good = false;
                            break;
                        }
                        map.push_back(r);
                    }
                    if (good) {
                        sc.verdict = Verdict::Fn;
                        sc.fn_map = std::move(map);
                        return sc;
                    }
                }
    }

    sc.verdict = Verdict::Other;
    sc.witness = pair_witness(non_adjacent->first, non_adjacent->second);
    return sc;
}

std::string compact_digraph(const Digraph& d) {
    std::string out = std::to_string(d.order()) + ":";
    bool first = true;
    for (const auto& arc : d.arcs()) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(arc.first) + ">" + std::to_string(arc.second);
    }
    return out;
}

Report check_instance(const Digraph& d, int k, std::map<std::string, std::int64_t>* counters) {
    AnalysisResult res = classify_all(d, k);
    if (!res.hypotheses_ok()) {
        Report r;
        r.add("hypothesis.gate", false, res.hypothesis_failure);
        return r;
    }
    Report r = res.checks;
    const ShortestPathFrame& f = *res.frame;

    bool diff_ok = true, same_ok = true;
    std::string diff_w, same_w;
    for (int s = 1; s <= k + 2; ++s)
        for (int t = 0; t < s; ++t) {
            bool diff = (s - t) % 2 == 1;
            bool& ok_flag = diff ? diff_ok : same_ok;
            std::string& witness = diff ? diff_w : same_w;
            try {
                FrameWitness w = diff ? witness_path_diff_parity(d, f, s, t)
                                      : witness_path_same_parity(d, f, s, t);
                std::size_t want = static_cast<std::size_t>(diff ? k - 1 : k);
                bool good = w.path.size() == want && validate_path(d, w.path) &&
                            w.path.front() == f.x(s) && w.path.back() == f.x(t);
                if (good) {
                    if (counters) merge_counter(*counters, "witness." + w.strategy, 1);
                } else if (ok_flag) {
                    ok_flag = false;
                    witness = pair_witness(s, t);
                }
            } catch (const structural_violation& e) {
                if (ok_flag) {
                    ok_flag = false;
                    witness = e.missing_arc()
                                  ? arc_witness(e.missing_arc()->first, e.missing_arc()->second)
                                  : pair_witness(s, t);
                }
            }
        }
    r.add("witness.diff-parity", diff_ok, diff_w);
    r.add("witness.same-parity", same_ok, same_w);

    if (counters) {
        merge_counter(*counters, "frame." + verdict_name(res.frame_class.verdict), 1);
        merge_counter(*counters, "outside." + verdict_name(res.outside_class.verdict), 1);
        if (semicomplete_trigger(d, f)) merge_counter(*counters, "trigger.present", 1);
        if (res.frame_class.verdict == Verdict::SemicompleteBipartite) {
            auto track = [&](int first_pos, int last_pos, const char* klass) {
                for (int x : res.partition.B) {
                    bool all = true, any = false;
                    std::optional<int> t, s;
                    for (int i = first_pos; i <= last_pos; i += 2) {
                        bool fwd = d.has_arc(x, f.x(i)), bwd = d.has_arc(f.x(i), x);
                        if (fwd || bwd)
                            any = true;
                        else
                            all = false;
                        if (fwd) t = i;
                        if (bwd && !s) s = i;
                    }
                    if (!any || all || !t || !s) continue;
                    std::string base = std::string("B-threshold.") + klass;
                    merge_counter(*counters, base + ".t.min", *t);
                    merge_counter(*counters, base + ".t.max", *t);
                    merge_counter(*counters, base + ".s.min", *s);
                    merge_counter(*counters, base + ".s.max", *s);
                }
            };
            track(1, k + 2, "O");
            track(0, k + 1, "E");
        }
    }
    return r;
}

GenerateResult build_corpus_instance(int k, int n_min, int n_max, std::uint64_t instance_seed) {
    SplitMix64 rng(instance_seed);
    int n = n_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - n_min + 1)));
    double density = rng.unit() * 0.4;
    std::uint64_t gen_seed = rng.next();
    return generate_frame_instance(k, n - (k + 3), density, gen_seed);
}

GenerateResult build_trigger_instance(int k, int n_min, int n_max, std::uint64_t instance_seed) {
    GenerateResult base = build_corpus_instance(k, n_min, n_max, instance_seed);
    if (!base.ok()) return base;
    Digraph g = *base.graph;
    if (!g.has_arc(3, 1)) g.add_arc(3, 1);
    ClosureResult closed = kqt_closure(g, k, ClosurePolicy::distance_preserving(0, k + 2, k + 2));
    GenerateResult out;
    if (!closed.ok()) {
        out.failed_requirement = "closure";
        out.detail = closed.error;
        return out;
    }
    if (!is_strong(*closed.graph)) {
        out.failed_requirement = "strong";
        out.detail = "closure output is not strong";
        return out;
    }
    if (!is_k_quasi_transitive(*closed.graph, k)) {
        out.failed_requirement = "kqt";
        out.detail = "closure output is not k-quasi-transitive";
        return out;
    }
    auto dist = distance(*closed.graph, 0, k + 2);
    if (!dist || *dist != k + 2) {
        out.failed_requirement = "distance";
        out.detail = "closure changed the protected distance";
        return out;
    }
    out.graph = std::move(*closed.graph);
    return out;
}

namespace {

struct IndexOutcome {
    bool valid = false;
    bool passed = false;
    std::optional<FailureRecord> failure;
    Counters counters;
};

// Deterministic parallel driver: fixed-size waves of consecutive indices,
// striped across threads, merged in index order. Consumption stops mid-wave
// once target_valid instances have been collected, so the report is identical
// for every jobs value.
void run_waves(SuiteReport& rep, std::uint64_t max_attempts, std::uint64_t target_valid, int jobs,
               const std::function<IndexOutcome(std::uint64_t)>& work) {
    constexpr std::uint64_t kWave = 64;
    int nthreads = std::max(1, jobs);
    std::uint64_t next = 0;
    while (next < max_attempts && rep.valid < target_valid) {
        std::uint64_t count = std::min(kWave, max_attempts - next);
        std::vector<IndexOutcome> results(count);
        if (nthreads == 1 || count == 1) {
            for (std::uint64_t o = 0; o < count; ++o) results[o] = work(next + o);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(nthreads);
            for (int t = 0; t < nthreads; ++t)
                pool.emplace_back([&, t]() {
                    for (std::uint64_t o = static_cast<std::uint64_t>(t); o < count;
                         o += static_cast<std::uint64_t>(nthreads))
                        results[o] = work(next + o);
                });
            for (auto& th : pool) th.join();
        }
        for (std::uint64_t o = 0; o < count && rep.valid < target_valid; ++o) {
            ++rep.attempted;
            IndexOutcome& r = results[o];
            for (const auto& [key, value] : r.counters) merge_counter(rep.counters, key, value);
            if (!r.valid) continue;
            ++rep.valid;
            if (r.passed) ++rep.passed;
            if (r.failure) rep.failures.push_back(std::move(*r.failure));
        }
        next += count;
    }
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::optional<FailureRecord> first_failure(const Report& checks, std::uint64_t index,
                                           std::uint64_t seed, const Digraph& d) {
    for (const auto& line : checks.lines)
        if (!line.pass)
            return FailureRecord{index, seed, line.name, line.witness, compact_digraph(d)};
    return std::nullopt;
}

}  // namespace

SuiteReport run_theorem3_suite(const Theorem3Params& p) {
    if (p.k < 5 || p.k % 2 == 0) throw usage_error("k must be odd and at least 5");
    if (p.n_min < p.k + 3) throw usage_error("n_min must be at least k+3");
    if (p.n_max < p.n_min) throw usage_error("n_max must be at least n_min");
    SuiteReport rep;
    rep.suite = "theorem3";
    rep.params = "k=" + std::to_string(p.k) + " instances=" + std::to_string(p.instances) +
                 " n_min=" + std::to_string(p.n_min) + " n_max=" + std::to_string(p.n_max) +
                 " with_triggers=" + (p.with_triggers ? "true" : "false");
    rep.master_seed = p.seed;
    auto start = std::chrono::steady_clock::now();

    run_waves(rep, 50 * p.instances, p.instances, p.jobs, [&](std::uint64_t i) {
        IndexOutcome out;
        std::uint64_t instance_seed = derive_seed(p.seed, i);
        GenerateResult gen = (p.with_triggers && i % 8 == 7)
                                 ? build_trigger_instance(p.k, p.n_min, p.n_max, instance_seed)
                                 : build_corpus_instance(p.k, p.n_min, p.n_max, instance_seed);
        if (!gen.ok()) {
            merge_counter(out.counters, "generation.failed." + gen.failed_requirement, 1);
            return out;
        }
        out.valid = true;
        Report checks = check_instance(*gen.graph, p.k, &out.counters);
        if (checks.all_pass())
            out.passed = true;
        else
            out.failure = first_failure(checks, i, instance_seed, *gen.graph);
        return out;
    });

    if (rep.valid < p.instances)
        rep.failures.push_back({rep.attempted, p.seed, "generation.budget-exhausted",
                                std::to_string(rep.valid) + " of " + std::to_string(p.instances),
                                ""});
    rep.wall_seconds = elapsed_seconds(start);
    return rep;
}

SuiteReport run_theorem2_scan(int n, int jobs) {
    if (n < 3 || n > 5) throw usage_error("exhaustive scan supports 3 <= n <= 5");
    SuiteReport rep;
    rep.suite = "theorem2";
    rep.params = "n=" + std::to_string(n);
    auto start = std::chrono::steady_clock::now();

    std::uint64_t total = 1ull << (n * (n - 1));
    constexpr std::uint64_t kChunk = 65536;
    std::uint64_t nchunks = (total + kChunk - 1) / kChunk;
    struct ChunkOutcome {
        std::uint64_t valid = 0, passed = 0;
        std::vector<FailureRecord> failures;
        Counters counters;
    };
    std::vector<ChunkOutcome> outcomes(nchunks);

    auto scan_chunk = [&](std::uint64_t c) {
        ChunkOutcome& out = outcomes[c];
        std::uint64_t hi = std::min(total, (c + 1) * kChunk);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        for (std::uint64_t mask = c * kChunk; mask < hi; ++mask) {
            Digraph d = digraph_from_arc_mask(n, mask);
            if (!is_strong(d)) {
                merge_counter(out.counters, "skipped.not-strong", 1);
                continue;
            }
            if (!is_k_quasi_transitive(d, 3)) {
                merge_counter(out.counters, "skipped.not-3qt", 1);
                continue;
            }
            ++out.valid;
            StructureClass sc = classify_induced(d, all);
            merge_counter(out.counters, "verdict." + verdict_name(sc.verdict), 1);
            bool ok = sc.verdict == Verdict::Semicomplete ||
                      sc.verdict == Verdict::SemicompleteBipartite || sc.verdict == Verdict::Fn;
            if (ok)
                ++out.passed;
            else
                out.failures.push_back({mask, 0, "scan.verdict", sc.witness, compact_digraph(d)});
        }
    };

    int nthreads = std::max(1, jobs);
    if (nthreads == 1 || nchunks == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) scan_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t]() {
                for (std::uint64_t c = static_cast<std::uint64_t>(t); c < nchunks;
                     c += static_cast<std::uint64_t>(nthreads))
                    scan_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    rep.attempted = total;
    for (std::uint64_t c = 0; c < nchunks; ++c) {
        ChunkOutcome& out = outcomes[c];
        rep.valid += out.valid;
        rep.passed += out.passed;
        for (const auto& [key, value] : out.counters) merge_counter(rep.counters, key, value);
        for (auto& f : out.failures) rep.failures.push_back(std::move(f));
    }
    rep.wall_seconds = elapsed_seconds(start);
    return rep;
}

SuiteReport run_converse_suite(int k, std::uint64_t trials, std::uint64_t seed, int jobs) {
    if (k < 2) throw usage_error("k must be at least 2");
    SuiteReport rep;
    rep.suite = "converse";
    rep.params = "k=" + std::to_string(k) + " trials=" + std::to_string(trials) + " n_max=10";
    rep.master_seed = seed;
    auto start = std::chrono::steady_clock::now();

    run_waves(rep, trials, trials, jobs, [&](std::uint64_t i) {
        IndexOutcome out;
        std::uint64_t trial_seed = derive_seed(seed, i);
        SplitMix64 rng(trial_seed);
        Digraph d = random_digraph(rng, 10);
        bool forward = is_k_quasi_transitive(d, k);
        bool backward = is_k_quasi_transitive(converse(d), k);
        out.valid = true;
        merge_counter(out.counters, forward ? "kqt.holds" : "kqt.fails", 1);
        if (forward == backward)
            out.passed = true;
        else
            out.failure = FailureRecord{i, trial_seed, "converse.mismatch",
                                        forward ? "forward-only" : "converse-only",
                                        compact_digraph(d)};
        return out;
    });
    rep.wall_seconds = elapsed_seconds(start);
    return rep;
}

SuiteReport run_lemma6_suite(const Lemma6Params& p) {
    if (p.n_min < 4) throw usage_error("n_min must be at least 4");
    if (p.n_max < p.n_min) throw usage_error("n_max must be at least n_min");
    SuiteReport rep;
    rep.suite = "lemma6";
    rep.params = "n_min=" + std::to_string(p.n_min) + " n_max=" + std::to_string(p.n_max) +
                 " trials=" + std::to_string(p.trials);
    rep.master_seed = p.seed;
    auto start = std::chrono::steady_clock::now();

    run_waves(rep, p.trials, p.trials, p.jobs, [&](std::uint64_t idx) {
        IndexOutcome out;
        std::uint64_t trial_seed = derive_seed(p.seed, idx);
        SplitMix64 rng(trial_seed);
        int n = p.n_min + static_cast<int>(
                              rng.below(static_cast<std::uint64_t>(p.n_max - p.n_min + 1)));
        Digraph d(n + 1);
        for (int a = 0; a < n; ++a) d.add_arc(a, a + 1);
        for (int s = 2; s <= n; ++s)
            for (int t = 0; t + 2 <= s; ++t) d.add_arc(s, t);
        for (int a = 0; a < n; ++a)
            if (rng.bernoulli(0.5)) d.add_arc(a + 1, a);

        out.valid = true;
        Path q(n + 1);
        std::iota(q.begin(), q.end(), 0);
        auto dist = distance(d, 0, n);
        if (!dist || *dist != n) {
            out.failure = FailureRecord{idx, trial_seed, "backpath.host", "", compact_digraph(d)};
            return out;
        }
        bool all_ok = true;
        for (int j = 1; j <= n && all_ok; ++j)
            for (int i = 0; i < j && all_ok; ++i)
                for (int plen = 2; plen <= n - 1 && all_ok; ++plen) {
                    std::string triple = "(" + std::to_string(j) + "," + std::to_string(i) + "," +
                                         std::to_string(plen) + ")";
                    try {
                        Path bp = semicomplete_backpath(d, q, j, i, plen);
                        merge_counter(out.counters, "triples.checked", 1);
                        bool good = static_cast<int>(bp.size()) == plen + 1 &&
                                    validate_path(d, bp) && bp.front() == q[j] &&
                                    bp.back() == q[i];
                        if (!good) {
                            all_ok = false;
                            out.failure =
                                FailureRecord{idx, trial_seed, "backpath", triple,
                                              compact_digraph(d)};
                        }
                    } catch (const std::exception&) {
                        all_ok = false;
                        out.failure =
                            FailureRecord{idx, trial_seed, "backpath", triple, compact_digraph(d)};
                    }
                }
        out.passed = all_ok;
        return out;
    });
    rep.wall_seconds = elapsed_seconds(start);
    return rep;
}

Digraph random_digraph(SplitMix64& rng, int n_max) {
    if (n_max < 1) throw usage_error("n_max must be at least 1");
    int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max)));
    double density = rng.unit();
    if (n > 7) density = std::min(density, 0.55);
    Digraph d(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            if (rng.bernoulli(density)) d.add_arc(u, v);
        }
    return d;
}

void SuiteReport::bump(const std::string& key, std::int64_t delta) { counters[key] += delta; }

void SuiteReport::track_min(const std::string& key, std::int64_t value) {
    auto [it, inserted] = counters.emplace(key, value);
    if (!inserted) it->second = std::min(it->second, value);
}

void SuiteReport::track_max(const std::string& key, std::int64_t value) {
    auto [it, inserted] = counters.emplace(key, value);
    if (!inserted) it->second = std::max(it->second, value);
}

namespace {

std::string format_seconds(double s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

std::string suite_body(const SuiteReport& r) {
    std::string out;
    out += "suite: " + r.suite + "\n";
    out += "params: " + r.params + "\n";
    out += "master seed: " + std::to_string(r.master_seed) + "\n";
    out += "prng: " + r.prng_id + "\n";
    out += "attempted: " + std::to_string(r.attempted) + "\n";
    out += "valid: " + std::to_string(r.valid) + "\n";
    out += "passed: " + std::to_string(r.passed) + "\n";
    out += "failures: " + std::to_string(r.failures.size()) + "\n";
    for (const auto& f : r.failures)
        out += "failure index=" + std::to_string(f.index) + " seed=" + std::to_string(f.seed) +
               " check=" + f.check + " witness=" + f.witness + " digraph=" + f.digraph + "\n";
    out += "counters:\n";
    for (const auto& [key, value] : r.counters)
        out += "  " + key + ": " + std::to_string(value) + "\n";
    return out;
}

}  // namespace

std::string SuiteReport::to_text() const {
    return suite_body(*this) + "wall seconds: " + format_seconds(wall_seconds) + "\n";
}

std::string SuiteReport::deterministic_text() const { return suite_body(*this); }

std::string SuiteReport::to_records() const {
    std::string out;
    out += "suite\t" + suite + "\n";
    out += "params\t" + params + "\n";
    out += "master_seed\t" + std::to_string(master_seed) + "\n";
    out += "prng\t" + prng_id + "\n";
    out += "attempted\t" + std::to_string(attempted) + "\n";
    out += "valid\t" + std::to_string(valid) + "\n";
    out += "passed\t" + std::to_string(passed) + "\n";
    for (const auto& f : failures)
        out += "failure\t" + std::to_string(f.index) + "\t" + std::to_string(f.seed) + "\t" +
               f.check + "\t" + f.witness + "\t" + f.digraph + "\n";
    for (const auto& [key, value] : counters)
        out += "counter\t" + key + "\t" + std::to_string(value) + "\n";
    out += "wall_seconds\t" + format_seconds(wall_seconds) + "\n";
    return out;
}

}  // namespace kqt
