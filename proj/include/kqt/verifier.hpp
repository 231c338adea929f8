#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kqt/digraph.hpp"
#include "kqt/engine.hpp"
#include "kqt/report.hpp"
#include "kqt/rng.hpp"
#include "kqt/structure.hpp"

namespace kqt {

// Definition-literal recognizer kept deliberately independent of the fast
// implementation: plain recursion over the arc list, linear membership scans,
// no shared helpers. Requires k >= 2.
bool oracle_is_kqt(const Digraph& d, int k);

// Definition-literal classifier: all-pairs adjacency for semicomplete/empty,
// brute force over 2^|S| splits for the bipartite case, and triangle-role
// enumeration for the exceptional family. Requires |S| <= 12.
StructureClass oracle_classify(const Digraph& d, const std::vector<int>& s);

struct FailureRecord {
    std::uint64_t index = 0;  // instance index (or arc bitmask for exhaustive scans)
    std::uint64_t seed = 0;
    std::string check;
    std::string witness;
    std::string digraph;  // compact one-line edge list, enough to replay
};

struct SuiteReport {
    std::string suite;
    std::string params;
    std::uint64_t master_seed = 0;
    std::string prng_id = kPrngId;
    std::uint64_t attempted = 0;
    std::uint64_t valid = 0;
    std::uint64_t passed = 0;
    std::vector<FailureRecord> failures;
    std::map<std::string, std::int64_t> counters;
    double wall_seconds = 0.0;

    bool pass() const { return failures.empty(); }
    void bump(const std::string& key, std::int64_t delta = 1);
    void track_min(const std::string& key, std::int64_t value);
    void track_max(const std::string& key, std::int64_t value);

    std::string to_text() const;            // includes the wall-clock line
    std::string deterministic_text() const; // to_text minus wall-clock
    std::string to_records() const;         // tab-separated machine records
};

// Compact single-line serialization used in failure records.
std::string compact_digraph(const Digraph& d);

// Every structural law on one instance: the classify_all checks plus the
// two witness constructions over all legal position pairs. When counters is
// given, per-instance statistics (verdicts, trigger presence, witness
// strategies, threshold extremes) are accumulated into it.
Report check_instance(const Digraph& d, int k,
                      std::map<std::string, std::int64_t>* counters = nullptr);

// Deterministic per-index instance for the generated-corpus suite; exposed so
// failure records can be replayed from their seed alone.
GenerateResult build_corpus_instance(int k, int n_min, int n_max, std::uint64_t instance_seed);

// Corpus instance whose frame carries a same-parity adjacency: a generated
// instance plus the backward arc x_3->x_1, re-closed distance-preservingly.
GenerateResult build_trigger_instance(int k, int n_min, int n_max, std::uint64_t instance_seed);

struct Theorem3Params {
    int k = 5;
    std::uint64_t instances = 100;  // number of valid instances to collect
    int n_min = 8, n_max = 14;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool with_triggers = false;  // interleave trigger instances (1 in 8)
};

// Generates instances with per-index derived seeds, runs every structural check
// on each valid one. Passes iff no valid instance fails any check.
SuiteReport run_theorem3_suite(const Theorem3Params& params);

// Exhaustive scan of all digraphs on n vertices (3 <= n <= 5): every strong
// 3-quasi-transitive one must classify as semicomplete, semicomplete bipartite,
// or the exceptional family.
SuiteReport run_theorem2_scan(int n, int jobs = 1);

// Random digraphs: the k-quasi-transitivity verdict must be invariant under
// taking the converse.
SuiteReport run_converse_suite(int k, std::uint64_t trials, std::uint64_t seed, int jobs = 1);

struct Lemma6Params {
    int n_min = 4, n_max = 8;
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
};

// Random semicomplete shortest-path instances: the backward-path construction
// must produce a valid path for every (j, i, p) triple.
SuiteReport run_lemma6_suite(const Lemma6Params& params);

// Shared sampler for random-digraph suites: n uniform in [1, n_max], arc
// probability uniform (capped at 0.55 for n > 7 to keep path counts sane).
Digraph random_digraph(SplitMix64& rng, int n_max);

}  // namespace kqt
