#include "kqt/engine.hpp"

#include <algorithm>

#include "kqt/errors.hpp"
#include "kqt/rng.hpp"

namespace kqt {

namespace {

// Vertex bitsets flattened into word rows, same layout as Digraph rows.
class WordTable {
public:
    WordTable(int rows, int words) : words_(words), data_(static_cast<std::size_t>(rows) * words) {}
    std::uint64_t* row(int r) { return data_.data() + static_cast<std::size_t>(r) * words_; }
    const std::uint64_t* row(int r) const {
        return data_.data() + static_cast<std::size_t>(r) * words_;
    }

private:
    int words_;
    std::vector<std::uint64_t> data_;
};

bool intersects(const std::uint64_t* a, const std::uint64_t* b, int words) {
    for (int w = 0; w < words; ++w)
        if (a[w] & b[w]) return true;
    return false;
}

struct ViolationSearch {
    const Digraph& d;
    int k;
    int words;
    // walk_reach[r] row v: vertices reachable from v by a walk of exactly r arcs.
    // Walks overapproximate the simple-path completions of the DFS, so an empty
    // intersection with the target set soundly prunes the branch.
    std::vector<WordTable> walk_reach;
    WordTable non_adjacent;
    std::vector<char> used;
    Path cur;

    ViolationSearch(const Digraph& dg, int kk)
        : d(dg),
          k(kk),
          words(dg.row_words()),
          non_adjacent(dg.order(), dg.row_words()),
          used(dg.order(), 0) {
        int n = d.order();
        for (int u = 0; u < n; ++u) {
            std::uint64_t* row = non_adjacent.row(u);
            for (int v = 0; v < n; ++v)
                if (v != u && !d.has_arc(u, v) && !d.has_arc(v, u)) row[v >> 6] |= 1ULL << (v & 63);
        }
        walk_reach.reserve(k + 1);
        walk_reach.emplace_back(n, words);
        for (int v = 0; v < n; ++v) walk_reach[0].row(v)[v >> 6] |= 1ULL << (v & 63);
        for (int r = 1; r <= k; ++r) {
            walk_reach.emplace_back(n, words);
            for (int v = 0; v < n; ++v) {
                std::uint64_t* dst = walk_reach[r].row(v);
                const std::uint64_t* adj = d.row(v);
                for (int w = 0; w < words; ++w) {
                    std::uint64_t bits = adj[w];
                    while (bits) {
                        int y = w * 64 + __builtin_ctzll(bits);
                        bits &= bits - 1;
                        const std::uint64_t* src = walk_reach[r - 1].row(y);
                        for (int t = 0; t < words; ++t) dst[t] |= src[t];
                    }
                }
            }
        }
    }

    bool extend(int v, int remaining, const std::uint64_t* target) {
        if (remaining == 0) return (target[v >> 6] >> (v & 63)) & 1ULL;
        if (!intersects(walk_reach[remaining].row(v), target, words)) return false;
        const std::uint64_t* adj = d.row(v);
        for (int w = 0; w < words; ++w) {
            std::uint64_t bits = adj[w];
            while (bits) {
                int y = w * 64 + __builtin_ctzll(bits);
                bits &= bits - 1;
                if (used[y]) continue;
                used[y] = 1;
                cur.push_back(y);
                if (extend(y, remaining - 1, target)) return true;
                cur.pop_back();
                used[y] = 0;
            }
        }
        return false;
    }

    std::optional<Violation> run() {
        for (int u = 0; u < d.order(); ++u) {
            const std::uint64_t* target = non_adjacent.row(u);
            bool any = false;
            for (int w = 0; w < words && !any; ++w) any = target[w] != 0;
            if (!any) continue;
            used.assign(d.order(), 0);
            used[u] = 1;
            cur.assign(1, u);
            if (extend(u, k, target)) return Violation{cur};
        }
        return std::nullopt;
    }
};

}  // namespace

bool is_k_quasi_transitive(const Digraph& d, int k) {
    return !find_violation(d, k).has_value();
}

std::optional<Violation> find_violation(const Digraph& d, int k) {
    if (k < 2) throw usage_error("k must be at least 2");
    if (d.order() < k + 1) return std::nullopt;  // no simple path has k arcs
    ViolationSearch search(d, k);
    return search.run();
}

ClosurePolicy ClosurePolicy::backward_only() {
    ClosurePolicy p;
    p.mode = ClosureMode::BackwardOnly;
    return p;
}

ClosurePolicy ClosurePolicy::distance_preserving(int u, int v, int target) {
    ClosurePolicy p;
    p.mode = ClosureMode::DistancePreserving;
    p.u = u;
    p.v = v;
    p.target_distance = target;
    return p;
}

ClosurePolicy ClosurePolicy::random_orientation(std::uint64_t seed) {
    ClosurePolicy p;
    p.mode = ClosureMode::RandomOrientation;
    p.seed = seed;
    return p;
}

ClosureResult kqt_closure(const Digraph& d, int k, const ClosurePolicy& policy) {
    if (k < 2) throw usage_error("k must be at least 2");
    Digraph g = d;
    if (policy.mode == ClosureMode::DistancePreserving) {
        if (policy.target_distance < 1) throw usage_error("target distance must be at least 1");
        auto cur = distance(g, policy.u, policy.v);
        if (!cur || *cur != policy.target_distance)
            throw usage_error("distance-preserving closure requires d(u,v) = target at entry");
    }
    SplitMix64 rng(policy.seed);
    while (auto viol = find_violation(g, k)) {
        int a = viol->from();
        int b = viol->to();
        switch (policy.mode) {
            case ClosureMode::BackwardOnly:
                g.add_arc(b, a);
                break;
            case ClosureMode::RandomOrientation:
                if (rng.next() & 1)
                    g.add_arc(b, a);
                else
                    g.add_arc(a, b);
                break;
            case ClosureMode::DistancePreserving: {
                g.add_arc(b, a);
                auto dist = distance(g, policy.u, policy.v);
                if (dist && *dist == policy.target_distance) break;
                g.remove_arc(b, a);
                g.add_arc(a, b);
                dist = distance(g, policy.u, policy.v);
                if (dist && *dist == policy.target_distance) break;
                g.remove_arc(a, b);
                ClosureResult fail;
                fail.blocked_on = *viol;
                fail.error = "both orientations between " + std::to_string(a) + " and " +
                             std::to_string(b) + " shrink the protected distance";
                return fail;
            }
        }
    }
    ClosureResult ok;
    ok.graph = std::move(g);
    return ok;
}

GenerateResult generate_frame_instance(int k, int extra_vertices, double arc_density,
                                       std::uint64_t seed) {
    if (k < 5 || k % 2 == 0) throw usage_error("k must be odd and at least 5");
    if (extra_vertices < 0) throw usage_error("extra vertex count must be nonnegative");
    if (!(arc_density >= 0.0 && arc_density <= 1.0))
        throw usage_error("arc density must lie in [0,1]");

    int n = k + 3 + extra_vertices;
    Digraph g(n);
    for (int i = 0; i <= k + 1; ++i) g.add_arc(i, i + 1);

    // One draw per ordered pair keeps the random stream independent of which
    // candidates happen to be present or rejected already.
    SplitMix64 rng(seed);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            bool wanted = rng.bernoulli(arc_density);
            if (!wanted || g.has_arc(u, v)) continue;
            g.add_arc(u, v);
            auto dist = distance(g, 0, k + 2);
            if (!dist || *dist != k + 2) g.remove_arc(u, v);
        }

    GenerateResult out;
    auto closed = kqt_closure(g, k, ClosurePolicy::distance_preserving(0, k + 2, k + 2));
    if (!closed.ok()) {
        out.failed_requirement = "closure";
        out.detail = closed.error;
        return out;
    }
    Digraph result = std::move(*closed.graph);
    if (!is_strong(result)) {
        out.failed_requirement = "strong";
        out.detail = "closure output is not strong";
        return out;
    }
    if (!is_k_quasi_transitive(result, k)) {
        out.failed_requirement = "kqt";
        out.detail = "closure output fails the path condition";
        return out;
    }
    auto dist = distance(result, 0, k + 2);
    if (!dist || *dist != k + 2) {
        out.failed_requirement = "distance";
        out.detail = "closure output lost the frame distance";
        return out;
    }
    out.graph = std::move(result);
    return out;
}

Digraph digraph_from_arc_mask(int n, std::uint64_t mask) {
    Digraph d(n);
    int bits = n * (n - 1);
    for (int b = 0; b < bits; ++b)
        if ((mask >> b) & 1) {
            int u = b / (n - 1);
            int r = b % (n - 1);
            int v = r + (r >= u ? 1 : 0);
            d.add_arc(u, v);
        }
    return d;
}

DigraphEnumerator::DigraphEnumerator(int n) : n_(n) {
    if (n < 0 || n > 5) throw usage_error("exhaustive enumeration supports n <= 5 only");
    total_ = 1ULL << (n * (n - 1));
}

std::optional<Digraph> DigraphEnumerator::next() {
    if (done_) return std::nullopt;
    Digraph d = digraph_from_arc_mask(n_, mask_);
    if (++mask_ == total_) done_ = true;
    return d;
}

}  // namespace kqt
