#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kqt/digraph.hpp"

namespace kqt {

// A simple path with exactly k arcs whose endpoints are not adjacent.
struct Violation {
    Path path;
    int from() const { return path.front(); }
    int to() const { return path.back(); }
};

// D is k-quasi-transitive iff every simple path with exactly k arcs has
// adjacent endpoints. Requires k >= 2.
bool is_k_quasi_transitive(const Digraph& d, int k);

// Lexicographically first violating path, or none.
std::optional<Violation> find_violation(const Digraph& d, int k);

enum class ClosureMode { BackwardOnly, DistancePreserving, RandomOrientation };

struct ClosurePolicy {
    ClosureMode mode = ClosureMode::BackwardOnly;
    int u = -1, v = -1;         // DistancePreserving: protected pair
    int target_distance = -1;   // DistancePreserving: distance(u,v) to keep
    std::uint64_t seed = 0;     // RandomOrientation

    static ClosurePolicy backward_only();
    static ClosurePolicy distance_preserving(int u, int v, int target);
    static ClosurePolicy random_orientation(std::uint64_t seed);
};

struct ClosureResult {
    std::optional<Digraph> graph;
    std::optional<Violation> blocked_on;  // DistancePreserving: the unfillable violation
    std::string error;

    bool ok() const { return graph.has_value(); }
};

// Repeatedly adds one arc between the endpoints of the current lexicographically
// first violation until D is k-quasi-transitive. BackwardOnly always orients the
// new arc end-to-start. DistancePreserving keeps distance(u,v) == target_distance,
// preferring the end-to-start orientation when both orientations preserve it, and
// reports failure (never repairs) when neither does. RandomOrientation draws the
// orientation from splitmix64(seed): low bit set means end-to-start.
ClosureResult kqt_closure(const Digraph& d, int k, const ClosurePolicy& policy);

struct GenerateResult {
    std::optional<Digraph> graph;
    std::string failed_requirement;  // "closure", "strong", "kqt", "distance"
    std::string detail;

    bool ok() const { return graph.has_value(); }
};

// Builds a strong k-quasi-transitive digraph on k+3+extra_vertices vertices in
// which vertices 0..k+2 form a shortest path of length k+2 from 0 to k+2.
// Seeds random arcs at arc_density (skipping anything that would shorten that
// distance), then runs the distance-preserving closure. Requires k odd, k >= 5.
// Failures (typically a non-strong result) are reported, not repaired.
GenerateResult generate_frame_instance(int k, int extra_vertices, double arc_density,
                                       std::uint64_t seed);

// Digraph for one arc-set bitmask under the enumeration bit layout below.
Digraph digraph_from_arc_mask(int n, std::uint64_t mask);

// All loop-free digraphs on n labeled vertices (n <= 5), in increasing order of
// the arc-set bitmask. Bit b encodes the ordered pair with u = b / (n-1) and
// v = r + (r >= u) where r = b % (n-1).
class DigraphEnumerator {
public:
    explicit DigraphEnumerator(int n);
    std::optional<Digraph> next();
    std::uint64_t total() const { return total_; }

private:
    int n_;
    std::uint64_t mask_ = 0;
    std::uint64_t total_;
    bool done_ = false;
};

}  // namespace kqt
