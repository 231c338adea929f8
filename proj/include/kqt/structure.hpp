#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kqt/digraph.hpp"
#include "kqt/report.hpp"

namespace kqt {

// A shortest path x_0 .. x_{k+2} realizing distance k+2. Positions split into
// parity classes: odd positions x_1,x_3,..,x_{k+2} and even x_0,x_2,..,x_{k+1}
// (k odd), each of size (k+3)/2.
struct ShortestPathFrame {
    int k = 0;
    Path path;  // vertex ids, length k+3

    int x(int i) const;  // vertex at position i, bounds-checked
    int u() const { return path.front(); }
    int v() const { return path.back(); }
    std::vector<int> odd_class() const;
    std::vector<int> even_class() const;
    std::optional<int> index_of(int vertex) const;
};

enum class Verdict { Semicomplete, SemicompleteBipartite, Empty, Fn, Other };
std::string verdict_name(Verdict v);

struct StructureClass {
    Verdict verdict = Verdict::Other;
    std::vector<int> part_a, part_b;  // SemicompleteBipartite: part_a holds the smallest vertex
    std::vector<int> fn_map;          // Fn: fn_map[i] = vertex playing x_i
    std::string witness;              // Other: what disqualified the smaller classes
};

// Outside-vertex cells relative to a frame. I sends arcs only into the frame,
// W only receives, B does both. Subscript 1 marks domination of / by the even
// class, subscript 2 the odd class. I_tilde collects I-vertices that receive
// an arc from B or W.
struct OutsidePartition {
    std::vector<int> I, W, B;
    std::vector<int> I1, I2, W1, W2, B1, B2;
    std::vector<int> I_tilde;
};

// Lexicographically smallest pair (u,v) at distance k+2, path built by walking
// smallest-id BFS parents back from v. Requires D strong and k-quasi-transitive
// (checked; violations are precondition errors), k odd >= 5. Returns none iff
// diameter < k+2.
std::optional<ShortestPathFrame> find_frame(const Digraph& d, int k);

// Forced arcs from the last two path vertices back into the path: one line per
// required arc x_{k+2}->x_{k-i} (i odd) and x_{k+1}->x_{k-i} (i even).
Report check_proposition2(const Digraph& d, const ShortestPathFrame& f);

// Every cross-parity position pair must be adjacent, and position pairs (a,b)
// with a > b+1 of different parity must carry the backward arc x_a->x_b.
Report check_bipartite_subdigraph(const Digraph& d, const ShortestPathFrame& f);

struct FrameWitness {
    Path path;
    std::string strategy;  // "paper", "mirror", "prepend", "search"
};

// Path of exactly k-2 arcs from x_s to x_t inside the frame, s > t of different
// parity. Even-position starts follow the stated case constructions; odd starts
// use the mirrored constructions with a lexicographic bounded search fallback.
FrameWitness witness_path_diff_parity(const Digraph& d, const ShortestPathFrame& f,
                                      int s, int t);

// Path of exactly k-1 arcs from x_s to x_t, s > t of the same parity.
FrameWitness witness_path_same_parity(const Digraph& d, const ShortestPathFrame& f,
                                      int s, int t);

// Adjacency forced on outside vertices by the two witness lemmas: a cross-parity
// pair (s,t) with y->x_s and x_t->x forces adjacent(x,y); a same-parity pair with
// x->x_s forces adjacent(x,x_t) (and x->x_t once s >= t+4), dually for x_t->x.
Report check_outside_forcing(const Digraph& d, const ShortestPathFrame& f);

// First same-parity adjacent position pair in scan order, reported in the
// direction of the witnessing arc, or none.
std::optional<std::pair<int, int>> semicomplete_trigger(const Digraph& d,
                                                        const ShortestPathFrame& f);

// Once any same-parity pair is adjacent the whole frame collapses: every
// backward arc x_s->x_t with t+1 < s must be present.
Report check_backward_complete(const Digraph& d, const ShortestPathFrame& f);

// Precedence: Semicomplete > Empty > SemicompleteBipartite > Fn > Other.
// |S| == 1 is Semicomplete; |S| == 0 is Empty.
StructureClass classify_induced(const Digraph& d, const std::vector<int>& s);

// Membership test for the exceptional family on n+1 vertices (n >= 3): arcs
// {x0x1, x1x2, x2x0} plus {xi x1, x0 xi} for i >= 3. Returns the role map
// (role position -> vertex) or none.
std::optional<std::vector<int>> is_Fn(const Digraph& d);

// classify_induced on the frame vertices.
StructureClass classify_frame(const Digraph& d, const ShortestPathFrame& f);

// True iff sc is SemicompleteBipartite with parts equal to the frame's parity
// classes as an unordered pair.
bool frame_bipartition_matches(const ShortestPathFrame& f, const StructureClass& sc);

// Backward path of exactly p arcs from q[j] to q[i] inside a shortest path q of
// length n >= 4 whose vertex set induces a semicomplete subdigraph. Recursive
// construction: n == 4 by bounded search, j-i == n directly, interior pairs by
// restriction to a subpath, with a converse-mirror step for the cases the prefix
// cannot host. Requires 0 <= i < j <= n and 2 <= p <= n-1.
Path semicomplete_backpath(const Digraph& d, const Path& q, int j, int i, int p);

// Semicomplete frame: an arc x->x_i forces x adjacent to every earlier path
// vertex, and x_i->x forces x adjacent to every later one.
Report propagate_adjacency_check(const Digraph& d, const ShortestPathFrame& f);

// Every vertex outside a cycle of length >= k must be adjacent to the cycle.
Report cycle_adjacency_check(const Digraph& d, const Cycle& c, int k);

enum class Direction { Out, In };

// One forced rotation around a cycle: x->c[i] with no arc from the cycle into x
// forces x->c[i+(k-1)]; c[i]->x with no arc from x into the cycle forces
// c[i-(k-1)]->x (indices mod |c|). Returns the new index; a missing forced arc
// is a structural violation.
int cycle_rotation_step(const Digraph& d, const Cycle& c, int k, int x, int i,
                        Direction dir);

// Splits the outside vertices into the cells above. An outside vertex with no
// frame adjacency at all is a structural violation.
OutsidePartition partition_outside(const Digraph& d, const ShortestPathFrame& f);

// Bipartite-frame outside structure: I-vertices dominate a full parity class,
// W-vertices are dominated by one, and B-vertices are either fully adjacent to
// a class or split it at thresholds t < s with the stated bounds.
Report check_lemma10(const Digraph& d, const ShortestPathFrame& f,
                     const OutsidePartition& p);

// Semicomplete-frame outside structure: I dominates the frame, the frame
// dominates W, and every B-vertex is fully adjacent or splits the path at
// thresholds 4 <= t+1 < s <= k-1.
Report check_lemma11(const Digraph& d, const ShortestPathFrame& f,
                     const OutsidePartition& p);

// Bipartite-frame cell laws: B1/B2 disjoint independent cross-adjacent, the
// stated empty arc sets between cells, I/W cells independent with disjoint
// subscripts, and adjacency across subscripts. One line per law.
Report check_outside_claims(const Digraph& d, const ShortestPathFrame& f,
                            const OutsidePartition& p);

// classify_induced on the outside vertices.
StructureClass classify_outside(const Digraph& d, const ShortestPathFrame& f);

struct AnalysisResult {
    std::string hypothesis_failure;  // nonempty: nothing below it is meaningful
    std::optional<ShortestPathFrame> frame;
    StructureClass frame_class;
    StructureClass outside_class;
    OutsidePartition partition;
    Report checks;

    bool hypotheses_ok() const { return hypothesis_failure.empty(); }
    bool all_pass() const { return hypotheses_ok() && checks.all_pass(); }
};

// Full pipeline: strongness and frame existence gate the analysis; the
// k-quasi-transitivity verdict and every structural law are reported as checks.
AnalysisResult classify_all(const Digraph& d, int k);

}  // namespace kqt
