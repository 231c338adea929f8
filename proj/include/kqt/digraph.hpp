#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kqt/errors.hpp"

namespace kqt {

// A path is its vertex sequence; a path with L+1 vertices has L arcs.
using Path = std::vector<int>;

// A cycle is its vertex sequence read cyclically (no repeated closing vertex).
using Cycle = std::vector<int>;

// Distances are exact or unreachable; unreachable is a distinguished state,
// never a large number, so accidental arithmetic on it fails to compile.
using Dist = std::optional<int>;

// Loop-free digraph on dense 0-based vertex ids with row-wise bitset adjacency.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(int n);

    int order() const { return n_; }
    int arc_count() const { return arc_count_; }

    bool has_arc(int u, int v) const;
    void add_arc(int u, int v);     // set semantics; loops and bad ids are usage errors
    void remove_arc(int u, int v);

    // Direction-blind adjacency: u->v or v->u. Requires u != v.
    bool adjacent(int u, int v) const;

    std::vector<int> out_neighbors(int u) const;  // ascending
    std::vector<int> in_neighbors(int v) const;   // ascending
    std::vector<std::pair<int, int>> arcs() const;  // lexicographic

    int out_degree(int u) const;
    int in_degree(int v) const;

    // Raw row access for algorithms; row u spans row_words() 64-bit words.
    int row_words() const { return words_; }
    const std::uint64_t* row(int u) const { return rows_.data() + static_cast<std::size_t>(u) * words_; }

    bool operator==(const Digraph& other) const = default;

private:
    void check_vertex(int v, const char* what) const;

    int n_ = 0;
    int words_ = 0;
    int arc_count_ = 0;
    std::vector<std::uint64_t> rows_;
};

// Edge-list text: optional '#' comment lines and blank lines, a header "n <N>",
// then one "u v" arc per line. Errors name the offending 1-based line.
Digraph from_edge_list(const std::string& text);
std::string to_edge_list(const Digraph& d);

// Graphviz export (write-only; there is no DOT reader here).
std::string to_dot(const Digraph& d);

Digraph converse(const Digraph& d);

// BFS distances from u; unreachable entries are -1.
std::vector<int> bfs_distances(const Digraph& d, int u);

Dist distance(const Digraph& d, int u, int v);
Dist diameter(const Digraph& d);          // max over ordered pairs; requires n >= 1
bool is_strong(const Digraph& d);         // requires n >= 1

struct InducedSubdigraph {
    Digraph graph;
    std::vector<int> old_to_new;  // -1 for vertices outside S
    std::vector<int> new_to_old;
};
InducedSubdigraph induced(const Digraph& d, const std::vector<int>& s);

// True iff p is a nonempty simple path of D (distinct in-range vertices,
// every consecutive pair an arc).
bool validate_path(const Digraph& d, const Path& p);

// All simple paths from start with exactly exact_len arcs, avoiding forbidden,
// emitted in lexicographic order of the vertex sequence. stop_at_first truncates
// the enumeration after the first match.
std::vector<Path> enumerate_simple_paths(const Digraph& d, int start, int exact_len,
                                         bool stop_at_first,
                                         const std::vector<int>& forbidden = {});

}  // namespace kqt
