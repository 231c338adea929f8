#include "kqt/digraph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace kqt {

Digraph::Digraph(int n) : n_(n), words_((n + 63) / 64) {
    if (n < 0) throw usage_error("vertex count must be nonnegative");
    rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

void Digraph::check_vertex(int v, const char* what) const {
    if (v < 0 || v >= n_)
        throw usage_error(std::string(what) + " vertex " + std::to_string(v) +
                          " out of range [0," + std::to_string(n_) + ")");
}

bool Digraph::has_arc(int u, int v) const {
    check_vertex(u, "arc tail");
    check_vertex(v, "arc head");
    return (row(u)[v >> 6] >> (v & 63)) & 1ULL;
}

void Digraph::add_arc(int u, int v) {
    check_vertex(u, "arc tail");
    check_vertex(v, "arc head");
    if (u == v) throw usage_error("loop arc " + std::to_string(u) + "->" + std::to_string(v));
    std::uint64_t& word = rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)];
    std::uint64_t bit = 1ULL << (v & 63);
    if (!(word & bit)) {
        word |= bit;
        ++arc_count_;
    }
}

void Digraph::remove_arc(int u, int v) {
    check_vertex(u, "arc tail");
    check_vertex(v, "arc head");
    std::uint64_t& word = rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)];
    std::uint64_t bit = 1ULL << (v & 63);
    if (word & bit) {
        word &= ~bit;
        --arc_count_;
    }
}

bool Digraph::adjacent(int u, int v) const {
    check_vertex(u, "adjacency");
    check_vertex(v, "adjacency");
    if (u == v) throw usage_error("adjacency is defined for distinct vertices");
    return has_arc(u, v) || has_arc(v, u);
}

std::vector<int> Digraph::out_neighbors(int u) const {
    check_vertex(u, "neighborhood");
    std::vector<int> out;
    const std::uint64_t* r = row(u);
    for (int w = 0; w < words_; ++w) {
        std::uint64_t bits = r[w];
        while (bits) {
            int b = __builtin_ctzll(bits);
            out.push_back(w * 64 + b);
            bits &= bits - 1;
        }
    }
    return out;
}

std::vector<int> Digraph::in_neighbors(int v) const {
    check_vertex(v, "neighborhood");
    std::vector<int> in;
    for (int u = 0; u < n_; ++u)
        if (u != v && has_arc(u, v)) in.push_back(u);
    return in;
}

std::vector<std::pair<int, int>> Digraph::arcs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(arc_count_);
    for (int u = 0; u < n_; ++u)
        for (int v : out_neighbors(u)) out.emplace_back(u, v);
    return out;
}

int Digraph::out_degree(int u) const {
    check_vertex(u, "degree");
    int deg = 0;
    const std::uint64_t* r = row(u);
    for (int w = 0; w < words_; ++w) deg += __builtin_popcountll(r[w]);
    return deg;
}

int Digraph::in_degree(int v) const {
    check_vertex(v, "degree");
    int deg = 0;
    for (int u = 0; u < n_; ++u)
        if (u != v && has_arc(u, v)) ++deg;
    return deg;
}

namespace {

bool significant(const std::string& line) {
    for (char c : line) {
        if (c == '#') return false;
        if (!isspace(static_cast<unsigned char>(c))) return true;
    }
    return false;
}

}  // namespace

Digraph from_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    int n = 0;
    Digraph d;
    std::set<std::pair<int, int>> seen;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!significant(line)) continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            ls >> tag;
            if (tag != "n")
                throw parse_error("line " + std::to_string(lineno) +
                                  ": expected header \"n <N>\" before arcs");
            if (!(ls >> n) || n < 0)
                throw parse_error("line " + std::to_string(lineno) + ": bad vertex count");
            std::string rest;
            if (ls >> rest)
                throw parse_error("line " + std::to_string(lineno) + ": trailing tokens in header");
            d = Digraph(n);
            have_header = true;
            continue;
        }
        long long u, v;
        if (!(ls >> u >> v))
            throw parse_error("line " + std::to_string(lineno) + ": malformed arc line");
        std::string rest;
        if (ls >> rest)
            throw parse_error("line " + std::to_string(lineno) + ": trailing tokens in arc line");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw parse_error("line " + std::to_string(lineno) + ": vertex id out of range [0," +
                              std::to_string(n) + ")");
        if (u == v) throw parse_error("line " + std::to_string(lineno) + ": loop arc");
        if (!seen.insert({static_cast<int>(u), static_cast<int>(v)}).second)
            throw parse_error("line " + std::to_string(lineno) + ": duplicate arc");
        d.add_arc(static_cast<int>(u), static_cast<int>(v));
    }
    if (!have_header) throw parse_error("missing header line \"n <N>\"");
    return d;
}

std::string to_edge_list(const Digraph& d) {
    std::ostringstream out;
    out << "n " << d.order() << "\n";
    for (auto [u, v] : d.arcs()) out << u << " " << v << "\n";
    return out.str();
}

std::string to_dot(const Digraph& d) {
    std::ostringstream out;
    out << "digraph {\n";
    for (int v = 0; v < d.order(); ++v) out << "  " << v << ";\n";
    for (auto [u, v] : d.arcs()) out << "  " << u << " -> " << v << ";\n";
    out << "}\n";
    return out.str();
}

Digraph converse(const Digraph& d) {
    Digraph c(d.order());
    for (auto [u, v] : d.arcs()) c.add_arc(v, u);
    return c;
}

std::vector<int> bfs_distances(const Digraph& d, int u) {
    if (u < 0 || u >= d.order()) throw usage_error("bfs source out of range");
    std::vector<int> dist(d.order(), -1);
    std::queue<int> q;
    dist[u] = 0;
    q.push(u);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        const std::uint64_t* r = d.row(x);
        for (int w = 0; w < d.row_words(); ++w) {
            std::uint64_t bits = r[w];
            while (bits) {
                int y = w * 64 + __builtin_ctzll(bits);
                bits &= bits - 1;
                if (dist[y] < 0) {
                    dist[y] = dist[x] + 1;
                    q.push(y);
                }
            }
        }
    }
    return dist;
}

Dist distance(const Digraph& d, int u, int v) {
    if (v < 0 || v >= d.order()) throw usage_error("distance target out of range");
    auto dist = bfs_distances(d, u);
    if (dist[v] < 0) return std::nullopt;
    return dist[v];
}

Dist diameter(const Digraph& d) {
    if (d.order() < 1) throw usage_error("diameter requires at least one vertex");
    int best = 0;
    for (int u = 0; u < d.order(); ++u) {
        auto dist = bfs_distances(d, u);
        for (int v = 0; v < d.order(); ++v) {
            if (dist[v] < 0) return std::nullopt;
            best = std::max(best, dist[v]);
        }
    }
    return best;
}

bool is_strong(const Digraph& d) {
    if (d.order() < 1) throw usage_error("strongness requires at least one vertex");
    auto forward = bfs_distances(d, 0);
    for (int v = 0; v < d.order(); ++v)
        if (forward[v] < 0) return false;
    auto backward = bfs_distances(converse(d), 0);
    for (int v = 0; v < d.order(); ++v)
        if (backward[v] < 0) return false;
    return true;
}

InducedSubdigraph induced(const Digraph& d, const std::vector<int>& s) {
    std::vector<int> verts = s;
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (int v : verts)
        if (v < 0 || v >= d.order()) throw usage_error("induced set not a subset of vertices");

    InducedSubdigraph sub;
    sub.graph = Digraph(static_cast<int>(verts.size()));
    sub.old_to_new.assign(d.order(), -1);
    sub.new_to_old = verts;
    for (std::size_t i = 0; i < verts.size(); ++i) sub.old_to_new[verts[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = 0; j < verts.size(); ++j)
            if (i != j && d.has_arc(verts[i], verts[j]))
                sub.graph.add_arc(static_cast<int>(i), static_cast<int>(j));
    return sub;
}

bool validate_path(const Digraph& d, const Path& p) {
    if (p.empty()) return false;
    std::vector<char> used(d.order(), 0);
    for (int v : p) {
        if (v < 0 || v >= d.order()) return false;
        if (used[v]) return false;
        used[v] = 1;
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (!d.has_arc(p[i], p[i + 1])) return false;
    return true;
}

namespace {

void extend_paths(const Digraph& d, Path& cur, std::vector<char>& used, int remaining,
                  bool stop_at_first, std::vector<Path>& out) {
    if (!out.empty() && stop_at_first) return;
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int w : d.out_neighbors(cur.back())) {
        if (used[w]) continue;
        used[w] = 1;
        cur.push_back(w);
        extend_paths(d, cur, used, remaining - 1, stop_at_first, out);
        cur.pop_back();
        used[w] = 0;
        if (!out.empty() && stop_at_first) return;
    }
}

}  // namespace

std::vector<Path> enumerate_simple_paths(const Digraph& d, int start, int exact_len,
                                         bool stop_at_first, const std::vector<int>& forbidden) {
    if (start < 0 || start >= d.order()) throw usage_error("path start out of range");
    if (exact_len < 0) throw usage_error("path length must be nonnegative");
    std::vector<char> used(d.order(), 0);
    for (int v : forbidden) {
        if (v < 0 || v >= d.order()) throw usage_error("forbidden vertex out of range");
        if (v == start) throw usage_error("start vertex cannot be forbidden");
        used[v] = 1;
    }
    used[start] = 1;
    Path cur{start};
    std::vector<Path> out;
    extend_paths(d, cur, used, exact_len, stop_at_first, out);
    return out;
}

}  // namespace kqt
