#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "kqt/engine.hpp"
#include "kqt/rng.hpp"
#include "kqt/verifier.hpp"

using namespace kqt;

namespace {

Digraph directed_path(int n) {
    Digraph d(n);
    for (int i = 0; i + 1 < n; ++i) d.add_arc(i, i + 1);
    return d;
}

Digraph complete(int n) {
    Digraph d(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d.add_arc(i, j);
    return d;
}

// the exceptional 4-vertex digraph: central 3-cycle, pendant feeding x1
Digraph exceptional4() {
    Digraph d(4);
    d.add_arc(0, 1);
    d.add_arc(1, 2);
    d.add_arc(2, 0);
    d.add_arc(3, 1);
    d.add_arc(0, 3);
    return d;
}

}  // namespace

TEST_CASE("path condition detection") {
    CHECK(is_k_quasi_transitive(complete(4), 2));
    CHECK_FALSE(is_k_quasi_transitive(directed_path(6), 5));
    CHECK(is_k_quasi_transitive(exceptional4(), 3));
    CHECK_THROWS_AS(is_k_quasi_transitive(complete(3), 1), usage_error);

    // no simple path of length k at all makes the condition vacuous
    CHECK(is_k_quasi_transitive(directed_path(5), 5));
}

TEST_CASE("first violation is lexicographic") {
    CHECK_FALSE(find_violation(complete(4), 2).has_value());

    auto v6 = find_violation(directed_path(6), 5);
    REQUIRE(v6.has_value());
    CHECK(v6->path == Path{0, 1, 2, 3, 4, 5});
    CHECK(v6->from() == 0);
    CHECK(v6->to() == 5);

    // the 8-path has three length-5 paths; the 0-rooted one comes first
    auto v8 = find_violation(directed_path(8), 5);
    REQUIRE(v8.has_value());
    CHECK(v8->path == Path{0, 1, 2, 3, 4, 5});
}

TEST_CASE("backward-only closure of the 6-path adds exactly the return arc") {
    auto res = kqt_closure(directed_path(6), 5, ClosurePolicy::backward_only());
    REQUIRE(res.ok());
    CHECK(res.graph->arc_count() == 6);
    CHECK(res.graph->has_arc(5, 0));
    CHECK(is_k_quasi_transitive(*res.graph, 5));
}

TEST_CASE("closure leaves a compliant digraph unchanged and is idempotent") {
    Digraph k4 = complete(4);
    auto res = kqt_closure(k4, 2, ClosurePolicy::backward_only());
    REQUIRE(res.ok());
    CHECK(*res.graph == k4);

    auto once = kqt_closure(directed_path(8), 5, ClosurePolicy::backward_only());
    REQUIRE(once.ok());
    auto twice = kqt_closure(*once.graph, 5, ClosurePolicy::backward_only());
    REQUIRE(twice.ok());
    CHECK(*twice.graph == *once.graph);
}

TEST_CASE("distance-preserving closure keeps the frame distance and forces the stated arcs") {
    auto res = kqt_closure(directed_path(8), 5, ClosurePolicy::distance_preserving(0, 7, 7));
    REQUIRE(res.ok());
    const Digraph& d = *res.graph;
    CHECK(distance(d, 0, 7) == Dist{7});
    CHECK(is_k_quasi_transitive(d, 5));
    for (auto [u, v] : {std::pair{7, 2}, {7, 0}, {6, 3}, {6, 1}, {7, 4}}) CHECK(d.has_arc(u, v));
}

TEST_CASE("distance-preserving closure rejects a stale target distance") {
    CHECK_THROWS_AS(kqt_closure(directed_path(8), 5, ClosurePolicy::distance_preserving(0, 7, 3)),
                    usage_error);
    CHECK_THROWS_AS(kqt_closure(directed_path(8), 5, ClosurePolicy::distance_preserving(0, 7, 0)),
                    usage_error);
}

TEST_CASE("random-orientation closure is seed-deterministic and compliant") {
    auto a = kqt_closure(directed_path(8), 5, ClosurePolicy::random_orientation(42));
    auto b = kqt_closure(directed_path(8), 5, ClosurePolicy::random_orientation(42));
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(*a.graph == *b.graph);
    CHECK(is_k_quasi_transitive(*a.graph, 5));
}

TEST_CASE("minimal generated instance is the frozen 16-arc closure") {
    auto gen = generate_frame_instance(5, 0, 0.0, 7);
    REQUIRE(gen.ok());
    const Digraph& d = *gen.graph;
    CHECK(d.order() == 8);
    CHECK(d.arc_count() == 16);
    std::set<std::pair<int, int>> expected;
    for (int i = 0; i < 7; ++i) expected.insert({i, i + 1});
    for (auto arc : {std::pair{3, 0}, {4, 1}, {5, 0}, {5, 2}, {6, 1},
                     {6, 3}, {7, 0}, {7, 2}, {7, 4}})
        expected.insert(arc);
    auto arcs = d.arcs();
    CHECK(std::set<std::pair<int, int>>(arcs.begin(), arcs.end()) == expected);
    CHECK(is_strong(d));
    CHECK(is_k_quasi_transitive(d, 5));
    CHECK(distance(d, 0, 7) == Dist{7});
}

TEST_CASE("generated instances satisfy every promised property") {
    auto gen = generate_frame_instance(5, 3, 0.2, 42);
    REQUIRE(gen.ok());
    const Digraph& d = *gen.graph;
    CHECK(d.order() == 11);
    CHECK(is_strong(d));
    CHECK(is_k_quasi_transitive(d, 5));
    CHECK(distance(d, 0, 7) == Dist{7});
    for (int i = 0; i < 7; ++i) CHECK(d.has_arc(i, i + 1));

    // k=7 as well, and determinism per seed
    auto g7 = generate_frame_instance(7, 2, 0.1, 3);
    REQUIRE(g7.ok());
    CHECK(g7.graph->order() == 12);
    CHECK(distance(*g7.graph, 0, 9) == Dist{9});
    auto again = generate_frame_instance(7, 2, 0.1, 3);
    REQUIRE(again.ok());
    CHECK(*again.graph == *g7.graph);

    CHECK_THROWS_AS(generate_frame_instance(4, 0, 0.0, 1), usage_error);
    CHECK_THROWS_AS(generate_frame_instance(5, -1, 0.0, 1), usage_error);
    CHECK_THROWS_AS(generate_frame_instance(5, 0, 1.5, 1), usage_error);
}

TEST_CASE("mask enumeration bit layout") {
    // bit b encodes u = b / (n-1), v = r + (r >= u) with r = b % (n-1)
    Digraph d1 = digraph_from_arc_mask(3, 0b000001);
    CHECK(d1.arc_count() == 1);
    CHECK(d1.has_arc(0, 1));
    Digraph d2 = digraph_from_arc_mask(3, 0b000010);
    CHECK(d2.has_arc(0, 2));
    Digraph d3 = digraph_from_arc_mask(3, 0b000100);
    CHECK(d3.has_arc(1, 0));
    Digraph full = digraph_from_arc_mask(3, 0b111111);
    CHECK(full.arc_count() == 6);
}

TEST_CASE("digraph enumeration counts and bounds") {
    CHECK(DigraphEnumerator(1).total() == 1);
    CHECK(DigraphEnumerator(2).total() == 4);
    CHECK(DigraphEnumerator(3).total() == 64);

    DigraphEnumerator en(2);
    int count = 0;
    int arcs_seen = 0;
    while (auto d = en.next()) {
        ++count;
        arcs_seen += d->arc_count();
    }
    CHECK(count == 4);
    CHECK(arcs_seen == 4);  // masks 00,01,10,11

    CHECK_THROWS_AS(DigraphEnumerator(6), usage_error);
}

TEST_CASE("fast detector agrees with the reference recognizer on every 4-vertex digraph") {
    DigraphEnumerator en(4);
    while (auto d = en.next()) {
        CHECK(is_k_quasi_transitive(*d, 2) == oracle_is_kqt(*d, 2));
        CHECK(is_k_quasi_transitive(*d, 3) == oracle_is_kqt(*d, 3));
    }
}

TEST_CASE("converse invariance of the path condition, exhaustive small cases") {
    DigraphEnumerator en(4);
    while (auto d = en.next()) {
        Digraph c = converse(*d);
        CHECK(is_k_quasi_transitive(*d, 2) == is_k_quasi_transitive(c, 2));
        CHECK(is_k_quasi_transitive(*d, 3) == is_k_quasi_transitive(c, 3));
    }
}
