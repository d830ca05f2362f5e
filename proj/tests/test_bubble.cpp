#include <algorithm>
#include <set>

#include "doctest.h"
#include "rbubble/bubble.hpp"
#include "rbubble/graph.hpp"
#include "rbubble/rng.hpp"
#include "test_support.hpp"

using namespace rbubble;
using rbubble::test::bubble_key;
using rbubble::test::exhaustive_bounded_dist;
using rbubble::test::key_set;
using rbubble::test::random_digraph;

namespace {

// s=0 -> a=1 -> t=2 and s -> c=3 -> t, unit weights
DeBruijnGraph diamond() {
    DeBruijnGraph g(2);
    for (const char* l : {"s", "a", "t", "c"}) g.add_vertex(l);
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    g.add_arc(0, 3);
    g.add_arc(3, 2);
    return g;
}

}  // namespace

TEST_CASE("distances along a simple path need no branching budget") {
    DeBruijnGraph g(2);
    for (const char* l : {"u", "a", "c"}) g.add_vertex(l);
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    auto table = branching_bounded_distances(g, 0, 0, false);
    CHECK(table.at(0, 0) == 0.0);
    CHECK(table.at(0, 1) == 1.0);
    CHECK(table.at(0, 2) == 2.0);
}

TEST_CASE("a branching vertex on the only route costs one budget unit") {
    // u -> x -> v with an extra arc x -> y making x branching, plus
    // isolated padding vertices
    DeBruijnGraph g(2);
    for (const char* l : {"u", "x", "v", "y", "p1", "p2"}) g.add_vertex(l);
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    g.add_arc(1, 3);
    auto table = branching_bounded_distances(g, 0, 1, false);
    CHECK(table.at(0, 2) == kUnreachable);
    CHECK(table.at(1, 2) == 2.0);
    // the exhaustive scan agrees
    auto ex0 = exhaustive_bounded_dist(g, 0, 0, false);
    auto ex1 = exhaustive_bounded_dist(g, 0, 1, false);
    CHECK(ex0[2] == kUnreachable);
    CHECK(ex1[2] == 2.0);
}

TEST_CASE("the table is zero at the source and monotone in the budget") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        DeBruijnGraph g = random_digraph(10, 0.25, rng);
        auto table = branching_bounded_distances(g, 3, 3, true);
        for (std::uint32_t j = 0; j <= 3; ++j) CHECK(table.at(j, 3) == 0.0);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            for (std::uint32_t j = 1; j <= 3; ++j) CHECK(table.at(j, v) <= table.at(j - 1, v));
        }
    }
}

TEST_CASE("bounded distances equal the exhaustive simple-path minimum") {
    Rng rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t nv = 4 + rng.below(9);
        unsigned maxw = trial % 2 == 0 ? 1 : 4;
        DeBruijnGraph g = random_digraph(nv, 0.2, rng, maxw);
        VertexId u = static_cast<VertexId>(rng.below(nv));
        bool count_source = trial % 2 == 1;
        auto table = branching_bounded_distances(g, u, 3, count_source);
        for (std::uint32_t j = 0; j <= 3; ++j) {
            auto expected = exhaustive_bounded_dist(g, u, j, count_source);
            for (VertexId v = 0; v < nv; ++v) {
                CHECK(table.at(j, v) == expected[v]);
            }
        }
    }
}

TEST_CASE("distance queries validate the source") {
    DeBruijnGraph g = diamond();
    CHECK_THROWS_AS(branching_bounded_distances(g, 99, 1, false), NoSuchVertexError);
}

TEST_CASE("feasibility base cases") {
    DeBruijnGraph g = diamond();
    g.add_vertex("p");  // 4, isolated
    g.add_vertex("q");  // 5, isolated
    CHECK(bubble_feasible(g, 1, 1, 0, 0, 0, 0));          // same endpoint, empty extensions
    CHECK(bubble_feasible(g, 1, 3, 1, 1, 0, 0));          // meet at t
    CHECK_FALSE(bubble_feasible(g, 1, 3, 0.5, 1, 0, 0));  // t out of reach for path 1
    CHECK_FALSE(bubble_feasible(g, 4, 5, 9, 9, 3, 3));    // reachable sets never intersect
}

TEST_CASE("the diamond has exactly one bubble") {
    DeBruijnGraph g = diamond();
    auto bubbles = enumerate_bubbles_collect(g, {0, 2, 2, 0});
    REQUIRE(bubbles.size() == 1);
    const Bubble& b = bubbles[0];
    CHECK(b.sink == 2);
    CHECK(b.len1 == 2.0);
    CHECK(b.len2 == 2.0);
    CHECK(b.branch1 == 0);
    CHECK(b.branch2 == 0);
    std::set<std::vector<VertexId>> paths{b.path1, b.path2};
    std::set<std::vector<VertexId>> want{{0, 1, 2}, {0, 3, 2}};
    CHECK(paths == want);
    CHECK(key_set(bubbles) == key_set(oracle_enumerate(g, {0, 2, 2, 0})));
}

TEST_CASE("a branching vertex on one path consumes the budget") {
    DeBruijnGraph g = diamond();
    g.add_vertex("x");
    g.add_vertex("y");
    g.add_arc(1, 4);  // a -> x, so a becomes branching
    g.add_arc(4, 5);  // x -> y padding
    CHECK(enumerate_bubbles_collect(g, {0, 2, 2, 0}).empty());
    auto bubbles = enumerate_bubbles_collect(g, {0, 2, 2, 1});
    REQUIRE(bubbles.size() == 1);
    CHECK(bubbles[0].branch1 == 1);
    CHECK(bubbles[0].branch2 == 0);
    CHECK(key_set(bubbles) == key_set(oracle_enumerate(g, {0, 2, 2, 1})));
    CHECK(oracle_enumerate(g, {0, 2, 2, 0}).empty());
}

TEST_CASE("zero length budgets yield nothing") {
    DeBruijnGraph g = diamond();
    CHECK(enumerate_bubbles_collect(g, {0, 0, 0, 5}).empty());
    CHECK(oracle_enumerate(g, {0, 0, 0, 5}).empty());
}

TEST_CASE("sources without two out-arcs yield nothing") {
    DeBruijnGraph g = diamond();
    CHECK(enumerate_bubbles_collect(g, {1, 9, 9, 5}).empty());
}

TEST_CASE("sink filtering keeps only matching bubbles") {
    DeBruijnGraph g = diamond();
    CHECK(enumerate_bubbles_collect(g, {0, 2, 2, 0}, VertexId{2}).size() == 1);
    CHECK(enumerate_bubbles_collect(g, {0, 2, 2, 0}, VertexId{1}).empty());
}

TEST_CASE("oracle refuses big graphs") {
    Rng rng(5);
    DeBruijnGraph g = random_digraph(21, 0.1, rng);
    CHECK_THROWS_AS(oracle_enumerate(g, {0, 3, 3, 1}), OracleRefusedError);
}

TEST_CASE("enumeration matches the oracle across random graphs and queries") {
    Rng rng(161803);
    int nonempty = 0;
    for (int trial = 0; trial < 250; ++trial) {
        std::size_t nv = 4 + rng.below(9);
        DeBruijnGraph g = random_digraph(nv, 0.2, rng);
        VertexId s = static_cast<VertexId>(trial % nv);
        std::uint32_t cap = static_cast<std::uint32_t>(nv);
        for (std::uint32_t b : {0u, 1u, 2u, cap}) {
            for (double alpha : {3.0, 5.0, 8.0}) {
                BubbleQuery q{s, alpha, alpha, b};
                auto got = enumerate_bubbles_collect(g, q);
                auto want = oracle_enumerate(g, q);
                REQUIRE(got.size() == want.size());
                CHECK(key_set(got) == key_set(want));
                nonempty += want.empty() ? 0 : 1;
            }
        }
        // asymmetric bounds exercise the longer/shorter pairing
        BubbleQuery asym{s, 8.0, 3.0, 2};
        CHECK(key_set(enumerate_bubbles_collect(g, asym)) ==
              key_set(oracle_enumerate(g, asym)));
        BubbleQuery swapped{s, 3.0, 8.0, 2};
        CHECK(key_set(enumerate_bubbles_collect(g, swapped)) ==
              key_set(oracle_enumerate(g, asym)));
    }
    CHECK(nonempty > 100);  // the grid actually exercised non-trivial cases
}

TEST_CASE("enumeration matches the oracle on weighted graphs") {
    Rng rng(777001);
    int nonempty = 0;
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t nv = 4 + rng.below(8);
        DeBruijnGraph g = random_digraph(nv, 0.25, rng, 3);  // weights 1..3
        VertexId s = static_cast<VertexId>(trial % nv);
        for (std::uint32_t b : {0u, 2u}) {
            for (double alpha : {6.0, 9.0}) {
                BubbleQuery q{s, alpha, alpha, b};
                auto got = enumerate_bubbles_collect(g, q);
                auto want = oracle_enumerate(g, q);
                CHECK(key_set(got) == key_set(want));
                nonempty += want.empty() ? 0 : 1;
            }
        }
    }
    CHECK(nonempty > 50);
}

TEST_CASE("a self-loop at the source neither starts a path nor blocks one") {
    DeBruijnGraph g = diamond();
    g.add_arc(0, 0);
    auto bubbles = enumerate_bubbles_collect(g, {0, 2, 2, 5});
    REQUIRE(bubbles.size() == 1);
    CHECK(bubbles[0].sink == 2);
    CHECK(key_set(bubbles) == key_set(oracle_enumerate(g, {0, 2, 2, 5})));
}

TEST_CASE("emitted bubbles are disjoint, deduplicated and within bounds") {
    Rng rng(271828);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t nv = 6 + rng.below(7);
        DeBruijnGraph g = random_digraph(nv, 0.25, rng);
        BubbleQuery q{static_cast<VertexId>(rng.below(nv)), 6.0, 4.0, 2};
        auto bubbles = enumerate_bubbles_collect(g, q);
        std::set<std::string> seen;
        for (const Bubble& b : bubbles) {
            CHECK(seen.insert(bubble_key(b)).second);  // no duplicates
            CHECK(b.len1 >= b.len2);
            CHECK(b.len1 <= 6.0);
            CHECK(b.len2 <= 4.0);
            CHECK(b.branch1 <= 2);
            CHECK(b.branch2 <= 2);
            REQUIRE(!b.path1.empty());
            REQUIRE(!b.path2.empty());
            CHECK(b.path1.front() == q.source);
            CHECK(b.path2.front() == q.source);
            CHECK(b.path1.back() == b.sink);
            CHECK(b.path2.back() == b.sink);
            CHECK(b.sink != q.source);
            std::set<VertexId> internal1(b.path1.begin() + 1, b.path1.end() - 1);
            for (std::size_t i = 1; i + 1 < b.path2.size(); ++i) {
                CHECK(internal1.count(b.path2[i]) == 0);
            }
        }
    }
}

TEST_CASE("bubble sets grow monotonically in the budgets") {
    Rng rng(99991);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t nv = 5 + rng.below(7);
        DeBruijnGraph g = random_digraph(nv, 0.25, rng);
        VertexId s = static_cast<VertexId>(rng.below(nv));
        auto is_subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
            return std::includes(b.begin(), b.end(), a.begin(), a.end());
        };
        std::set<std::string> prev;
        for (std::uint32_t b = 0; b <= 3; ++b) {
            auto cur = key_set(enumerate_bubbles_collect(g, {s, 5.0, 5.0, b}));
            CHECK(is_subset(prev, cur));
            prev = std::move(cur);
        }
        prev.clear();
        for (double alpha : {2.0, 4.0, 6.0}) {
            auto cur = key_set(enumerate_bubbles_collect(g, {s, alpha, alpha, 2}));
            CHECK(is_subset(prev, cur));
            prev = std::move(cur);
        }
    }
}

TEST_CASE("every entered recursion node leads to an emission") {
    Rng rng(123457);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t nv = 5 + rng.below(8);
        DeBruijnGraph g = random_digraph(nv, 0.25, rng);
        EnumerationStats st;
        BubbleQuery q{static_cast<VertexId>(rng.below(nv)), 6.0, 6.0, 2};
        enumerate_bubbles_collect(g, q, std::nullopt, {}, &st);
        CHECK(st.complete);
        if (st.emissions == 0) {
            CHECK(st.nodes == 0);  // no feasible root pair at all
        } else {
            CHECK(st.nodes <= st.emissions * (2 * nv + 4));
        }
    }
}

TEST_CASE("limits produce a partial-enumeration marker") {
    DeBruijnGraph g = diamond();
    EnumerationStats st;
    EnumerationLimits lim;
    lim.timeout_seconds = 0.0;
    auto bubbles = enumerate_bubbles_collect(g, {0, 2, 2, 0}, std::nullopt, lim, &st);
    CHECK_FALSE(st.complete);
    CHECK(bubbles.empty());

    EnumerationLimits node_lim;
    node_lim.max_nodes = 0;
    enumerate_bubbles_collect(g, {0, 2, 2, 0}, std::nullopt, node_lim, &st);
    CHECK_FALSE(st.complete);

    // and a clean run is marked complete
    enumerate_bubbles_collect(g, {0, 2, 2, 0}, std::nullopt, {}, &st);
    CHECK(st.complete);
    CHECK(st.emissions == 1);
}

TEST_CASE("enumeration is deterministic") {
    Rng rng(55);
    DeBruijnGraph g = random_digraph(10, 0.3, rng);
    BubbleQuery q{0, 6.0, 6.0, 3};
    auto a = enumerate_bubbles_collect(g, q);
    auto b = enumerate_bubbles_collect(g, q);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_bubble(a[i], b[i]));
}

TEST_CASE("multi-source enumeration merges in source order") {
    DeBruijnGraph g = diamond();
    g.add_vertex("s2");
    g.add_vertex("m1");
    g.add_vertex("m2");
    g.add_arc(4, 5);
    g.add_arc(4, 6);
    g.add_arc(5, 2);
    g.add_arc(6, 2);
    MultiSourceOptions opt;
    opt.alpha1 = opt.alpha2 = 3.0;
    opt.b = 2;
    auto runs = enumerate_all_sources(g, opt);
    REQUIRE(runs.size() == 2);
    CHECK(runs[0].source == 0);
    CHECK(runs[1].source == 4);
    CHECK(runs[0].bubbles.size() == 1);
    CHECK(runs[1].bubbles.size() == 1);

    opt.threads = 4;
    auto par = enumerate_all_sources(g, opt);
    REQUIRE(par.size() == 2);
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].source == runs[i].source);
        REQUIRE(par[i].bubbles.size() == runs[i].bubbles.size());
        for (std::size_t j = 0; j < par[i].bubbles.size(); ++j) {
            CHECK(same_bubble(par[i].bubbles[j], runs[i].bubbles[j]));
        }
    }
}
