#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tomo/error.hpp"
#include "tomo/generate.hpp"
#include "tomo/newick.hpp"

using namespace tomo;

TEST_CASE("encode a quartet") {
    RoutingTree q = RoutingTree::from_edges(
        {Edge(0, 10), Edge(10, 3), Edge(10, 11), Edge(11, 1), Edge(11, 2)});
    CHECK(to_newick(q) == "((3,(1,2)))0;");
}

TEST_CASE("parse round trip, unweighted") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RoutingTree t = random_tree(2 + static_cast<int>(seed % 20), seed);
        NewickTree back = from_newick(to_newick(t));
        CHECK(back.tree.same_topology(t));
        CHECK_FALSE(back.has_weights);
    }
}

TEST_CASE("parse round trip with branch weights") {
    RoutingTree t = random_tree(9, 7);
    std::map<Edge, double> w = random_edge_weights(t, 0.25, 2.0, 3);
    NewickTree back = from_newick(to_newick(t, &w));
    CHECK(back.tree.same_topology(t));
    REQUIRE(back.has_weights);
    // weights survive up to the relabeling of internal nodes: compare leaf
    // path sums
    const auto& ls = t.leaves();
    for (std::size_t i = 0; i < ls.size(); ++i)
        for (std::size_t j = i + 1; j < ls.size(); ++j) {
            double orig = 0, rt = 0;
            for (const Edge& e : t.path_edges(ls[i], ls[j]).edges()) orig += w.at(e);
            for (const Edge& e : back.tree.path_edges(ls[i], ls[j]).edges())
                rt += back.weights.at(e);
            CHECK(rt == doctest::Approx(orig).epsilon(1e-12));
        }
}

TEST_CASE("parser rejects junk") {
    CHECK_THROWS_AS(from_newick(""), ValidationError);
    CHECK_THROWS_AS(from_newick("((1,2)"), ValidationError);
    CHECK_THROWS_AS(from_newick("(1,2)5;"), ValidationError);      // root label not 0
    CHECK_THROWS_AS(from_newick("((1,2),3)0;x"), ValidationError); // trailing junk
    CHECK_THROWS_AS(from_newick("((1:0.5,2),3)0;"), ValidationError); // mixed weights
}

TEST_CASE("two-leaf tree") {
    RoutingTree t = RoutingTree::from_edges({Edge(0, 1)});
    CHECK(to_newick(t) == "(1)0;");
    CHECK(from_newick("(1)0;").tree.same_topology(t));
}
