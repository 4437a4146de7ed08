#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "tomo/error.hpp"
#include "tomo/generate.hpp"
#include "tomo/tree.hpp"

using namespace tomo;

namespace {

// Exhaustive BFS oracle for all-pairs graph distance.
std::map<std::pair<int, int>, int> bfs_all_pairs(const RoutingTree& t) {
    std::map<std::pair<int, int>, int> d;
    for (int s : t.nodes()) {
        std::map<int, int> dist{{s, 0}};
        std::deque<int> q{s};
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            for (int nb : t.neighbors(cur))
                if (!dist.count(nb)) {
                    dist[nb] = dist[cur] + 1;
                    q.push_back(nb);
                }
        }
        for (auto [v, dd] : dist) d[{s, v}] = dd;
    }
    return d;
}

RoutingTree three_leaf_star() {
    return RoutingTree::from_edges({Edge(0, 3), Edge(3, 1), Edge(3, 2)});
}

// 0 and u3 on one side of the internal edge, u1/u2 on the other.
RoutingTree quartet() {
    return RoutingTree::from_edges(
        {Edge(0, 10), Edge(10, 3), Edge(10, 11), Edge(11, 1), Edge(11, 2)});
}

} // namespace

TEST_CASE("validation rejects malformed trees") {
    CHECK_THROWS_AS(RoutingTree::from_edges({Edge(1, 2)}), ValidationError); // no source
    CHECK_THROWS_AS(RoutingTree::from_edges({Edge(0, 1), Edge(0, 2)}), ValidationError);
    // degree-2 internal node
    CHECK_THROWS_AS(RoutingTree::from_edges({Edge(0, 3), Edge(3, 1)}), ValidationError);
    // disconnected
    CHECK_THROWS_AS(RoutingTree::from_edges(
                        {Edge(0, 4), Edge(4, 1), Edge(4, 2), Edge(5, 6), Edge(5, 7), Edge(5, 8)}),
                    ValidationError);
}

TEST_CASE("path in a 3-leaf star") {
    RoutingTree t = three_leaf_star();
    EdgePath p = t.path_edges(1, 2);
    CHECK(p.length() == 2);
    CHECK(p.edges() == std::vector<Edge>{Edge(1, 3), Edge(3, 2)});
    CHECK_THROWS_AS(t.path_edges(1, 99), ValidationError);
    CHECK_THROWS_AS(t.path_edges(1, 1), ValidationError);
}

TEST_CASE("quartet path crosses the internal edge") {
    RoutingTree t = quartet();
    CHECK(t.path_edges(1, 3).length() == 3);
}

TEST_CASE("path length equals BFS distance on random trees") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RoutingTree t = random_tree(20, seed);
        auto d = bfs_all_pairs(t);
        const auto& ls = t.leaves();
        int depth = t.chord_depth();
        for (std::size_t i = 0; i < ls.size(); ++i)
            for (std::size_t j = i + 1; j < ls.size(); ++j) {
                CHECK(static_cast<int>(t.path_edges(ls[i], ls[j]).length()) ==
                      d[{ls[i], ls[j]}]);
            }
        // every edge lies on a leaf path no longer than the chord depth
        for (const Edge& e : t.edges()) {
            int best = 1 << 20;
            for (std::size_t i = 0; i < ls.size(); ++i)
                for (std::size_t j = i + 1; j < ls.size(); ++j) {
                    auto es = t.path_edges(ls[i], ls[j]).edges();
                    if (std::find(es.begin(), es.end(), e) != es.end())
                        best = std::min(best, static_cast<int>(es.size()));
                }
            CHECK(best <= depth);
        }
    }
}

TEST_CASE("common ancestor") {
    RoutingTree star = three_leaf_star();
    CHECK(star.common_ancestor(1, 2) == 3);
    CHECK_THROWS_AS(star.common_ancestor(0, 1), ValidationError);

    // caterpillar: 0 - x - y with receiver 1 under x, receivers 2,3 under y
    RoutingTree cat = RoutingTree::from_edges(
        {Edge(0, 4), Edge(4, 1), Edge(4, 5), Edge(5, 2), Edge(5, 3)});
    CHECK(cat.common_ancestor(1, 2) == 4);
    CHECK(cat.common_ancestor(2, 3) == 5);

    // oracle: gamma is on all three paths
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        RoutingTree t = random_tree(12, seed);
        auto rs = t.receivers();
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = i + 1; j < rs.size(); ++j) {
                int g = t.common_ancestor(rs[i], rs[j]);
                for (auto [a, b] : {std::pair{rs[i], rs[j]},
                                    std::pair{0, rs[i]},
                                    std::pair{0, rs[j]}}) {
                    auto nodes = t.path_edges(a, b).nodes;
                    CHECK(std::find(nodes.begin(), nodes.end(), g) != nodes.end());
                }
            }
    }
}

TEST_CASE("path splits at the common ancestor") {
    for (std::uint64_t seed = 40; seed < 45; ++seed) {
        RoutingTree t = random_tree(10, seed);
        auto rs = t.receivers();
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = i + 1; j < rs.size(); ++j) {
                auto [as, bs] = t.split_path(rs[i], rs[j]);
                CHECK(as.size() + bs.size() == t.path_edges(rs[i], rs[j]).length());
            }
        auto [as, bs] = t.split_path(rs[0], 0);
        CHECK(bs.empty());
        CHECK(as.size() == t.path_edges(0, rs[0]).length());
    }
}

TEST_CASE("chord depth") {
    CHECK(three_leaf_star().chord_depth() == 2);

    RoutingTree b16 = balanced_tree(16);
    int n = b16.receiver_count();
    CHECK(b16.chord_depth() <=
          static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1);

    // provable bound for arbitrary internal-degree->=3 trees
    for (std::uint64_t seed = 60; seed < 80; ++seed) {
        RoutingTree t = random_tree(5 + static_cast<int>(seed % 30), seed);
        double bound = 2.0 * std::log2(static_cast<double>(t.receiver_count() + 1));
        CHECK(static_cast<double>(t.chord_depth()) <= std::max(bound, 2.0));
    }
}

TEST_CASE("bipartitions of small trees") {
    RoutingTree star = three_leaf_star();
    auto parts = star.bipartitions();
    CHECK(parts.size() == 3);
    for (const Bipartition& p : parts) CHECK(p.is_trivial());

    RoutingTree q = quartet();
    auto qparts = q.bipartitions();
    CHECK(qparts.size() == 5);
    int nontrivial = 0;
    for (const Bipartition& p : qparts)
        if (!p.is_trivial()) {
            ++nontrivial;
            CHECK(p.side_a() == std::vector<int>{0, 3});
            CHECK(p.side_b() == std::vector<int>{1, 2});
        }
    CHECK(nontrivial == 1);
}

TEST_CASE("tree round-trips through its bipartition set") {
    int failures = 0;
    for (std::uint64_t seed = 100; seed < 200; ++seed) {
        int n = 3 + static_cast<int>(seed % 62);
        RoutingTree t = random_tree(n, seed);
        RoutingTree back = tree_from_bipartitions(t.leaves(), t.bipartitions());
        if (!back.same_topology(t)) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("tree_from_bipartitions base cases") {
    // empty split set -> star
    RoutingTree star = tree_from_bipartitions({0, 1, 2, 3}, {});
    CHECK(star.receiver_count() == 3);
    CHECK(star.bipartitions().size() == 4);

    // quartet from its single internal split
    Bipartition split({0, 3}, {1, 2});
    RoutingTree q = tree_from_bipartitions({0, 1, 2, 3}, {split});
    CHECK(q.same_topology(quartet()));
}

TEST_CASE("tree_from_bipartitions rejects incompatible splits") {
    Bipartition p1({0, 1}, {2, 3, 4});
    Bipartition p2({0, 2}, {1, 3, 4});
    CHECK_THROWS_AS(tree_from_bipartitions({0, 1, 2, 3, 4}, {p1, p2}), IncompatibilityError);
    try {
        tree_from_bipartitions({0, 1, 2, 3, 4}, {p1, p2});
    } catch (const IncompatibilityError& e) {
        CHECK(std::string(e.what()).find("conflicts") != std::string::npos);
    }
}

TEST_CASE("closest leaf above") {
    RoutingTree star = three_leaf_star();
    CHECK(star.closest_leaf_above(1, 2) == 0);

    // receiver 3 hangs one level above gamma_12, strictly nearer than the
    // source; a tie would go to the smaller id
    RoutingTree cat = RoutingTree::from_edges({Edge(0, 6), Edge(6, 9), Edge(6, 4), Edge(4, 3),
                                               Edge(4, 5), Edge(5, 1), Edge(5, 2)});
    CHECK(cat.closest_leaf_above(1, 2) == 3);
    RoutingTree tie = RoutingTree::from_edges(
        {Edge(0, 4), Edge(4, 3), Edge(4, 5), Edge(5, 1), Edge(5, 2)});
    CHECK(tie.closest_leaf_above(1, 2) == 0);

    // exhaustive-scan oracle incl. the smallest-id tie rule
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        RoutingTree t = random_tree(10, seed);
        auto rs = t.receivers();
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = i + 1; j < rs.size(); ++j) {
                int g = t.common_ancestor(rs[i], rs[j]);
                int best = -1, bd = 1 << 20;
                for (int l : t.leaves()) {
                    if (l == rs[i] || l == rs[j] || t.in_subtree_below(g, l)) continue;
                    int d = t.graph_distance(l, g);
                    if (d < bd || (d == bd && l < best)) {
                        best = l;
                        bd = d;
                    }
                }
                CHECK(t.closest_leaf_above(rs[i], rs[j]) == best);
            }
    }
}

TEST_CASE("bipartition canonical form") {
    Bipartition a({2, 1}, {0, 3});
    CHECK(a.side_a() == std::vector<int>{0, 3});
    CHECK(a.side_b() == std::vector<int>{1, 2});
    CHECK(a == Bipartition({3, 0}, {1, 2}));
    CHECK_THROWS_AS(Bipartition({1}, {1, 2}), ValidationError);
    CHECK_THROWS_AS(Bipartition({}, {1, 2}), ValidationError);
}
