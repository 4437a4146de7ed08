#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tomo/delay.hpp"
#include "tomo/error.hpp"
#include "tomo/generate.hpp"

using namespace tomo;

namespace {

RoutingTree three_leaf_star() {
    return RoutingTree::from_edges({Edge(0, 3), Edge(3, 1), Edge(3, 2)});
}

DelayDistribution two_point_02() {
    return BoundedDiscrete{{0.5, 0.0, 0.5}, 0.0}; // values {0,2} each w.p. 1/2
}

} // namespace

TEST_CASE("central moments, uniform") {
    DelayDistribution u = BoundedUniform{1.0};
    CHECK(u.central_moment(0) == 1.0);
    CHECK(u.central_moment(1) == 0.0);
    CHECK(u.central_moment(2) == doctest::Approx(1.0 / 12).epsilon(1e-15));
    CHECK(u.central_moment(3) == 0.0);
    CHECK(u.central_moment(4) == doctest::Approx(1.0 / 80).epsilon(1e-15));
}

TEST_CASE("central moments, discrete") {
    DelayDistribution d = two_point_02();
    CHECK(d.central_moment(2) == doctest::Approx(1.0));
    CHECK(d.central_moment(3) == doctest::Approx(0.0));

    // direct finite-sum oracle: support {0,1,3}, p = (0.5,0.3,0.2), mu = 0.9
    DelayDistribution t = BoundedDiscrete{{0.5, 0.3, 0.0, 0.2}, 0.0};
    double mu = 0.9;
    double m3 = 0.5 * std::pow(0 - mu, 3) + 0.3 * std::pow(1 - mu, 3) + 0.2 * std::pow(3 - mu, 3);
    CHECK(t.mean() == doctest::Approx(mu));
    CHECK(t.central_moment(3) == doctest::Approx(m3).epsilon(1e-12));
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(DelayDistribution(BoundedUniform{-1.0}), ValidationError);
    CHECK_THROWS_AS(DelayDistribution(BoundedDiscrete{{0.5, 0.6}, 0.0}), ValidationError);
    CHECK_THROWS_AS(DelayDistribution(BoundedDiscrete{{-0.1, 1.1}, 0.0}), ValidationError);
}

TEST_CASE("model validation enforces M and f") {
    RoutingTree t = three_leaf_star();
    std::map<Edge, DelayDistribution> dists;
    for (const Edge& e : t.edges()) dists.emplace(e, DelayDistribution(BoundedUniform{1.0}));
    CHECK_NOTHROW(DelayModel(t, dists, 1.0, 0.08));
    CHECK_THROWS_AS(DelayModel(t, dists, 0.5, 0.0), ValidationError);  // support beyond M
    CHECK_THROWS_AS(DelayModel(t, dists, 1.0, 0.09), ValidationError); // variance below f
    std::map<Edge, DelayDistribution> missing(dists);
    missing.erase(missing.begin());
    CHECK_THROWS_AS(DelayModel(t, missing, 1.0, 0.0), ValidationError);
}

TEST_CASE("degenerate model reproduces exact path sums") {
    RoutingTree t = three_leaf_star();
    std::map<Edge, DelayDistribution> dists;
    dists.emplace(Edge(0, 3), DelayDistribution(BoundedDiscrete{{0, 0, 1.0}, 0.0})); // always 2
    dists.emplace(Edge(3, 1), DelayDistribution(BoundedDiscrete{{0, 1.0}, 0.0}));    // always 1
    dists.emplace(Edge(3, 2), DelayDistribution(BoundedDiscrete{{0, 0, 0, 1.0}, 0.0})); // 3
    DelayModel model(t, dists, 3.0, 0.0);
    SampleMatrix m = sample_delays(model, 5, 1);
    for (std::size_t r = 0; r < m.k; ++r) {
        CHECK(m.at(r, m.col_of(0)) == 0.0);
        CHECK(m.at(r, m.col_of(1)) == 3.0);
        CHECK(m.at(r, m.col_of(2)) == 5.0);
    }
}

TEST_CASE("seed determinism and stream independence") {
    RoutingTree t = three_leaf_star();
    DelayModel model = uniform_edge_model(t, BoundedUniform{1.0}, 1.0, 0.0);
    SampleMatrix a = sample_delays(model, 100, 42);
    SampleMatrix b = sample_delays(model, 100, 42);
    CHECK(a.values == b.values); // bitwise
    SampleMatrix c = sample_delays(model, 100, 43);
    CHECK(a.values != c.values);
    // prefix property: replica streams do not depend on k
    SampleMatrix d = sample_delays(model, 50, 42);
    for (std::size_t i = 0; i < d.values.size(); ++i) CHECK(d.values[i] == a.values[i]);
}

TEST_CASE("Monte-Carlo variance of a leaf difference") {
    RoutingTree t = three_leaf_star();
    DelayModel model = uniform_edge_model(t, BoundedUniform{1.0}, 1.0, 0.0);
    SampleMatrix m = sample_delays(model, 100000, 7);
    // Var(D_1 - D_2) = 2/12; MC error well under 0.01 at k = 1e5
    double mean = 0;
    for (std::size_t r = 0; r < m.k; ++r) mean += m.at(r, 1) - m.at(r, 2);
    mean /= static_cast<double>(m.k);
    double var = 0;
    for (std::size_t r = 0; r < m.k; ++r) {
        double d = (m.at(r, 1) - m.at(r, 2)) - mean;
        var += d * d;
    }
    var /= static_cast<double>(m.k - 1);
    CHECK(var == doctest::Approx(1.0 / 6).epsilon(0.06));
}

TEST_CASE("shift_means preserves central moments and leaf laws") {
    RoutingTree t = three_leaf_star();
    DelayModel model = uniform_edge_model(t, BoundedUniform{1.0, 0.25}, 2.0, 0.0);

    SUBCASE("zero shift is the identity") {
        DelayModel same = model.shift_means({});
        SampleMatrix a = sample_delays(model, 50, 5);
        SampleMatrix b = sample_delays(same, 50, 5);
        CHECK(a.values == b.values);
    }

    SUBCASE("central moments are translation invariant") {
        std::map<Edge, double> shifts{{Edge(0, 3), 0.5}, {Edge(3, 1), -0.25}};
        DelayModel shifted = model.shift_means(shifts);
        for (const Edge& e : t.edges())
            for (int j = 0; j <= 5; ++j)
                CHECK(shifted.dist(e).central_moment(j) ==
                      doctest::Approx(model.dist(e).central_moment(j)).epsilon(1e-12));
    }

    SUBCASE("shift outside [0, M] rejected") {
        CHECK_THROWS_AS(model.shift_means({{Edge(0, 3), 1.0}}), ValidationError);
        CHECK_THROWS_AS(model.shift_means({{Edge(0, 3), -0.5}}), ValidationError);
    }

    SUBCASE("parent/child offsetting shifts leave leaf delays unchanged") {
        // +mu on the shared edge, -mu on both child edges
        double mu = 0.2;
        std::map<Edge, double> shifts{
            {Edge(0, 3), mu}, {Edge(3, 1), -mu}, {Edge(3, 2), -mu}};
        DelayModel shifted = model.shift_means(shifts);
        SampleMatrix a = sample_delays(model, 200, 11);
        SampleMatrix b = sample_delays(shifted, 200, 11);
        for (std::size_t r = 0; r < a.k; ++r)
            for (int leaf : {1, 2})
                CHECK(b.at(r, b.col_of(leaf)) ==
                      doctest::Approx(a.at(r, a.col_of(leaf))).epsilon(1e-12));
    }
}

TEST_CASE("leaf delays are monotone in any path-edge delay") {
    RoutingTree t = three_leaf_star();
    DelayModel model = uniform_edge_model(t, BoundedUniform{1.0}, 2.0, 0.0);
    DelayModel bumped = model.shift_means({{Edge(3, 1), 0.125}});
    SampleMatrix a = sample_delays(model, 100, 3);
    SampleMatrix b = sample_delays(bumped, 100, 3);
    for (std::size_t r = 0; r < a.k; ++r) {
        CHECK(b.at(r, a.col_of(1)) == doctest::Approx(a.at(r, a.col_of(1)) + 0.125));
        CHECK(b.at(r, a.col_of(2)) == a.at(r, a.col_of(2))); // off-path leaf unaffected
    }
}

TEST_CASE("samples CSV round trip") {
    RoutingTree t = three_leaf_star();
    DelayModel model = uniform_edge_model(t, BoundedUniform{1.0}, 1.0, 0.0);
    SampleMatrix m = sample_delays(model, 25, 9);
    std::stringstream ss;
    write_samples_csv(m, ss);
    SampleMatrix back = read_samples_csv(ss);
    CHECK(back.leaf_order == m.leaf_order);
    CHECK(back.k == m.k);
    CHECK(back.values == m.values); // bitwise through max-precision text
}

TEST_CASE("k validation") {
    RoutingTree t = three_leaf_star();
    DelayModel model = uniform_edge_model(t, BoundedUniform{1.0}, 1.0, 0.0);
    CHECK_THROWS_AS(sample_delays(model, 0, 1), ValidationError);
    CHECK_THROWS_AS(sample_delays(model, 1, 1), ValidationError);
}
