#include <doctest.h>

#include <cmath>
#include <fstream>

#include "support.hpp"

using namespace metricgeo;

TEST_CASE("catalog evaluation") {
    CHECK(TransformSpec(Dilation{2.0})(3.0) == 6.0);
    CHECK(TransformSpec(Snowflake{0.5})(9.0) == doctest::Approx(3.0));
    CHECK(TransformSpec(LogOnePlus{1.0})(1.0) == doctest::Approx(std::log(2.0)));
    CHECK(TransformSpec(LogOnePlus{3.0})(6.0) == doctest::Approx(3.0 * std::log(3.0)));
    CHECK(TransformSpec(AffineSine{2.0, 1.0})(M_PI_2) == doctest::Approx(2.0 * M_PI_2 + 1.0));
    CHECK(TransformSpec(AffineSine{2.0, 1.0})(M_PI) == doctest::Approx(2.0 * M_PI));
    CHECK(TransformSpec(LinearPlusCap{2.0, 1.0, 5.0})(3.0) == doctest::Approx(9.0));
    CHECK(TransformSpec(LinearPlusCap{2.0, 1.0, 5.0})(8.0) == doctest::Approx(21.0));
    for (const char* spec : {"dilation:1", "snowflake:0.7", "log1p:2", "affinesine:3,1"})
        CHECK(TransformSpec::parse(spec)(0.0) == 0.0);
    CHECK_THROWS_AS(TransformSpec(Dilation{1.0})(-1.0), InvalidRange);
}

TEST_CASE("tabulated transform interpolates and extrapolates") {
    Tabulated tab;
    tab.knots = {0.0, 1.0, 3.0};
    tab.values = {0.0, 2.0, 3.0};
    tab.tail_slope = 0.25;
    TransformSpec phi(tab);
    CHECK(phi(0.5) == doctest::Approx(1.0));
    CHECK(phi(1.0) == doctest::Approx(2.0));
    CHECK(phi(2.0) == doctest::Approx(2.5));
    CHECK(phi(5.0) == doctest::Approx(3.0 + 0.25 * 2.0));
    CHECK(phi.concave());
    CHECK(phi.known_metric_transform());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(TransformSpec(Dilation{0.0}), InvalidRange);
    CHECK_THROWS_AS(TransformSpec(Dilation{-1.0}), InvalidRange);
    CHECK_THROWS_AS(TransformSpec(Snowflake{0.0}), InvalidRange);
    CHECK_THROWS_AS(TransformSpec(Snowflake{1.5}), InvalidRange);
    CHECK_THROWS_AS(TransformSpec(LogOnePlus{0.0}), InvalidRange);
    CHECK_THROWS_AS(TransformSpec(AffineSine{-1.0, 1.0}), InvalidRange);
    CHECK_THROWS_AS(TransformSpec(LinearPlusCap{0.0, 1.0, 5.0}), InvalidRange);
    Tabulated bad;
    bad.knots = {0.0, 1.0};
    bad.values = {0.5, 1.0};  // value(0) != 0
    CHECK_THROWS_AS(TransformSpec{bad}, InvalidRange);
    Tabulated unsorted;
    unsorted.knots = {0.0, 2.0, 1.0};
    unsorted.values = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(TransformSpec{unsorted}, InvalidRange);
}

TEST_CASE("text grammar parses and rejects") {
    CHECK(std::get<Dilation>(TransformSpec::parse("dilation:2").node()).lambda == 2.0);
    CHECK(std::get<Snowflake>(TransformSpec::parse("snowflake:0.5").node()).alpha == 0.5);
    CHECK(std::get<LogOnePlus>(TransformSpec::parse("log1p:1.0").node()).scale == 1.0);
    const auto& as = std::get<AffineSine>(TransformSpec::parse("affinesine:2,1").node());
    CHECK(as.a == 2.0);
    CHECK(as.b == 1.0);
    const auto& lc = std::get<LinearPlusCap>(TransformSpec::parse("lincap:2,1,5").node());
    CHECK(lc.lambda == 2.0);
    CHECK(lc.beta == 1.0);
    CHECK(lc.cap == 5.0);
    CHECK_THROWS_AS(TransformSpec::parse("nosuch:1"), InvalidRange);
    CHECK_THROWS_AS(TransformSpec::parse("dilation"), InvalidRange);
    CHECK_THROWS_AS(TransformSpec::parse("dilation:abc"), InvalidRange);
    CHECK_THROWS_AS(TransformSpec::parse("affinesine:1"), InvalidRange);
    CHECK_THROWS_AS(TransformSpec::parse("tab:nofile"), InvalidRange);
}

TEST_CASE("tab:@file round-trips through the knot CSV loader") {
    const char* path = "knots_test.csv";
    {
        std::ofstream os(path);
        os << "t,phi\n0,0\n1,1.5\n2,2\n";
    }
    const auto phi = TransformSpec::parse(std::string("tab:@") + path);
    CHECK(phi(0.5) == doctest::Approx(0.75));
    CHECK(phi(1.5) == doctest::Approx(1.75));
    CHECK(phi(4.0) == doctest::Approx(2.0 + 0.5 * 2.0));  // tail slope from last segment
    std::remove(path);
}

TEST_CASE("grid points") {
    const auto u = GridSpec::uniform(10.0, 5).points();
    CHECK(u == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
    const auto g = GridSpec::geometric(1.0, 100.0, 4).points();
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == doctest::Approx(1.0));
    CHECK(g[2] == doctest::Approx(10.0));
    CHECK(g[3] == 100.0);  // endpoint exact
    CHECK_THROWS_AS(GridSpec::uniform(-1.0, 5).points(), InvalidRange);
    CHECK_THROWS_AS(GridSpec::geometric(0.0, 10.0, 5).points(), InvalidRange);
    CHECK_THROWS_AS(GridSpec::uniform(1.0, 1).points(), InvalidRange);
}

TEST_CASE("apply_transform keeps concave transforms metric") {
    const auto X = support::euclidean_cloud(10, 3, 11);
    for (const char* spec : {"snowflake:0.5", "log1p:1", "dilation:3", "lincap:2,1,5"}) {
        const auto Y = apply_transform(X, TransformSpec::parse(spec));
        CHECK(Y.size() == X.size());
        CHECK(triangle_defect(Y.table(), Y.size()).defect <= Y.triangle_tolerance());
    }
}

TEST_CASE("apply_transform rejects a non-transform with a witness") {
    // affinesine with a < b is not subadditive; collinear samples cannot expose
    // this, but the triple (pi, 2pi, 5pi/2) does:
    // phi(5pi/2) = 5pi/2 + 2 > 3pi = phi(pi) + phi(2pi)
    std::vector<double> t = {0.0, M_PI, 2.5 * M_PI,
                             M_PI, 0.0, 2.0 * M_PI,
                             2.5 * M_PI, 2.0 * M_PI, 0.0};
    const FiniteMetricSpace X(3, std::move(t));
    const auto phi = TransformSpec::parse("affinesine:1,2");
    CHECK_FALSE(phi.known_metric_transform());
    try {
        apply_transform(X, phi);
        FAIL("expected TransformNotMetricError");
    } catch (const TransformNotMetricError& e) {
        CHECK(e.violation > 0.1);
        CHECK(e.witness[0] != e.witness[2]);
    }
}

TEST_CASE("subadditivity defect") {
    const auto grid = GridSpec::uniform(10.0, 101);
    CHECK(subadditivity_defect(TransformSpec::parse("log1p:1"), grid).defect == 0.0);
    CHECK(subadditivity_defect(TransformSpec::parse("snowflake:0.5"), grid).defect == 0.0);
    Tabulated convex;
    convex.knots = {0.0, 1.0, 2.0};
    convex.values = {0.0, 1.0, 4.0};
    convex.tail_slope = 3.0;
    const auto d = subadditivity_defect(TransformSpec(convex), grid);
    CHECK(d.defect > 1.0);  // phi(2) = 4 > 2 phi(1)
    // witness reproduces the violation
    const TransformSpec phi(convex);
    CHECK(phi(d.witness.first + d.witness.second) - phi(d.witness.first) - phi(d.witness.second)
          == doctest::Approx(d.defect));
}

TEST_CASE("nondecreasing defect eta-hat") {
    const auto grid = GridSpec::uniform(20.0, 2001);
    CHECK(nondecreasing_defect(TransformSpec::parse("log1p:1"), grid).defect == 0.0);
    // a = 0.5 < b = 1: phi dips after each peak of |sin|; compare against a
    // plain quadratic-scan oracle
    const auto phi = TransformSpec::parse("affinesine:0.5,1");
    const auto d = nondecreasing_defect(phi, grid);
    const auto pts = grid.points();
    double oracle = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            oracle = std::max(oracle, phi(pts[i]) - phi(pts[j]));
    CHECK(d.defect == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(d.defect > 0.1);
    CHECK(d.witness.first < d.witness.second);
    CHECK(phi(d.witness.first) - phi(d.witness.second) == doctest::Approx(d.defect));
}

TEST_CASE("triplet preservation sampling") {
    CHECK(triplet_preservation_check(TransformSpec::parse("log1p:1"), 20000, 1).violation
          == 0.0);
    CHECK(triplet_preservation_check(TransformSpec::parse("snowflake:0.5"), 20000, 1).violation
          == 0.0);
    const auto bad = triplet_preservation_check(TransformSpec::parse("affinesine:1,2"), 20000, 1);
    CHECK(bad.violation > 0.0);
    // witness is a genuine triangle triplet whose image violates the inequality
    CHECK(is_triangle_triplet(bad.witness[0], bad.witness[1], bad.witness[2]));
    // deterministic in the seed
    const auto again = triplet_preservation_check(TransformSpec::parse("affinesine:1,2"), 20000, 1);
    CHECK(again.violation == bad.violation);
    CHECK(again.witness == bad.witness);
}

TEST_CASE("scaled transform") {
    const auto phi = TransformSpec::scaled(3.0, TransformSpec::parse("log1p:1"));
    CHECK(phi(1.0) == doctest::Approx(3.0 * std::log(2.0)));
    CHECK(phi.concave());
    CHECK_THROWS_AS(TransformSpec::scaled(0.0, TransformSpec::parse("log1p:1")), InvalidRange);
}
