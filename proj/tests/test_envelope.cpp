#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "srdf/envelope.hpp"
#include "test_util.hpp"

using namespace srdf;

namespace {

CurvePoint pt(double delta, double rate, std::int64_t witness = 0) {
    CurvePoint p;
    p.delta = delta;
    p.rate = rate;
    p.witness = witness;
    return p;
}

}  // namespace

TEST_CASE("envelope: collinear points collapse to a segment") {
    std::vector<CurvePoint> pts{pt(0.0, 1.0), pt(0.25, 0.75), pt(0.5, 0.5), pt(1.0, 0.0)};
    auto env = lower_convex_envelope(pts);
    REQUIRE(env.vertices.size() == 2);
    CHECK(env.vertices.front().delta == 0.0);
    CHECK(env.vertices.back().delta == 1.0);
    CHECK(env.eval(0.4) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("envelope: strictly convex input keeps every vertex") {
    std::vector<CurvePoint> pts;
    for (int i = 0; i <= 10; ++i) {
        const double d = i / 10.0;
        pts.push_back(pt(d, (1.0 - d) * (1.0 - d)));
    }
    auto env = lower_convex_envelope(pts);
    CHECK(env.vertices.size() == pts.size());
}

TEST_CASE("envelope: idempotent") {
    std::uint64_t st = testutil::derive(17, 1);
    std::vector<CurvePoint> pts;
    for (int i = 0; i < 40; ++i) {
        pts.push_back(pt(testutil::uniform(st), testutil::uniform(st), i));
    }
    auto env1 = lower_convex_envelope(pts);
    auto env2 = lower_convex_envelope(env1.vertices);
    REQUIRE(env1.vertices.size() == env2.vertices.size());
    for (std::size_t i = 0; i < env1.vertices.size(); ++i) {
        CHECK(env1.vertices[i].delta == env2.vertices[i].delta);
        CHECK(env1.vertices[i].rate == env2.vertices[i].rate);
    }
}

TEST_CASE("envelope: minorant property and vertex membership") {
    std::uint64_t st = testutil::derive(23, 2);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<CurvePoint> pts;
        for (int i = 0; i < 30; ++i) {
            pts.push_back(pt(testutil::uniform(st), 0.05 + testutil::uniform(st), i));
        }
        auto env = lower_convex_envelope(pts);
        int touching = 0;
        for (const auto& p : pts) {
            const double v = env.eval(p.delta);
            CHECK(v <= p.rate + 1e-12);
            if (std::abs(v - p.rate) <= 1e-12) ++touching;
        }
        CHECK(touching >= 2);
    }
}

TEST_CASE("envelope: segment mixture reproduces interior evaluations") {
    std::uint64_t st = testutil::derive(29, 3);
    std::vector<CurvePoint> pts;
    for (int i = 0; i < 25; ++i) {
        pts.push_back(pt(testutil::uniform(st), testutil::uniform(st) + 0.01, i));
    }
    auto env = lower_convex_envelope(pts);
    for (std::size_t s = 0; s + 1 < env.vertices.size(); ++s) {
        const auto& l = env.vertices[s];
        const auto& r = env.vertices[s + 1];
        for (double theta : {0.25, 0.5, 0.9}) {
            const double d = theta * l.delta + (1 - theta) * r.delta;
            const double want = theta * l.rate + (1 - theta) * r.rate;
            CHECK(env.eval(d) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("envelope: convexity of the evaluation") {
    std::uint64_t st = testutil::derive(31, 4);
    std::vector<CurvePoint> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(pt(testutil::uniform(st), testutil::uniform(st)));
    auto env = lower_convex_envelope(pts);
    const double lo = env.delta_lo(), hi = env.delta_hi();
    std::vector<double> vals;
    for (int i = 0; i <= 100; ++i) vals.push_back(env.eval(lo + (hi - lo) * i / 100.0));
    for (std::size_t i = 2; i < vals.size(); ++i) {
        CHECK(vals[i] - 2 * vals[i - 1] + vals[i - 2] >= -1e-9);
    }
}

TEST_CASE("envelope: empty input and negative rates rejected") {
    CHECK_THROWS_AS(lower_convex_envelope({}), std::invalid_argument);
    CHECK_THROWS_AS(lower_convex_envelope({pt(0.0, -0.5)}), std::invalid_argument);
}

TEST_CASE("eval: vertex hit, midpoint, flat extension, domain error") {
    auto env = lower_convex_envelope({pt(0.0, 1.0), pt(0.5, 0.25), pt(1.0, 0.0)});
    CHECK(env.eval(0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(env.eval(0.25) == doctest::Approx((1.0 + 0.25) / 2).epsilon(1e-12));
    CHECK(env.eval(2.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(env.eval(-0.1), infeasible_distortion_error);
}

TEST_CASE("pointwise_min: single curve, dominance, undefined grid") {
    auto low = lower_convex_envelope({pt(0.0, 0.5, 0), pt(1.0, 0.0, 0)});
    auto high = lower_convex_envelope({pt(0.0, 1.0, 1), pt(1.0, 0.5, 1)});

    auto single = pointwise_min({low}, {0.0, 0.5, 1.0});
    CHECK(single[1].rate == doctest::Approx(0.25).epsilon(1e-12));

    auto both = pointwise_min({high, low}, {0.0, 0.5, 1.0});
    for (const auto& p : both) CHECK(p.witness == 1);  // the dominated curve never wins

    auto late = lower_convex_envelope({pt(0.6, 0.1, 0), pt(1.0, 0.0, 0)});
    CHECK_THROWS_AS(pointwise_min({late}, std::vector<double>{0.1}), std::invalid_argument);
    // grid point before a curve's domain skips that curve only
    auto mixed = pointwise_min({late, high}, std::vector<double>{0.1, 0.8});
    CHECK(mixed[0].witness == 1);
    CHECK(mixed[1].witness == 0);
}

TEST_CASE("restrict_curve: boundary interpolation") {
    auto env = lower_convex_envelope({pt(0.0, 1.0), pt(1.0, 0.0)});
    auto cut = restrict_curve(env, 0.25, 0.75);
    REQUIRE(cut.vertices.size() == 2);
    CHECK(cut.vertices.front().delta == doctest::Approx(0.25));
    CHECK(cut.vertices.front().rate == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(cut.vertices.back().delta == doctest::Approx(0.75));
}
