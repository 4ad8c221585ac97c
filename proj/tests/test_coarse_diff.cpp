#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "medax/coarse_diff.hpp"
#include "medax/rng.hpp"
#include "medax/site_set.hpp"
#include "oracles.hpp"

using medax::Ball;
using medax::Point;
using medax::SamplePlan;
using medax::SampleStrategy;
using medax::SiteSet;

TEST_CASE("distance to a far site is coarsely differentiable") {
    const SiteSet sites({Point{10.0, 0.0}});
    const Ball ball(Point{0.0, 0.0}, 1.0);
    const auto f = [&](const Point& p) { return sites.nearest(p).distance; };
    const auto cert =
        medax::coarse_diff_test(f, ball, 0.1, {SampleStrategy::UniformBall, 2000, 3});
    CHECK(cert.passed);
    CHECK(cert.sampled_residual() <= 0.1 * ball.radius);
    // Curvature of the distance sphere at range ~10 keeps the residual near
    // r^2 / (2 * 10) = 0.05; allow sampling wiggle.
    CHECK(cert.fit.residual <= 0.06);
    // The fitted map points back along the ray to the site.
    CHECK(cert.fit.map.coeffs[0] == Catch::Approx(-1.0).margin(0.05));
    CHECK(cert.fit.map.coeffs[1] == Catch::Approx(0.0).margin(0.05));
}

TEST_CASE("distance near a two-point bisector fails the test") {
    const SiteSet sites({Point{-1.0, 0.0}, Point{1.0, 0.0}});
    const Ball ball(Point{0.0, 0.0}, 0.5);
    const auto f = [&](const Point& p) { return sites.nearest(p).distance; };
    const auto cert =
        medax::coarse_diff_test(f, ball, 0.1, {SampleStrategy::UniformBall, 2000, 3});
    CHECK_FALSE(cert.passed);
    CHECK(cert.fit.residual > 0.1 * ball.radius);

    // Cross-check the residual against a dense 1-d fit of the tent profile:
    // on the x-axis f(x) = 1 - |x|, so any affine map deviates by at least
    // the 1-d tent residual r/2 ~ 0.25 minus curvature in y.
    std::vector<double> xs, vals;
    for (int i = -100; i <= 100; ++i) {
        const double x = 0.005 * i;
        xs.push_back(x);
        vals.push_back(sites.nearest(Point{x, 0.0}).distance);
    }
    const auto grid = oracles::grid_fit_1d(xs, vals, -1.5, 1.5, 0.0, 2.0, 300);
    CHECK(grid.residual == Catch::Approx(0.25).margin(0.01));
    CHECK(cert.fit.residual >= 0.15);
}

TEST_CASE("an affine function passes at eps = 0") {
    const Ball ball(Point{1.0, 2.0, 3.0}, 1.5);
    const auto f = [](const Point& p) { return 0.25 * p[0] - 0.5 * p[2] + 7.0; };
    const auto cert =
        medax::coarse_diff_test(f, ball, 0.0, {SampleStrategy::BoundaryMix, 500, 9});
    CHECK(cert.passed);
    CHECK(cert.fit.residual <= 1e-9);
}

TEST_CASE("negative eps is rejected") {
    const Ball ball(Point{0.0}, 1.0);
    const auto f = [](const Point& p) { return p[0]; };
    CHECK_THROWS_AS(
        medax::coarse_diff_test(f, ball, -0.1, {SampleStrategy::UniformBall, 100, 1}),
        std::invalid_argument);
}

TEST_CASE("certificate reproduces its sample plan") {
    const Ball ball(Point{0.0, 0.0}, 1.0);
    const auto f = [](const Point& p) { return std::abs(p[0]); };
    const SamplePlan plan{SampleStrategy::LowDiscrepancy, 321, 17};
    const auto cert = medax::coarse_diff_test(f, ball, 0.1, plan);
    CHECK(cert.fit.n_samples == 321);
    CHECK(cert.fit.strategy == "low-discrepancy");
    CHECK(cert.fit.seed == 17);
    CHECK(cert.eps == 0.1);
    CHECK(cert.ball.center == ball.center);
    CHECK(cert.ball.radius == ball.radius);

    // Replaying the embedded plan gives the identical residual.
    const auto replay = medax::coarse_diff_test(
        f, cert.ball, cert.eps,
        {medax::sample_strategy_from_string(cert.fit.strategy), cert.fit.n_samples,
         cert.fit.seed});
    CHECK(replay.fit.residual == cert.fit.residual);
}

TEST_CASE("failure is monotone in the sample: more points cannot hide a kink") {
    const SiteSet sites({Point{-1.0, 0.0}, Point{1.0, 0.0}});
    const auto f = [&](const Point& p) { return sites.nearest(p).distance; };
    const Ball ball(Point{0.0, 0.0}, 0.5);
    double prev = 0.0;
    for (const std::size_t n : {std::size_t{50}, std::size_t{200}, std::size_t{800}}) {
        const auto cert =
            medax::coarse_diff_test(f, ball, 0.1, {SampleStrategy::UniformBall, n, 5});
        REQUIRE(cert.fit.residual >= prev - 1e-12);
        prev = cert.fit.residual;
    }
    CHECK(prev > 0.05);
}

TEST_CASE("gradient norm of a coordinate fit is one") {
    const Ball ball(Point{0.0, 0.0}, 1.0);
    const auto f = [](const Point& p) { return p[0]; };
    const auto cert =
        medax::coarse_diff_test(f, ball, 0.0, {SampleStrategy::UniformBall, 200, 4});
    const auto check = medax::gradient_norm_check(cert.fit, ball);
    CHECK(check.norm == Catch::Approx(1.0).margin(1e-8));
    CHECK(check.ok);
}

TEST_CASE("gradient norm of a constant fit is zero") {
    const Ball ball(Point{0.0, 0.0}, 1.0);
    const auto f = [](const Point&) { return 42.0; };
    const auto cert =
        medax::coarse_diff_test(f, ball, 0.0, {SampleStrategy::UniformBall, 200, 4});
    const auto check = medax::gradient_norm_check(cert.fit, ball);
    CHECK(check.norm == Catch::Approx(0.0).margin(1e-10));
    CHECK(check.ok);
}

TEST_CASE("distance-function fits stay within the Lipschitz gradient bound") {
    medax::Rng rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + rng.uniform_index(3);
        const SiteSet sites(oracles::random_sites(1 + rng.uniform_index(6), k, 2.0, rng));
        const Point center = oracles::random_point(k, 1.5, rng);
        const double d = sites.nearest(center).distance;
        const Ball ball(center, d > 0.0 ? rng.uniform(0.1, 1.0) * d
                                        : rng.uniform(0.1, 0.5));
        const auto f = [&](const Point& p) { return sites.nearest(p).distance; };
        const auto cert = medax::coarse_diff_test(
            f, ball, 0.1, {SampleStrategy::UniformBall, 300, 1000u + trial});
        const auto check = medax::gradient_norm_check(cert.fit, ball);
        REQUIRE(check.ok);
        REQUIRE(check.bound == 1.0 + 2.0 * (cert.fit.residual / ball.radius) + 0.05);
    }
}

TEST_CASE("pass threshold scales with the ball radius") {
    // Same kinked function, same eps: the small ball fails, a ball scaled by
    // a power of two together with its sample keeps the relative verdict.
    const SiteSet sites({Point{-1.0, 0.0}, Point{1.0, 0.0}});
    const auto f = [&](const Point& p) { return sites.nearest(p).distance; };
    const auto small =
        medax::coarse_diff_test(f, Ball(Point{0.0, 0.0}, 0.25), 0.1,
                                {SampleStrategy::UniformBall, 1000, 8});
    CHECK_FALSE(small.passed);

    const SiteSet big_sites({Point{-4.0, 0.0}, Point{4.0, 0.0}});
    const auto g = [&](const Point& p) { return big_sites.nearest(p).distance; };
    const auto big = medax::coarse_diff_test(g, Ball(Point{0.0, 0.0}, 1.0), 0.1,
                                             {SampleStrategy::UniformBall, 1000, 8});
    CHECK_FALSE(big.passed);
    CHECK(big.fit.residual == Catch::Approx(4.0 * small.fit.residual).margin(1e-9));
}
