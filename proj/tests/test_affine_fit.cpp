#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "medax/affine_fit.hpp"
#include "medax/ball.hpp"
#include "medax/rng.hpp"
#include "medax/sampling.hpp"
#include "oracles.hpp"

using medax::Ball;
using medax::Point;
using medax::SamplePlan;
using medax::SampleStrategy;

namespace {

std::vector<double> evaluate(const std::vector<Point>& pts, double (*f)(const Point&)) {
    std::vector<double> vs;
    vs.reserve(pts.size());
    for (const Point& p : pts) vs.push_back(f(p));
    return vs;
}

std::vector<Point> grid_1d(double lo, double hi, std::size_t n) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(Point{lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(n - 1)});
    }
    return pts;
}

}  // namespace

TEST_CASE("an affine function is recovered with zero residual") {
    const auto pts = medax::sample_ball(Ball(Point{0.5, -1.0}, 2.0),
                                        {SampleStrategy::UniformBall, 40, 11});
    const auto vs = evaluate(pts, [](const Point& p) { return 2.0 * p[0] - 3.0; });
    const auto fit = medax::chebyshev_affine_fit(pts, vs);
    CHECK(fit.residual <= 1e-10);
    CHECK(fit.map.coeffs[0] == Catch::Approx(2.0).margin(1e-8));
    CHECK(fit.map.coeffs[1] == Catch::Approx(0.0).margin(1e-8));
    CHECK(fit.map.offset == Catch::Approx(-3.0).margin(1e-8));
}

TEST_CASE("|t| on a dense grid fits to the classical half-residual") {
    const auto pts = grid_1d(-1.0, 1.0, 401);
    const auto vs = evaluate(pts, [](const Point& p) { return std::abs(p[0]); });
    const auto fit = medax::chebyshev_affine_fit(pts, vs);
    CHECK(fit.residual == Catch::Approx(0.5).margin(0.01));
    CHECK(fit.map.coeffs[0] == Catch::Approx(0.0).margin(0.02));
    CHECK(fit.map.offset == Catch::Approx(0.5).margin(0.01));

    // Independent dense grid search over (slope, offset).
    std::vector<double> ts, raw;
    for (const Point& p : pts) ts.push_back(p[0]);
    raw = vs;
    const auto grid = oracles::grid_fit_1d(ts, raw, -1.0, 1.0, -0.5, 1.5, 400);
    CHECK(fit.residual <= grid.residual + 1e-9);
    CHECK(grid.residual == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("random candidates never beat the LP") {
    medax::Rng rng(2028);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + rng.uniform_index(3);
        const Ball ball(oracles::random_point(k, 1.0, rng), rng.uniform(0.3, 2.0));
        const auto pts =
            medax::sample_ball(ball, {SampleStrategy::UniformBall, 60, 400u + trial});
        // A kinked 1-Lipschitz-ish surface.
        std::vector<double> vs;
        for (const Point& p : pts) {
            vs.push_back(std::abs(p[0]) + 0.3 * medax::norm(p));
        }
        const auto fit = medax::chebyshev_affine_fit(pts, vs);
        REQUIRE(std::abs(fit.residual - medax::max_abs_deviation(fit.map, pts, vs)) <=
                1e-12);

        for (int cand = 0; cand < 100; ++cand) {
            medax::AffineMap probe;
            probe.coeffs.resize(k);
            // Half the candidates perturb the optimum, half roam free.
            if (cand % 2 == 0) {
                for (std::size_t t = 0; t < k; ++t) {
                    probe.coeffs[t] = fit.map.coeffs[t] + rng.uniform(-0.05, 0.05);
                }
                probe.offset = fit.map.offset + rng.uniform(-0.05, 0.05);
            } else {
                for (std::size_t t = 0; t < k; ++t) probe.coeffs[t] = rng.uniform(-2.0, 2.0);
                probe.offset = rng.uniform(-2.0, 2.0);
            }
            REQUIRE(medax::max_abs_deviation(probe, pts, vs) >= fit.residual - 1e-9);
        }
    }
}

TEST_CASE("stored residual equals the recomputed deviation") {
    medax::Rng rng(52);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 1 + rng.uniform_index(4);
        const auto pts = medax::sample_ball(Ball(oracles::random_point(k, 2.0, rng), 1.0),
                                            {SampleStrategy::BoundaryMix, 50, 77u + trial});
        std::vector<double> vs;
        for (const Point& p : pts) vs.push_back(std::sin(3.0 * p[0]));
        const auto fit = medax::chebyshev_affine_fit(pts, vs);
        REQUIRE(std::abs(fit.residual - medax::max_abs_deviation(fit.map, pts, vs)) <= 1e-12);
    }
}

TEST_CASE("residual grows under sample refinement") {
    const Ball ball(Point{0.2, 0.1}, 1.0);
    const auto f = [](const Point& p) { return std::abs(p[0]) - 0.5 * p[1]; };
    double prev = -1.0;
    for (const std::size_t n : {std::size_t{8}, std::size_t{32}, std::size_t{128},
                                std::size_t{512}}) {
        const auto pts = medax::sample_ball(ball, {SampleStrategy::UniformBall, n, 5});
        std::vector<double> vs;
        for (const Point& p : pts) vs.push_back(f(p));
        const auto fit = medax::chebyshev_affine_fit(pts, vs);
        REQUIRE(fit.residual >= prev - 1e-12);  // nested samples, see sampling tests
        prev = fit.residual;
    }
}

TEST_CASE("rigid motions leave the residual unchanged; scaling scales it") {
    medax::Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + rng.uniform_index(2);
        const auto pts = medax::sample_ball(Ball(oracles::random_point(k, 1.0, rng), 1.0),
                                            {SampleStrategy::UniformBall, 40, 600u + trial});
        std::vector<double> vs;
        for (const Point& p : pts) vs.push_back(std::abs(p[0]) + 0.2 * p[k - 1]);
        const double base = medax::chebyshev_affine_fit(pts, vs).residual;

        const auto rot = oracles::random_rotation(k, rng);
        const Point shift = oracles::random_point(k, 2.0, rng);
        std::vector<Point> moved;
        for (const Point& p : pts) moved.push_back(oracles::rotate(rot, p) + shift);
        const double same = medax::chebyshev_affine_fit(moved, vs).residual;
        CHECK(same == Catch::Approx(base).margin(1e-9));

        const double s = 4.0;  // power of two
        std::vector<Point> scaled;
        std::vector<double> scaled_vs;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            scaled.push_back(pts[i] * s);
            scaled_vs.push_back(vs[i] * s);
        }
        const double scaled_res = medax::chebyshev_affine_fit(scaled, scaled_vs).residual;
        CHECK(scaled_res == Catch::Approx(base * s).margin(1e-9 * s));
    }
}

TEST_CASE("affinely dependent samples get zero coefficients off their span") {
    // All samples on the x-axis in k=2.
    std::vector<Point> pts;
    std::vector<double> vs;
    for (int i = 0; i <= 20; ++i) {
        const double t = -1.0 + 0.1 * i;
        pts.push_back(Point{t, 0.0});
        vs.push_back(3.0 * t + 1.0);
    }
    const auto fit = medax::chebyshev_affine_fit(pts, vs);
    CHECK(fit.residual <= 1e-10);
    CHECK(fit.map.coeffs[0] == Catch::Approx(3.0).margin(1e-8));
    CHECK(fit.map.coeffs[1] == 0.0);  // exact zero by construction
}

TEST_CASE("coincident samples fit the midrange constant") {
    std::vector<Point> pts(5, Point{1.0, 2.0});
    const std::vector<double> vs{0.0, 4.0, 1.0, 2.0, 3.0};
    const auto fit = medax::chebyshev_affine_fit(pts, vs);
    CHECK(fit.map.coeffs[0] == 0.0);
    CHECK(fit.map.coeffs[1] == 0.0);
    CHECK(fit.map.offset == 2.0);
    CHECK(fit.residual == 2.0);
}

TEST_CASE("input validation") {
    const std::vector<Point> pts{Point{0.0}, Point{1.0}, Point{2.0}};
    const std::vector<double> vs{0.0, 1.0, 2.0};
    CHECK_NOTHROW(medax::chebyshev_affine_fit(pts, vs));  // n = k+2 exactly
    CHECK_THROWS_AS(
        medax::chebyshev_affine_fit(std::vector<Point>{Point{0.0}, Point{1.0}},
                                    std::vector<double>{0.0, 1.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(medax::chebyshev_affine_fit(pts, std::vector<double>{0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        medax::chebyshev_affine_fit(pts, std::vector<double>{0.0, 1.0, std::nan("")}),
        std::invalid_argument);
}

TEST_CASE("equioscillation: at least k+2 samples attain the residual") {
    const auto pts = grid_1d(-1.0, 1.0, 201);
    const auto vs = evaluate(pts, [](const Point& p) { return p[0] * p[0]; });
    const auto fit = medax::chebyshev_affine_fit(pts, vs);
    // x^2 on [-1,1]: best affine is the constant 1/2, residual 1/2 at x=-1,0,1.
    CHECK(fit.residual == Catch::Approx(0.5).margin(1e-3));
    std::size_t attained = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(vs[i] - fit.map(pts[i])) >= fit.residual - 1e-9) ++attained;
    }
    CHECK(attained >= 3);
}
