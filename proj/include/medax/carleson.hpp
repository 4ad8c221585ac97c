#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "medax/ball.hpp"
#include "medax/point.hpp"
#include "medax/rng.hpp"

namespace medax {

/// Log-uniform discretization of the scale integral d(r)/r over (L*2^-J, L]:
/// octaves J, per_octave m, evaluation radii at the log-midpoints
/// r_j = L * 2^{-(j-1/2)/m}, j = 1..J*m, each carrying weight ln(2)/m.
struct ScaleGrid {
    double top = 0.0;
    std::size_t octaves = 12;
    std::size_t per_octave = 4;

    ScaleGrid() = default;

    ScaleGrid(double top_, std::size_t octaves_, std::size_t per_octave_)
        : top(top_), octaves(octaves_), per_octave(per_octave_) {
        if (!(top > 0.0) || octaves * per_octave < 1) {
            throw std::invalid_argument("ScaleGrid: need top > 0 and octaves*per_octave >= 1");
        }
    }

    std::size_t size() const { return octaves * per_octave; }

    double log_step() const { return M_LN2 / static_cast<double>(per_octave); }

    double radius(std::size_t j) const {  // j = 1..size()
        const double e = (static_cast<double>(j) - 0.5) / static_cast<double>(per_octave);
        return top * std::exp2(-e);
    }

    std::vector<double> radii() const {
        std::vector<double> out(size());
        for (std::size_t j = 1; j <= size(); ++j) out[j - 1] = radius(j);
        return out;
    }

    double min_radius() const { return top * std::exp2(-static_cast<double>(octaves)); }
};

struct SliceEstimate {
    double radius = 0.0;
    double fraction = 0.0;   // estimated |D_r cap B| / |B|
    double std_error = 0.0;  // sqrt(p(1-p)/n)
};

/// Monte Carlo estimate of the fraction of the ball where oracle(x, r) holds.
template <typename Oracle>
SliceEstimate slice_measure(Oracle&& oracle, double r, const Ball& ball, std::size_t n,
                            std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("slice_measure: need n >= 1");
    }
    const std::size_t k = ball.dim();
    Rng rng(seed);
    std::size_t hits = 0;
    std::vector<double> c(k);
    for (std::size_t i = 0; i < n; ++i) {
        const Point u = rng.in_unit_ball(k);
        for (std::size_t t = 0; t < k; ++t) c[t] = ball.center[t] + ball.radius * u[t];
        if (oracle(Point(c), r)) ++hits;
    }
    SliceEstimate est;
    est.radius = r;
    est.fraction = static_cast<double>(hits) / static_cast<double>(n);
    est.std_error = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(n));
    return est;
}

/// One ball's scale integral, already normalized by |B|: the per-ball
/// Carleson quantity is sum_j fraction(r_j) * ln(2)/m. The integral is
/// truncated below min_radius; per-octave partial sums expose the tail
/// trend instead of hiding the truncation.
struct CarlesonEstimate {
    Ball ball;
    ScaleGrid grid;
    std::vector<SliceEstimate> slices;
    std::vector<double> octave_sums;
    double integral = 0.0;
    double constant = 0.0;  // equals integral (normalization by |B| is built in)
    double truncated_below = 0.0;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 0;
};

template <typename Oracle>
CarlesonEstimate carleson_integral(Oracle&& oracle, const Ball& ball, const ScaleGrid& grid,
                                   std::size_t n, std::uint64_t seed) {
    if (grid.top != ball.radius) {
        throw std::invalid_argument(
            "carleson_integral: grid top scale must equal the ball radius");
    }
    CarlesonEstimate est;
    est.ball = ball;
    est.grid = grid;
    est.mc_samples = n;
    est.seed = seed;
    est.truncated_below = grid.min_radius();
    est.octave_sums.assign(grid.octaves, 0.0);
    est.slices.reserve(grid.size());

    const double w = grid.log_step();
    double total = 0.0;
    for (std::size_t j = 1; j <= grid.size(); ++j) {
        // Per-slice substream: identical points for any oracle sharing the seed.
        const SliceEstimate s =
            slice_measure(oracle, grid.radius(j), ball, n, derive_seed(seed, j));
        total += s.fraction * w;
        est.octave_sums[(j - 1) / grid.per_octave] += s.fraction * w;
        est.slices.push_back(s);
    }
    est.integral = total;
    est.constant = total;
    return est;
}

/// Sup of per-ball estimates over a finite ball family. This is a lower
/// bound for the true Carleson constant, which quantifies over all balls.
struct ConstantEstimate {
    std::vector<CarlesonEstimate> per_ball;
    double sup = 0.0;
    bool lower_bound_only = true;
};

template <typename Oracle>
ConstantEstimate estimate_constant(Oracle&& oracle, std::span<const Ball> balls,
                                   std::size_t octaves, std::size_t per_octave,
                                   std::size_t n, std::uint64_t seed) {
    if (balls.empty()) {
        throw std::invalid_argument("estimate_constant: ball family must be nonempty");
    }
    ConstantEstimate out;
    out.per_ball.reserve(balls.size());
    for (std::size_t b = 0; b < balls.size(); ++b) {
        const ScaleGrid grid(balls[b].radius, octaves, per_octave);
        out.per_ball.push_back(
            carleson_integral(oracle, balls[b], grid, n, derive_seed(seed, b)));
        out.sup = std::max(out.sup, out.per_ball.back().constant);
    }
    return out;
}

}  // namespace medax
