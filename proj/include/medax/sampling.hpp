#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "medax/ball.hpp"
#include "medax/point.hpp"
#include "medax/rng.hpp"

namespace medax {

enum class SampleStrategy {
    UniformBall,     // i.i.d. uniform in the closed ball (polar sampling)
    LowDiscrepancy,  // Halton sequence, rejected into the ball
    BoundaryMix,     // 20% on the sphere, 80% uniform interior
};

inline const char* to_string(SampleStrategy s) {
    switch (s) {
        case SampleStrategy::UniformBall: return "uniform-ball";
        case SampleStrategy::LowDiscrepancy: return "low-discrepancy";
        case SampleStrategy::BoundaryMix: return "boundary-mix";
    }
    return "unknown";
}

inline SampleStrategy sample_strategy_from_string(const std::string& s) {
    if (s == "uniform-ball") return SampleStrategy::UniformBall;
    if (s == "low-discrepancy") return SampleStrategy::LowDiscrepancy;
    if (s == "boundary-mix") return SampleStrategy::BoundaryMix;
    throw std::invalid_argument("unknown sample strategy: " + s);
}

struct SamplePlan {
    SampleStrategy strategy = SampleStrategy::BoundaryMix;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Default fitting plan: n = max(500, 50k) with a 20% boundary share. The
/// boundary points matter because the gradient-norm argument evaluates the
/// fitted map at x + r*v.
inline SamplePlan default_plan(std::size_t k, std::uint64_t seed) {
    return {SampleStrategy::BoundaryMix, std::max<std::size_t>(500, 50 * k), seed};
}

/// Dense plan used by consistency verification runs (n >= 2000).
inline SamplePlan dense_plan(std::size_t k, std::uint64_t seed) {
    return {SampleStrategy::BoundaryMix, std::max<std::size_t>(2000, 50 * k), seed};
}

namespace detail {

inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

inline constexpr std::uint64_t kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

}  // namespace detail

/// Deterministic sample of plan.n points inside the closed ball.
/// UniformBall and LowDiscrepancy draw sequentially, so a longer sample of
/// the same plan extends a shorter one point for point.
inline std::vector<Point> sample_ball(const Ball& ball, const SamplePlan& plan) {
    const std::size_t k = ball.dim();
    if (plan.n < k + 2) {
        throw std::invalid_argument("sample_ball: need at least k+2 samples");
    }
    std::vector<Point> out;
    out.reserve(plan.n);
    Rng rng(plan.seed);

    const auto place = [&](const Point& unit) {
        std::vector<double> c(k);
        for (std::size_t t = 0; t < k; ++t) c[t] = ball.center[t] + ball.radius * unit[t];
        out.push_back(Point(std::move(c)));
    };

    switch (plan.strategy) {
        case SampleStrategy::UniformBall: {
            for (std::size_t i = 0; i < plan.n; ++i) place(rng.in_unit_ball(k));
            break;
        }
        case SampleStrategy::LowDiscrepancy: {
            if (k > std::size(detail::kHaltonBases)) {
                throw std::invalid_argument("sample_ball: low-discrepancy supports k <= 10");
            }
            std::uint64_t idx = 1;
            while (out.size() < plan.n) {
                std::vector<double> u(k);
                double s = 0.0;
                for (std::size_t t = 0; t < k; ++t) {
                    u[t] = 2.0 * detail::halton(idx, detail::kHaltonBases[t]) - 1.0;
                    s += u[t] * u[t];
                }
                ++idx;
                if (s <= 1.0) place(Point(std::move(u)));
            }
            break;
        }
        case SampleStrategy::BoundaryMix: {
            const std::size_t n_boundary = plan.n / 5;
            for (std::size_t i = 0; i < n_boundary; ++i) place(rng.on_unit_sphere(k));
            for (std::size_t i = n_boundary; i < plan.n; ++i) place(rng.in_unit_ball(k));
            break;
        }
    }
    return out;
}

}  // namespace medax
