#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "medax/point.hpp"
#include "medax/simplex.hpp"

namespace medax {

/// lambda(p) = coeffs . p + offset
struct AffineMap {
    std::vector<double> coeffs;
    double offset = 0.0;

    double operator()(const Point& p) const {
        if (p.dim() != coeffs.size()) {
            throw std::invalid_argument("AffineMap: dimension mismatch");
        }
        double s = offset;
        for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * p[i];
        return s;
    }

    double gradient_norm() const {
        double s = 0.0;
        for (double c : coeffs) s += c * c;
        return std::sqrt(s);
    }
};

struct FitResult {
    AffineMap map;
    double residual = 0.0;  // max |value_i - map(sample_i)| over the fitted samples
    std::size_t n_samples = 0;
    std::string strategy = "explicit";
    std::uint64_t seed = 0;
};

inline double max_abs_deviation(const AffineMap& map, std::span<const Point> samples,
                                std::span<const double> values) {
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        worst = std::max(worst, std::abs(values[i] - map(samples[i])));
    }
    return worst;
}

/// Residuals below this (relative to the value scale) are rounding noise from
/// evaluating the input function, not structure; they snap to exactly zero so
/// affine data certifies at eps = 0.
inline constexpr double kZeroResidualTol = 1e-13;

/// Best affine map under the sup norm on the given samples, computed as a
/// linear program on the dual (columns (+-q_i, +-1, 1), a (k+2)-row basis).
///
/// The fit is solved in centered, unit-scaled coordinates for conditioning.
/// When the samples are affinely dependent the optimum is not unique; the
/// returned map is the one with zero coefficients along directions the
/// samples do not span (minimum-norm among sample-equivalent optima).
inline FitResult chebyshev_affine_fit(std::span<const Point> samples,
                                      std::span<const double> values,
                                      std::string strategy = "explicit",
                                      std::uint64_t seed = 0) {
    const std::size_t n = samples.size();
    if (n != values.size()) {
        throw std::invalid_argument("chebyshev_affine_fit: samples/values size mismatch");
    }
    if (n == 0) {
        throw std::invalid_argument("chebyshev_affine_fit: empty sample");
    }
    const std::size_t k = samples[0].dim();
    if (n < k + 2) {
        throw std::invalid_argument("chebyshev_affine_fit: need at least k+2 samples");
    }
    for (const Point& p : samples) {
        if (p.dim() != k) {
            throw std::invalid_argument("chebyshev_affine_fit: mixed sample dimensions");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("chebyshev_affine_fit: values must be finite");
        }
    }

    // Center and scale.
    std::vector<double> centroid(k, 0.0);
    for (const Point& p : samples) {
        for (std::size_t t = 0; t < k; ++t) centroid[t] += p[t];
    }
    for (std::size_t t = 0; t < k; ++t) centroid[t] /= static_cast<double>(n);

    std::vector<double> q(n * k);  // centered/scaled samples, row-major
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            const double d = samples[i][t] - centroid[t];
            q[i * k + t] = d;
            d2 += d * d;
        }
        scale = std::max(scale, std::sqrt(d2));
    }

    const auto vmin = *std::min_element(values.begin(), values.end());
    const auto vmax = *std::max_element(values.begin(), values.end());
    const double v0 = 0.5 * (vmin + vmax);

    FitResult out;
    out.n_samples = n;
    out.strategy = std::move(strategy);
    out.seed = seed;

    if (scale == 0.0) {
        // All sample points coincide: best map is the midrange constant.
        out.map = AffineMap{std::vector<double>(k, 0.0), v0};
        out.residual = max_abs_deviation(out.map, samples, values);
        return out;
    }

    for (std::size_t i = 0; i < n * k; ++i) q[i] /= scale;

    // Dual LP: maximize sum g_i (w_i - u_i)
    //   s.t. sum (u_i - w_i) q_i = 0, sum (u_i - w_i) = 0, sum (u_i + w_i) = 1.
    // Multipliers give the primal fit: alpha = -pi[0..k-1], beta = -pi[k],
    // minimax residual = pi[k+1].
    const std::size_t m = k + 2;
    LpProblem lp;
    lp.m = m;
    lp.n = 2 * n;
    lp.A.assign(lp.m * lp.n, 0.0);
    lp.b.assign(m, 0.0);
    lp.b[m - 1] = 1.0;
    lp.c.assign(lp.n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = (values[i] - v0) / scale;
        double* cu = &lp.A[i * m];
        double* cw = &lp.A[(n + i) * m];
        for (std::size_t t = 0; t < k; ++t) {
            cu[t] = q[i * k + t];
            cw[t] = -q[i * k + t];
        }
        cu[k] = 1.0;
        cw[k] = -1.0;
        cu[k + 1] = 1.0;
        cw[k + 1] = 1.0;
        lp.c[i] = -g;
        lp.c[n + i] = g;
    }

    const LpSolution sol = solve_standard_max(lp);
    if (sol.status != LpStatus::Optimal) {
        throw std::runtime_error("chebyshev_affine_fit: LP solve failed");
    }

    std::vector<double> alpha(k);
    for (std::size_t t = 0; t < k; ++t) alpha[t] = -sol.multipliers[t];
    const double beta = -sol.multipliers[k];

    // Zero the coefficients along directions the samples do not span.
    std::vector<std::vector<double>> basis;
    for (std::size_t i = 0; i < n && basis.size() < k; ++i) {
        std::vector<double> v(q.begin() + i * k, q.begin() + (i + 1) * k);
        for (const auto& e : basis) {
            double proj = 0.0;
            for (std::size_t t = 0; t < k; ++t) proj += v[t] * e[t];
            for (std::size_t t = 0; t < k; ++t) v[t] -= proj * e[t];
        }
        double nn = 0.0;
        for (double x : v) nn += x * x;
        nn = std::sqrt(nn);
        if (nn > 1e-9) {
            for (double& x : v) x /= nn;
            basis.push_back(std::move(v));
        }
    }
    if (basis.size() < k) {
        std::vector<double> proj(k, 0.0);
        for (const auto& e : basis) {
            double dp = 0.0;
            for (std::size_t t = 0; t < k; ++t) dp += alpha[t] * e[t];
            for (std::size_t t = 0; t < k; ++t) proj[t] += dp * e[t];
        }
        alpha = std::move(proj);
    }

    double offset = v0 + scale * beta;
    for (std::size_t t = 0; t < k; ++t) offset -= alpha[t] * centroid[t];

    out.map = AffineMap{std::move(alpha), offset};
    out.residual = max_abs_deviation(out.map, samples, values);
    const double vscale = std::max({1.0, std::abs(vmin), std::abs(vmax)});
    if (out.residual <= kZeroResidualTol * vscale) out.residual = 0.0;
    return out;
}

}  // namespace medax
