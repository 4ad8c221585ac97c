#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "medax/affine_fit.hpp"
#include "medax/ball.hpp"
#include "medax/point.hpp"
#include "medax/sampling.hpp"

namespace medax {

/// Sample-relative coarse-differentiability certificate.
///
/// `passed` compares the minimax residual over the sample against eps * r.
/// The sampled residual lower-bounds the residual of the best affine map
/// over the full ball, so FAIL is a rigorous witness on the sample points
/// while PASS is approximate. The plan metadata (n, strategy, seed) is kept
/// so the sample can be reproduced exactly.
struct DiffCertificate {
    Ball ball;
    double eps = 0.0;
    FitResult fit;
    bool passed = false;

    double sampled_residual() const { return fit.residual; }
};

template <typename F>
DiffCertificate coarse_diff_test(F&& f, const Ball& ball, double eps,
                                 const SamplePlan& plan) {
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("coarse_diff_test: eps must be >= 0");
    }
    const std::vector<Point> samples = sample_ball(ball, plan);
    std::vector<double> values(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) values[i] = f(samples[i]);

    DiffCertificate cert;
    cert.ball = ball;
    cert.eps = eps;
    cert.fit = chebyshev_affine_fit(samples, values, to_string(plan.strategy), plan.seed);
    cert.passed = cert.fit.residual <= eps * ball.radius;
    return cert;
}

struct GradientCheck {
    double norm = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// For fits of 1-Lipschitz functions the linear part satisfies
/// |grad| <= 1 + 2 * residual / r, up to a slack for sample-relative
/// residuals (default 0.05).
inline GradientCheck gradient_norm_check(const FitResult& fit, const Ball& ball,
                                         double sampling_slack = 0.05) {
    GradientCheck check;
    check.norm = fit.map.gradient_norm();
    check.bound = 1.0 + 2.0 * (fit.residual / ball.radius) + sampling_slack;
    check.ok = check.norm <= check.bound;
    return check;
}

}  // namespace medax
