#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "medax/angles.hpp"
#include "medax/ball.hpp"
#include "medax/coarse_diff.hpp"
#include "medax/point.hpp"
#include "medax/sampling.hpp"
#include "medax/site_set.hpp"

namespace medax {

/// Resolution parameters. eps controls the near-minimizer slack (eps * r),
/// delta the coarse-differentiability level; 2*delta + eps < 1 is required
/// for the angle threshold to make sense.
struct GParams {
    double eps = 0.0;
    double delta = 0.1;

    GParams() = default;

    GParams(double eps_, double delta_) : eps(eps_), delta(delta_) { validate(); }

    void validate() const {
        if (!(eps >= 0.0) || !(delta > 0.0) || !(2.0 * delta + eps < 1.0)) {
            throw std::invalid_argument(
                "GParams: require eps >= 0, delta > 0, 2*delta + eps < 1");
        }
    }
};

/// Largest near-minimizer angle compatible with delta-coarse
/// differentiability: arccos(2*((1-(2*delta+eps))/(1+2*delta))^2 - 1).
inline double angle_threshold(const GParams& params) {
    params.validate();
    const double ratio = (1.0 - (2.0 * params.delta + params.eps)) / (1.0 + 2.0 * params.delta);
    const double c = std::clamp(2.0 * ratio * ratio - 1.0, -1.0, 1.0);
    return std::acos(c);
}

struct Witness {
    std::size_t first_site = 0;
    std::size_t second_site = 0;
};

/// Outcome of a G-membership decision for one ball.
///
/// in_g holds exactly when 0 < r < d(x,K), at least two near-minimizers
/// exist at slack eps*r, and their maximum pairwise angle exceeds the
/// threshold (strictly).
struct GMembership {
    Ball ball;
    GParams params;
    double dist = 0.0;           // d(x, K)
    std::size_t near_count = 0;  // near-minimizer count at slack eps*r
    double max_angle = 0.0;
    double threshold = 0.0;
    bool in_g = false;
    std::optional<Witness> witness;
    std::string reason;  // set when in_g is false
};

inline GMembership in_G(const Point& x, double r, const SiteSet& sites,
                        const GParams& params) {
    GMembership mem;
    mem.ball = Ball(x, r);
    mem.params = params;
    mem.threshold = angle_threshold(params);

    const DistanceResult d = dist_to_set(x, sites);
    mem.dist = d.distance;

    if (!(r < d.distance)) {
        mem.reason = "scale constraint";  // definition requires 0 < r < d(x,K)
        return mem;
    }

    const std::vector<NearSite> near = near_minimizers(x, sites, params.eps * r);
    mem.near_count = near.size();
    if (near.size() < 2) {
        mem.reason = "single near-minimizer";
        return mem;
    }

    std::vector<Point> arms;
    arms.reserve(near.size());
    for (const NearSite& ns : near) arms.push_back(sites.site(ns.index));
    const MaxAngle ma = max_pairwise_angle(x, arms);
    mem.max_angle = ma.angle;

    if (ma.angle > mem.threshold) {
        mem.in_g = true;
        mem.witness = Witness{near[ma.first].index, near[ma.second].index};
    } else {
        mem.reason = "angle within threshold";
    }
    return mem;
}

/// Signed distance from x to the perpendicular bisector hyperplane of a
/// two-site set (positive on the second site's side).
inline double bisector_distance(const Point& x, const SiteSet& sites) {
    if (sites.size() != 2) {
        throw std::invalid_argument("bisector_distance: site set must have exactly 2 sites");
    }
    const Point& a = sites.site(0);
    const Point& b = sites.site(1);
    require_same_dim(x, a, "bisector_distance");
    const Point axis = b - a;
    const double len = norm(axis);
    if (len == 0.0) {
        throw std::invalid_argument("bisector_distance: sites must be distinct");
    }
    const Point mid = (a + b) * 0.5;
    return dot(x - mid, axis) / len;
}

/// Consistency of a membership decision with the coarse-differentiability
/// implication: a ball in G must not admit an affine fit whose sampled
/// residual stays below delta * r * (1 - margin). The margin absorbs the
/// gap between sampled and full-ball residuals.
struct ConsistencyResult {
    GMembership membership;
    DiffCertificate certificate;
    double margin = 0.05;
    bool consistent = true;
};

inline ConsistencyResult verify_consistency(const SiteSet& sites, const Ball& ball,
                                            const GParams& params, const SamplePlan& plan,
                                            double margin = 0.05) {
    ConsistencyResult res;
    res.margin = margin;
    res.membership = in_G(ball.center, ball.radius, sites, params);

    const auto f = [&sites](const Point& p) { return dist_to_set(p, sites).distance; };
    res.certificate = coarse_diff_test(f, ball, params.delta, plan);

    const double cutoff = params.delta * ball.radius * (1.0 - margin);
    res.consistent = !(res.membership.in_g && res.certificate.fit.residual <= cutoff);
    return res;
}

}  // namespace medax
