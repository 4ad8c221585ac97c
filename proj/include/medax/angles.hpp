#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "medax/point.hpp"

namespace medax {

/// Unsigned angle in [0, pi] between the segments [x,z1] and [x,z2].
/// The cosine argument is clamped to [-1, 1] to absorb round-off.
inline double angle_between(const Point& x, const Point& z1, const Point& z2) {
    require_same_dim(x, z1, "angle_between");
    require_same_dim(x, z2, "angle_between");
    const Point u = z1 - x;
    const Point v = z2 - x;
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) {
        throw std::invalid_argument("angle_between: arm endpoint coincides with apex");
    }
    const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(c);
}

struct MaxAngle {
    double angle = 0.0;
    std::size_t first = 0;   // indices into the arm list
    std::size_t second = 0;  // first == second marks the degenerate singleton case
};

/// Maximum angle over unordered arm pairs, with the lexicographically first
/// maximizing pair as witness. A single arm yields angle 0 and a degenerate
/// (z, z) witness.
inline MaxAngle max_pairwise_angle(const Point& x, std::span<const Point> arms) {
    if (arms.empty()) {
        throw std::invalid_argument("max_pairwise_angle: arm list must be nonempty");
    }
    if (arms.size() == 1) {
        return {0.0, 0, 0};
    }
    MaxAngle best{angle_between(x, arms[0], arms[1]), 0, 1};
    for (std::size_t i = 0; i + 1 < arms.size(); ++i) {
        for (std::size_t j = i + 1; j < arms.size(); ++j) {
            if (i == 0 && j == 1) continue;
            const double a = angle_between(x, arms[i], arms[j]);
            if (a > best.angle) {
                best = {a, i, j};
            }
        }
    }
    return best;
}

}  // namespace medax
