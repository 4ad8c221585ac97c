#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "medax/point.hpp"

namespace medax {

/// A location-and-scale pair: the closed ball B(center, radius).
struct Ball {
    Point center;
    double radius = 0.0;

    Ball() = default;

    Ball(Point c, double r) : center(std::move(c)), radius(r) {
        if (!(std::isfinite(radius) && radius > 0.0)) {
            throw std::invalid_argument("Ball: radius must be positive and finite");
        }
    }

    std::size_t dim() const { return center.dim(); }

    bool contains(const Point& p) const {
        return distance(p, center) <= radius;
    }
};

/// Volume of the unit ball in R^k via the two-step recursion
/// v_k = v_{k-2} * 2*pi / k, v_0 = 1, v_1 = 2.
inline double unit_ball_volume(std::size_t k) {
    if (k < 1) {
        throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
    }
    double v = (k % 2 == 0) ? 1.0 : 2.0;
    for (std::size_t j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) {
        v *= 2.0 * M_PI / static_cast<double>(j);
    }
    return v;
}

/// Lebesgue measure of a ball of the given radius in R^k.
inline double ball_volume(std::size_t k, double radius) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("ball_volume: radius must be positive");
    }
    return unit_ball_volume(k) * std::pow(radius, static_cast<double>(k));
}

}  // namespace medax
