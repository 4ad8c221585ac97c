#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace medax {

/// A point (or vector) in R^k, k >= 1. Coordinates must be finite.
class Point {
public:
    Point() = default;

    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
        validate();
    }

    Point(std::initializer_list<double> coords) : coords_(coords) { validate(); }

    static Point zeros(std::size_t dim) {
        return Point(std::vector<double>(dim, 0.0));
    }

    std::size_t dim() const { return coords_.size(); }

    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }

    const std::vector<double>& coords() const { return coords_; }

    auto begin() const { return coords_.begin(); }
    auto end() const { return coords_.end(); }

    bool operator==(const Point& other) const = default;

private:
    void validate() const {
        if (coords_.empty()) {
            throw std::invalid_argument("Point: dimension must be >= 1");
        }
        for (double c : coords_) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("Point: coordinates must be finite");
            }
        }
    }

    std::vector<double> coords_;
};

inline void require_same_dim(const Point& a, const Point& b, const char* where) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
    }
}

inline Point operator+(const Point& a, const Point& b) {
    require_same_dim(a, b, "operator+");
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
    return Point(std::move(out));
}

inline Point operator-(const Point& a, const Point& b) {
    require_same_dim(a, b, "operator-");
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
    return Point(std::move(out));
}

inline Point operator*(const Point& a, double s) {
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] * s;
    return Point(std::move(out));
}

inline Point operator*(double s, const Point& a) { return a * s; }

inline double dot(const Point& a, const Point& b) {
    require_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(const Point& a) { return dot(a, a); }

inline double norm(const Point& a) { return std::sqrt(squared_norm(a)); }

/// Accumulated coordinate-by-coordinate so the spatial index and the linear
/// scan produce bitwise-identical values.
inline double distance_squared(const Point& a, const Point& b) {
    require_same_dim(a, b, "distance_squared");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double distance(const Point& a, const Point& b) {
    return std::sqrt(distance_squared(a, b));
}

}  // namespace medax
