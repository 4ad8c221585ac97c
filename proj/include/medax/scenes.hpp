#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "medax/csv.hpp"
#include "medax/point.hpp"
#include "medax/rng.hpp"
#include "medax/site_set.hpp"

namespace medax {

namespace scene {

/// Two sites at +-separation/2 along the first axis.
struct TwoPoints {
    double separation = 2.0;
    std::size_t dim = 2;
};

/// count sites equally spaced by arclength on a circle (k = 2).
struct Circle {
    std::size_t count = 16;
    double radius = 1.0;
};

/// count sites equally spaced on the segment [a, b] (endpoints included).
struct Segment {
    std::size_t count = 16;
    Point a;
    Point b;
};

/// count sites uniform in the axis-aligned box [lo, hi] (seeded).
struct RandomCloud {
    std::size_t count = 100;
    Point lo;
    Point hi;
};

/// per_side^k lattice over the box [lo, hi] (endpoints included).
struct Lattice {
    std::size_t per_side = 10;
    Point lo;
    Point hi;
};

/// Sites loaded from a point CSV file.
struct CsvFile {
    std::string path;
};

}  // namespace scene

using SceneSpec = std::variant<scene::TwoPoints, scene::Circle, scene::Segment,
                               scene::RandomCloud, scene::Lattice, scene::CsvFile>;

inline const char* scene_kind(const SceneSpec& spec) {
    struct Visitor {
        const char* operator()(const scene::TwoPoints&) const { return "two_points"; }
        const char* operator()(const scene::Circle&) const { return "circle"; }
        const char* operator()(const scene::Segment&) const { return "segment"; }
        const char* operator()(const scene::RandomCloud&) const { return "random_cloud"; }
        const char* operator()(const scene::Lattice&) const { return "grid"; }
        const char* operator()(const scene::CsvFile&) const { return "csv"; }
    };
    return std::visit(Visitor{}, spec);
}

inline SiteSet generate_scene(const SceneSpec& spec, std::uint64_t seed) {
    struct Visitor {
        std::uint64_t seed;

        SiteSet operator()(const scene::TwoPoints& s) const {
            if (!(s.separation > 0.0) || s.dim < 1) {
                throw std::invalid_argument("two_points: need separation > 0 and dim >= 1");
            }
            Point a = Point::zeros(s.dim);
            Point b = Point::zeros(s.dim);
            a[0] = -0.5 * s.separation;
            b[0] = 0.5 * s.separation;
            return SiteSet({std::move(a), std::move(b)});
        }

        SiteSet operator()(const scene::Circle& s) const {
            if (s.count < 1 || !(s.radius > 0.0)) {
                throw std::invalid_argument("circle: need count >= 1 and radius > 0");
            }
            std::vector<Point> sites;
            sites.reserve(s.count);
            for (std::size_t i = 0; i < s.count; ++i) {
                const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(s.count);
                sites.push_back(Point{s.radius * std::cos(a), s.radius * std::sin(a)});
            }
            return SiteSet(std::move(sites));
        }

        SiteSet operator()(const scene::Segment& s) const {
            if (s.count < 1) throw std::invalid_argument("segment: need count >= 1");
            require_same_dim(s.a, s.b, "segment");
            std::vector<Point> sites;
            sites.reserve(s.count);
            if (s.count == 1) {
                sites.push_back((s.a + s.b) * 0.5);
            } else {
                for (std::size_t i = 0; i < s.count; ++i) {
                    const double t =
                        static_cast<double>(i) / static_cast<double>(s.count - 1);
                    sites.push_back(s.a * (1.0 - t) + s.b * t);
                }
            }
            return SiteSet(std::move(sites));
        }

        SiteSet operator()(const scene::RandomCloud& s) const {
            if (s.count < 1) throw std::invalid_argument("random_cloud: need count >= 1");
            require_same_dim(s.lo, s.hi, "random_cloud");
            Rng rng(seed);
            std::vector<Point> sites;
            sites.reserve(s.count);
            for (std::size_t i = 0; i < s.count; ++i) {
                std::vector<double> c(s.lo.dim());
                for (std::size_t t = 0; t < c.size(); ++t) {
                    c[t] = rng.uniform(s.lo[t], s.hi[t]);
                }
                sites.push_back(Point(std::move(c)));
            }
            return SiteSet(std::move(sites));
        }

        SiteSet operator()(const scene::Lattice& s) const {
            if (s.per_side < 1) throw std::invalid_argument("grid: need per_side >= 1");
            require_same_dim(s.lo, s.hi, "grid");
            const std::size_t k = s.lo.dim();
            std::vector<Point> sites;
            std::vector<std::size_t> idx(k, 0);
            while (true) {
                std::vector<double> c(k);
                for (std::size_t t = 0; t < k; ++t) {
                    c[t] = (s.per_side == 1)
                               ? 0.5 * (s.lo[t] + s.hi[t])
                               : s.lo[t] + (s.hi[t] - s.lo[t]) * static_cast<double>(idx[t]) /
                                               static_cast<double>(s.per_side - 1);
                }
                sites.push_back(Point(std::move(c)));
                std::size_t t = 0;
                while (t < k && ++idx[t] == s.per_side) {
                    idx[t] = 0;
                    ++t;
                }
                if (t == k) break;
            }
            return SiteSet(std::move(sites));
        }

        SiteSet operator()(const scene::CsvFile& s) const { return read_points(s.path); }
    };
    return std::visit(Visitor{seed}, spec);
}

}  // namespace medax
