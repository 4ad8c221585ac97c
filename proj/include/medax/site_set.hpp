#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "medax/point.hpp"

namespace medax {

struct NearestHit {
    double distance = 0.0;
    std::size_t index = 0;
};

struct NearSite {
    std::size_t index = 0;
    double distance = 0.0;

    bool operator==(const NearSite&) const = default;
};

/// Tie tolerance for near-minimizer thresholds: exact geometric ties must
/// survive round-off, so thresholds get a relative 1e-12 cushion.
inline double tie_tolerance(double dist) { return 1e-12 * (1.0 + dist); }

/// A finite site set in R^k with an exact nearest-neighbor index.
///
/// The k-d tree is an acceleration structure only: every query is defined to
/// return exactly what a linear scan over the sites would return, including
/// lowest-index tie-breaking on equal distances.
class SiteSet {
public:
    explicit SiteSet(std::vector<Point> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) {
            throw std::invalid_argument("SiteSet: must contain at least one site");
        }
        dim_ = sites_[0].dim();
        for (const Point& s : sites_) {
            if (s.dim() != dim_) {
                throw std::invalid_argument("SiteSet: all sites must share one dimension");
            }
        }
        build_index();
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return sites_.size(); }
    const Point& site(std::size_t i) const { return sites_[i]; }
    const std::vector<Point>& sites() const { return sites_; }

    /// Exact nearest site; ties broken by lowest site index.
    NearestHit nearest(const Point& x) const {
        check_dim(x, "SiteSet::nearest");
        Best best;
        nearest_rec(0, x, best);
        return {std::sqrt(best.d2), best.index};
    }

    /// All sites with d(x, site) <= radius, sorted by (distance, index).
    std::vector<NearSite> sites_within(const Point& x, double radius) const {
        check_dim(x, "SiteSet::sites_within");
        std::vector<NearSite> out;
        if (radius < 0.0) return out;
        within_rec(0, x, radius * radius, out);
        std::sort(out.begin(), out.end(), [](const NearSite& a, const NearSite& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            return a.index < b.index;
        });
        return out;
    }

private:
    struct Node {
        int axis = -1;      // -1 marks a leaf
        double split = 0.0;
        int left = -1;
        int right = -1;
        std::size_t begin = 0;  // leaf range into order_
        std::size_t end = 0;
    };

    struct Best {
        double d2 = std::numeric_limits<double>::infinity();
        std::size_t index = std::numeric_limits<std::size_t>::max();

        bool improves(double d2c, std::size_t idx) const {
            return d2c < d2 || (d2c == d2 && idx < index);
        }
    };

    static constexpr std::size_t kLeafSize = 8;

    void check_dim(const Point& x, const char* where) const {
        if (x.dim() != dim_) {
            throw std::invalid_argument(std::string(where) + ": dimension mismatch");
        }
    }

    void build_index() {
        order_.resize(sites_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
        nodes_.reserve(2 * sites_.size() / kLeafSize + 2);
        build_rec(0, sites_.size());
    }

    int build_rec(std::size_t begin, std::size_t end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        if (end - begin <= kLeafSize) {
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        // Split along the widest axis of the current range.
        int axis = 0;
        double best_spread = -1.0;
        for (std::size_t a = 0; a < dim_; ++a) {
            double lo = sites_[order_[begin]][a];
            double hi = lo;
            for (std::size_t i = begin + 1; i < end; ++i) {
                const double c = sites_[order_[i]][a];
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                axis = static_cast<int>(a);
            }
        }
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             const double ca = sites_[a][axis];
                             const double cb = sites_[b][axis];
                             if (ca != cb) return ca < cb;
                             return a < b;
                         });
        nodes_[id].axis = axis;
        nodes_[id].split = sites_[order_[mid]][axis];
        const int l = build_rec(begin, mid);
        const int r = build_rec(mid, end);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    void nearest_rec(int id, const Point& x, Best& best) const {
        const Node& n = nodes_[id];
        if (n.axis < 0) {
            for (std::size_t i = n.begin; i < n.end; ++i) {
                const std::size_t idx = order_[i];
                const double d2 = distance_squared(x, sites_[idx]);
                if (best.improves(d2, idx)) {
                    best.d2 = d2;
                    best.index = idx;
                }
            }
            return;
        }
        const double diff = x[n.axis] - n.split;
        const int near = diff < 0.0 ? n.left : n.right;
        const int far = diff < 0.0 ? n.right : n.left;
        nearest_rec(near, x, best);
        // Prune only on strict >: equal-distance sites with lower index may
        // sit exactly on the splitting sphere.
        if (diff * diff <= best.d2) {
            nearest_rec(far, x, best);
        }
    }

    void within_rec(int id, const Point& x, double r2, std::vector<NearSite>& out) const {
        const Node& n = nodes_[id];
        if (n.axis < 0) {
            for (std::size_t i = n.begin; i < n.end; ++i) {
                const std::size_t idx = order_[i];
                const double d2 = distance_squared(x, sites_[idx]);
                if (d2 <= r2) {
                    out.push_back({idx, std::sqrt(d2)});
                }
            }
            return;
        }
        const double diff = x[n.axis] - n.split;
        const int near = diff < 0.0 ? n.left : n.right;
        const int far = diff < 0.0 ? n.right : n.left;
        within_rec(near, x, r2, out);
        if (diff * diff <= r2) {
            within_rec(far, x, r2, out);
        }
    }

    std::vector<Point> sites_;
    std::size_t dim_ = 0;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

struct DistanceResult {
    double distance = 0.0;
    std::size_t index = 0;
};

/// d(x, K) together with the attaining site (lowest index on ties).
inline DistanceResult dist_to_set(const Point& x, const SiteSet& sites) {
    const NearestHit hit = sites.nearest(x);
    return {hit.distance, hit.index};
}

/// All sites within d(x,K) + slack (+ tie tolerance), sorted by (distance, index).
inline std::vector<NearSite> near_minimizers(const Point& x, const SiteSet& sites,
                                             double slack) {
    if (!(slack >= 0.0)) {
        throw std::invalid_argument("near_minimizers: slack must be >= 0");
    }
    const DistanceResult d = dist_to_set(x, sites);
    const double threshold = d.distance + slack + tie_tolerance(d.distance);
    return sites.sites_within(x, threshold);
}

inline std::vector<Point> near_minimizer_points(const Point& x, const SiteSet& sites,
                                                double slack) {
    std::vector<Point> out;
    for (const NearSite& ns : near_minimizers(x, sites, slack)) {
        out.push_back(sites.site(ns.index));
    }
    return out;
}

}  // namespace medax
