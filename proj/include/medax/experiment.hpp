#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "medax/ball.hpp"
#include "medax/carleson.hpp"
#include "medax/detector.hpp"
#include "medax/parallel.hpp"
#include "medax/point.hpp"
#include "medax/rng.hpp"
#include "medax/sampling.hpp"
#include "medax/scenes.hpp"
#include "medax/site_set.hpp"
#include "medax/version.hpp"

namespace medax {

namespace stream {
inline constexpr std::uint64_t kScene = 1;
inline constexpr std::uint64_t kVerify = 2;
inline constexpr std::uint64_t kCarleson = 3;
}  // namespace stream

/// Dyadic ball lattice over the box [lo, hi]: octave o = 0..octaves-1 uses
/// radius top_radius * 2^-o and centers on a grid of spacing radius/4.
struct LatticeSpec {
    Point lo;
    Point hi;
    double top_radius = 1.0;
    std::size_t octaves = 1;

    void validate() const {
        require_same_dim(lo, hi, "LatticeSpec");
        if (!(top_radius > 0.0) || octaves < 1) {
            throw std::invalid_argument("LatticeSpec: need top_radius > 0 and octaves >= 1");
        }
        for (std::size_t t = 0; t < lo.dim(); ++t) {
            if (!(lo[t] <= hi[t])) {
                throw std::invalid_argument("LatticeSpec: need lo <= hi coordinate-wise");
            }
        }
    }
};

using BallFamily = std::variant<std::vector<Ball>, LatticeSpec>;

inline std::vector<Ball> enumerate_balls(const LatticeSpec& spec) {
    spec.validate();
    const std::size_t k = spec.lo.dim();
    std::vector<Ball> balls;
    for (std::size_t o = 0; o < spec.octaves; ++o) {
        const double radius = spec.top_radius * std::exp2(-static_cast<double>(o));
        const double step = radius / 4.0;
        std::vector<std::size_t> counts(k);
        for (std::size_t t = 0; t < k; ++t) {
            counts[t] = static_cast<std::size_t>(
                            std::floor((spec.hi[t] - spec.lo[t]) / step + 1e-9)) +
                        1;
        }
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            std::vector<double> c(k);
            for (std::size_t t = 0; t < k; ++t) {
                c[t] = spec.lo[t] + static_cast<double>(idx[t]) * step;
            }
            balls.push_back(Ball(Point(std::move(c)), radius));
            std::size_t t = 0;
            while (t < k && ++idx[t] == counts[t]) {
                idx[t] = 0;
                ++t;
            }
            if (t == k) break;
        }
    }
    return balls;
}

inline std::vector<Ball> enumerate_balls(const BallFamily& family) {
    if (const auto* list = std::get_if<std::vector<Ball>>(&family)) return *list;
    return enumerate_balls(std::get<LatticeSpec>(family));
}

struct CarlesonConfig {
    bool enabled = false;
    std::size_t octaves = 12;
    std::size_t per_octave = 4;
    std::size_t samples_per_slice = 4096;
    std::size_t max_balls = 16;  // deterministic stride over the ball family

    void validate() const {
        if (!enabled) return;
        if (octaves < 1 || per_octave < 1 || samples_per_slice < 1 || max_balls < 1) {
            throw std::invalid_argument("CarlesonConfig: counts must be >= 1");
        }
    }
};

struct OutputPaths {
    std::string report;   // JSON; empty = do not write
    std::string summary;  // CSV; empty = do not write
    std::string svg;      // k = 2 only; empty = do not write
};

struct ExperimentConfig {
    SceneSpec scene = scene::TwoPoints{};
    GParams params;
    BallFamily balls = std::vector<Ball>{};
    SamplePlan sampling;           // n = 0 means the dense default for the dimension
    double verify_fraction = 0.05; // share of unflagged balls to verify
    CarlesonConfig carleson;
    std::uint64_t seed = 0;
    OutputPaths outputs;

    void validate() const {
        params.validate();
        carleson.validate();
        if (!(verify_fraction >= 0.0 && verify_fraction <= 1.0)) {
            throw std::invalid_argument("ExperimentConfig: verify_fraction must be in [0, 1]");
        }
        if (enumerate_balls(balls).empty()) {
            throw std::invalid_argument("ExperimentConfig: ball family is empty");
        }
    }
};

/// Consistency record kept per verified ball; the membership half lives in
/// the enclosing BallRecord.
struct ConsistencyRecord {
    DiffCertificate certificate;
    double margin = 0.05;
    bool consistent = true;
};

struct BallRecord {
    std::size_t index = 0;
    GMembership membership;
    std::optional<ConsistencyRecord> consistency;
};

struct Summary {
    std::size_t balls_tested = 0;
    std::size_t flagged = 0;
    std::size_t verified = 0;
    std::size_t violations = 0;
    std::optional<double> max_constant;
};

struct Report {
    std::string schema_version = kReportSchemaVersion;
    std::string tool_version = kVersion;
    ExperimentConfig config;
    std::vector<BallRecord> balls;
    std::optional<ConstantEstimate> carleson;
    Summary summary;
    double wall_clock_seconds = 0.0;  // excluded from determinism comparisons
};

inline int exit_code_for(const Report& report) {
    return report.summary.violations > 0 ? 2 : 0;
}

namespace detail {

inline SamplePlan verify_plan(const ExperimentConfig& config, std::size_t dim,
                              std::size_t ball_index) {
    SamplePlan plan = config.sampling.n > 0 ? config.sampling : dense_plan(dim, 0);
    plan.seed = derive_seed(config.seed, stream::kVerify, ball_index);
    return plan;
}

}  // namespace detail

/// Full pipeline: decide G membership over the ball family, verify the
/// coarse-differentiability implication on every flagged ball plus a
/// deterministic fraction of the unflagged ones, optionally estimate the
/// Carleson constant with the membership oracle. Results are keyed by ball
/// index, so worker scheduling cannot change the report.
inline Report run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();

    Report report;
    report.config = config;

    const SiteSet sites = generate_scene(config.scene, derive_seed(config.seed, stream::kScene));
    const std::vector<Ball> balls = enumerate_balls(config.balls);

    report.balls.resize(balls.size());
    parallel_for(balls.size(), [&](std::size_t i) {
        report.balls[i].index = i;
        report.balls[i].membership =
            in_G(balls[i].center, balls[i].radius, sites, config.params);
    });

    std::vector<std::size_t> to_verify;
    const std::size_t stride =
        config.verify_fraction > 0.0
            ? std::max<std::size_t>(
                  1, static_cast<std::size_t>(std::llround(1.0 / config.verify_fraction)))
            : 0;
    std::size_t unflagged_rank = 0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        if (report.balls[i].membership.in_g) {
            to_verify.push_back(i);
        } else if (stride > 0 && unflagged_rank++ % stride == 0) {
            to_verify.push_back(i);
        }
    }

    parallel_for(to_verify.size(), [&](std::size_t v) {
        const std::size_t i = to_verify[v];
        const SamplePlan plan = detail::verify_plan(config, sites.dim(), i);
        const ConsistencyResult res = verify_consistency(sites, balls[i], config.params, plan);
        report.balls[i].consistency =
            ConsistencyRecord{res.certificate, res.margin, res.consistent};
    });

    report.summary.balls_tested = balls.size();
    for (const BallRecord& rec : report.balls) {
        if (rec.membership.in_g) ++report.summary.flagged;
        if (rec.consistency) {
            ++report.summary.verified;
            if (!rec.consistency->consistent) ++report.summary.violations;
        }
    }

    if (config.carleson.enabled) {
        std::vector<Ball> family;
        const std::size_t pick_stride =
            std::max<std::size_t>(1, (balls.size() + config.carleson.max_balls - 1) /
                                         config.carleson.max_balls);
        for (std::size_t i = 0; i < balls.size(); i += pick_stride) {
            family.push_back(balls[i]);
        }

        const auto oracle = [&](const Point& x, double r) {
            return in_G(x, r, sites, config.params).in_g;
        };
        const std::uint64_t cseed = derive_seed(config.seed, stream::kCarleson);

        ConstantEstimate est;
        est.per_ball.resize(family.size());
        parallel_for(family.size(), [&](std::size_t b) {
            const ScaleGrid grid(family[b].radius, config.carleson.octaves,
                                 config.carleson.per_octave);
            est.per_ball[b] = carleson_integral(oracle, family[b], grid,
                                                config.carleson.samples_per_slice,
                                                derive_seed(cseed, b));
        });
        for (const CarlesonEstimate& ce : est.per_ball) {
            est.sup = std::max(est.sup, ce.constant);
        }
        report.carleson = std::move(est);
        report.summary.max_constant = report.carleson->sup;
    }

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace medax
