#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "medax/csv.hpp"
#include "medax/experiment.hpp"

namespace medax {

using Json = nlohmann::ordered_json;

// ---- primitives ------------------------------------------------------

inline Json to_json(const Point& p) { return Json(p.coords()); }

inline Point point_from_json(const Json& j) {
    return Point(j.get<std::vector<double>>());
}

inline Json to_json(const Ball& b) {
    return Json{{"center", to_json(b.center)}, {"radius", b.radius}};
}

inline Ball ball_from_json(const Json& j) {
    return Ball(point_from_json(j.at("center")), j.at("radius").get<double>());
}

inline Json to_json(const GParams& p) {
    return Json{{"eps", p.eps}, {"delta", p.delta}};
}

inline GParams gparams_from_json(const Json& j) {
    return GParams(j.at("eps").get<double>(), j.at("delta").get<double>());
}

inline Json to_json(const SamplePlan& p) {
    return Json{{"strategy", to_string(p.strategy)}, {"n", p.n}, {"seed", p.seed}};
}

inline SamplePlan sample_plan_from_json(const Json& j) {
    SamplePlan p;
    p.strategy = sample_strategy_from_string(j.at("strategy").get<std::string>());
    p.n = j.at("n").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

// ---- detector --------------------------------------------------------

inline Json to_json(const GMembership& m) {
    Json j{{"ball", to_json(m.ball)},
           {"params", to_json(m.params)},
           {"dist", m.dist},
           {"near_count", m.near_count},
           {"max_angle", m.max_angle},
           {"threshold", m.threshold},
           {"in_g", m.in_g},
           {"witness", nullptr},
           {"reason", m.reason}};
    if (m.witness) {
        j["witness"] = Json{{"first_site", m.witness->first_site},
                            {"second_site", m.witness->second_site}};
    }
    return j;
}

inline GMembership membership_from_json(const Json& j) {
    GMembership m;
    m.ball = ball_from_json(j.at("ball"));
    m.params = gparams_from_json(j.at("params"));
    m.dist = j.at("dist").get<double>();
    m.near_count = j.at("near_count").get<std::size_t>();
    m.max_angle = j.at("max_angle").get<double>();
    m.threshold = j.at("threshold").get<double>();
    m.in_g = j.at("in_g").get<bool>();
    if (!j.at("witness").is_null()) {
        m.witness = Witness{j.at("witness").at("first_site").get<std::size_t>(),
                            j.at("witness").at("second_site").get<std::size_t>()};
    }
    m.reason = j.at("reason").get<std::string>();
    return m;
}

inline Json to_json(const AffineMap& m) {
    return Json{{"coeffs", m.coeffs}, {"offset", m.offset}};
}

inline AffineMap affine_map_from_json(const Json& j) {
    AffineMap m;
    m.coeffs = j.at("coeffs").get<std::vector<double>>();
    m.offset = j.at("offset").get<double>();
    return m;
}

inline Json to_json(const FitResult& f) {
    return Json{{"map", to_json(f.map)},
                {"residual", f.residual},
                {"n_samples", f.n_samples},
                {"strategy", f.strategy},
                {"seed", f.seed}};
}

inline FitResult fit_result_from_json(const Json& j) {
    FitResult f;
    f.map = affine_map_from_json(j.at("map"));
    f.residual = j.at("residual").get<double>();
    f.n_samples = j.at("n_samples").get<std::size_t>();
    f.strategy = j.at("strategy").get<std::string>();
    f.seed = j.at("seed").get<std::uint64_t>();
    return f;
}

inline Json to_json(const DiffCertificate& c) {
    return Json{{"ball", to_json(c.ball)},
                {"eps", c.eps},
                {"fit", to_json(c.fit)},
                {"passed", c.passed}};
}

inline DiffCertificate certificate_from_json(const Json& j) {
    DiffCertificate c;
    c.ball = ball_from_json(j.at("ball"));
    c.eps = j.at("eps").get<double>();
    c.fit = fit_result_from_json(j.at("fit"));
    c.passed = j.at("passed").get<bool>();
    return c;
}

// ---- carleson --------------------------------------------------------

inline Json to_json(const ScaleGrid& g) {
    return Json{{"top", g.top}, {"octaves", g.octaves}, {"per_octave", g.per_octave}};
}

inline ScaleGrid scale_grid_from_json(const Json& j) {
    return ScaleGrid(j.at("top").get<double>(), j.at("octaves").get<std::size_t>(),
                     j.at("per_octave").get<std::size_t>());
}

inline Json to_json(const SliceEstimate& s) {
    return Json{{"radius", s.radius}, {"fraction", s.fraction}, {"std_error", s.std_error}};
}

inline SliceEstimate slice_from_json(const Json& j) {
    SliceEstimate s;
    s.radius = j.at("radius").get<double>();
    s.fraction = j.at("fraction").get<double>();
    s.std_error = j.at("std_error").get<double>();
    return s;
}

inline Json to_json(const CarlesonEstimate& e) {
    Json slices = Json::array();
    for (const SliceEstimate& s : e.slices) slices.push_back(to_json(s));
    return Json{{"ball", to_json(e.ball)},
                {"grid", to_json(e.grid)},
                {"slices", std::move(slices)},
                {"octave_sums", e.octave_sums},
                {"integral", e.integral},
                {"constant", e.constant},
                {"truncated_below", e.truncated_below},
                {"mc_samples", e.mc_samples},
                {"seed", e.seed}};
}

inline CarlesonEstimate carleson_estimate_from_json(const Json& j) {
    CarlesonEstimate e;
    e.ball = ball_from_json(j.at("ball"));
    e.grid = scale_grid_from_json(j.at("grid"));
    for (const Json& s : j.at("slices")) e.slices.push_back(slice_from_json(s));
    e.octave_sums = j.at("octave_sums").get<std::vector<double>>();
    e.integral = j.at("integral").get<double>();
    e.constant = j.at("constant").get<double>();
    e.truncated_below = j.at("truncated_below").get<double>();
    e.mc_samples = j.at("mc_samples").get<std::size_t>();
    e.seed = j.at("seed").get<std::uint64_t>();
    return e;
}

inline Json to_json(const ConstantEstimate& e) {
    Json per_ball = Json::array();
    for (const CarlesonEstimate& c : e.per_ball) per_ball.push_back(to_json(c));
    return Json{{"per_ball", std::move(per_ball)},
                {"sup", e.sup},
                {"lower_bound_only", e.lower_bound_only}};
}

inline ConstantEstimate constant_estimate_from_json(const Json& j) {
    ConstantEstimate e;
    for (const Json& c : j.at("per_ball")) e.per_ball.push_back(carleson_estimate_from_json(c));
    e.sup = j.at("sup").get<double>();
    e.lower_bound_only = j.at("lower_bound_only").get<bool>();
    return e;
}

// ---- config ----------------------------------------------------------

inline Json to_json(const SceneSpec& spec) {
    struct Visitor {
        Json operator()(const scene::TwoPoints& s) const {
            return Json{{"kind", "two_points"}, {"separation", s.separation}, {"dim", s.dim}};
        }
        Json operator()(const scene::Circle& s) const {
            return Json{{"kind", "circle"}, {"count", s.count}, {"radius", s.radius}};
        }
        Json operator()(const scene::Segment& s) const {
            return Json{{"kind", "segment"},
                        {"count", s.count},
                        {"a", to_json(s.a)},
                        {"b", to_json(s.b)}};
        }
        Json operator()(const scene::RandomCloud& s) const {
            return Json{{"kind", "random_cloud"},
                        {"count", s.count},
                        {"lo", to_json(s.lo)},
                        {"hi", to_json(s.hi)}};
        }
        Json operator()(const scene::Lattice& s) const {
            return Json{{"kind", "grid"},
                        {"per_side", s.per_side},
                        {"lo", to_json(s.lo)},
                        {"hi", to_json(s.hi)}};
        }
        Json operator()(const scene::CsvFile& s) const {
            return Json{{"kind", "csv"}, {"path", s.path}};
        }
    };
    return std::visit(Visitor{}, spec);
}

inline SceneSpec scene_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "two_points") {
        scene::TwoPoints s;
        if (j.contains("separation")) s.separation = j.at("separation").get<double>();
        if (j.contains("dim")) s.dim = j.at("dim").get<std::size_t>();
        return s;
    }
    if (kind == "circle") {
        scene::Circle s;
        if (j.contains("count")) s.count = j.at("count").get<std::size_t>();
        if (j.contains("radius")) s.radius = j.at("radius").get<double>();
        return s;
    }
    if (kind == "segment") {
        scene::Segment s;
        s.count = j.at("count").get<std::size_t>();
        s.a = point_from_json(j.at("a"));
        s.b = point_from_json(j.at("b"));
        return s;
    }
    if (kind == "random_cloud") {
        scene::RandomCloud s;
        if (j.contains("count")) s.count = j.at("count").get<std::size_t>();
        s.lo = point_from_json(j.at("lo"));
        s.hi = point_from_json(j.at("hi"));
        return s;
    }
    if (kind == "grid") {
        scene::Lattice s;
        if (j.contains("per_side")) s.per_side = j.at("per_side").get<std::size_t>();
        s.lo = point_from_json(j.at("lo"));
        s.hi = point_from_json(j.at("hi"));
        return s;
    }
    if (kind == "csv") {
        return scene::CsvFile{j.at("path").get<std::string>()};
    }
    throw std::invalid_argument("unknown scene kind: " + kind);
}

inline Json to_json(const LatticeSpec& s) {
    return Json{{"lo", to_json(s.lo)},
                {"hi", to_json(s.hi)},
                {"top_radius", s.top_radius},
                {"octaves", s.octaves}};
}

inline LatticeSpec lattice_from_json(const Json& j) {
    LatticeSpec s;
    s.lo = point_from_json(j.at("lo"));
    s.hi = point_from_json(j.at("hi"));
    s.top_radius = j.at("top_radius").get<double>();
    s.octaves = j.at("octaves").get<std::size_t>();
    s.validate();
    return s;
}

inline Json to_json(const BallFamily& family) {
    if (const auto* list = std::get_if<std::vector<Ball>>(&family)) {
        Json balls = Json::array();
        for (const Ball& b : *list) balls.push_back(to_json(b));
        return Json{{"kind", "explicit"}, {"balls", std::move(balls)}};
    }
    const LatticeSpec& s = std::get<LatticeSpec>(family);
    return Json{{"kind", "lattice"},
                {"lo", to_json(s.lo)},
                {"hi", to_json(s.hi)},
                {"top_radius", s.top_radius},
                {"octaves", s.octaves}};
}

inline BallFamily family_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "explicit") {
        std::vector<Ball> balls;
        for (const Json& b : j.at("balls")) balls.push_back(ball_from_json(b));
        return balls;
    }
    if (kind == "lattice") return lattice_from_json(j);
    throw std::invalid_argument("unknown ball family kind: " + kind);
}

inline Json to_json(const CarlesonConfig& c) {
    return Json{{"enabled", c.enabled},
                {"octaves", c.octaves},
                {"per_octave", c.per_octave},
                {"samples_per_slice", c.samples_per_slice},
                {"max_balls", c.max_balls}};
}

inline CarlesonConfig carleson_config_from_json(const Json& j) {
    CarlesonConfig c;
    if (j.contains("enabled")) c.enabled = j.at("enabled").get<bool>();
    if (j.contains("octaves")) c.octaves = j.at("octaves").get<std::size_t>();
    if (j.contains("per_octave")) c.per_octave = j.at("per_octave").get<std::size_t>();
    if (j.contains("samples_per_slice")) {
        c.samples_per_slice = j.at("samples_per_slice").get<std::size_t>();
    }
    if (j.contains("max_balls")) c.max_balls = j.at("max_balls").get<std::size_t>();
    return c;
}

inline Json to_json(const OutputPaths& o) {
    return Json{{"report", o.report}, {"summary", o.summary}, {"svg", o.svg}};
}

inline OutputPaths outputs_from_json(const Json& j) {
    OutputPaths o;
    if (j.contains("report")) o.report = j.at("report").get<std::string>();
    if (j.contains("summary")) o.summary = j.at("summary").get<std::string>();
    if (j.contains("svg")) o.svg = j.at("svg").get<std::string>();
    return o;
}

inline Json to_json(const ExperimentConfig& c) {
    return Json{{"scene", to_json(c.scene)},
                {"params", to_json(c.params)},
                {"balls", to_json(c.balls)},
                {"sampling", to_json(c.sampling)},
                {"verify_fraction", c.verify_fraction},
                {"carleson", to_json(c.carleson)},
                {"seed", c.seed},
                {"outputs", to_json(c.outputs)}};
}

inline ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    if (j.contains("scene")) c.scene = scene_from_json(j.at("scene"));
    if (j.contains("params")) c.params = gparams_from_json(j.at("params"));
    if (j.contains("balls")) c.balls = family_from_json(j.at("balls"));
    if (j.contains("sampling")) c.sampling = sample_plan_from_json(j.at("sampling"));
    if (j.contains("verify_fraction")) {
        c.verify_fraction = j.at("verify_fraction").get<double>();
    }
    if (j.contains("carleson")) c.carleson = carleson_config_from_json(j.at("carleson"));
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("outputs")) c.outputs = outputs_from_json(j.at("outputs"));
    return c;
}

// ---- report ----------------------------------------------------------

inline Json to_json(const ConsistencyRecord& r) {
    return Json{{"certificate", to_json(r.certificate)},
                {"margin", r.margin},
                {"consistent", r.consistent}};
}

inline ConsistencyRecord consistency_from_json(const Json& j) {
    ConsistencyRecord r;
    r.certificate = certificate_from_json(j.at("certificate"));
    r.margin = j.at("margin").get<double>();
    r.consistent = j.at("consistent").get<bool>();
    return r;
}

inline Json to_json(const BallRecord& r) {
    Json j{{"index", r.index},
           {"membership", to_json(r.membership)},
           {"consistency", nullptr}};
    if (r.consistency) j["consistency"] = to_json(*r.consistency);
    return j;
}

inline BallRecord ball_record_from_json(const Json& j) {
    BallRecord r;
    r.index = j.at("index").get<std::size_t>();
    r.membership = membership_from_json(j.at("membership"));
    if (!j.at("consistency").is_null()) {
        r.consistency = consistency_from_json(j.at("consistency"));
    }
    return r;
}

inline Json to_json(const Summary& s) {
    Json j{{"balls_tested", s.balls_tested},
           {"flagged", s.flagged},
           {"verified", s.verified},
           {"violations", s.violations},
           {"max_constant", nullptr}};
    if (s.max_constant) j["max_constant"] = *s.max_constant;
    return j;
}

inline Summary summary_from_json(const Json& j) {
    Summary s;
    s.balls_tested = j.at("balls_tested").get<std::size_t>();
    s.flagged = j.at("flagged").get<std::size_t>();
    s.verified = j.at("verified").get<std::size_t>();
    s.violations = j.at("violations").get<std::size_t>();
    if (!j.at("max_constant").is_null()) {
        s.max_constant = j.at("max_constant").get<double>();
    }
    return s;
}

inline Json to_json(const Report& r) {
    Json balls = Json::array();
    for (const BallRecord& b : r.balls) balls.push_back(to_json(b));
    Json j{{"schema_version", r.schema_version},
           {"tool_version", r.tool_version},
           {"config", to_json(r.config)},
           {"balls", std::move(balls)},
           {"carleson", nullptr},
           {"summary", to_json(r.summary)},
           {"runtime", Json{{"wall_clock_seconds", r.wall_clock_seconds}}}};
    if (r.carleson) j["carleson"] = to_json(*r.carleson);
    return j;
}

inline Report report_from_json(const Json& j) {
    Report r;
    r.schema_version = j.at("schema_version").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config = config_from_json(j.at("config"));
    for (const Json& b : j.at("balls")) r.balls.push_back(ball_record_from_json(b));
    if (!j.at("carleson").is_null()) {
        r.carleson = constant_estimate_from_json(j.at("carleson"));
    }
    r.summary = summary_from_json(j.at("summary"));
    r.wall_clock_seconds = j.at("runtime").at("wall_clock_seconds").get<double>();
    return r;
}

/// Report text with the timing subtree dropped; two runs of the same config
/// and seed must agree on this byte-for-byte.
inline std::string deterministic_dump(const Report& r) {
    Json j = to_json(r);
    j.erase("runtime");
    return j.dump(2) + "\n";
}

inline void write_report(const Report& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_json(r).dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline Report read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    Json j = Json::parse(in);
    return report_from_json(j);
}

inline ExperimentConfig read_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    Json j = Json::parse(in);
    return config_from_json(j);
}

/// Per-ball summary table for plotting: one row per tested ball.
inline std::string summary_csv(const Report& r) {
    std::string out =
        "index,center0,center1,radius,dist,near_count,max_angle,threshold,in_g,"
        "verified,consistent,residual\n";
    for (const BallRecord& rec : r.balls) {
        const Ball& b = rec.membership.ball;
        out += std::to_string(rec.index);
        out += ',';
        out += format_double(b.center[0]);
        out += ',';
        out += b.dim() > 1 ? format_double(b.center[1]) : std::string("");
        out += ',';
        out += format_double(b.radius);
        out += ',';
        out += format_double(rec.membership.dist);
        out += ',';
        out += std::to_string(rec.membership.near_count);
        out += ',';
        out += format_double(rec.membership.max_angle);
        out += ',';
        out += format_double(rec.membership.threshold);
        out += ',';
        out += rec.membership.in_g ? '1' : '0';
        out += ',';
        out += rec.consistency ? '1' : '0';
        out += ',';
        out += rec.consistency ? (rec.consistency->consistent ? "1" : "0") : "";
        out += ',';
        out += rec.consistency ? format_double(rec.consistency->certificate.fit.residual)
                               : std::string("");
        out += '\n';
    }
    return out;
}

inline void write_summary_csv(const Report& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << summary_csv(r);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace medax
