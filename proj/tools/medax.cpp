// medax: detect near-medial-axis balls, certify coarse differentiability,
// and estimate Carleson constants for finite site sets.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "medax/medax.hpp"

namespace {

using medax::Json;

struct SceneFlags {
    std::string kind;
    double separation = 2.0;
    std::size_t dim = 2;
    std::size_t count = 16;
    double scene_radius = 1.0;
    std::string a, b, lo, hi;
    std::size_t per_side = 10;
    std::string csv;
};

medax::Point parse_point_flag(const std::string& text, const std::string& flag) {
    const std::vector<medax::Point> pts = medax::parse_points_text(text, flag);
    if (pts.size() != 1) {
        throw CLI::ValidationError(flag, "expected one comma-separated point");
    }
    return pts[0];
}

medax::SceneSpec scene_from_flags(const SceneFlags& f) {
    if (f.kind == "two_points") return medax::scene::TwoPoints{f.separation, f.dim};
    if (f.kind == "circle") return medax::scene::Circle{f.count, f.scene_radius};
    if (f.kind == "segment") {
        return medax::scene::Segment{f.count, parse_point_flag(f.a, "--a"),
                                     parse_point_flag(f.b, "--b")};
    }
    if (f.kind == "random_cloud") {
        return medax::scene::RandomCloud{f.count, parse_point_flag(f.lo, "--lo"),
                                         parse_point_flag(f.hi, "--hi")};
    }
    if (f.kind == "grid") {
        return medax::scene::Lattice{f.per_side, parse_point_flag(f.lo, "--lo"),
                                     parse_point_flag(f.hi, "--hi")};
    }
    if (f.kind == "csv") return medax::scene::CsvFile{f.csv};
    throw CLI::ValidationError("--scene", "unknown scene kind '" + f.kind + "'");
}

void add_scene_flags(CLI::App* cmd, SceneFlags& f) {
    cmd->add_option("--scene", f.kind,
                    "Scene kind: two_points|circle|segment|random_cloud|grid|csv");
    cmd->add_option("--separation", f.separation, "two_points: site separation");
    cmd->add_option("--dim", f.dim, "two_points: ambient dimension");
    cmd->add_option("--count", f.count, "circle/segment/random_cloud: site count");
    cmd->add_option("--scene-radius", f.scene_radius, "circle: radius");
    cmd->add_option("--a", f.a, "segment: first endpoint, comma-separated");
    cmd->add_option("--b", f.b, "segment: second endpoint, comma-separated");
    cmd->add_option("--lo", f.lo, "random_cloud/grid: box corner, comma-separated");
    cmd->add_option("--hi", f.hi, "random_cloud/grid: opposite corner, comma-separated");
    cmd->add_option("--per-side", f.per_side, "grid: sites per side");
    cmd->add_option("--sites", f.csv, "csv: path to a point CSV file");
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "medax: medial-axis proximity detection for finite site sets.\n"
        "Determinism contract: with identical inputs, flags, and --seed, every\n"
        "output is byte-identical across runs, machines, and thread counts\n"
        "(the report's runtime section excepted). RNG substreams derive from\n"
        "(--seed, ball index, slice index), so results do not depend on\n"
        "worker scheduling."};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    double eps = 0.0;
    double delta = 0.1;
    std::size_t scales = 12;
    std::size_t samples = 0;
    std::size_t threads = 0;
    app.add_option("--config", config_path, "Experiment config JSON; explicit flags override it")
        ->envname("MEDAX_CONFIG");
    auto* seed_opt = app.add_option(
        "--seed", seed, "Root RNG seed; all randomness derives from it (bit-exact)");
    auto* eps_opt =
        app.add_option("--eps", eps, "Near-minimizer slack: sites within d(x,K)+eps*r count");
    auto* delta_opt = app.add_option(
        "--delta", delta, "Coarse-differentiability level; requires 2*delta+eps < 1");
    auto* scales_opt = app.add_option(
        "--scales", scales, "Carleson octaves J: radii span (L*2^-J, L], 4 slices per octave");
    auto* samples_opt = app.add_option(
        "--samples", samples,
        "Monte Carlo points per Carleson slice / fit sample size (0 = dense default)");
    app.add_option("--threads", threads, "Worker threads (default: MEDAX_THREADS or hardware)");

    SceneFlags scene_flags;

    auto* gen = app.add_subcommand("gen-scene", "Generate a site set and write it as CSV");
    std::string gen_out;
    add_scene_flags(gen, scene_flags);
    gen->add_option("--out", gen_out, "Output CSV path (default: stdout)");

    auto* detect = app.add_subcommand(
        "detect", "Decide G membership (near-medial-axis flag) for one ball");
    std::string ball_center = "0,0";
    double ball_radius = 0.5;
    std::string detect_out;
    add_scene_flags(detect, scene_flags);
    detect->add_option("--center", ball_center, "Ball center, comma-separated");
    detect->add_option("--radius", ball_radius, "Ball radius");
    detect->add_option("--out", detect_out, "Output JSON path (default: stdout)");

    auto* verify = app.add_subcommand(
        "verify",
        "Check one ball's G verdict against a minimax affine fit of the distance "
        "function (exit 2 when inconsistent)");
    double margin = 0.05;
    std::string verify_out;
    add_scene_flags(verify, scene_flags);
    verify->add_option("--center", ball_center, "Ball center, comma-separated");
    verify->add_option("--radius", ball_radius, "Ball radius");
    verify->add_option("--margin", margin, "Residual cutoff margin in delta*r units");
    verify->add_option("--out", verify_out, "Output JSON path (default: stdout)");

    auto* carleson = app.add_subcommand(
        "carleson", "Estimate the Carleson constant of G over a ball family");
    std::size_t per_octave = 4;
    std::string carleson_out;
    add_scene_flags(carleson, scene_flags);
    carleson->add_option("--center", ball_center, "Top ball center, comma-separated");
    carleson->add_option("--radius", ball_radius, "Top ball radius");
    carleson->add_option("--per-octave", per_octave, "Slices per octave");
    carleson->add_option("--out", carleson_out, "Output JSON path (default: stdout)");

    auto* render = app.add_subcommand("render", "Render a report as SVG (k = 2 scenes)");
    std::string report_path, render_out;
    render->add_option("--report", report_path, "Report JSON path")->required();
    render->add_option("--out", render_out, "Output SVG path")->required();

    auto* run = app.add_subcommand(
        "run", "Full pipeline: detect over a ball family, verify, estimate, write report");
    std::string run_report_out, run_summary_out, run_svg_out;
    run->add_option("--report-out", run_report_out, "Write the report JSON here");
    run->add_option("--summary-out", run_summary_out, "Write the per-ball summary CSV here");
    run->add_option("--svg-out", run_svg_out, "Write the rendered SVG here");

    for (CLI::App* sub : {gen, detect, verify, carleson, render, run}) {
        sub->fallthrough();  // global flags (--seed, --eps, ...) after the subcommand
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (threads > 0) {
            setenv("MEDAX_THREADS", std::to_string(threads).c_str(), 1);
        }

        medax::ExperimentConfig config;
        if (!config_path.empty()) config = medax::read_config(config_path);
        if (seed_opt->count() > 0 || config_path.empty()) config.seed = seed;
        if (eps_opt->count() > 0 || config_path.empty()) config.params.eps = eps;
        if (delta_opt->count() > 0 || config_path.empty()) config.params.delta = delta;
        if (scales_opt->count() > 0) config.carleson.octaves = scales;
        if (samples_opt->count() > 0) {
            config.carleson.samples_per_slice = samples > 0 ? samples : 4096;
            config.sampling.n = samples;
        }
        if (scene_flags.kind.empty()) {
            if (config_path.empty()) config.scene = medax::scene::TwoPoints{};
        } else {
            config.scene = scene_from_flags(scene_flags);
        }
        config.params.validate();

        const auto make_sites = [&] {
            return medax::generate_scene(
                config.scene, medax::derive_seed(config.seed, medax::stream::kScene));
        };

        if (app.got_subcommand(gen)) {
            const medax::SiteSet sites = make_sites();
            if (gen_out.empty() || gen_out == "-") {
                std::cout << medax::points_to_csv(sites.sites());
            } else {
                medax::write_points(gen_out, sites);
            }
            return 0;
        }

        if (app.got_subcommand(detect)) {
            const medax::SiteSet sites = make_sites();
            const medax::Point center = parse_point_flag(ball_center, "--center");
            const medax::GMembership mem =
                medax::in_G(center, ball_radius, sites, config.params);
            emit(medax::to_json(mem), detect_out);
            return 0;
        }

        if (app.got_subcommand(verify)) {
            const medax::SiteSet sites = make_sites();
            const medax::Point center = parse_point_flag(ball_center, "--center");
            const medax::Ball ball(center, ball_radius);
            medax::SamplePlan plan =
                config.sampling.n > 0 ? config.sampling : medax::dense_plan(sites.dim(), 0);
            plan.seed = medax::derive_seed(config.seed, medax::stream::kVerify, 0);
            const medax::ConsistencyResult res =
                medax::verify_consistency(sites, ball, config.params, plan, margin);
            Json j{{"membership", medax::to_json(res.membership)},
                   {"certificate", medax::to_json(res.certificate)},
                   {"margin", res.margin},
                   {"consistent", res.consistent}};
            emit(j, verify_out);
            return res.consistent ? 0 : 2;
        }

        if (app.got_subcommand(carleson)) {
            const medax::SiteSet sites = make_sites();
            std::vector<medax::Ball> balls;
            if (const auto* list = std::get_if<std::vector<medax::Ball>>(&config.balls);
                list && !list->empty() && carleson->get_option("--center")->count() == 0) {
                balls = *list;
            } else {
                balls.push_back(
                    medax::Ball(parse_point_flag(ball_center, "--center"), ball_radius));
            }
            const auto oracle = [&](const medax::Point& x, double r) {
                return medax::in_G(x, r, sites, config.params).in_g;
            };
            const medax::ConstantEstimate est = medax::estimate_constant(
                oracle, balls, config.carleson.octaves, per_octave,
                config.carleson.samples_per_slice,
                medax::derive_seed(config.seed, medax::stream::kCarleson));
            emit(medax::to_json(est), carleson_out);
            return 0;
        }

        if (app.got_subcommand(render)) {
            const medax::Report report = medax::read_report(report_path);
            medax::render_svg(report, render_out);
            return 0;
        }

        if (app.got_subcommand(run)) {
            if (!run_report_out.empty()) config.outputs.report = run_report_out;
            if (!run_summary_out.empty()) config.outputs.summary = run_summary_out;
            if (!run_svg_out.empty()) config.outputs.svg = run_svg_out;

            const medax::Report report = medax::run_experiment(config);
            if (!config.outputs.report.empty()) {
                medax::write_report(report, config.outputs.report);
            }
            if (!config.outputs.summary.empty()) {
                medax::write_summary_csv(report, config.outputs.summary);
            }
            if (!config.outputs.svg.empty()) {
                medax::render_svg(report, config.outputs.svg);
            }
            std::cerr << "balls=" << report.summary.balls_tested
                      << " flagged=" << report.summary.flagged
                      << " verified=" << report.summary.verified
                      << " violations=" << report.summary.violations;
            if (report.summary.max_constant) {
                std::cerr << " max_constant=" << *report.summary.max_constant;
            }
            std::cerr << "\n";
            if (config.outputs.report.empty()) {
                emit(medax::to_json(report), "");
            }
            return medax::exit_code_for(report);
        }
    } catch (const std::exception& e) {
        std::cerr << "medax: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
