#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "medax/csv.hpp"
#include "medax/experiment.hpp"
#include "medax/scenes.hpp"
#include "medax/site_set.hpp"

namespace medax {

namespace detail {

struct SvgFrame {
    double min_x = 0.0, min_y = 0.0, scale = 1.0;
    double width = 800.0, height = 800.0, pad = 40.0;

    double x(double wx) const { return pad + (wx - min_x) * scale; }
    double y(double wy) const { return height - pad - (wy - min_y) * scale; }
};

inline void svg_circle(std::string& out, const SvgFrame& f, const Point& c, double r,
                       const char* cls) {
    out += "  <circle class=\"";
    out += cls;
    out += "\" cx=\"" + format_double(f.x(c[0])) + "\" cy=\"" + format_double(f.y(c[1])) +
           "\" r=\"" + format_double(r * f.scale) + "\"/>\n";
}

}  // namespace detail

/// Static figure for a two-dimensional report: sites as dots, tested balls
/// as outline circles, balls in G highlighted (class "flagged"), and the
/// perpendicular bisector drawn when the scene has exactly two sites.
inline std::string svg_document(const Report& report, const SiteSet& sites) {
    if (sites.dim() != 2) {
        throw std::invalid_argument("svg_document: only dimension 2 is supported");
    }

    double min_x = sites.site(0)[0], max_x = min_x;
    double min_y = sites.site(0)[1], max_y = min_y;
    const auto grow = [&](double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    };
    for (const Point& s : sites.sites()) grow(s[0], s[1]);
    for (const BallRecord& rec : report.balls) {
        const Ball& b = rec.membership.ball;
        grow(b.center[0] - b.radius, b.center[1] - b.radius);
        grow(b.center[0] + b.radius, b.center[1] + b.radius);
    }
    if (max_x - min_x <= 0.0) max_x = min_x + 1.0;
    if (max_y - min_y <= 0.0) max_y = min_y + 1.0;

    detail::SvgFrame f;
    f.min_x = min_x;
    f.min_y = min_y;
    f.scale = std::min((f.width - 2.0 * f.pad) / (max_x - min_x),
                       (f.height - 2.0 * f.pad) / (max_y - min_y));

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           format_double(f.width) + "\" height=\"" + format_double(f.height) +
           "\" viewBox=\"0 0 " + format_double(f.width) + " " + format_double(f.height) +
           "\">\n";
    out +=
        "  <style>\n"
        "    .ball { fill: none; stroke: #9aa0a6; stroke-width: 1; }\n"
        "    .flagged { fill: rgba(211,47,47,0.08); stroke: #d32f2f; stroke-width: 1.5; }\n"
        "    .site { fill: #1a237e; stroke: none; }\n"
        "    .bisector { stroke: #388e3c; stroke-width: 1; stroke-dasharray: 6 4; }\n"
        "  </style>\n";
    out += "  <rect width=\"" + format_double(f.width) + "\" height=\"" +
           format_double(f.height) + "\" fill=\"white\"/>\n";

    for (const BallRecord& rec : report.balls) {
        if (!rec.membership.in_g) {
            detail::svg_circle(out, f, rec.membership.ball.center,
                               rec.membership.ball.radius, "ball");
        }
    }
    for (const BallRecord& rec : report.balls) {
        if (rec.membership.in_g) {
            detail::svg_circle(out, f, rec.membership.ball.center,
                               rec.membership.ball.radius, "flagged");
        }
    }

    if (sites.size() == 2 && !(sites.site(0) == sites.site(1))) {
        const Point& a = sites.site(0);
        const Point& b = sites.site(1);
        const Point mid = (a + b) * 0.5;
        const Point axis = b - a;
        // Perpendicular direction, stretched past the frame on both sides.
        const double len = norm(axis);
        const double px = -axis[1] / len, py = axis[0] / len;
        const double reach = 2.0 * std::hypot(max_x - min_x, max_y - min_y);
        out += "  <line class=\"bisector\" x1=\"" +
               format_double(f.x(mid[0] - reach * px)) + "\" y1=\"" +
               format_double(f.y(mid[1] - reach * py)) + "\" x2=\"" +
               format_double(f.x(mid[0] + reach * px)) + "\" y2=\"" +
               format_double(f.y(mid[1] + reach * py)) + "\"/>\n";
    }

    for (const Point& s : sites.sites()) {
        out += "  <circle class=\"site\" cx=\"" + format_double(f.x(s[0])) + "\" cy=\"" +
               format_double(f.y(s[1])) + "\" r=\"3\"/>\n";
    }

    out += "</svg>\n";
    return out;
}

inline void render_svg(const Report& report, const SiteSet& sites, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << svg_document(report, sites);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Regenerates the scene from the report's config echo.
inline void render_svg(const Report& report, const std::string& path) {
    const SiteSet sites = generate_scene(report.config.scene,
                                         derive_seed(report.config.seed, stream::kScene));
    render_svg(report, sites, path);
}

}  // namespace medax
