#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "medax/point.hpp"
#include "medax/site_set.hpp"

namespace medax {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] inline void parse_fail(const std::string& source, std::size_t line,
                                    const std::string& what) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Parses point rows from CSV text: one point per line, comma-separated
/// coordinates, '#' lines and blank lines skipped. Column count is inferred
/// from the first data row and enforced afterwards. `source` labels errors.
inline std::vector<Point> parse_points_text(std::string_view text,
                                            const std::string& source = "<string>") {
    std::vector<Point> points;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;

        std::vector<double> coords;
        std::size_t field_start = 0;
        while (true) {
            const std::size_t comma = line.find(',', field_start);
            std::string_view field = (comma == std::string_view::npos)
                                         ? line.substr(field_start)
                                         : line.substr(field_start, comma - field_start);
            field = detail::trim(field);
            if (field.empty()) {
                detail::parse_fail(source, line_no, "empty field");
            }
            double value = 0.0;
            const auto [ptr, ec] =
                std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                detail::parse_fail(source, line_no,
                                   "invalid number '" + std::string(field) + "'");
            }
            if (!std::isfinite(value)) {
                detail::parse_fail(source, line_no,
                                   "non-finite value '" + std::string(field) + "'");
            }
            coords.push_back(value);
            if (comma == std::string_view::npos) break;
            field_start = comma + 1;
        }

        if (width == 0) {
            width = coords.size();
        } else if (coords.size() != width) {
            detail::parse_fail(source, line_no,
                               "expected " + std::to_string(width) + " columns, got " +
                                   std::to_string(coords.size()));
        }
        points.push_back(Point(std::move(coords)));
    }
    return points;
}

inline std::vector<Point> parse_points_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_points_text(buf.str(), path);
}

inline SiteSet read_points(const std::string& path) {
    return SiteSet(parse_points_file(path));
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: to_chars failed");
    }
    return std::string(buf, ptr);
}

inline std::string points_to_csv(std::span<const Point> points) {
    std::string out;
    for (const Point& p : points) {
        for (std::size_t i = 0; i < p.dim(); ++i) {
            if (i > 0) out += ',';
            out += format_double(p[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_points(const std::string& path, std::span<const Point> points) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << points_to_csv(points);
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

inline void write_points(const std::string& path, const SiteSet& sites) {
    write_points(path, sites.sites());
}

}  // namespace medax
