#include "nlv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nlv/error.hpp"

namespace nlv {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw ConfigError("format_double: conversion failed");
    return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view context) {
    text = trim(text);
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError(std::string(context) + ": '" + std::string(text) + "' is not a number");
    }
    return v;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text, std::string_view source) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
        }
        out.emplace_back(std::string(key), std::string(value));
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw ConfigError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

std::string nearest_key(std::string_view key, const std::vector<std::string>& candidates) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& c : candidates) {
        std::vector<std::size_t> prev(c.size() + 1), cur(c.size() + 1);
        for (std::size_t j = 0; j <= c.size(); ++j) prev[j] = j;
        for (std::size_t i = 1; i <= key.size(); ++i) {
            cur[0] = i;
            for (std::size_t j = 1; j <= c.size(); ++j) {
                const std::size_t sub = prev[j - 1] + (key[i - 1] == c[j - 1] ? 0 : 1);
                cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            }
            std::swap(prev, cur);
        }
        if (prev[c.size()] < best_d) {
            best_d = prev[c.size()];
            best = c;
        }
    }
    if (best_d > std::max<std::size_t>(3, key.size() / 2)) return {};
    return best;
}

std::string format_field_csv(const Field& g1, const Field* g2) {
    if (g2) require_same_grid(g1.grid(), g2->grid(), "format_field_csv");
    std::string out = g2 ? "x,g1,g2\n" : "x,g1\n";
    const Grid& grid = g1.grid();
    for (std::size_t i = 0; i < grid.n(); ++i) {
        out += format_double(grid.node(i));
        out += ',';
        out += format_double(g1[i]);
        if (g2) {
            out += ',';
            out += format_double((*g2)[i]);
        }
        out += '\n';
    }
    return out;
}

FieldTable parse_field_csv(std::string_view text) {
    FieldTable t;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line_no == 1) {
            if (line == "x,g1") {
                columns = 2;
            } else if (line == "x,g1,g2") {
                columns = 3;
                t.g2.emplace();
            } else {
                throw ConfigError("field CSV: unexpected header '" + std::string(line) + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(parse_double(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                            : comma - start),
                                         "field CSV line " + std::to_string(line_no)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cells.size() != columns) {
            throw ConfigError("field CSV line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                              " columns");
        }
        t.x.push_back(cells[0]);
        t.g1.push_back(cells[1]);
        if (columns == 3) t.g2->push_back(cells[2]);
    }
    if (columns == 0) throw ConfigError("field CSV: missing header");
    return t;
}

void emit_field_csv(const std::filesystem::path& path, const Field& g1, const Field* g2) {
    write_text_file(path, format_field_csv(g1, g2));
}

namespace {

std::string fixed(double v) {
    // Coordinates rounded to 0.01 px keep the SVG small and byte-stable.
    const double r = std::round(v * 100.0) / 100.0;
    return format_double(r == 0.0 ? 0.0 : r);
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string format_svg_plot(const PlotSpec& plot) {
    constexpr double width = 640.0, height = 400.0;
    constexpr double left = 60.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool any = false;
    for (const auto& s : plot.series) {
        if (s.x.size() != s.y.size()) throw InvalidArgument("plot series '" + s.label + "': x and y sizes differ");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                throw InvalidArgument("plot series '" + s.label + "' contains a non-finite value");
            }
            if (!any) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                any = true;
            }
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    y_lo = std::min(y_lo, 0.0);
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) y_hi = y_lo + 1.0;
    y_hi += 0.05 * (y_hi - y_lo);

    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
      << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fixed(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape_xml(plot.title) << "</text>\n";
    // axes
    o << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(left + pw) << "\" y2=\""
      << fixed(top + ph) << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
      << fixed(top + ph) << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * k / 4.0;
        o << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\" "
          << "font-family=\"sans-serif\" font-size=\"11\">" << format_double(std::round(xv * 1e4) / 1e4) << "</text>\n";
        o << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\" "
          << "font-family=\"sans-serif\" font-size=\"11\">" << format_double(std::round(yv * 1e4) / 1e4) << "</text>\n";
    }
    o << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(height - 10) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(plot.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 16 " << fixed(top + ph / 2) << ")\">" << escape_xml(plot.y_label)
      << "</text>\n";

    double legend_y = top + 14;
    for (const auto& s : plot.series) {
        o << "<polyline fill=\"none\" stroke=\"" << escape_xml(s.color) << "\" stroke-width=\"2\"";
        if (s.dashed) o << " stroke-dasharray=\"6 4\"";
        o << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) o << ' ';
            o << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i]));
        }
        o << "\"/>\n";
        o << "<text x=\"" << fixed(left + pw - 8) << "\" y=\"" << fixed(legend_y) << "\" text-anchor=\"end\" "
          << "font-family=\"sans-serif\" font-size=\"12\" fill=\"" << escape_xml(s.color) << "\">"
          << escape_xml(s.label) << "</text>\n";
        legend_y += 16;
    }
    o << "</svg>\n";
    return o.str();
}

void emit_svg_plot(const std::filesystem::path& path, const PlotSpec& plot) {
    write_text_file(path, format_svg_plot(plot));
}

PlotSpec density_plot(std::string title, const Field& g1, const Field* g2) {
    PlotSpec p;
    p.title = std::move(title);
    const std::vector<double> x = g1.grid().nodes();
    p.series.push_back(
        PlotSeries{"type 1", x, std::vector<double>(g1.values().begin(), g1.values().end()), true, "#d62728"});
    if (g2) {
        p.series.push_back(
            PlotSeries{"type 2", x, std::vector<double>(g2->values().begin(), g2->values().end()), false, "#2ca02c"});
    }
    return p;
}

}  // namespace nlv
