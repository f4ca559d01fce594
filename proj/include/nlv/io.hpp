#pragma once

// File formats: key/value configuration text, field CSV, summary JSON and
// SVG line plots. Every emitter is a deterministic function of its input.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlv/core_types.hpp"

namespace nlv {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Parses a double, rejecting trailing garbage. Throws ConfigError.
double parse_double(std::string_view text, std::string_view context);

/// `key = value` lines; `#` starts a comment; blank lines ignored.
/// Keys are dotted names such as `species1.growth.a_bar`.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text,
                                                                  std::string_view source = "<config>");

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Closest candidate by edit distance (empty when none is reasonably close).
std::string nearest_key(std::string_view key, const std::vector<std::string>& candidates);

struct FieldTable {
    std::vector<double> x;
    std::vector<double> g1;
    std::optional<std::vector<double>> g2;
};

/// Header `x,g1[,g2]`, one row per node, newline-terminated.
std::string format_field_csv(const Field& g1, const Field* g2 = nullptr);
FieldTable parse_field_csv(std::string_view text);
void emit_field_csv(const std::filesystem::path& path, const Field& g1, const Field* g2 = nullptr);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    std::string color = "#1f77b4";
};

struct PlotSpec {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "density";
    std::vector<PlotSeries> series;
};

/// Self-contained SVG line plot with labeled axes. An empty series list
/// yields axes only.
std::string format_svg_plot(const PlotSpec& plot);
void emit_svg_plot(const std::filesystem::path& path, const PlotSpec& plot);

/// Density snapshot plot: type 1 red dashed, type 2 green solid.
PlotSpec density_plot(std::string title, const Field& g1, const Field* g2 = nullptr);

}  // namespace nlv
