#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "surfmink/tri_mesh.hpp"

namespace surfmink {

// Reads an OFF or Wavefront OBJ triangle mesh (chosen by file extension),
// validates closed manifoldness and computes vertex normals unless the file
// supplied a full set. ParseError messages carry the line number.
TriMesh load_mesh(const std::string& path);

struct Contour {
    std::vector<Vec3> points;
    std::vector<Vec3> normals;
};

// CSV contour with columns x,y,z,nx,ny,nz; a header line is optional.
// Zero-length normals are rejected with the offending row named.
Contour load_contour(const std::string& path);
void write_contour(const Contour& contour, const std::string& path);

// Tabular experiment output. Cells keep their type so the writer can format
// floats at full precision (17 significant digits). Metadata entries become
// leading comment lines; rewriting the same table yields identical bytes.
struct ResultTable {
    using Cell = std::variant<std::int64_t, double, std::string>;

    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::map<std::string, std::string> metadata;
};

std::string csv_string(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);

// One curve in a log-log plot.
struct PlotSeries {
    std::string label;
    std::vector<std::array<double, 2>> points; // (x, y), both positive
};

// Dashed reference line of the given slope anchored at a point.
struct SlopeGuide {
    double slope = 1.0;
    double x0 = 1.0;
    double y0 = 1.0;
    std::string label;
};

// Minimal self-contained SVG log-log chart with decade ticks. Degenerate
// input (no series, or non-positive values dropped to nothing) still
// produces a valid plot frame.
void write_loglog_svg(const std::vector<PlotSeries>& series,
                      const std::vector<SlopeGuide>& guides, const std::string& x_label,
                      const std::string& y_label, const std::string& path);

// Flat key = value configuration text ('#' starts a comment). Later
// assignments win; lookups of missing keys without a default throw
// UsageError.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

// FNV-1a over the canonical (sorted key=value) form: stable across key
// order in the file, different whenever any field differs.
std::uint64_t config_hash(const Config& config);

} // namespace surfmink
