#include "surfmink/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace surfmink {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end != tok.c_str() && *end == '\0';
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TriMesh parse_off(const std::vector<std::string>& lines, const std::string& path) {
    size_t ln = 0;
    auto next = [&]() -> std::string {
        while (ln < lines.size()) {
            std::string s = trim(lines[ln++]);
            if (!s.empty() && s[0] != '#') return s;
        }
        throw ParseError(path + ": unexpected end of file at line " + std::to_string(ln));
    };

    if (next() != "OFF") throw ParseError(path + ": missing OFF header on line 1");
    std::istringstream counts(next());
    long nv = 0, nf = 0, ne = 0;
    if (!(counts >> nv >> nf >> ne) || nv < 3 || nf < 1) {
        throw ParseError(path + ": bad counts on line " + std::to_string(ln));
    }

    TriMesh mesh;
    mesh.vertices.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        std::istringstream row(next());
        double x, y, z;
        if (!(row >> x >> y >> z)) {
            throw ParseError(path + ": bad vertex on line " + std::to_string(ln));
        }
        mesh.vertices.push_back({x, y, z});
    }
    for (long i = 0; i < nf; ++i) {
        std::istringstream row(next());
        int k, a, b, c;
        if (!(row >> k >> a >> b >> c) || k != 3) {
            throw ParseError(path + ": expected a triangle on line " + std::to_string(ln));
        }
        if (a < 0 || b < 0 || c < 0 || a >= nv || b >= nv || c >= nv) {
            throw ParseError(path + ": vertex index out of range on line " +
                             std::to_string(ln));
        }
        mesh.faces.push_back({a, b, c});
    }
    return mesh;
}

TriMesh parse_obj(const std::vector<std::string>& lines, const std::string& path) {
    TriMesh mesh;
    std::vector<Vec3> file_normals;
    std::vector<int> normal_of_vertex;

    for (size_t ln = 0; ln < lines.size(); ++ln) {
        std::istringstream row(trim(lines[ln]));
        std::string tag;
        if (!(row >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(row >> x >> y >> z)) {
                throw ParseError(path + ": bad vertex on line " + std::to_string(ln + 1));
            }
            mesh.vertices.push_back({x, y, z});
            normal_of_vertex.push_back(-1);
        } else if (tag == "vn") {
            double x, y, z;
            if (!(row >> x >> y >> z)) {
                throw ParseError(path + ": bad normal on line " + std::to_string(ln + 1));
            }
            file_normals.push_back({x, y, z});
        } else if (tag == "f") {
            std::vector<std::pair<int, int>> refs; // (vertex, normal), 1-based
            std::string tok;
            while (row >> tok) {
                int v = 0, n = -1;
                size_t s1 = tok.find('/');
                try {
                    v = std::stoi(tok.substr(0, s1));
                    if (s1 != std::string::npos) {
                        size_t s2 = tok.find('/', s1 + 1);
                        if (s2 != std::string::npos && s2 + 1 < tok.size()) {
                            n = std::stoi(tok.substr(s2 + 1));
                        }
                    }
                } catch (const std::exception&) {
                    throw ParseError(path + ": bad face reference '" + tok + "' on line " +
                                     std::to_string(ln + 1));
                }
                refs.push_back({v, n});
            }
            if (refs.size() != 3) {
                throw ParseError(path + ": only triangles are supported, line " +
                                 std::to_string(ln + 1));
            }
            std::array<int, 3> tri;
            for (int k = 0; k < 3; ++k) {
                int v = refs[k].first;
                if (v < 0) v = static_cast<int>(mesh.vertices.size()) + 1 + v;
                if (v < 1 || v > static_cast<int>(mesh.vertices.size())) {
                    throw ParseError(path + ": vertex index out of range on line " +
                                     std::to_string(ln + 1));
                }
                tri[k] = v - 1;
                if (refs[k].second > 0 &&
                    refs[k].second <= static_cast<int>(file_normals.size())) {
                    normal_of_vertex[tri[k]] = refs[k].second - 1;
                }
            }
            mesh.faces.push_back(tri);
        }
    }
    if (mesh.vertices.size() < 3 || mesh.faces.empty()) {
        throw ParseError(path + ": no usable triangle data");
    }

    bool full = !normal_of_vertex.empty() &&
                std::all_of(normal_of_vertex.begin(), normal_of_vertex.end(),
                            [](int i) { return i >= 0; });
    if (full) {
        mesh.vertex_normals.reserve(mesh.vertices.size());
        for (int i : normal_of_vertex) {
            double nn = file_normals[i].norm();
            if (nn < 1e-12) throw ParseError(path + ": zero-length vertex normal");
            mesh.vertex_normals.push_back(file_normals[i] / nn);
        }
    }
    return mesh;
}

} // namespace

TriMesh load_mesh(const std::string& path) {
    std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty()) throw ParseError(path + ": empty file");

    TriMesh mesh;
    size_t dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "off" || ext == "OFF" || trim(lines[0]) == "OFF") {
        mesh = parse_off(lines, path);
    } else if (ext == "obj" || ext == "OBJ") {
        mesh = parse_obj(lines, path);
    } else {
        throw ParseError(path + ": unknown mesh format (expected .off or .obj)");
    }
    validate_closed_manifold(mesh);
    if (mesh.vertex_normals.size() != mesh.vertices.size()) {
        compute_vertex_normals(mesh);
    }
    return mesh;
}

Contour load_contour(const std::string& path) {
    std::vector<std::string> lines = split_lines(read_file(path));
    Contour contour;
    for (size_t ln = 0; ln < lines.size(); ++ln) {
        std::string s = trim(lines[ln]);
        if (s.empty() || s[0] == '#') continue;
        std::vector<std::string> toks;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                toks.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        toks.push_back(trim(cur));
        if (toks.size() != 6) {
            throw ParseError(path + ": expected 6 columns on line " + std::to_string(ln + 1));
        }
        double v[6];
        bool numeric = true;
        for (int k = 0; k < 6; ++k) numeric = numeric && parse_double(toks[k], v[k]);
        if (!numeric) {
            if (contour.points.empty() && ln < 2) continue; // header line
            throw ParseError(path + ": non-numeric value on line " + std::to_string(ln + 1));
        }
        Vec3 n(v[3], v[4], v[5]);
        if (n.norm() < 1e-12) {
            throw ParseError(path + ": zero-length normal on line " + std::to_string(ln + 1));
        }
        contour.points.push_back({v[0], v[1], v[2]});
        contour.normals.push_back(n);
    }
    if (contour.points.size() < 3) {
        throw TooFewPoints(path + ": contour has fewer than 3 points");
    }
    return contour;
}

void write_contour(const Contour& contour, const std::string& path) {
    std::ostringstream os;
    os << "x,y,z,nx,ny,nz\n";
    for (size_t i = 0; i < contour.points.size(); ++i) {
        const Vec3& p = contour.points[i];
        const Vec3& n = contour.normals[i];
        os << format_double(p.x()) << ',' << format_double(p.y()) << ','
           << format_double(p.z()) << ',' << format_double(n.x()) << ','
           << format_double(n.y()) << ',' << format_double(n.z()) << '\n';
    }
    write_file(path, os.str());
}

std::string csv_string(const ResultTable& table) {
    std::ostringstream os;
    for (const auto& [key, value] : table.metadata) {
        os << "# " << key << "=" << value << '\n';
    }
    for (size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw UsageError("csv_string: row width does not match the header");
        }
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
                os << *n;
            } else if (const auto* d = std::get_if<double>(&row[i])) {
                os << (std::isnan(*d) ? "" : format_double(*d));
            } else {
                os << std::get<std::string>(row[i]);
            }
        }
        os << '\n';
    }
    return os.str();
}

void write_csv(const ResultTable& table, const std::string& path) {
    write_file(path, csv_string(table));
}

// ---- svg ------------------------------------------------------------------

namespace {

constexpr double kPlotW = 720, kPlotH = 520;
constexpr double kMarginL = 70, kMarginR = 160, kMarginT = 30, kMarginB = 55;

const char* kPalette[] = {"#1f6fb2", "#c44e52", "#55a868", "#8172b2", "#ccb974", "#64b5cd"};

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

} // namespace

void write_loglog_svg(const std::vector<PlotSeries>& series,
                      const std::vector<SlopeGuide>& guides, const std::string& x_label,
                      const std::string& y_label, const std::string& path) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (p[0] > 0 && p[1] > 0) {
                xmin = std::min(xmin, p[0]);
                xmax = std::max(xmax, p[0]);
                ymin = std::min(ymin, p[1]);
                ymax = std::max(ymax, p[1]);
            }
        }
    }
    if (xmin > xmax) { // nothing plottable; keep a sane frame
        xmin = 1, xmax = 10, ymin = 1, ymax = 10;
    }
    double lx0 = std::floor(std::log10(xmin)), lx1 = std::ceil(std::log10(xmax));
    double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
    if (lx1 - lx0 < 1) lx1 = lx0 + 1;
    if (ly1 - ly0 < 1) ly1 = ly0 + 1;

    double iw = kPlotW - kMarginL - kMarginR, ih = kPlotH - kMarginT - kMarginB;
    auto X = [&](double v) { return kMarginL + iw * (std::log10(v) - lx0) / (lx1 - lx0); };
    auto Y = [&](double v) { return kMarginT + ih * (ly1 - std::log10(v)) / (ly1 - ly0); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotW << "\" height=\""
       << kPlotH << "\" viewBox=\"0 0 " << kPlotW << " " << kPlotH << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame and decade grid
    os << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << iw
       << "\" height=\"" << ih << "\" fill=\"none\" stroke=\"black\"/>\n";
    char buf[64];
    for (int d = static_cast<int>(lx0); d <= static_cast<int>(lx1); ++d) {
        double x = X(std::pow(10.0, d));
        os << "<line x1=\"" << x << "\" y1=\"" << kMarginT << "\" x2=\"" << x << "\" y2=\""
           << kMarginT + ih << "\" stroke=\"#dddddd\"/>\n";
        std::snprintf(buf, sizeof buf, "1e%d", d);
        os << "<text x=\"" << x << "\" y=\"" << kMarginT + ih + 18
           << "\" font-size=\"12\" text-anchor=\"middle\">" << buf << "</text>\n";
    }
    for (int d = static_cast<int>(ly0); d <= static_cast<int>(ly1); ++d) {
        double y = Y(std::pow(10.0, d));
        os << "<line x1=\"" << kMarginL << "\" y1=\"" << y << "\" x2=\"" << kMarginL + iw
           << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        std::snprintf(buf, sizeof buf, "1e%d", d);
        os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << y + 4
           << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
    }
    os << "<text x=\"" << kMarginL + iw / 2 << "\" y=\"" << kPlotH - 12
       << "\" font-size=\"13\" text-anchor=\"middle\">" << svg_escape(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kMarginT + ih / 2
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << kMarginT + ih / 2 << ")\">" << svg_escape(y_label) << "</text>\n";

    for (const auto& g : guides) {
        // y = y0 * (x / x0)^slope across the frame
        double xa = std::pow(10.0, lx0), xb = std::pow(10.0, lx1);
        double ya = g.y0 * std::pow(xa / g.x0, g.slope);
        double yb = g.y0 * std::pow(xb / g.x0, g.slope);
        os << "<line x1=\"" << X(xa) << "\" y1=\"" << Y(ya) << "\" x2=\"" << X(xb)
           << "\" y2=\"" << Y(yb)
           << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
        if (!g.label.empty()) {
            os << "<text x=\"" << X(xb) - 4 << "\" y=\"" << Y(yb) - 6
               << "\" font-size=\"11\" fill=\"#666666\" text-anchor=\"end\">"
               << svg_escape(g.label) << "</text>\n";
        }
    }

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 6];
        std::ostringstream pts;
        for (const auto& p : series[s].points) {
            if (p[0] > 0 && p[1] > 0) pts << X(p[0]) << ',' << Y(p[1]) << ' ';
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
           << pts.str() << "\"/>\n";
        for (const auto& p : series[s].points) {
            if (p[0] > 0 && p[1] > 0) {
                os << "<circle cx=\"" << X(p[0]) << "\" cy=\"" << Y(p[1])
                   << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
        }
        double ly = kMarginT + 16 + 18 * s;
        os << "<line x1=\"" << kMarginL + iw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
           << kMarginL + iw + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kMarginL + iw + 40 << "\" y=\"" << ly
           << "\" font-size=\"12\">" << svg_escape(series[s].label) << "</text>\n";
    }
    os << "</svg>\n";
    write_file(path, os.str());
}

// ---- config ---------------------------------------------------------------

Config Config::parse(const std::string& text) {
    Config c;
    std::vector<std::string> lines = split_lines(text);
    for (size_t ln = 0; ln < lines.size(); ++ln) {
        std::string s = lines[ln];
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(ln + 1) +
                             " is not a key = value pair: '" + s + "'");
        }
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("config line " + std::to_string(ln + 1) + " has an empty key");
        }
        c.kv_[key] = value;
    }
    return c;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string Config::get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw UsageError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    double v;
    if (!parse_double(it->second, v)) {
        throw UsageError("config key '" + key + "' is not a number: '" + it->second + "'");
    }
    return v;
}

int Config::get_int(const std::string& key, int fallback) const {
    double v = get_double(key, fallback);
    int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9) {
        throw UsageError("config key '" + key + "' is not an integer");
    }
    return i;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<int> out;
    for (const std::string& tok : split_list(it->second)) {
        double v;
        if (!parse_double(tok, v)) {
            throw UsageError("config key '" + key + "' has a non-numeric entry '" + tok + "'");
        }
        out.push_back(static_cast<int>(std::llround(v)));
    }
    if (out.empty()) throw UsageError("config key '" + key + "' is an empty list");
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> out;
    for (const std::string& tok : split_list(it->second)) {
        double v;
        if (!parse_double(tok, v)) {
            throw UsageError("config key '" + key + "' has a non-numeric entry '" + tok + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("config key '" + key + "' is an empty list");
    return out;
}

std::uint64_t config_hash(const Config& config) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [key, value] : config.entries()) {
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    return h;
}

} // namespace surfmink
