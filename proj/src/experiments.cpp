#include "surfmink/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

namespace surfmink {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string rank_column(const char* stem, int p) {
    return std::string(stem) + std::to_string(p);
}

} // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    if (n <= 0) return;
    int pool = std::clamp(workers, 1, n);
    if (pool == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first;
    std::mutex mutex;

    auto drain = [&]() {
        while (!failed.load()) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!first) first = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(pool - 1);
    for (int t = 0; t + 1 < pool; ++t) threads.emplace_back(drain);
    drain();
    for (auto& t : threads) t.join();
    if (first) std::rethrow_exception(first);
}

// ---- regular polygons -------------------------------------------------------

PolygonData regular_polygon(const Surface& surface, int q, double size) {
    if (q < 3) throw UsageError("regular polygons need at least 3 vertices");
    PolyChain chain;
    chain.points.reserve(q);
    if (surface.kind() == SurfaceKind::Plane) {
        for (int i = 0; i < q; ++i) {
            double t = 2.0 * kPi * i / q;
            Vec3 x(size * std::cos(t), size * std::sin(t), 0.0);
            chain.points.push_back({x, surface.normal(x)});
        }
    } else if (surface.kind() == SurfaceKind::Sphere) {
        double r = static_cast<const Sphere&>(surface).radius();
        double s = std::sin(size), c = std::cos(size);
        for (int i = 0; i < q; ++i) {
            double t = 2.0 * kPi * i / q;
            Vec3 x = r * Vec3(s * std::cos(t), s * std::sin(t), c);
            chain.points.push_back({x, surface.normal(x)});
        }
    } else {
        throw UsageError("regular polygons are defined on the plane and the sphere only");
    }
    return geodesic_polygon(chain, surface);
}

RegularPolygonStudy regular_polygon_study(const Surface& surface, const std::vector<int>& qs,
                                          const std::vector<int>& ranks, double size) {
    RegularPolygonStudy study;
    study.ranks = ranks;
    for (int q : qs) {
        PolygonData d = regular_polygon(surface, q, size);
        ShapeSpectrum sp = spectrum(d, ranks);
        RegularPolygonStudy::Row row;
        row.q = q;
        for (int p : ranks) row.mu.push_back(sp.rank(p).mu);
        study.rows.push_back(std::move(row));
    }
    return study;
}

ResultTable RegularPolygonStudy::table() const {
    ResultTable t;
    t.columns.push_back("q");
    for (int p : ranks) t.columns.push_back(rank_column("mu", p));
    for (const Row& row : rows) {
        std::vector<ResultTable::Cell> cells;
        cells.push_back(static_cast<std::int64_t>(row.q));
        for (double mu : row.mu) cells.push_back(mu);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

// ---- transport demo ---------------------------------------------------------

TransportDemo transport_demo(const Sphere& sphere) {
    double r = sphere.radius();
    PolyChain chain;
    for (const Vec3& x : {Vec3(r, 0, 0), Vec3(0, r, 0), Vec3(0, 0, r)}) {
        chain.points.push_back({x, sphere.normal(x)});
    }
    PolygonData d = geodesic_polygon(chain, sphere);

    TransportDemo demo;
    TransportMode modes[2] = {TransportMode::Parallel, TransportMode::DefectCorrected};
    for (int i = 0; i < 2; ++i) {
        TransportDemo::Row& row = demo.rows[i];
        row.mode = modes[i];
        row.closure = std::remainder(transport_angle(d, modes[i], d.total_length()), 2.0 * kPi);
        row.mu3 = components(d, 3, modes[i]).anisotropy();
        row.mu4 = components(d, 4, modes[i]).anisotropy();
    }
    return demo;
}

ResultTable TransportDemo::table() const {
    ResultTable t;
    t.columns = {"transport", "closure_angle", "mu3", "mu4"};
    for (const Row& row : rows) {
        const char* name = row.mode == TransportMode::Parallel ? "parallel" : "defect-corrected";
        t.rows.push_back({std::string(name), row.closure, row.mu3, row.mu4});
    }
    return t;
}

// ---- convergence ------------------------------------------------------------

ResultTable convergence_table(const ConvergenceReport& report) {
    bool with_angle = report.scheme == Scheme::Geodesic;
    ResultTable t;
    t.columns = {"q", "err_length", "eoc_length", "err_turning", "eoc_turning"};
    if (with_angle) {
        t.columns.push_back("err_angle");
        t.columns.push_back("eoc_angle");
    }
    t.columns.push_back("err_components");
    t.columns.push_back("eoc_components");

    for (const ConvergenceRow& row : report.rows) {
        std::vector<ResultTable::Cell> cells;
        cells.push_back(static_cast<std::int64_t>(row.q));
        cells.insert(cells.end(), {row.err_length, row.eoc_length, row.err_turning,
                                   row.eoc_turning});
        if (with_angle) cells.insert(cells.end(), {row.err_angle, row.eoc_angle});
        cells.insert(cells.end(), {row.err_components, row.eoc_components});
        t.rows.push_back(std::move(cells));
    }

    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    t.metadata["scheme"] = report.scheme == Scheme::Geodesic ? "geodesic" : "line";
    t.metadata["rank"] = std::to_string(report.rank);
    t.metadata["ref_length"] = num(report.ref_length);
    t.metadata["ref_turning"] = num(report.ref_turning);
    t.metadata["reference_drift"] = num(report.reference_drift);
    return t;
}

// ---- torus sweep ------------------------------------------------------------

std::vector<double> default_torus_angles() {
    std::vector<double> angles;
    for (int i = 0; i <= 34; ++i) angles.push_back((0.9 - 0.05 * i) * kPi);
    return angles;
}

namespace {

// Directed-edge logs of the sweep triangle: next[i] connects vertex i to
// i+1, prev[i] to i-1. Each sweep step is solved from the previous step's
// logs, so every edge follows the geodesic branch it deforms into instead
// of snapping to the shortest connection at each stop. Without the
// tracking the sweep comes out mirror-symmetric in theta2: once the moving
// vertex passes the far side of the tube, a fresh shortest-path solve
// returns the reflected triangle rather than the one whose edges keep
// winding around the tube with the vertex.
struct TriangleLogs {
    TangentVector next[3];
    TangentVector prev[3];
};

TriangleLogs solve_triangle(const Surface& s, const std::array<SurfacePoint, 3>& v,
                            const TriangleLogs* seed) {
    TriangleLogs t;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        if (seed == nullptr) {
            t.next[i] = s.log(v[i], v[j]);
            t.prev[i] = s.log(v[i], v[k]);
        } else {
            t.next[i] = s.log(v[i], v[j], seed->next[i]);
            t.prev[i] = s.log(v[i], v[k], seed->prev[i]);
        }
    }
    return t;
}

// Same conventions as geodesic_polygon: turning[i] is the turn at the end
// of side i, the fiducial frame sits at vertex 0 along the first side.
PolygonData triangle_polygon(const std::array<SurfacePoint, 3>& v, const TriangleLogs& t) {
    PolygonData d;
    d.lengths.resize(3);
    d.turning.resize(3);
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3;
        d.lengths[i] = t.next[i].norm();
        d.turning[i] = signed_angle(-t.prev[j].v, t.next[j].v, v[j].normal);
    }
    d.fiducial = frame_from_tangent(v[0], t.next[0].v);
    return d;
}

} // namespace

TorusSweep torus_sweep(const std::vector<double>& theta2_values, int workers) {
    if (theta2_values.empty()) throw UsageError("torus sweep: no theta2 values");
    auto torus = make_torus(2.0, 1.375);
    std::vector<int> ranks;
    for (int p = TorusSweep::kRankLow; p <= TorusSweep::kRankHigh; ++p) ranks.push_back(p);

    // Two vertices pinned on the inner equator, the third circles the tube.
    // The traversal orientation is fixed once, at the first stop, and kept
    // for the whole sweep; flipping mid-sweep would break branch tracking.
    bool swapped = false;
    auto vertices = [&](double theta2) -> std::array<SurfacePoint, 3> {
        SurfacePoint a = torus->at(torus->embed(0.0, kPi));
        SurfacePoint b = torus->at(torus->embed(1.55, theta2));
        SurfacePoint c = torus->at(torus->embed(3.1, kPi));
        if (swapped) std::swap(b, c);
        return {a, b, c};
    };

    double theta0 = theta2_values.front();
    TriangleLogs cur = solve_triangle(*torus, vertices(theta0), nullptr);
    if (triangle_polygon(vertices(theta0), cur).total_turning() < 0.0) {
        swapped = true;
        cur = solve_triangle(*torus, vertices(theta0), nullptr);
    }

    // March between the requested stops in tube-angle steps of at most
    // 0.05*pi so every branch-tracked solve starts close to its seed, even
    // when the caller asks for a sparse grid.
    std::vector<TriangleLogs> logs(theta2_values.size());
    logs[0] = cur;
    double at_theta = theta0;
    for (size_t i = 1; i < theta2_values.size(); ++i) {
        double target = theta2_values[i];
        int steps = std::max(1, static_cast<int>(std::ceil(std::abs(target - at_theta) /
                                                           (0.05 * kPi))));
        for (int k = 1; k <= steps; ++k) {
            double th = at_theta + (target - at_theta) * k / steps;
            cur = solve_triangle(*torus, vertices(th), &cur);
        }
        at_theta = target;
        logs[i] = cur;
    }

    TorusSweep sweep;
    sweep.rows.resize(theta2_values.size());
    parallel_for(static_cast<int>(theta2_values.size()), workers, [&](int i) {
        PolygonData d = triangle_polygon(vertices(theta2_values[i]), logs[i]);
        ShapeSpectrum sp = spectrum(d, ranks);
        TorusSweep::Row& row = sweep.rows[i];
        row.theta2 = theta2_values[i];
        for (size_t k = 0; k < ranks.size(); ++k) row.mu[k] = sp.rank(ranks[k]).mu;
        auto [amin, amax] = std::minmax_element(d.turning.begin(), d.turning.end());
        auto [lmin, lmax] = std::minmax_element(d.lengths.begin(), d.lengths.end());
        row.angle_spread = (*amax - *amin) / d.total_turning();
        row.edge_spread = *lmax - *lmin;
    });
    return sweep;
}

ResultTable TorusSweep::table() const {
    ResultTable t;
    t.columns = {"theta2", "theta2_over_pi"};
    for (int p = kRankLow; p <= kRankHigh; ++p) t.columns.push_back(rank_column("mu", p));
    t.columns.push_back("angle_spread");
    t.columns.push_back("edge_spread");
    for (const Row& row : rows) {
        std::vector<ResultTable::Cell> cells{row.theta2, row.theta2 / kPi};
        for (double mu : row.mu) cells.push_back(mu);
        cells.push_back(row.angle_spread);
        cells.push_back(row.edge_spread);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

// ---- levelset study ---------------------------------------------------------

LevelsetStudy levelset_study(const FlowerParams& params, const std::vector<int>& levels,
                             const std::vector<int>& ranks) {
    if (levels.size() < 3) {
        throw UsageError("levelset study needs at least 3 refinement levels for a slope");
    }

    LevelsetStudy study;
    study.ranks = ranks;

    ParamCurve reference = flower_curve(make_ellipsoid(1.0, 1.0, 1.0), params);
    ShapeSpectrum ref = spectrum(make_smooth_data(reference), ranks);
    for (int p : ranks) study.reference_mu[p] = ref.rank(p).mu;

    for (int level : levels) {
        TriMesh mesh = sphere_octahedron_mesh(level);
        std::vector<double> rho = flower_levelset(mesh, params);
        PolyChain chain = extract_zero_levelset(mesh, rho);
        ShapeSpectrum sp = spectrum(line_polygon(chain), ranks);

        LevelsetStudy::Row row;
        row.level = level;
        row.h = mesh.max_edge_length();
        for (int p : ranks) {
            row.mu[p] = sp.rank(p).mu;
            row.err[p] = std::abs(row.mu[p] - study.reference_mu[p]);
        }
        study.rows.push_back(std::move(row));
    }

    for (int p : ranks) {
        // least squares of log err against log h; err stalling at zero is
        // excluded (it cannot appear on a log plot either)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (const auto& row : study.rows) {
            double err = row.err.at(p);
            if (err <= 0) continue;
            double x = std::log(row.h), y = std::log(err);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        study.slope[p] = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                                : std::numeric_limits<double>::quiet_NaN();
    }
    return study;
}

ResultTable LevelsetStudy::table() const {
    ResultTable t;
    t.columns = {"level", "h"};
    for (int p : ranks) {
        t.columns.push_back(rank_column("mu", p));
        t.columns.push_back(rank_column("err", p));
    }
    for (const Row& row : rows) {
        std::vector<ResultTable::Cell> cells{static_cast<std::int64_t>(row.level), row.h};
        for (int p : ranks) {
            cells.push_back(row.mu.at(p));
            cells.push_back(row.err.at(p));
        }
        t.rows.push_back(std::move(cells));
    }
    char buf[64];
    for (int p : ranks) {
        std::snprintf(buf, sizeof buf, "%.17g", reference_mu.at(p));
        t.metadata[rank_column("reference_mu", p)] = buf;
        std::snprintf(buf, sizeof buf, "%.6g", slope.at(p));
        t.metadata[rank_column("slope", p)] = buf;
    }
    return t;
}

std::vector<PlotSeries> LevelsetStudy::plot_series() const {
    std::vector<PlotSeries> series;
    for (int p : ranks) {
        PlotSeries s;
        char buf[64];
        std::snprintf(buf, sizeof buf, "p = %d (slope %.2f)", p, slope.at(p));
        s.label = buf;
        for (const Row& row : rows) s.points.push_back({row.h, row.err.at(p)});
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<SlopeGuide> LevelsetStudy::plot_guides() const {
    if (rows.empty() || ranks.empty()) return {};
    double h0 = rows.front().h;
    double y0 = 0.0;
    for (int p : ranks) y0 = std::max(y0, rows.front().err.at(p));
    if (y0 <= 0) return {};
    SlopeGuide guide;
    guide.slope = 1.0;
    guide.x0 = h0;
    guide.y0 = 2.0 * y0;
    guide.label = "order 1";
    return {guide};
}

// ---- flower sweep -----------------------------------------------------------

FlowerPanel panel_from_name(const std::string& name) {
    if (name == "amplitude") return FlowerPanel::Amplitude;
    if (name == "radius") return FlowerPanel::Radius;
    if (name == "frequency") return FlowerPanel::Frequency;
    if (name == "position") return FlowerPanel::Position;
    throw UsageError("unknown sweep panel '" + name +
                     "' (expected amplitude, radius, frequency or position)");
}

std::string panel_name(FlowerPanel panel) {
    switch (panel) {
    case FlowerPanel::Amplitude: return "amplitude";
    case FlowerPanel::Radius: return "radius";
    case FlowerPanel::Frequency: return "frequency";
    case FlowerPanel::Position: return "position";
    }
    return "?";
}

std::vector<double> default_panel_values(FlowerPanel panel) {
    switch (panel) {
    case FlowerPanel::Amplitude: return {0.0, 0.05, 0.1, 0.15, 0.2};
    case FlowerPanel::Radius: return {0.2, 0.3, 0.4, 0.5, 0.6};
    case FlowerPanel::Frequency: return {2, 3, 4, 5, 6, 7, 8};
    case FlowerPanel::Position:
        return {kPi / 8.0, 3.0 * kPi / 16.0, kPi / 4.0, 5.0 * kPi / 16.0, 3.0 * kPi / 8.0};
    }
    return {};
}

namespace {

FlowerParams panel_params(FlowerPanel panel, double value) {
    // fixed parameters per panel as published: the off-panel values are
    // r0 = 0.4, a = 0.1, omega = 5, y0 = pi / 4
    FlowerParams p;
    p.r0 = 0.4;
    p.a = 0.1;
    p.omega = 5;
    p.y0 = kPi / 4.0;
    switch (panel) {
    case FlowerPanel::Amplitude: p.a = value; break;
    case FlowerPanel::Radius: p.r0 = value; break;
    case FlowerPanel::Frequency: {
        int omega = static_cast<int>(std::llround(value));
        if (std::abs(value - omega) > 1e-9 || omega < 1) {
            throw UsageError("flower frequency must be a positive integer, got " +
                             std::to_string(value));
        }
        p.omega = omega;
        break;
    }
    case FlowerPanel::Position: p.y0 = value; break;
    }
    return p;
}

} // namespace

FlowerSweep flower_sweep(FlowerPanel panel, const std::vector<double>& values,
                         const std::vector<int>& ranks, int workers) {
    auto ellipsoid = make_ellipsoid(1.6, 1.3, 1.0);

    FlowerSweep sweep;
    sweep.panel = panel;
    sweep.ranks = ranks;
    sweep.rows.resize(values.size());
    parallel_for(static_cast<int>(values.size()), workers, [&](int i) {
        ParamCurve curve = flower_curve(ellipsoid, panel_params(panel, values[i]));
        ShapeSpectrum sp = spectrum(make_smooth_data(curve), ranks);
        FlowerSweep::Row& row = sweep.rows[i];
        row.value = values[i];
        for (int p : ranks) row.mu.push_back(sp.rank(p).mu);
    });
    return sweep;
}

ResultTable FlowerSweep::table() const {
    ResultTable t;
    t.columns.push_back(panel_name(panel));
    for (int p : ranks) t.columns.push_back(rank_column("mu", p));
    for (const Row& row : rows) {
        std::vector<ResultTable::Cell> cells{row.value};
        for (double mu : row.mu) cells.push_back(mu);
        t.rows.push_back(std::move(cells));
    }
    t.metadata["panel"] = panel_name(panel);
    return t;
}

// ---- measured contours ------------------------------------------------------

ContourReport contour_report(const Contour& contour, int smoothing_passes,
                             const std::vector<int>& ranks) {
    PolyChain chain = ingest_contour(contour.points, contour.normals, smoothing_passes);
    PolygonData d = line_polygon(chain);
    if (d.total_turning() < 0.0) {
        std::reverse(chain.points.begin(), chain.points.end());
        d = line_polygon(chain);
    }

    ContourReport report;
    report.sides = d.sides();
    report.smoothing_passes = smoothing_passes;
    report.length = d.total_length();
    report.total_turning = d.total_turning();

    ShapeSpectrum sp = spectrum(d, ranks);
    for (int p : ranks) {
        const EigenDirections& e = sp.rank(p);
        ContourReport::Row row;
        row.rank = p;
        row.mu = e.mu;
        row.direction_defined = e.direction_defined;
        row.theta_minus = e.direction_defined ? e.minus_angles.front() : 0.0;
        report.rows.push_back(row);
    }
    return report;
}

ResultTable ContourReport::table() const {
    ResultTable t;
    t.columns = {"rank", "mu", "theta_minus", "direction_defined"};
    for (const Row& row : rows) {
        t.rows.push_back({static_cast<std::int64_t>(row.rank), row.mu, row.theta_minus,
                          static_cast<std::int64_t>(row.direction_defined ? 1 : 0)});
    }
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    t.metadata["sides"] = std::to_string(sides);
    t.metadata["smoothing_passes"] = std::to_string(smoothing_passes);
    t.metadata["length"] = num(length);
    t.metadata["total_turning"] = num(total_turning);
    return t;
}

} // namespace surfmink
