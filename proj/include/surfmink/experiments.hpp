#pragma once

#include <map>

#include "surfmink/curve_approx.hpp"
#include "surfmink/io.hpp"
#include "surfmink/levelset.hpp"

namespace surfmink {

// Runs body(0..n-1) on up to `workers` threads. Iterations must be
// independent; the first exception wins and is rethrown after all workers
// stopped. workers <= 1 degrades to a plain loop.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

// Geodesic q-gon with vertices equally spaced on a circle: a circle of
// colatitude `size` on a sphere backend, a circle of radius `size` in the
// plane. Other backends have no canonical regular polygon and throw
// UsageError.
PolygonData regular_polygon(const Surface& surface, int q, double size);

// mu_p of regular q-gons; the equal-side equal-angle case where mu_p is 1
// exactly when p is a multiple of q and 0 otherwise.
struct RegularPolygonStudy {
    std::vector<int> ranks;
    struct Row {
        int q = 0;
        std::vector<double> mu; // one per rank
    };
    std::vector<Row> rows;

    ResultTable table() const;
};

RegularPolygonStudy regular_polygon_study(const Surface& surface, const std::vector<int>& qs,
                                          const std::vector<int>& ranks, double size);

// Transport of the co-normal around the spherical octant triangle in both
// conventions: the closure angle after a full loop (zero only when the
// angle defect is folded in) and the resulting mu_3 / mu_4.
struct TransportDemo {
    struct Row {
        TransportMode mode = TransportMode::Parallel;
        double closure = 0.0;
        double mu3 = 0.0;
        double mu4 = 0.0;
    };
    std::array<Row, 2> rows;

    ResultTable table() const;
};

TransportDemo transport_demo(const Sphere& sphere);

ResultTable convergence_table(const ConvergenceReport& report);

// Geodesic triangles on the torus with major radius 2 and minor radius
// 1.375: two vertices pinned near opposite ends of the inner equator, the
// third swept over the tube circle at phi = 1.55.
struct TorusSweep {
    static constexpr int kRankLow = 2, kRankHigh = 6;

    struct Row {
        double theta2 = 0.0;
        std::array<double, 5> mu{}; // ranks 2..6
        double angle_spread = 0.0;  // (max - min turning angle) / total turning
        double edge_spread = 0.0;   // longest minus shortest side
    };
    std::vector<Row> rows;

    ResultTable table() const;
};

// The sweep positions of the published experiment: 0.9 pi down to -0.8 pi
// in steps of 0.05 pi.
std::vector<double> default_torus_angles();

TorusSweep torus_sweep(const std::vector<double>& theta2_values, int workers);

// Anisotropy error of the levelset pipeline against the smooth reference on
// the unit sphere, over a sequence of mesh refinement levels.
struct LevelsetStudy {
    std::vector<int> ranks;
    std::map<int, double> reference_mu;

    struct Row {
        int level = 0;
        double h = 0.0; // longest mesh edge
        std::map<int, double> mu;
        std::map<int, double> err;
    };
    std::vector<Row> rows;
    std::map<int, double> slope; // least-squares order of err against h

    ResultTable table() const;
    std::vector<PlotSeries> plot_series() const;
    std::vector<SlopeGuide> plot_guides() const;
};

LevelsetStudy levelset_study(const FlowerParams& params, const std::vector<int>& levels,
                             const std::vector<int>& ranks);

// One-parameter families of flower curves on the ellipsoid E(1.6, 1.3, 1.0),
// each panel sweeping a single parameter with the published fixed values
// for the others.
enum class FlowerPanel { Amplitude, Radius, Frequency, Position };

FlowerPanel panel_from_name(const std::string& name);
std::string panel_name(FlowerPanel panel);
std::vector<double> default_panel_values(FlowerPanel panel);

struct FlowerSweep {
    FlowerPanel panel = FlowerPanel::Amplitude;
    std::vector<int> ranks;

    struct Row {
        double value = 0.0;
        std::vector<double> mu; // one per rank
    };
    std::vector<Row> rows;

    ResultTable table() const;
};

FlowerSweep flower_sweep(FlowerPanel panel, const std::vector<double>& values,
                         const std::vector<int>& ranks, int workers);

// Full measured-contour pipeline: ingest, smooth, straight-line polygon,
// anisotropies and preferred directions. A contour traced in the clockwise
// sense is reversed first.
struct ContourReport {
    int sides = 0;
    int smoothing_passes = 0;
    double length = 0.0;
    double total_turning = 0.0;

    struct Row {
        int rank = 0;
        double mu = 0.0;
        bool direction_defined = false;
        double theta_minus = 0.0; // first smallest-eigenvalue angle
    };
    std::vector<Row> rows;

    ResultTable table() const;
};

ContourReport contour_report(const Contour& contour, int smoothing_passes,
                             const std::vector<int>& ranks);

} // namespace surfmink
