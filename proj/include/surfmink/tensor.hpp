#pragma once

#include <array>
#include <optional>
#include <vector>

#include "surfmink/param_curve.hpp"

namespace surfmink {

// Total turning below this is treated as inadmissible: the defect
// normalization would divide by (nearly) zero. Equivalent to the enclosed
// curvature approaching the full 2 pi.
constexpr double kAdmissibilityFloor = 1e-6;

// Component magnitudes below kDirectionFloor * length leave the eigen
// directions numerically undefined; the magnitude itself is still reported.
constexpr double kDirectionFloor = 1e-12;

// Geodesic polygon: side lengths plus the signed turning angle at the end of
// each side. turning[i] sits at the vertex shared by sides i and i+1, so
// walking from the fiducial point (start of side 0) onto side i crosses
// turning[0..i-1].
struct PolygonData {
    std::vector<double> lengths;
    std::vector<double> turning;
    CurveFrame fiducial;

    int sides() const { return static_cast<int>(lengths.size()); }
    double total_length() const;
    double total_turning() const;
};

// Smooth closed curve reduced to an arc-length grid with geodesic curvature
// samples. `cumulative` carries the integral of the curvature up to each
// node (fourth-order accurate on construction).
struct SmoothCurveData {
    std::vector<double> arc;
    std::vector<double> curvature;
    std::vector<double> cumulative;
    CurveFrame fiducial;

    double total_length() const { return arc.back(); }
    double total_turning() const { return cumulative.back(); }
};

// Samples a parametrized curve on a uniform arc grid starting at
// fiducial_arc. samples is the number of intervals.
SmoothCurveData make_smooth_data(const ParamCurve& c, int samples = 8192,
                                 double fiducial_arc = 0.0);

// Same reduction on a caller-chosen (strictly increasing) parameter grid;
// the first entry fixes the fiducial point.
SmoothCurveData make_smooth_data_at_params(const ParamCurve& c,
                                           const std::vector<double>& params);

enum class TransportMode {
    Parallel,        // rotation by the raw curvature integral
    DefectCorrected, // rotation rescaled so a full loop gives exactly 2 pi
};

// Rotation angle (from nu toward tau) picked up by the co-normal between the
// fiducial point and arc position s in [0, total length].
double transport_angle(const PolygonData& d, TransportMode mode, double s);
double transport_angle(const SmoothCurveData& d, TransportMode mode, double s);

// Constant transport angle on polygon side i (f_i in the defect-corrected
// mode, the partial turning sum in the parallel mode).
double side_angle(const PolygonData& d, int side,
                  TransportMode mode = TransportMode::DefectCorrected);

// Co-normal at arc position s carried back to the fiducial point.
TangentVector transport_conormal(const PolygonData& d, TransportMode mode, double s);
TangentVector transport_conormal(const SmoothCurveData& d, TransportMode mode, double s);

// The two independent components of the rank-p irreducible tensor of
// transported co-normals, expressed in the fiducial frame.
struct IrreducibleComponents {
    int rank = 0;
    double g1 = 0.0;
    double g2 = 0.0;
    double length = 0.0;

    double magnitude() const; // largest eigenvalue lambda_p^+
    double anisotropy() const; // mu_p = magnitude / length
};

IrreducibleComponents components(const PolygonData& d, int rank,
                                 TransportMode mode = TransportMode::DefectCorrected);
IrreducibleComponents components(const SmoothCurveData& d, int rank,
                                 TransportMode mode = TransportMode::DefectCorrected);

// Eigen directions of the rank-p tensor at the fiducial point: p directions
// for the largest eigenvalue and p for the smallest, interleaved by pi/p.
struct EigenDirections {
    int rank = 0;
    double mu = 0.0;
    bool direction_defined = false;
    std::vector<double> plus_angles;  // in [0, 2 pi), consecutive gaps 2 pi / p
    std::vector<double> minus_angles;
    std::vector<TangentVector> plus_vectors;
    std::vector<TangentVector> minus_vectors;
};

EigenDirections eigen_directions(const IrreducibleComponents& c, const CurveFrame& fiducial);

struct ShapeSpectrum {
    std::vector<EigenDirections> entries; // one per requested rank

    const EigenDirections& rank(int p) const;
};

ShapeSpectrum spectrum(const PolygonData& d, const std::vector<int>& ranks);
ShapeSpectrum spectrum(const SmoothCurveData& d, const std::vector<int>& ranks);

// Scalar functionals: W1 = length, W2 = total turning (corner angles plus
// smooth curvature), W0 = enclosed area where the backend can supply it.
struct Functionals {
    double length = 0.0;
    double total_turning = 0.0;
    std::optional<double> area;
};

Functionals functionals(const PolygonData& d);
Functionals functionals(const SmoothCurveData& d);

// Fills the area via Gauss-Bonnet on a sphere backend; any other surface
// throws W0Unavailable (meshes get their area from clipped_area instead).
Functionals functionals_on(const PolygonData& d, const Surface& s);
Functionals functionals_on(const SmoothCurveData& d, const Surface& s);

// Replaces side k by two half-length sides with an inserted vertex, the new
// triangle having turning angles beta = (beta1, beta2, beta3) at the start
// vertex, the inserted vertex and the end vertex. `inside` says on which
// side of the curve the vertex was pushed; the enclosed extra curvature is
// 2 pi + sum(beta) for inside and 2 pi - sum(beta) for outside.
PolygonData perturb_polygon(const PolygonData& d, int side,
                            const std::array<double, 3>& beta, bool inside);

} // namespace surfmink
