#pragma once

#include "surfmink/tensor.hpp"

namespace surfmink {

// Closed chain of surface points with normals. Exact provenance means the
// points and normals came from an analytic curve; approximate chains (mesh
// levelsets, measured contours) carry the resolution they were produced at.
struct PolyChain {
    enum class Provenance { Exact, Approximate };

    std::vector<SurfacePoint> points; // consecutive points distinct; closes to front
    Provenance provenance = Provenance::Exact;
    double resolution = 0.0; // mesh size / sample spacing for Approximate chains

    int size() const { return static_cast<int>(points.size()); }
};

// q points of the curve at equal arc-length spacing, starting at arc 0.
PolyChain sample_curve(const ParamCurve& c, int q);

// Geodesic polygon through the chain: side lengths are geodesic distances,
// turning angles come from the logarithm maps at each vertex. Needs a
// surface with a working log (not the mesh backend).
PolygonData geodesic_polygon(const PolyChain& chain, const Surface& s);

// Straight-line reading of the chain: chord lengths, and turning angles
// from the chords projected into the tangent plane at each vertex. Throws
// DegenerateProjection when a projected chord loses more than half its
// squared length (the chain then resolves nothing at that vertex).
PolygonData line_polygon(const PolyChain& chain);

// Cleans a measured contour into a chain: drops consecutive duplicates
// (and a repeated closing point), then applies the given number of circular
// 3-point moving-average passes to the positions. Normals are normalized
// and kept; fewer than three distinct points throw TooFewPoints.
PolyChain ingest_contour(const std::vector<Vec3>& points, const std::vector<Vec3>& normals,
                         int smoothing_passes);

enum class Scheme { Geodesic, Line };

struct ConvergenceRow {
    int q = 0;
    double err_length = 0.0;
    double err_turning = 0.0;
    double err_angle = 0.0; // max over vertices; NaN for the line scheme
    double err_components = 0.0;
    // order estimates against the previous row; NaN on the first row
    double eoc_length = 0.0;
    double eoc_turning = 0.0;
    double eoc_angle = 0.0;
    double eoc_components = 0.0;
};

struct ConvergenceReport {
    Scheme scheme = Scheme::Geodesic;
    int rank = 0;
    double ref_length = 0.0;
    double ref_turning = 0.0;
    IrreducibleComponents ref_components;
    // largest shift of any reference quantity when the reference resolution
    // is halved; a consistency indicator for the reference itself
    double reference_drift = 0.0;
    std::vector<ConvergenceRow> rows;
};

// Compares polygon quantities at the given refinement levels q against the
// smooth pipeline at reference resolution (8192 intervals, re-checked at
// 4096). Component errors are normalized by the respective curve lengths.
ConvergenceReport convergence_study(const ParamCurve& c, Scheme scheme,
                                    const std::vector<int>& qs, int rank);

} // namespace surfmink
