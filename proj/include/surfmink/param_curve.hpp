#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "surfmink/surfaces.hpp"

namespace surfmink {

// Closed curve on a surface given by analytic position/velocity/acceleration
// evaluators over one period.
struct CurveFunctions {
    std::function<Vec3(double)> position;
    std::function<Vec3(double)> velocity;
    std::function<Vec3(double)> acceleration;
    double period = 0.0;
};

// Parametrized closed curve with a precomputed arc-length table. The table
// accumulates per-interval Gauss-Legendre integrals of the speed, so arc
// positions and their inverse are accurate to round-off rather than to the
// sample spacing; the inverse is a safeguarded Newton iteration and stays
// monotone because the speed is positive.
class ParamCurve {
public:
    ParamCurve(std::shared_ptr<const Surface> surface, CurveFunctions fns,
               int table_intervals = 8192);

    const Surface& surface() const { return *surface_; }
    std::shared_ptr<const Surface> surface_ptr() const { return surface_; }
    double period() const { return fns_.period; }
    double length() const { return arc_.back(); }

    Vec3 position(double t) const { return fns_.position(t); }
    Vec3 velocity(double t) const { return fns_.velocity(t); }
    Vec3 acceleration(double t) const { return fns_.acceleration(t); }
    double speed(double t) const { return fns_.velocity(t).norm(); }

    // Arc length from t = 0 to t (t inside [0, period]).
    double arc_at_param(double t) const;
    // Inverse of arc_at_param; s may be any real, wrapped by the period.
    double param_at_arc(double s) const;

    SurfacePoint point_at_arc(double s) const;
    CurveFrame frame_at_arc(double s) const;

    // Geodesic curvature at arc position s: the in-surface bending
    // -<gamma'', nu> of the unit-speed curve, positive when the curve bends
    // away from its outer co-normal.
    double geodesic_curvature_at_arc(double s) const;
    double geodesic_curvature_at_param(double t) const;

private:
    std::shared_ptr<const Surface> surface_;
    CurveFunctions fns_;
    std::vector<double> t_nodes_;
    std::vector<double> arc_; // cumulative arc length at t_nodes_
};

// Flower-shaped chart curve: in the angle chart (theta, phi) of an ellipsoid
// it traces radius r(u) = r0 - a sin(omega u) around the chart center
// (x0, y0). omega counts the petals.
struct FlowerParams {
    double r0 = 0.5;
    double a = 0.1;
    int omega = 4;
    double x0 = 1.57079632679489662; // pi/2
    double y0 = 0.78539816339744831; // pi/4
};

ParamCurve flower_curve(std::shared_ptr<const Ellipsoid> surface, const FlowerParams& p,
                        int table_intervals = 8192);

// Circle of constant polar angle theta0 on a sphere (a geodesic circle).
ParamCurve sphere_circle(std::shared_ptr<const Sphere> surface, double theta0,
                         int table_intervals = 8192);

// Circle of the given radius around `center` in the z = 0 plane.
ParamCurve plane_circle(std::shared_ptr<const Plane> surface, double radius,
                        const Vec3& center = Vec3::Zero(), int table_intervals = 8192);

} // namespace surfmink
