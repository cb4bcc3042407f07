#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "surfmink/param_curve.hpp"
#include "surfmink/tensor.hpp"

using namespace surfmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

ParamCurve table_one_flower() {
    FlowerParams p;
    p.r0 = 0.7;
    p.a = 0.2;
    p.omega = 3;
    return flower_curve(make_ellipsoid(1.6, 1.3, 1.0), p);
}

} // namespace

TEST_CASE("plane circle has curvature 1/r and length 2 pi r") {
    auto plane = make_plane();
    ParamCurve c = plane_circle(plane, 2.5);
    CHECK(std::abs(c.length() - 2 * kPi * 2.5) < 1e-10);
    for (double s : {0.0, 1.0, 4.0, 9.0}) {
        CHECK(std::abs(c.geodesic_curvature_at_arc(s) - 1.0 / 2.5) < 1e-10);
    }
}

TEST_CASE("sphere circles have constant curvature cot(theta0)") {
    auto sphere = make_sphere(1.0);
    for (double theta0 : {kPi / 4, kPi / 3}) {
        ParamCurve c = sphere_circle(sphere, theta0);
        CHECK(std::abs(c.length() - 2 * kPi * std::sin(theta0)) < 1e-12);
        double expect = std::cos(theta0) / std::sin(theta0);
        for (double frac : {0.0, 0.31, 0.62, 0.93}) {
            CHECK(std::abs(c.geodesic_curvature_at_arc(frac * c.length()) - expect) < 1e-9);
        }
    }

    // a great circle is a geodesic
    ParamCurve eq = sphere_circle(sphere, kPi / 2);
    CHECK(std::abs(eq.geodesic_curvature_at_arc(1.0)) < 1e-10);
}

TEST_CASE("geodesic curvature matches a finite-difference oracle") {
    ParamCurve c = table_one_flower();
    double L = c.length();
    double h = 1e-4;
    for (double frac : {0.05, 0.23, 0.48, 0.71, 0.96}) {
        double s = frac * L;
        Vec3 pm = c.point_at_arc(s - h).position;
        Vec3 p0 = c.point_at_arc(s).position;
        Vec3 pp = c.point_at_arc(s + h).position;
        Vec3 acc = (pm - 2 * p0 + pp) / (h * h);
        CurveFrame f = c.frame_at_arc(s);
        double oracle = -acc.dot(f.nu);
        CHECK(std::abs(c.geodesic_curvature_at_arc(s) - oracle) < 1e-4);
    }
}

TEST_CASE("arc table inverts to round-off") {
    ParamCurve c = table_one_flower();
    double L = c.length();
    for (double frac : {0.0, 0.1, 0.37, 0.5, 0.82, 0.999}) {
        double s = frac * L;
        double t = c.param_at_arc(s);
        CHECK(std::abs(c.arc_at_param(t) - s) < 1e-10 * std::max(1.0, s));
    }
}

TEST_CASE("flower curve closes and never stalls") {
    ParamCurve c = table_one_flower();
    CHECK((c.position(0.0) - c.position(c.period())).norm() < 1e-10);
    for (int i = 0; i < 4096; ++i) {
        CHECK(c.speed(c.period() * i / 4096.0) > 1e-10);
    }
}

TEST_CASE("curve frames ride the velocity") {
    ParamCurve c = table_one_flower();
    for (double frac : {0.08, 0.33, 0.77}) {
        double s = frac * c.length();
        CurveFrame f = c.frame_at_arc(s);
        double t = c.param_at_arc(s);
        CHECK((f.tau - c.velocity(t).normalized()).norm() < 1e-9);
        CHECK(std::abs(f.nu.cross(f.tau).dot(f.n()) - 1.0) < 1e-10);
    }
}

TEST_CASE("reference flower quantities agree with an independent quadrature") {
    ParamCurve c = table_one_flower();
    SmoothCurveData d = make_smooth_data(c);

    // total curvature integrated in the parameter domain with a plain
    // trapezoid rule, bypassing the arc table and cumulative machinery
    int n = 20000;
    double total = 0.0;
    double T = c.period();
    auto integrand = [&](double t) {
        return c.geodesic_curvature_at_param(t) * c.speed(t);
    };
    double prev = integrand(0.0);
    for (int i = 1; i <= n; ++i) {
        double cur = integrand(T * i / n);
        total += 0.5 * (prev + cur) * (T / n);
        prev = cur;
    }

    CHECK(std::abs(d.total_turning() - total) < 1e-8);
    CHECK(d.total_turning() == doctest::Approx(4.499363247228958).epsilon(1e-10));
    CHECK(d.total_length() == doctest::Approx(5.9692097936400881).epsilon(1e-10));
}

TEST_CASE("flower with zero amplitude degenerates to a chart circle") {
    FlowerParams p;
    p.a = 0.0;
    p.r0 = 0.4;
    ParamCurve c = flower_curve(make_ellipsoid(1.0, 1.0, 1.0), p);
    SmoothCurveData d = make_smooth_data(c, 4096);

    // the chart circle tracks the geodesic circle of the same radius up to
    // the second-order distortion of the angle chart
    CHECK(std::abs(d.total_length() - 2 * kPi * std::sin(0.4)) < 0.01);
    CHECK(std::abs(d.total_turning() - 2 * kPi * std::cos(0.4)) < 0.005);

    // its reflection symmetries kill every odd rank outright and leave only
    // a weak even-rank residue from the chart distortion
    for (int rank : {1, 3, 5}) CHECK(components(d, rank).anisotropy() < 1e-12);
    for (int rank : {2, 4, 6}) CHECK(components(d, rank).anisotropy() < 0.03);
}
