#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "surfmink/surfaces.hpp"

using namespace surfmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

double vec_gap(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

} // namespace

TEST_CASE("tangent projection removes exactly the normal part") {
    auto sphere = make_sphere(1.0);
    SurfacePoint x = sphere->at(Vec3(1, 0, 0));

    CHECK(vec_gap(project_to_tangent(Vec3(0, 0, 1), x.normal), Vec3(0, 0, 1)) == 0.0);
    CHECK(vec_gap(project_to_tangent(Vec3(1, 0, 0), x.normal), Vec3::Zero()) == 0.0);
    CHECK(vec_gap(project_to_tangent(Vec3(1, 1, 0), x.normal), Vec3(0, 1, 0)) == 0.0);
}

TEST_CASE("frames from tangents are right-handed and orthonormal") {
    auto torus = make_torus(2.0, 1.375);
    SurfacePoint x = torus->at(torus->embed(0.7, 2.1));
    CurveFrame f = frame_from_tangent(x, Vec3(0.3, -1.2, 0.5));

    CHECK(std::abs(f.tau.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.nu.norm() - 1.0) < 1e-12);
    CHECK(std::abs(f.tau.dot(f.nu)) < 1e-12);
    CHECK(std::abs(f.tau.dot(f.n())) < 1e-12);
    CHECK(std::abs(f.nu.cross(f.tau).dot(f.n()) - 1.0) < 1e-12);

    // angle 0 is the co-normal, pi/2 the tangent, and the two readings invert
    CHECK(std::abs(frame_angle(f, f.nu)) < 1e-12);
    CHECK(std::abs(frame_angle(f, f.tau) - kPi / 2) < 1e-12);
    for (double a : {-2.5, -0.4, 0.0, 1.1, 3.0}) {
        CHECK(std::abs(frame_angle(f, frame_vector(f, a)) - a) < 1e-12);
    }
}

TEST_CASE("signed angle follows the orientation of the normal") {
    Vec3 n(0, 0, 1);
    CHECK(std::abs(signed_angle(Vec3(1, 0, 0), Vec3(0, 1, 0), n) - kPi / 2) < 1e-12);
    CHECK(std::abs(signed_angle(Vec3(0, 1, 0), Vec3(1, 0, 0), n) + kPi / 2) < 1e-12);
    CHECK(std::abs(signed_angle(Vec3(1, 0, 0), Vec3(-1, 0, 0), n) - kPi) < 1e-12);
    CHECK(std::abs(signed_angle(Vec3(2, 0, 0), Vec3(5, 0, 0), n)) < 1e-12);
}

TEST_CASE("plane geometry is exact") {
    auto plane = make_plane();
    SurfacePoint o = plane->at(Vec3::Zero());
    SurfacePoint p = plane->at(Vec3(3, 4, 0));

    TangentVector u = plane->log(o, p);
    CHECK(vec_gap(u.v, Vec3(3, 4, 0)) == 0.0);
    CHECK(u.norm() == 5.0);
    CHECK(plane->distance(o, p) == 5.0);
    CHECK(vec_gap(plane->exp({o, Vec3(1, 0, 0) * 2.0}).position, Vec3(2, 0, 0)) == 0.0);
}

TEST_CASE("sphere log, exp and distance match great-circle formulas") {
    auto sphere = make_sphere(1.0);
    SurfacePoint x = sphere->at(Vec3(1, 0, 0));
    SurfacePoint y = sphere->at(Vec3(0, 1, 0));

    TangentVector u = sphere->log(x, y);
    CHECK(vec_gap(u.v, Vec3(0, kPi / 2, 0)) < 1e-14);
    CHECK(std::abs(sphere->distance(x, y) - kPi / 2) < 1e-15);

    SurfacePoint top = sphere->exp({x, Vec3(0, 0, kPi / 2)});
    CHECK(vec_gap(top.position, Vec3(0, 0, 1)) < 1e-12);

    auto big = make_sphere(2.0);
    CHECK(std::abs(big->distance(big->at(Vec3(2, 0, 0)), big->at(Vec3(0, 2, 0))) - kPi) <
          1e-14);
}

TEST_CASE("sphere log rejects antipodal pairs") {
    auto sphere = make_sphere(1.0);
    CHECK_THROWS_AS(sphere->log(sphere->at(Vec3(1, 0, 0)), sphere->at(Vec3(-1, 0, 0))),
                    CutLocus);
}

TEST_CASE("log output is tangent and reproduces the target through exp") {
    auto ell = make_ellipsoid(1.6, 1.3, 1.0);
    SurfacePoint x = ell->at(Vec3(1.6, 0, 0));
    SurfacePoint y = ell->at(ell->project(Vec3(0.9, 0.8, 0.4)));

    TangentVector u = ell->log(x, y);
    CHECK(std::abs(u.v.dot(x.normal)) < 1e-10 * u.norm());
    CHECK(vec_gap(ell->exp(u).position, y.position) < 1e-9);
    CHECK(std::abs(ell->distance(x, y) - ell->distance(y, x)) < 1e-8);
}

TEST_CASE("unit ellipsoid reproduces the analytic sphere logarithm") {
    auto ell = make_ellipsoid(1.0, 1.0, 1.0);
    auto sphere = make_sphere(1.0);

    Vec3 pairs[4][2] = {{Vec3(1, 0, 0), Vec3(0, 1, 0)},
                        {Vec3(0.2, -0.8, 0.5), Vec3(-0.3, 0.1, 0.9)},
                        {Vec3(0.9, 0.1, -0.4), Vec3(0.5, 0.6, 0.6)},
                        {Vec3(-0.7, 0.2, 0.1), Vec3(-0.5, -0.5, 0.7)}};
    for (auto& pair : pairs) {
        SurfacePoint xe = ell->at(ell->project(pair[0]));
        SurfacePoint ye = ell->at(ell->project(pair[1]));
        SurfacePoint xs = sphere->at(xe.position);
        SurfacePoint ys = sphere->at(ye.position);
        CHECK(vec_gap(ell->log(xe, ye).v, sphere->log(xs, ys).v) < 1e-8);
    }
}

TEST_CASE("geodesic integrator is accurate on the degenerate sphere") {
    auto ell = make_ellipsoid(1.0, 1.0, 1.0);
    SurfacePoint x = ell->at(Vec3(1, 0, 0));
    SurfacePoint quarter = ell->exp({x, Vec3(0, 0, kPi / 2)});
    CHECK(vec_gap(quarter.position, Vec3(0, 0, 1)) < 1e-9);
}

TEST_CASE("torus equators behave like circles of the right radius") {
    auto torus = make_torus(2.0, 1.375);

    SurfacePoint a = torus->at(torus->embed(0.0, 0.0));
    SurfacePoint b = torus->at(torus->embed(0.1, 0.0));
    CHECK(std::abs(torus->distance(a, b) - 3.375 * 0.1) < 1e-6);

    // outer equator is a closed geodesic: a full loop returns to the start
    Vec3 dir = Vec3(0, 1, 0); // tangent along phi at (3.375, 0, 0)
    SurfacePoint back = torus->exp({a, dir * (2 * kPi * 3.375)});
    CHECK(vec_gap(back.position, a.position) < 1e-6);
}

TEST_CASE("torus normals match the analytic tube direction") {
    auto torus = make_torus(2.0, 1.375);
    for (double phi : {0.0, 1.1, 2.9}) {
        for (double theta : {0.0, 0.8, kPi, 4.0}) {
            Vec3 x = torus->embed(phi, theta);
            Vec3 expect(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
                        std::sin(theta));
            CHECK(vec_gap(torus->normal(x), expect) < 1e-12);
        }
    }
}

TEST_CASE("hinted log follows the requested geodesic branch") {
    auto sphere = make_sphere(1.0);
    SurfacePoint x = sphere->at(Vec3(1, 0, 0));
    SurfacePoint y = sphere->at(Vec3(0, 1, 0));

    // near the minimizing branch the hinted solve agrees with the plain log
    TangentVector shortcut = sphere->log(x, y, {x, Vec3(0, 1.4, 0)});
    CHECK(std::abs(shortcut.norm() - kPi / 2) < 1e-8);
    CHECK(vec_gap(shortcut.v.normalized(), Vec3(0, 1, 0)) < 1e-8);

    // a hint pointing the other way around the great circle keeps the long
    // branch, which the plain log would never return
    TangentVector detour = sphere->log(x, y, {x, Vec3(0, -4.6, 0)});
    CHECK(std::abs(detour.norm() - 3 * kPi / 2) < 1e-8);
    CHECK(vec_gap(detour.v.normalized(), Vec3(0, -1, 0)) < 1e-8);
    CHECK(vec_gap(sphere->exp(detour).position, y.position) < 1e-9);
}

TEST_CASE("hinted log tracks tube windings on the torus") {
    auto torus = make_torus(2.0, 1.375);
    SurfacePoint x = torus->at(torus->embed(0.0, kPi));
    SurfacePoint y = torus->at(torus->embed(0.0, 0.9 * kPi));

    TangentVector direct = torus->log(x, y);
    CHECK(std::abs(direct.norm() - 0.1 * kPi * 1.375) < 1e-6);

    // seed the solver with the tube circle traversed the long way around
    Vec3 tube_dir = project_to_tangent(Vec3(0, 0, -1), x.normal).normalized();
    TangentVector wound = torus->log(x, y, {x, tube_dir * (1.9 * kPi * 1.375)});
    CHECK(wound.norm() > 6.0);
    CHECK(vec_gap(torus->exp(wound).position, y.position) < 1e-8);
}

TEST_CASE("surface points carry unit normals and zero residuals") {
    auto ell = make_ellipsoid(1.6, 1.3, 1.0);
    Vec3 raw(1.2, -0.5, 0.3);
    SurfacePoint p = ell->at(ell->project(raw));
    CHECK(std::abs(p.normal.norm() - 1.0) < 1e-12);

    auto torus = make_torus(2.0, 1.375);
    Vec3 q = torus->project(Vec3(2.7, 1.1, 0.9));
    // projected point satisfies the tube equation
    double ring = std::hypot(q.x(), q.y());
    CHECK(std::abs(std::hypot(ring - 2.0, q.z()) - 1.375) < 1e-12);
}
