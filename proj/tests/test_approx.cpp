#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "surfmink/curve_approx.hpp"
#include "surfmink/tri_mesh.hpp"

using namespace surfmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

ParamCurve probe_flower() {
    FlowerParams p;
    p.r0 = 0.7;
    p.a = 0.2;
    p.omega = 3;
    return flower_curve(make_ellipsoid(1.6, 1.3, 1.0), p);
}

} // namespace

TEST_CASE("sample_curve lands on the curve at equal arc spacing") {
    ParamCurve c = probe_flower();
    double L = c.length();
    int q = 48;
    PolyChain chain = sample_curve(c, q);

    REQUIRE(chain.size() == q);
    CHECK(chain.provenance == PolyChain::Provenance::Exact);
    for (int i = 0; i < q; ++i) {
        SurfacePoint expect = c.point_at_arc(L * i / q);
        CHECK((chain.points[i].position - expect.position).norm() < 1e-10);
        CHECK((chain.points[i].normal - expect.normal).norm() < 1e-10);
        CHECK(std::abs(chain.points[i].normal.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("chords never exceed geodesic sides and the gap shrinks cubically") {
    ParamCurve c = probe_flower();
    const Surface& s = c.surface();

    std::vector<double> max_gap;
    for (int q : {64, 128, 256}) {
        PolyChain chain = sample_curve(c, q);
        PolygonData geo = geodesic_polygon(chain, s);
        PolygonData lin = line_polygon(chain);
        double worst = 0.0;
        for (int i = 0; i < q; ++i) {
            double gap = geo.lengths[i] - lin.lengths[i];
            CHECK(gap >= -1e-14);
            worst = std::max(worst, gap);
        }
        max_gap.push_back(worst);
    }
    for (size_t i = 0; i + 1 < max_gap.size(); ++i) {
        double order = std::log2(max_gap[i] / max_gap[i + 1]);
        CHECK(order > 2.5);
        CHECK(order < 3.5);
    }
}

TEST_CASE("turning angles track the curvature along the adjacent half-sides") {
    ParamCurve c = probe_flower();
    const Surface& s = c.surface();
    double L = c.length();

    std::vector<double> worst;
    for (int q : {32, 64, 128, 256}) {
        PolyChain chain = sample_curve(c, q);
        PolygonData geo = geodesic_polygon(chain, s);
        double w = 0.0;
        for (int i = 0; i < q; ++i) {
            int v = (i + 1) % q;
            double kg = c.geodesic_curvature_at_arc(L * v / q);
            double predicted = 0.5 * kg * (geo.lengths[i] + geo.lengths[v]);
            w = std::max(w, std::abs(geo.turning[i] - predicted));
        }
        worst.push_back(w);
    }
    for (size_t i = 0; i + 1 < worst.size(); ++i) CHECK(worst[i + 1] < worst[i]);
    // three halvings at second order would give a factor 64
    CHECK(worst.back() < worst.front() / 40);
}

TEST_CASE("the two schemes agree on the polygon they resolve") {
    ParamCurve c = probe_flower();
    const Surface& s = c.surface();

    std::vector<double> turn_diff, comp_diff;
    for (int q : {32, 64, 128, 256}) {
        PolyChain chain = sample_curve(c, q);
        PolygonData geo = geodesic_polygon(chain, s);
        PolygonData lin = line_polygon(chain);
        double t = 0.0;
        for (int i = 0; i < q; ++i) {
            t = std::max(t, std::abs(geo.turning[i] - lin.turning[i]));
        }
        turn_diff.push_back(t);
        IrreducibleComponents cg = components(geo, 2), cl = components(lin, 2);
        comp_diff.push_back(std::hypot(cg.g1 - cl.g1, cg.g2 - cl.g2));
    }
    for (size_t i = 0; i + 1 < turn_diff.size(); ++i) {
        CHECK(turn_diff[i + 1] < turn_diff[i] / 3);
        // the component gap between the schemes halves twice per refinement
        double order = std::log2(comp_diff[i] / comp_diff[i + 1]);
        CHECK(order > 1.7);
        CHECK(order < 2.4);
    }
    CHECK(turn_diff.back() < turn_diff.front() / 100);
}

TEST_CASE("concave stretches come out with negative turning") {
    ParamCurve c = probe_flower();
    PolyChain chain = sample_curve(c, 128);
    PolygonData geo = geodesic_polygon(chain, c.surface());

    double min_turn = 1e300;
    for (double t : geo.turning) min_turn = std::min(min_turn, t);
    CHECK(min_turn < -0.1);
    // yet the signed sum still matches the smooth total turning
    CHECK(geo.total_turning() == doctest::Approx(4.499363247228958).epsilon(5e-4));
}

TEST_CASE("ingest_contour drops duplicates and the closing repeat") {
    std::vector<Vec3> pts = {Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0),
                             Vec3(1, 1, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)};
    std::vector<Vec3> nrm(pts.size(), Vec3(0, 0, 2));

    PolyChain chain = ingest_contour(pts, nrm, 0);
    REQUIRE(chain.size() == 4);
    CHECK(chain.provenance == PolyChain::Provenance::Approximate);
    CHECK(chain.resolution == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(chain.points[0].position == Vec3(0, 0, 0));
    CHECK(chain.points[1].position == Vec3(1, 0, 0));
    CHECK(chain.points[2].position == Vec3(1, 1, 0));
    CHECK(chain.points[3].position == Vec3(0, 1, 0));
    for (const SurfacePoint& p : chain.points) {
        CHECK((p.normal - Vec3(0, 0, 1)).norm() < 1e-15);
    }
}

TEST_CASE("one smoothing pass is a circular three-point average") {
    std::vector<Vec3> pts = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, 0, 0), Vec3(0, -1, 0)};
    std::vector<Vec3> nrm(4, Vec3(0, 0, 1));

    PolyChain chain = ingest_contour(pts, nrm, 1);
    // on a diamond each neighbor pair cancels, so every point shrinks to a third
    for (int i = 0; i < 4; ++i) {
        CHECK((chain.points[i].position - pts[i] / 3.0).norm() < 1e-15);
    }
    // two passes shrink twice; zero passes change nothing
    PolyChain twice = ingest_contour(pts, nrm, 2);
    for (int i = 0; i < 4; ++i) {
        CHECK((twice.points[i].position - pts[i] / 9.0).norm() < 1e-15);
    }
    PolyChain plain = ingest_contour(pts, nrm, 0);
    for (int i = 0; i < 4; ++i) {
        CHECK(plain.points[i].position == pts[i]);
    }
}

TEST_CASE("ingest_contour rejects defective input") {
    std::vector<Vec3> two = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 0)};
    std::vector<Vec3> nrm2(3, Vec3(0, 0, 1));
    CHECK_THROWS_AS(ingest_contour(two, nrm2, 0), TooFewPoints);

    std::vector<Vec3> tri = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    std::vector<Vec3> bad = {Vec3(0, 0, 1), Vec3(0, 0, 0), Vec3(0, 0, 1)};
    CHECK_THROWS_AS(ingest_contour(tri, bad, 0), UsageError);

    std::vector<Vec3> short_nrm(2, Vec3(0, 0, 1));
    CHECK_THROWS_AS(ingest_contour(tri, short_nrm, 0), UsageError);
    std::vector<Vec3> nrm3(3, Vec3(0, 0, 1));
    CHECK_THROWS_AS(ingest_contour(tri, nrm3, -1), UsageError);
}

TEST_CASE("line_polygon refuses chords that die in projection") {
    // nearly antipodal neighbors on the unit sphere: the chord is normal to
    // the tangent plane and the projection keeps almost nothing
    auto sphere = make_sphere(1.0);
    PolyChain chain;
    chain.points.push_back(sphere->at(Vec3(1, 0, 0)));
    chain.points.push_back(sphere->at(Vec3(-1, 0.1, 0)));
    chain.points.push_back(sphere->at(Vec3(0, 0, 1)));
    CHECK_THROWS_AS(line_polygon(chain), DegenerateProjection);
}

TEST_CASE("geodesic polygons need a smooth chart") {
    MeshSurface mesh(sphere_octahedron_mesh(2));
    PolyChain chain;
    chain.points.push_back(mesh.at(Vec3(1, 0, 0)));
    chain.points.push_back(mesh.at(Vec3(0, 1, 0)));
    chain.points.push_back(mesh.at(Vec3(0, 0, 1)));
    CHECK_THROWS_AS(geodesic_polygon(chain, mesh), UnsupportedOnMesh);
}

TEST_CASE("convergence study on a planar circle reproduces closed forms") {
    auto plane = make_plane();
    ParamCurve circle = plane_circle(plane, 1.0);
    std::vector<int> qs = {8, 16, 32};

    ConvergenceReport rep = convergence_study(circle, Scheme::Geodesic, qs, 2);
    CHECK(rep.scheme == Scheme::Geodesic);
    CHECK(rep.rank == 2);
    CHECK(rep.ref_length == doctest::Approx(2 * kPi).epsilon(1e-12));
    CHECK(rep.ref_turning == doctest::Approx(2 * kPi).epsilon(1e-12));
    CHECK(rep.reference_drift < 1e-9);
    REQUIRE(rep.rows.size() == qs.size());

    for (size_t i = 0; i < qs.size(); ++i) {
        const ConvergenceRow& row = rep.rows[i];
        int q = qs[i];
        CHECK(row.q == q);
        // inscribed regular q-gon: perimeter 2 q sin(pi/q), turning exact
        CHECK(row.err_length ==
              doctest::Approx(2 * kPi - 2 * q * std::sin(kPi / q)).epsilon(1e-10));
        CHECK(row.err_turning < 1e-10);
        // the transport angles of a circle polygon are exact by symmetry
        CHECK(row.err_angle < 1e-12);
        // and a regular polygon has no rank-2 component at all
        CHECK(row.err_components < 1e-12);
        if (i == 0) {
            CHECK(std::isnan(row.eoc_length));
        } else {
            CHECK(row.eoc_length == doctest::Approx(2.0).epsilon(0.05));
        }
    }

    ConvergenceReport lin = convergence_study(circle, Scheme::Line, qs, 2);
    for (const ConvergenceRow& row : lin.rows) {
        // the line scheme reads angles off chords, so no per-vertex error
        CHECK(std::isnan(row.err_angle));
        CHECK(row.err_components < 1e-12);
    }
}
