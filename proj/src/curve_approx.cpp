#include "surfmink/curve_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace surfmink {

PolyChain sample_curve(const ParamCurve& c, int q) {
    if (q < 3) throw UsageError("sample_curve: need at least 3 vertices");
    PolyChain chain;
    chain.provenance = PolyChain::Provenance::Exact;
    chain.resolution = c.length() / q;
    chain.points.reserve(q);
    double L = c.length();
    for (int i = 0; i < q; ++i) {
        chain.points.push_back(c.point_at_arc(L * static_cast<double>(i) / q));
    }
    return chain;
}

PolygonData geodesic_polygon(const PolyChain& chain, const Surface& s) {
    int q = chain.size();
    if (q < 3) throw UsageError("geodesic_polygon: need at least 3 vertices");
    if (s.kind() == SurfaceKind::Mesh) {
        throw UnsupportedOnMesh("geodesic_polygon: mesh backends have no log map");
    }

    // One log per directed edge: to_next[i] = log_{x_i}(x_{i+1}) and
    // to_prev[i] = log_{x_i}(x_{i-1}).
    std::vector<Vec3> to_next(q), to_prev(q);
    for (int i = 0; i < q; ++i) {
        const SurfacePoint& a = chain.points[i];
        const SurfacePoint& b = chain.points[(i + 1) % q];
        to_next[i] = s.log(a, b).v;
        to_prev[(i + 1) % q] = s.log(b, a).v;
    }

    PolygonData poly;
    poly.lengths.resize(q);
    poly.turning.resize(q);
    for (int i = 0; i < q; ++i) {
        poly.lengths[i] = to_next[i].norm();
        if (!(poly.lengths[i] > 0)) {
            throw UsageError("geodesic_polygon: coincident vertices at index " +
                             std::to_string(i));
        }
        // Turn at the end of side i, i.e. at vertex i+1: angle from the
        // incoming direction -to_prev to the outgoing direction to_next.
        int v = (i + 1) % q;
        poly.turning[i] =
            signed_angle(-to_prev[v], to_next[v], chain.points[v].normal);
    }
    poly.fiducial = frame_from_tangent(chain.points[0], to_next[0]);
    return poly;
}

PolygonData line_polygon(const PolyChain& chain) {
    int q = chain.size();
    if (q < 3) throw UsageError("line_polygon: need at least 3 vertices");

    auto projected = [&](int at, int to) -> Vec3 {
        Vec3 chord = chain.points[to].position - chain.points[at].position;
        const Vec3& n = chain.points[at].normal;
        double along = n.dot(chord);
        if (along * along > 0.5 * chord.squaredNorm()) {
            throw DegenerateProjection(
                "line_polygon: chord at vertex " + std::to_string(at) +
                " is closer to the surface normal than to the tangent plane");
        }
        return project_to_tangent(chord, n);
    };

    PolygonData poly;
    poly.lengths.resize(q);
    poly.turning.resize(q);
    for (int i = 0; i < q; ++i) {
        int v = (i + 1) % q;
        poly.lengths[i] =
            (chain.points[v].position - chain.points[i].position).norm();
        if (!(poly.lengths[i] > 0)) {
            throw UsageError("line_polygon: coincident vertices at index " +
                             std::to_string(i));
        }
        Vec3 in = -projected(v, i);
        Vec3 out = projected(v, (v + 1) % q);
        poly.turning[i] = signed_angle(in, out, chain.points[v].normal);
    }
    poly.fiducial = frame_from_tangent(chain.points[0], projected(0, 1));
    return poly;
}

PolyChain ingest_contour(const std::vector<Vec3>& points, const std::vector<Vec3>& normals,
                         int smoothing_passes) {
    if (points.size() != normals.size()) {
        throw UsageError("ingest_contour: points and normals differ in count");
    }
    if (smoothing_passes < 0) throw UsageError("ingest_contour: negative pass count");

    std::vector<Vec3> p, n;
    for (size_t i = 0; i < points.size(); ++i) {
        if (!p.empty() && (points[i] - p.back()).norm() <= 1e-12) continue;
        p.push_back(points[i]);
        n.push_back(normals[i]);
    }
    while (p.size() > 1 && (p.front() - p.back()).norm() <= 1e-12) {
        p.pop_back();
        n.pop_back();
    }
    if (p.size() < 3) {
        throw TooFewPoints("ingest_contour: fewer than 3 distinct points (" +
                           std::to_string(p.size()) + ") after deduplication");
    }

    size_t m = p.size();
    for (int pass = 0; pass < smoothing_passes; ++pass) {
        std::vector<Vec3> smooth(m);
        for (size_t i = 0; i < m; ++i) {
            smooth[i] = (p[(i + m - 1) % m] + p[i] + p[(i + 1) % m]) / 3.0;
        }
        p.swap(smooth);
    }

    PolyChain chain;
    chain.provenance = PolyChain::Provenance::Approximate;
    double mean = 0.0;
    for (size_t i = 0; i < m; ++i) mean += (p[(i + 1) % m] - p[i]).norm();
    chain.resolution = mean / m;
    chain.points.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        double nn = n[i].norm();
        if (nn < 1e-12) {
            throw UsageError("ingest_contour: zero-length normal at point " +
                             std::to_string(i));
        }
        chain.points.push_back({p[i], n[i] / nn});
    }
    return chain;
}

ConvergenceReport convergence_study(const ParamCurve& c, Scheme scheme,
                                    const std::vector<int>& qs, int rank) {
    if (qs.empty()) throw UsageError("convergence_study: no refinement levels given");

    ConvergenceReport rep;
    rep.scheme = scheme;
    rep.rank = rank;

    SmoothCurveData fine = make_smooth_data(c, 8192);
    SmoothCurveData coarse = make_smooth_data(c, 4096);
    rep.ref_length = fine.total_length();
    rep.ref_turning = fine.total_turning();
    rep.ref_components = components(fine, rank);
    IrreducibleComponents cc = components(coarse, rank);
    rep.reference_drift = std::max(
        {std::abs(coarse.total_turning() - rep.ref_turning),
         std::abs(cc.g1 - rep.ref_components.g1) / rep.ref_length,
         std::abs(cc.g2 - rep.ref_components.g2) / rep.ref_length});

    double nan = std::numeric_limits<double>::quiet_NaN();
    for (int q : qs) {
        PolyChain chain = sample_curve(c, q);
        PolygonData poly = scheme == Scheme::Geodesic ? geodesic_polygon(chain, c.surface())
                                                      : line_polygon(chain);
        ConvergenceRow row;
        row.q = q;
        row.err_length = std::abs(rep.ref_length - poly.total_length());
        row.err_turning = std::abs(rep.ref_turning - poly.total_turning());
        row.err_angle = nan;
        if (scheme == Scheme::Geodesic) {
            // Transport angles compared at the sample arcs; both sides use
            // the same fiducial point (arc 0).
            row.err_angle = 0.0;
            for (int i = 0; i < q; ++i) {
                double s = rep.ref_length * static_cast<double>(i) / q;
                double ref = transport_angle(fine, TransportMode::DefectCorrected, s);
                double got = side_angle(poly, i);
                row.err_angle = std::max(row.err_angle, std::abs(ref - got));
            }
        }
        IrreducibleComponents g = components(poly, rank);
        double d1 = rep.ref_components.g1 / rep.ref_length - g.g1 / g.length;
        double d2 = rep.ref_components.g2 / rep.ref_length - g.g2 / g.length;
        row.err_components = std::hypot(d1, d2);

        if (rep.rows.empty()) {
            row.eoc_length = row.eoc_turning = row.eoc_angle = row.eoc_components = nan;
        } else {
            const ConvergenceRow& prev = rep.rows.back();
            double ratio = std::log(static_cast<double>(q) / prev.q);
            auto eoc = [&](double ep, double ec) { return std::log(ep / ec) / ratio; };
            row.eoc_length = eoc(prev.err_length, row.err_length);
            row.eoc_turning = eoc(prev.err_turning, row.err_turning);
            row.eoc_angle = scheme == Scheme::Geodesic ? eoc(prev.err_angle, row.err_angle)
                                                       : nan;
            row.eoc_components = eoc(prev.err_components, row.err_components);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace surfmink
