#include "surfmink/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace surfmink {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> nudged(const std::vector<double>& rho) {
    double scale = 0.0;
    for (double r : rho) scale = std::max(scale, std::abs(r));
    double eps = 1e-12 * std::max(scale, 1e-300);
    std::vector<double> out = rho;
    for (double& r : out) {
        if (std::abs(r) < eps) r = eps;
    }
    return out;
}

Vec3 cut_point(const Vec3& va, const Vec3& vb, double ra, double rb) {
    return (rb * va - ra * vb) / (rb - ra);
}

} // namespace

std::vector<double> flower_levelset(const TriMesh& mesh, const FlowerParams& params) {
    if (mesh.vertex_normals.size() != mesh.vertices.size()) {
        throw UsageError("flower_levelset: mesh has no vertex normals");
    }
    size_t n = mesh.vertices.size();
    std::vector<double> rho(n);
    std::vector<double> pole_gap(n); // angular distance to the nearest chart pole
    for (size_t i = 0; i < n; ++i) {
        const Vec3& v = mesh.vertices[i];
        double r = v.norm();
        double colat = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
        double lon = std::atan2(v.y(), v.x());
        double theta = colat - params.x0;
        double phi = lon - params.y0;
        double t = std::atan2(phi, theta) + kPi;
        rho[i] = std::hypot(theta, phi) - (params.r0 - params.a * std::sin(params.omega * t));
        pole_gap[i] = std::min(colat, kPi - colat);
    }

    // The chart is only degenerate at its poles; that is fatal exactly when
    // the zero set runs through such a vertex's triangles.
    std::vector<double> r = nudged(rho);
    for (const auto& t : mesh.faces) {
        bool neg = r[t[0]] < 0 || r[t[1]] < 0 || r[t[2]] < 0;
        bool pos = r[t[0]] > 0 || r[t[1]] > 0 || r[t[2]] > 0;
        if (neg && pos) {
            for (int k = 0; k < 3; ++k) {
                if (pole_gap[t[k]] < 1e-8) {
                    throw ChartSingularity(
                        "flower_levelset: zero set crosses a triangle whose vertex " +
                        std::to_string(t[k]) + " sits at a chart pole");
                }
            }
        }
    }
    return rho;
}

PolyChain extract_zero_levelset(const TriMesh& mesh, const std::vector<double>& rho_in) {
    if (rho_in.size() != mesh.vertices.size()) {
        throw UsageError("extract_zero_levelset: field size does not match the mesh");
    }
    std::vector<double> rho = nudged(rho_in);

    // Undirected edge -> adjacent faces.
    std::map<std::pair<int, int>, std::array<int, 2>> edge_faces;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.faces[f];
        for (int e = 0; e < 3; ++e) {
            auto key = std::minmax(t[e], t[(e + 1) % 3]);
            auto [it, fresh] = edge_faces.emplace(key, std::array<int, 2>{f, -1});
            if (!fresh) {
                if (it->second[1] != -1) {
                    throw NonManifold("extract_zero_levelset: edge shared by 3+ faces");
                }
                it->second[1] = f;
            }
        }
    }

    auto is_cut = [&](int a, int b) { return (rho[a] < 0) != (rho[b] < 0); };
    auto cut_edges_of = [&](int f) {
        std::vector<std::pair<int, int>> cuts;
        const auto& t = mesh.faces[f];
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (is_cut(a, b)) cuts.push_back(std::minmax(a, b));
        }
        return cuts;
    };

    std::vector<int> cut_faces;
    for (int f = 0; f < mesh.face_count(); ++f) {
        if (!cut_edges_of(f).empty()) cut_faces.push_back(f);
    }
    if (cut_faces.empty()) {
        throw OpenChain("extract_zero_levelset: the field does not change sign");
    }

    // Walk from the first cut face, leaving each face through the cut edge
    // it was not entered by, until the loop closes.
    std::vector<char> visited(mesh.face_count(), 0);
    int start = cut_faces.front();
    std::vector<std::pair<int, std::pair<int, int>>> path; // (face, exit edge)
    int face = start;
    std::pair<int, int> entry{-1, -1};
    for (;;) {
        auto cuts = cut_edges_of(face);
        if (cuts.size() != 2) {
            throw OpenChain("extract_zero_levelset: face " + std::to_string(face) +
                            " has " + std::to_string(cuts.size()) + " cut edges");
        }
        visited[face] = 1;
        auto exit = cuts[0] == entry ? cuts[1] : cuts[0];
        path.push_back({face, exit});
        auto adj = edge_faces.at(exit);
        if (adj[1] == -1) {
            throw OpenChain("extract_zero_levelset: zero set reaches a border edge (" +
                            std::to_string(exit.first) + ", " + std::to_string(exit.second) +
                            ")");
        }
        int next = adj[0] == face ? adj[1] : adj[0];
        entry = exit;
        face = next;
        if (face == start) break;
        if (visited[face]) {
            throw OpenChain("extract_zero_levelset: walk revisited a face before closing");
        }
    }
    for (int f : cut_faces) {
        if (!visited[f]) {
            throw MultipleComponents(
                "extract_zero_levelset: zero set has more than one closed component");
        }
    }

    // One crossing point per path entry; normals interpolated with the same
    // weights and re-normalized.
    size_t m = path.size();
    std::vector<SurfacePoint> raw(m);
    for (size_t i = 0; i < m; ++i) {
        auto [a, b] = path[i].second;
        Vec3 p = cut_point(mesh.vertices[a], mesh.vertices[b], rho[a], rho[b]);
        Vec3 n = cut_point(mesh.vertex_normals[a], mesh.vertex_normals[b], rho[a], rho[b]);
        double nn = n.norm();
        if (nn < 1e-12) {
            throw OpenChain("extract_zero_levelset: interpolated normal vanished on edge (" +
                            std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        raw[i] = {p, n / nn};
    }

    // Orient so the negative region lies to the left of the traversal: the
    // segment entering crossing i runs inside face path[i].first; test the
    // negative vertices of that face against it and take the majority.
    double vote = 0.0;
    for (size_t i = 0; i < m; ++i) {
        int f = path[i].first;
        const auto& t = mesh.faces[f];
        const Vec3& from = raw[(i + m - 1) % m].position;
        Vec3 d = raw[i].position - from;
        if (d.norm() <= 1e-12) continue;
        Vec3 fn = mesh.face_normal(f);
        for (int k = 0; k < 3; ++k) {
            if (rho[t[k]] < 0) {
                vote += fn.dot(d.cross(mesh.vertices[t[k]] - from)) > 0 ? 1.0 : -1.0;
            }
        }
    }
    if (vote < 0) std::reverse(raw.begin(), raw.end());

    PolyChain chain;
    chain.provenance = PolyChain::Provenance::Approximate;
    chain.resolution = mesh.max_edge_length();
    for (const auto& sp : raw) {
        // Crossings at a (nudged) vertex can coincide; keep one.
        if (!chain.points.empty() &&
            (chain.points.back().position - sp.position).norm() <= 1e-12) {
            continue;
        }
        chain.points.push_back(sp);
    }
    while (chain.points.size() > 1 &&
           (chain.points.front().position - chain.points.back().position).norm() <= 1e-12) {
        chain.points.pop_back();
    }
    if (chain.size() < 3) {
        throw OpenChain("extract_zero_levelset: chain degenerated to fewer than 3 points");
    }
    return chain;
}

double clipped_area(const TriMesh& mesh, const std::vector<double>& rho_in) {
    if (rho_in.size() != mesh.vertices.size()) {
        throw UsageError("clipped_area: field size does not match the mesh");
    }
    std::vector<double> rho = nudged(rho_in);

    double area = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.faces[f];
        int negatives = (rho[t[0]] < 0) + (rho[t[1]] < 0) + (rho[t[2]] < 0);
        if (negatives == 0) continue;
        if (negatives == 3) {
            area += mesh.face_area(f);
            continue;
        }
        // Clip polygon: negative vertices plus the two edge crossings, in
        // face order.
        std::vector<Vec3> poly;
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (rho[a] < 0) poly.push_back(mesh.vertices[a]);
            if ((rho[a] < 0) != (rho[b] < 0)) {
                poly.push_back(cut_point(mesh.vertices[a], mesh.vertices[b], rho[a], rho[b]));
            }
        }
        Vec3 acc = Vec3::Zero();
        for (size_t k = 1; k + 1 < poly.size(); ++k) {
            acc += (poly[k] - poly[0]).cross(poly[k + 1] - poly[0]);
        }
        area += 0.5 * acc.norm();
    }
    return area;
}

} // namespace surfmink
