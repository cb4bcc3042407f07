#include "surfmink/tri_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace surfmink {

Vec3 TriMesh::face_normal(int f) const {
    const auto& t = faces[f];
    Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
    double nn = n.norm();
    if (nn < 1e-300) throw NonManifold("degenerate face " + std::to_string(f));
    return n / nn;
}

double TriMesh::face_area(int f) const {
    const auto& t = faces[f];
    return 0.5 * (vertices[t[1]] - vertices[t[0]])
                     .cross(vertices[t[2]] - vertices[t[0]])
                     .norm();
}

double TriMesh::max_edge_length() const {
    double h = 0.0;
    for (const auto& t : faces) {
        for (int e = 0; e < 3; ++e) {
            h = std::max(h, (vertices[t[(e + 1) % 3]] - vertices[t[e]]).norm());
        }
    }
    return h;
}

void compute_vertex_normals(TriMesh& mesh) {
    mesh.vertex_normals.assign(mesh.vertices.size(), Vec3::Zero());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.faces[f];
        // Unnormalized cross product = 2 * area * unit normal, which makes
        // the plain sum an area-weighted average.
        Vec3 w = (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                     .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
        for (int k = 0; k < 3; ++k) mesh.vertex_normals[t[k]] += w;
    }
    for (auto& n : mesh.vertex_normals) {
        double nn = n.norm();
        if (nn < 1e-300) throw NonManifold("vertex with vanishing normal average");
        n /= nn;
    }
}

void validate_closed_manifold(const TriMesh& mesh) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : mesh.faces) {
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a == b) throw NonManifold("face with a repeated vertex");
            if (++directed[{a, b}] > 1) {
                throw NonManifold("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") appears twice in the same direction");
            }
        }
    }
    for (const auto& [edge, count] : directed) {
        if (!directed.count({edge.second, edge.first})) {
            throw NonManifold("edge (" + std::to_string(edge.first) + ", " +
                              std::to_string(edge.second) + ") has no opposite face");
        }
    }
}

TriMesh sphere_octahedron_mesh(int level) {
    if (level < 0) throw UsageError("sphere_octahedron_mesh: negative level");

    TriMesh mesh;
    mesh.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    mesh.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                  {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};

    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) -> int {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = (mesh.vertices[a] + mesh.vertices[b]).normalized();
            mesh.vertices.push_back(m);
            int idx = mesh.vertex_count() - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.faces.size() * 4);
        for (const auto& t : mesh.faces) {
            int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(next);
    }
    compute_vertex_normals(mesh);
    return mesh;
}

MeshSurface::MeshSurface(TriMesh mesh) : mesh_(std::move(mesh)) {
    if (mesh_.vertex_normals.size() != mesh_.vertices.size()) {
        compute_vertex_normals(mesh_);
    }
}

int MeshSurface::nearest_vertex(const Vec3& x) const {
    int best = 0;
    double best_d = (mesh_.vertices[0] - x).squaredNorm();
    for (int i = 1; i < mesh_.vertex_count(); ++i) {
        double d = (mesh_.vertices[i] - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Vec3 MeshSurface::normal(const Vec3& x) const {
    return mesh_.vertex_normals[nearest_vertex(x)];
}

Vec3 MeshSurface::project(const Vec3& x) const {
    return mesh_.vertices[nearest_vertex(x)];
}

double MeshSurface::normal_curvature_form(const Vec3&, const Vec3&) const {
    throw UnsupportedOnMesh("normal_curvature_form: not defined on a mesh backend");
}

double MeshSurface::injectivity_guard() const {
    throw UnsupportedOnMesh("injectivity_guard: not defined on a mesh backend");
}

SurfacePoint MeshSurface::exp(const TangentVector&) const {
    throw UnsupportedOnMesh("solve_geodesic: not defined on a mesh backend");
}

TangentVector MeshSurface::log(const SurfacePoint&, const SurfacePoint&) const {
    throw UnsupportedOnMesh("geodesic_log: not defined on a mesh backend");
}

double MeshSurface::distance(const SurfacePoint&, const SurfacePoint&) const {
    throw UnsupportedOnMesh("distance: not defined on a mesh backend");
}

} // namespace surfmink
