#pragma once

#include <array>
#include <vector>

#include "surfmink/surfaces.hpp"

namespace surfmink {

// Triangle mesh with consistently oriented faces (counterclockwise seen from
// outside) and area-weighted unit vertex normals.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Vec3> vertex_normals;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    Vec3 face_normal(int f) const; // unit
    double face_area(int f) const;
    double max_edge_length() const;
};

// Fills vertex_normals with normalized area-weighted face normal averages.
void compute_vertex_normals(TriMesh& mesh);

// Checks that every edge is shared by exactly two faces with opposite
// direction (closed, consistently oriented 2-manifold); throws NonManifold
// naming an offending edge.
void validate_closed_manifold(const TriMesh& mesh);

// Unit sphere mesh: octahedron refined `level` times by edge-midpoint
// subdivision, every new vertex projected back onto the sphere.
TriMesh sphere_octahedron_mesh(int level);

// Surface view of a mesh: positions and averaged vertex normals only. The
// smooth-geometry operations are not defined here and throw
// UnsupportedOnMesh.
class MeshSurface final : public Surface {
public:
    explicit MeshSurface(TriMesh mesh);

    SurfaceKind kind() const override { return SurfaceKind::Mesh; }
    const TriMesh& mesh() const { return mesh_; }

    // Nearest-vertex lookups.
    Vec3 normal(const Vec3& x) const override;
    Vec3 project(const Vec3& x) const override;

    double normal_curvature_form(const Vec3&, const Vec3&) const override;
    double injectivity_guard() const override;
    SurfacePoint exp(const TangentVector&) const override;
    TangentVector log(const SurfacePoint&, const SurfacePoint&) const override;
    double distance(const SurfacePoint&, const SurfacePoint&) const override;

private:
    int nearest_vertex(const Vec3& x) const;

    TriMesh mesh_;
};

} // namespace surfmink
