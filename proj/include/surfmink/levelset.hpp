#pragma once

#include "surfmink/curve_approx.hpp"
#include "surfmink/tri_mesh.hpp"

namespace surfmink {

// Signed flower field on the vertices of a unit sphere mesh: in the polar
// chart centered at colatitude x0 and longitude y0,
//   rho(x) = sqrt(theta^2 + phi^2) - (r0 - a sin(omega t)),
// with t the polar angle of (theta, phi) around the center. Negative inside
// the flower. Throws ChartSingularity when the zero set runs within 1e-8 of
// a pole of the chart.
std::vector<double> flower_levelset(const TriMesh& mesh, const FlowerParams& params);

// Traces the zero set of the vertex field across the mesh into a closed
// chain of edge intersection points with interpolated normals. Vertex
// values within 1e-12 * max|rho| of zero are nudged positive first so every
// crossing is transversal. The chain is oriented so the negative region
// lies to its left; more than one closed component raises
// MultipleComponents, a component hitting a mesh border raises OpenChain.
PolyChain extract_zero_levelset(const TriMesh& mesh, const std::vector<double>& rho);

// Area of the region {rho < 0}: full triangles plus the negative part of
// the cut triangles (clipped along the same interpolated crossing points
// the extraction uses).
double clipped_area(const TriMesh& mesh, const std::vector<double>& rho);

} // namespace surfmink
