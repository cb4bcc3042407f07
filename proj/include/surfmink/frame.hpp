#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace surfmink {

using Vec3 = Eigen::Vector3d;

// A point on a surface together with the unit outward normal there.
struct SurfacePoint {
    Vec3 position = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
};

// A vector attached to a surface point, lying in its tangent plane.
struct TangentVector {
    SurfacePoint base;
    Vec3 v = Vec3::Zero();

    double norm() const { return v.norm(); }
};

// Right-handed orthonormal frame (nu, tau, n) along an oriented curve:
// tau is the unit tangent, n the outward surface normal, nu = tau x n the
// outer co-normal. With positive orientation the enclosed region sits to
// the left of tau and nu points away from it.
struct CurveFrame {
    SurfacePoint base;
    Vec3 nu = Vec3::UnitX();
    Vec3 tau = Vec3::UnitY();

    const Vec3& n() const { return base.normal; }
};

inline Vec3 project_to_tangent(const Vec3& v, const Vec3& unit_normal) {
    return v - unit_normal.dot(v) * unit_normal;
}

// Builds the co-normal frame from a tangent direction (normalized internally).
inline CurveFrame frame_from_tangent(const SurfacePoint& base, const Vec3& tangent) {
    CurveFrame f;
    f.base = base;
    f.tau = project_to_tangent(tangent, base.normal).normalized();
    f.nu = f.tau.cross(base.normal);
    return f;
}

// Angle of a tangent vector measured from nu toward tau, in (-pi, pi].
inline double frame_angle(const CurveFrame& f, const Vec3& v) {
    return std::atan2(f.tau.dot(v), f.nu.dot(v));
}

// Tangent vector at the frame's base point with the given angle from nu.
inline Vec3 frame_vector(const CurveFrame& f, double angle) {
    return std::cos(angle) * f.nu + std::sin(angle) * f.tau;
}

// Signed angle from a to b around the unit normal n, in [-pi, pi]. The
// inputs are tangent vectors at the same point.
inline double signed_angle(const Vec3& a, const Vec3& b, const Vec3& n) {
    double an = a.norm(), bn = b.norm();
    double c = a.dot(b) / (an * bn);
    double ang = std::acos(std::min(1.0, std::max(-1.0, c)));
    return n.dot(a.cross(b)) < 0 ? -ang : ang;
}

// Any orthonormal pair spanning the plane orthogonal to the unit vector n.
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& n) {
    Vec3 h = std::abs(n.x()) < 0.7 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = (h - n.dot(h) * n).normalized();
    return {e1, n.cross(e1)};
}

} // namespace surfmink
