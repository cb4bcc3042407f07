#include "surfmink/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace surfmink {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Step count rule shared by exp and the shooting solver: at least 64 steps,
// and never coarser than 0.01 arc length per step.
int step_count(double length) {
    return std::max(64, static_cast<int>(std::ceil(length / 0.01)));
}

struct GeodesicState {
    Vec3 p;
    Vec3 v;
};

Vec3 geodesic_accel(const Surface& s, const Vec3& p, const Vec3& v) {
    return -s.normal_curvature_form(p, v) * s.normal(p);
}

GeodesicState rk4_step(const Surface& s, const GeodesicState& y, double h) {
    Vec3 k1p = y.v;
    Vec3 k1v = geodesic_accel(s, y.p, y.v);
    Vec3 k2p = y.v + 0.5 * h * k1v;
    Vec3 k2v = geodesic_accel(s, y.p + 0.5 * h * k1p, k2p);
    Vec3 k3p = y.v + 0.5 * h * k2v;
    Vec3 k3v = geodesic_accel(s, y.p + 0.5 * h * k2p, k3p);
    Vec3 k4p = y.v + h * k3v;
    Vec3 k4v = geodesic_accel(s, y.p + h * k3p, k4p);
    return {y.p + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
            y.v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

std::string fmt_point(const Vec3& x) {
    std::ostringstream os;
    os << "(" << x.x() << ", " << x.y() << ", " << x.z() << ")";
    return os.str();
}

} // namespace

SurfacePoint Surface::exp(const TangentVector& tv) const {
    double length = tv.v.norm();
    if (length < 1e-15) return tv.base;

    int n = step_count(length);
    double h = length / n;
    GeodesicState y{tv.base.position, tv.v / length};
    for (int i = 0; i < n; ++i) {
        y = rk4_step(*this, y, h);
        // Re-impose the constraints the continuous flow preserves exactly:
        // point on the surface, velocity tangent and of unit speed.
        y.p = project(y.p);
        Vec3 nrm = normal(y.p);
        y.v = project_to_tangent(y.v, nrm);
        double speed = y.v.norm();
        if (!y.p.allFinite() || !(speed > 1e-8)) {
            throw StepFailure("solve_geodesic: non-finite state after step " +
                              std::to_string(i) + " from " + fmt_point(tv.base.position));
        }
        y.v /= speed;
    }
    return at(y.p);
}

TangentVector Surface::log(const SurfacePoint& x, const SurfacePoint& y) const {
    Vec3 chord = y.position - x.position;
    double chord_len = chord.norm();
    if (chord_len < 1e-14) return {x, Vec3::Zero()};

    Vec3 t0 = project_to_tangent(chord, x.normal);
    if (t0.norm() < 1e-12 * chord_len) {
        throw NoConvergence("geodesic_log: chord from " + fmt_point(x.position) +
                            " to " + fmt_point(y.position) +
                            " is normal to the surface; no usable start direction");
    }
    auto [e1, e2] = tangent_basis(x.normal);

    auto residual = [&](const Eigen::Vector2d& u) -> Vec3 {
        Vec3 v = u[0] * e1 + u[1] * e2;
        return exp({x, v}).position - y.position;
    };

    // Newton with a forward-difference Jacobian on the two tangent
    // components of the start vector. The chord rarely misses by much, but
    // a fan of rotated/stretched restarts covers the long-segment cases.
    auto shoot = [&](Eigen::Vector2d u, TangentVector& out) -> bool {
        Eigen::Vector2d best_u = u;
        double best_res = 1e300;
        Vec3 f = residual(u);
        for (int it = 0; it < 50; ++it) {
            double res = f.norm();
            if (res < best_res) {
                best_res = res;
                best_u = u;
            }
            if (res < 1e-10) {
                out = {x, u[0] * e1 + u[1] * e2};
                return true;
            }
            double eps = 1e-7 * std::max(1.0, u.norm());
            Eigen::Matrix<double, 3, 2> J;
            J.col(0) = (residual(u + Eigen::Vector2d(eps, 0)) - f) / eps;
            J.col(1) = (residual(u + Eigen::Vector2d(0, eps)) - f) / eps;
            Eigen::Matrix2d JtJ = J.transpose() * J;
            Eigen::Vector2d rhs = -J.transpose() * f;
            if (std::abs(JtJ.determinant()) < 1e-30) return false;
            Eigen::Vector2d du = JtJ.ldlt().solve(rhs);
            // Halve overly bold steps instead of leaving the basin.
            double max_step = 2.0 * std::max(chord_len, u.norm());
            if (du.norm() > max_step) du *= max_step / du.norm();
            u += du;
            f = residual(u);
        }
        return false;
    };

    Vec3 dir = t0.normalized();
    double a0 = std::atan2(e2.dot(dir), e1.dot(dir));
    TangentVector result;
    for (double rot : {0.0, 0.3, -0.3, 0.7, -0.7, 1.2, -1.2}) {
        for (double stretch : {1.0, 1.15, 1.35}) {
            double a = a0 + rot;
            Eigen::Vector2d u0 = stretch * chord_len *
                                 Eigen::Vector2d(std::cos(a), std::sin(a));
            if (shoot(u0, result)) return result;
        }
    }
    throw NoConvergence("geodesic_log: shooting failed from " + fmt_point(x.position) +
                        " to " + fmt_point(y.position));
}

TangentVector Surface::log(const SurfacePoint& x, const SurfacePoint& y,
                           const TangentVector& hint) const {
    Vec3 chord = y.position - x.position;
    if (chord.norm() < 1e-14) return {x, Vec3::Zero()};

    Vec3 v0 = project_to_tangent(hint.v, x.normal);
    if (v0.norm() < 1e-12) return log(x, y);

    auto [e1, e2] = tangent_basis(x.normal);
    Eigen::Vector2d u(e1.dot(v0), e2.dot(v0));

    auto residual = [&](const Eigen::Vector2d& w) -> Vec3 {
        Vec3 v = w[0] * e1 + w[1] * e2;
        return exp({x, v}).position - y.position;
    };

    // Same Newton descent as the plain logarithm, but started at the hint
    // only and with a much tighter update cap. The cap is what keeps the
    // iteration on the hinted branch: near a conjugate point the shooting
    // Jacobian degenerates and an uncapped update could carry u across a
    // whole extra winding of the geodesic.
    double cap = std::max(0.5, 0.2 * v0.norm());
    Vec3 f = residual(u);
    for (int it = 0; it < 60; ++it) {
        if (f.norm() < 1e-10) return {x, u[0] * e1 + u[1] * e2};
        double eps = 1e-7 * std::max(1.0, u.norm());
        Eigen::Matrix<double, 3, 2> J;
        J.col(0) = (residual(u + Eigen::Vector2d(eps, 0)) - f) / eps;
        J.col(1) = (residual(u + Eigen::Vector2d(0, eps)) - f) / eps;
        Eigen::Matrix2d JtJ = J.transpose() * J;
        if (std::abs(JtJ.determinant()) < 1e-30) break;
        Eigen::Vector2d du = JtJ.ldlt().solve(-J.transpose() * f);
        if (du.norm() > cap) du *= cap / du.norm();
        u += du;
        f = residual(u);
    }
    throw NoConvergence("geodesic_log: branch tracking from " + fmt_point(x.position) +
                        " to " + fmt_point(y.position) +
                        " did not converge from the supplied start vector");
}

double Surface::distance(const SurfacePoint& x, const SurfacePoint& y) const {
    return log(x, y).norm();
}

// ---- plane ----------------------------------------------------------------

SurfacePoint Plane::exp(const TangentVector& tv) const {
    return at(tv.base.position + tv.v);
}

TangentVector Plane::log(const SurfacePoint& x, const SurfacePoint& y) const {
    Vec3 d = y.position - x.position;
    d.z() = 0.0;
    return {x, d};
}

double Plane::distance(const SurfacePoint& x, const SurfacePoint& y) const {
    return log(x, y).norm();
}

// ---- sphere ---------------------------------------------------------------

Sphere::Sphere(double radius) : radius_(radius) {
    if (!(radius > 0)) throw UsageError("sphere radius must be positive");
}

Vec3 Sphere::project(const Vec3& x) const {
    double r = x.norm();
    if (r < 1e-300) throw StepFailure("sphere project: point at the center");
    return (radius_ / r) * x;
}

double Sphere::injectivity_guard() const { return kPi * radius_; }

SurfacePoint Sphere::exp(const TangentVector& tv) const {
    double length = tv.v.norm();
    if (length < 1e-300) return tv.base;
    double ang = length / radius_;
    Vec3 xu = tv.base.position / radius_;
    Vec3 du = tv.v / length;
    Vec3 p = radius_ * (std::cos(ang) * xu + std::sin(ang) * du);
    return {p, p.normalized()};
}

TangentVector Sphere::log(const SurfacePoint& x, const SurfacePoint& y) const {
    Vec3 xu = x.position / radius_;
    Vec3 yu = y.position / radius_;
    double c = std::clamp(xu.dot(yu), -1.0, 1.0);
    double ang = std::acos(c);
    if (ang > kPi - 1e-9) {
        throw CutLocus("geodesic_log: points " + fmt_point(x.position) + " and " +
                       fmt_point(y.position) + " are antipodal on the sphere");
    }
    Vec3 perp = yu - c * xu;
    double pn = perp.norm();
    if (pn < 1e-300) return {x, Vec3::Zero()};
    return {x, (radius_ * ang / pn) * perp};
}

double Sphere::distance(const SurfacePoint& x, const SurfacePoint& y) const {
    double c = std::clamp(x.position.dot(y.position) / (radius_ * radius_), -1.0, 1.0);
    return radius_ * std::acos(c);
}

// ---- ellipsoid ------------------------------------------------------------

Ellipsoid::Ellipsoid(double a, double b, double c) : axes_(a, b, c) {
    if (!(a > 0 && b > 0 && c > 0)) throw UsageError("ellipsoid semi-axes must be positive");
    inv_sq_ = Vec3(1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
}

double Ellipsoid::implicit(const Vec3& x) const {
    return x.cwiseProduct(x).dot(inv_sq_) - 1.0;
}

Vec3 Ellipsoid::gradient(const Vec3& x) const {
    return 2.0 * x.cwiseProduct(inv_sq_);
}

Vec3 Ellipsoid::normal(const Vec3& x) const {
    return gradient(x).normalized();
}

Vec3 Ellipsoid::project(const Vec3& x) const {
    // Newton along the (fixed) gradient direction; the integrator only ever
    // drifts O(h^5) off the surface, so a few steps reach round-off.
    Vec3 p = x;
    Vec3 d = gradient(x).normalized();
    for (int it = 0; it < 8; ++it) {
        double f = implicit(p);
        if (std::abs(f) < 1e-15) break;
        double slope = gradient(p).dot(d);
        if (std::abs(slope) < 1e-30) break;
        p -= (f / slope) * d;
    }
    return p;
}

double Ellipsoid::normal_curvature_form(const Vec3& x, const Vec3& v) const {
    // v^T H v / |grad|, with the constant Hessian H = 2 diag(inv_sq).
    double vHv = 2.0 * v.cwiseProduct(v).dot(inv_sq_);
    return vHv / gradient(x).norm();
}

double Ellipsoid::injectivity_guard() const {
    return 0.5 * kPi * axes_.minCoeff();
}

// ---- torus ----------------------------------------------------------------

Torus::Torus(double major, double minor) : major_(major), minor_(minor) {
    if (!(major > minor && minor > 0)) {
        throw UsageError("torus radii must satisfy major > minor > 0");
    }
}

Vec3 Torus::embed(double phi, double theta) const {
    double w = major_ + minor_ * std::cos(theta);
    return {w * std::cos(phi), w * std::sin(phi), minor_ * std::sin(theta)};
}

Vec3 Torus::normal(const Vec3& x) const {
    double rho = std::hypot(x.x(), x.y());
    if (rho < 1e-300) throw StepFailure("torus normal: point on the axis");
    Vec3 ring(major_ * x.x() / rho, major_ * x.y() / rho, 0.0);
    return (x - ring).normalized();
}

Vec3 Torus::project(const Vec3& x) const {
    double rho = std::hypot(x.x(), x.y());
    if (rho < 1e-300) throw StepFailure("torus project: point on the axis");
    Vec3 ring(major_ * x.x() / rho, major_ * x.y() / rho, 0.0);
    Vec3 d = x - ring;
    double dn = d.norm();
    if (dn < 1e-300) throw StepFailure("torus project: point on the ring circle");
    return ring + (minor_ / dn) * d;
}

double Torus::normal_curvature_form(const Vec3& x, const Vec3& v) const {
    // Implicit form F = (rho - R)^2 + z^2 - r^2 gives v^T H v / |grad F|
    // with the Hessian entries worked out in cylindrical coordinates.
    double rho = std::hypot(x.x(), x.y());
    double rho3 = rho * rho * rho;
    double hxx = 2.0 * (x.x() * x.x() / (rho * rho) + (rho - major_) * x.y() * x.y() / rho3);
    double hyy = 2.0 * (x.y() * x.y() / (rho * rho) + (rho - major_) * x.x() * x.x() / rho3);
    double hxy = 2.0 * x.x() * x.y() * major_ / rho3;
    double vHv = hxx * v.x() * v.x() + hyy * v.y() * v.y() + 2.0 * hxy * v.x() * v.y() +
                 2.0 * v.z() * v.z();
    double gx = 2.0 * (rho - major_) * x.x() / rho;
    double gy = 2.0 * (rho - major_) * x.y() / rho;
    double gz = 2.0 * x.z();
    double gnorm = std::sqrt(gx * gx + gy * gy + gz * gz);
    if (gnorm < 1e-300) throw StepFailure("torus curvature form: degenerate gradient");
    return vHv / gnorm;
}

double Torus::injectivity_guard() const {
    return 0.5 * kPi * minor_;
}

// ---- factories ------------------------------------------------------------

std::shared_ptr<const Plane> make_plane() { return std::make_shared<Plane>(); }

std::shared_ptr<const Sphere> make_sphere(double radius) {
    return std::make_shared<Sphere>(radius);
}

std::shared_ptr<const Ellipsoid> make_ellipsoid(double a, double b, double c) {
    return std::make_shared<Ellipsoid>(a, b, c);
}

std::shared_ptr<const Torus> make_torus(double major, double minor) {
    return std::make_shared<Torus>(major, minor);
}

} // namespace surfmink
