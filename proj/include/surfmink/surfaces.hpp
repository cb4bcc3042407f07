#pragma once

#include <memory>

#include "surfmink/errors.hpp"
#include "surfmink/frame.hpp"

namespace surfmink {

enum class SurfaceKind { Plane, Sphere, Ellipsoid, Torus, Mesh };

// Abstract smooth surface embedded in R^3. Analytic backends provide the
// implicit function machinery the geodesic solvers need; the mesh backend
// (see tri_mesh.hpp) only exposes positions and averaged normals.
class Surface {
public:
    virtual ~Surface() = default;

    virtual SurfaceKind kind() const = 0;

    // Unit outward normal; x is assumed to lie on (or very near) the surface.
    virtual Vec3 normal(const Vec3& x) const = 0;

    // Closest-point projection (analytic where possible, otherwise Newton on
    // the implicit equation along its gradient).
    virtual Vec3 project(const Vec3& x) const = 0;

    // Second fundamental form term <v, dn(v)> driving the geodesic equation
    // gamma'' = -<gamma', dn(gamma')> n. v need not be normalized.
    virtual double normal_curvature_form(const Vec3& x, const Vec3& v) const = 0;

    // Separation below which log(x, .) is guaranteed single-valued. A
    // conservative bound; solvers treat it as advice rather than a wall,
    // since locally minimizing geodesics remain useful beyond it.
    virtual double injectivity_guard() const = 0;

    SurfacePoint at(const Vec3& x) const {
        Vec3 p = project(x);
        return {p, normal(p)};
    }

    // Riemannian exponential: walk a geodesic from the base point of tv in
    // direction tv.v for arc length |tv.v|. Default integrates the embedded
    // geodesic ODE with a classical 4th-order scheme at fixed step
    // length/max(64, ceil(length/0.01)), projecting back to the surface
    // after every step. Throws StepFailure on a non-finite state.
    virtual SurfacePoint exp(const TangentVector& tv) const;

    // Riemannian logarithm: the tangent vector v at x with exp_x(v) = y.
    // Default is single shooting on the initial direction with Newton
    // iterations (finite-difference Jacobian), target residual 1e-10,
    // at most 50 iterations, initial guess the projected chord. Falls back
    // to a fan of restarted directions before giving up with NoConvergence.
    virtual TangentVector log(const SurfacePoint& x, const SurfacePoint& y) const;

    // Branch-tracking logarithm: Newton from the supplied start vector with
    // no restart fan, so it converges to the geodesic branch nearest the
    // hint instead of snapping to a minimizing one. Used by sweeps that
    // deform a polygon continuously through configurations where the
    // tracked edge stops being the shortest connection. The hint's base
    // point may differ from x; only its direction and length are used.
    TangentVector log(const SurfacePoint& x, const SurfacePoint& y,
                      const TangentVector& hint) const;

    virtual double distance(const SurfacePoint& x, const SurfacePoint& y) const;
};

class Plane final : public Surface {
public:
    SurfaceKind kind() const override { return SurfaceKind::Plane; }
    Vec3 normal(const Vec3&) const override { return Vec3::UnitZ(); }
    Vec3 project(const Vec3& x) const override { return {x.x(), x.y(), 0.0}; }
    double normal_curvature_form(const Vec3&, const Vec3&) const override { return 0.0; }
    double injectivity_guard() const override { return 1e300; }

    using Surface::log;
    SurfacePoint exp(const TangentVector& tv) const override;
    TangentVector log(const SurfacePoint& x, const SurfacePoint& y) const override;
    double distance(const SurfacePoint& x, const SurfacePoint& y) const override;
};

class Sphere final : public Surface {
public:
    explicit Sphere(double radius);

    SurfaceKind kind() const override { return SurfaceKind::Sphere; }
    double radius() const { return radius_; }
    Vec3 normal(const Vec3& x) const override { return x.normalized(); }
    Vec3 project(const Vec3& x) const override;
    double normal_curvature_form(const Vec3&, const Vec3& v) const override {
        return v.squaredNorm() / radius_;
    }
    double injectivity_guard() const override;

    // Great-circle formulas; no integration involved.
    using Surface::log;
    SurfacePoint exp(const TangentVector& tv) const override;
    TangentVector log(const SurfacePoint& x, const SurfacePoint& y) const override;
    double distance(const SurfacePoint& x, const SurfacePoint& y) const override;

private:
    double radius_;
};

class Ellipsoid final : public Surface {
public:
    Ellipsoid(double a, double b, double c);

    SurfaceKind kind() const override { return SurfaceKind::Ellipsoid; }
    Vec3 semi_axes() const { return axes_; }
    Vec3 normal(const Vec3& x) const override;
    Vec3 project(const Vec3& x) const override;
    double normal_curvature_form(const Vec3& x, const Vec3& v) const override;
    double injectivity_guard() const override;

private:
    double implicit(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;

    Vec3 axes_;
    Vec3 inv_sq_; // (1/a^2, 1/b^2, 1/c^2)
};

class Torus final : public Surface {
public:
    // Ring of radius `major` around the z axis, tube of radius `minor`.
    Torus(double major, double minor);

    SurfaceKind kind() const override { return SurfaceKind::Torus; }
    double major_radius() const { return major_; }
    double minor_radius() const { return minor_; }
    Vec3 normal(const Vec3& x) const override;
    Vec3 project(const Vec3& x) const override;
    double normal_curvature_form(const Vec3& x, const Vec3& v) const override;
    double injectivity_guard() const override;

    // Embedding of the angle chart (phi around the z axis, theta around the
    // tube; theta = 0 on the outer equator).
    Vec3 embed(double phi, double theta) const;

private:
    double major_;
    double minor_;
};

std::shared_ptr<const Plane> make_plane();
std::shared_ptr<const Sphere> make_sphere(double radius);
std::shared_ptr<const Ellipsoid> make_ellipsoid(double a, double b, double c);
std::shared_ptr<const Torus> make_torus(double major, double minor);

} // namespace surfmink
