#include "surfmink/param_curve.hpp"

#include <algorithm>
#include <cmath>

namespace surfmink {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 4-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461,
                               0.6521451548625461, 0.3478548451374538};

template <class F>
double gauss4(F&& f, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) sum += kGaussW[i] * f(mid + half * kGaussX[i]);
    return half * sum;
}

} // namespace

ParamCurve::ParamCurve(std::shared_ptr<const Surface> surface, CurveFunctions fns,
                       int table_intervals)
    : surface_(std::move(surface)), fns_(std::move(fns)) {
    if (table_intervals < 16) throw UsageError("arc-length table needs at least 16 intervals");
    double T = fns_.period;
    if (!(T > 0)) throw UsageError("curve period must be positive");
    if ((fns_.position(0.0) - fns_.position(T)).norm() > 1e-10) {
        throw UsageError("curve is not closed: endpoints differ beyond 1e-10");
    }

    t_nodes_.resize(table_intervals + 1);
    arc_.resize(table_intervals + 1);
    auto spd = [this](double t) { return fns_.velocity(t).norm(); };
    arc_[0] = 0.0;
    for (int i = 0; i <= table_intervals; ++i) {
        t_nodes_[i] = T * static_cast<double>(i) / table_intervals;
        if (spd(t_nodes_[i]) < 1e-10) {
            throw DegenerateVelocity("curve velocity vanishes near t = " +
                                     std::to_string(t_nodes_[i]));
        }
        if (i > 0) arc_[i] = arc_[i - 1] + gauss4(spd, t_nodes_[i - 1], t_nodes_[i]);
    }
}

double ParamCurve::arc_at_param(double t) const {
    double T = fns_.period;
    double wraps = std::floor(t / T);
    t -= wraps * T;
    auto it = std::upper_bound(t_nodes_.begin(), t_nodes_.end(), t);
    size_t k = std::min<size_t>(t_nodes_.size() - 2,
                                it == t_nodes_.begin() ? 0 : (it - t_nodes_.begin() - 1));
    auto spd = [this](double u) { return fns_.velocity(u).norm(); };
    return wraps * length() + arc_[k] + gauss4(spd, t_nodes_[k], t);
}

double ParamCurve::param_at_arc(double s) const {
    double L = length();
    double wraps = std::floor(s / L);
    s -= wraps * L;
    auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
    size_t k = std::min<size_t>(arc_.size() - 2,
                                it == arc_.begin() ? 0 : (it - arc_.begin() - 1));

    double base = t_nodes_[k];
    double lo = base, hi = t_nodes_[k + 1];
    auto spd = [this](double u) { return fns_.velocity(u).norm(); };
    // Newton on the residual arc inside the table interval, bisection as a
    // safety net; the speed is bounded away from zero so this is monotone.
    double t = lo + (hi - lo) * (s - arc_[k]) / std::max(arc_[k + 1] - arc_[k], 1e-300);
    for (int it2 = 0; it2 < 30; ++it2) {
        double g = arc_[k] + gauss4(spd, base, t) - s;
        if (std::abs(g) < 1e-13 * std::max(1.0, L)) break;
        double step = g / spd(t);
        double next = t - step;
        if (next <= lo || next >= hi) {
            if (g > 0) hi = t; else lo = t;
            next = 0.5 * (lo + hi);
        } else if (g > 0) {
            hi = t;
        } else {
            lo = t;
        }
        t = next;
    }
    return t + wraps * fns_.period;
}

SurfacePoint ParamCurve::point_at_arc(double s) const {
    Vec3 p = fns_.position(param_at_arc(s));
    return {p, surface_->normal(p)};
}

CurveFrame ParamCurve::frame_at_arc(double s) const {
    double t = param_at_arc(s);
    Vec3 p = fns_.position(t);
    SurfacePoint sp{p, surface_->normal(p)};
    return frame_from_tangent(sp, fns_.velocity(t));
}

double ParamCurve::geodesic_curvature_at_param(double t) const {
    Vec3 vel = fns_.velocity(t);
    double sp2 = vel.squaredNorm();
    if (sp2 < 1e-20) throw DegenerateVelocity("geodesic curvature at vanishing velocity");
    Vec3 n = surface_->normal(fns_.position(t));
    Vec3 nu = (vel / std::sqrt(sp2)).cross(n);
    // k_g = -<gamma''_s, nu>; the reparametrization term along tau drops out
    // because nu is orthogonal to the velocity.
    return -fns_.acceleration(t).dot(nu) / sp2;
}

double ParamCurve::geodesic_curvature_at_arc(double s) const {
    return geodesic_curvature_at_param(param_at_arc(s));
}

// ---- factories ------------------------------------------------------------

ParamCurve flower_curve(std::shared_ptr<const Ellipsoid> surface, const FlowerParams& p,
                        int table_intervals) {
    Vec3 ax = surface->semi_axes();
    double a1 = ax.x(), a2 = ax.y(), a3 = ax.z();
    double r0 = p.r0, am = p.a, w = p.omega, x0 = p.x0, y0 = p.y0;

    auto angles = [=](double u, double& th, double& ph, double& dth, double& dph,
                      double& ddth, double& ddph) {
        double r = r0 - am * std::sin(w * u);
        double dr = -am * w * std::cos(w * u);
        double ddr = am * w * w * std::sin(w * u);
        double cu = std::cos(u), su = std::sin(u);
        th = x0 + r * cu;
        ph = y0 + r * su;
        dth = dr * cu - r * su;
        dph = dr * su + r * cu;
        ddth = ddr * cu - 2.0 * dr * su - r * cu;
        ddph = ddr * su + 2.0 * dr * cu - r * su;
    };

    CurveFunctions fns;
    fns.period = 2.0 * kPi;
    fns.position = [=](double u) -> Vec3 {
        double th, ph, d1, d2, d3, d4;
        angles(u, th, ph, d1, d2, d3, d4);
        return {a1 * std::sin(th) * std::cos(ph), a2 * std::sin(th) * std::sin(ph),
                a3 * std::cos(th)};
    };
    fns.velocity = [=](double u) -> Vec3 {
        double th, ph, dth, dph, d3, d4;
        angles(u, th, ph, dth, dph, d3, d4);
        double st = std::sin(th), ct = std::cos(th);
        double sp = std::sin(ph), cp = std::cos(ph);
        return {a1 * (dth * ct * cp - dph * st * sp),
                a2 * (dth * ct * sp + dph * st * cp), -a3 * dth * st};
    };
    fns.acceleration = [=](double u) -> Vec3 {
        double th, ph, dth, dph, ddth, ddph;
        angles(u, th, ph, dth, dph, ddth, ddph);
        double st = std::sin(th), ct = std::cos(th);
        double sp = std::sin(ph), cp = std::cos(ph);
        double q = dth * dth + dph * dph;
        return {a1 * (ddth * ct * cp - q * st * cp - 2.0 * dth * dph * ct * sp -
                      ddph * st * sp),
                a2 * (ddth * ct * sp - q * st * sp + 2.0 * dth * dph * ct * cp +
                      ddph * st * cp),
                a3 * (-ddth * st - dth * dth * ct)};
    };
    return ParamCurve(std::move(surface), std::move(fns), table_intervals);
}

ParamCurve sphere_circle(std::shared_ptr<const Sphere> surface, double theta0,
                         int table_intervals) {
    double R = surface->radius();
    double st = std::sin(theta0), ct = std::cos(theta0);
    if (st < 1e-12) throw UsageError("sphere_circle: polar angle too close to the pole");

    CurveFunctions fns;
    fns.period = 2.0 * kPi;
    fns.position = [=](double u) -> Vec3 {
        return {R * st * std::cos(u), R * st * std::sin(u), R * ct};
    };
    fns.velocity = [=](double u) -> Vec3 {
        return {-R * st * std::sin(u), R * st * std::cos(u), 0.0};
    };
    fns.acceleration = [=](double u) -> Vec3 {
        return {-R * st * std::cos(u), -R * st * std::sin(u), 0.0};
    };
    return ParamCurve(std::move(surface), std::move(fns), table_intervals);
}

ParamCurve plane_circle(std::shared_ptr<const Plane> surface, double radius,
                        const Vec3& center, int table_intervals) {
    if (!(radius > 0)) throw UsageError("plane_circle: radius must be positive");
    Vec3 c = center;
    c.z() = 0.0;

    CurveFunctions fns;
    fns.period = 2.0 * kPi;
    fns.position = [=](double u) -> Vec3 {
        return c + Vec3(radius * std::cos(u), radius * std::sin(u), 0.0);
    };
    fns.velocity = [=](double u) -> Vec3 {
        return {-radius * std::sin(u), radius * std::cos(u), 0.0};
    };
    fns.acceleration = [=](double u) -> Vec3 {
        return {-radius * std::cos(u), -radius * std::sin(u), 0.0};
    };
    return ParamCurve(std::move(surface), std::move(fns), table_intervals);
}

} // namespace surfmink
