#include "surfmink/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace surfmink {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void validate(const PolygonData& d, const char* op) {
    if (d.lengths.size() != d.turning.size() || d.lengths.size() < 2) {
        throw UsageError(std::string(op) + ": polygon needs matching lengths/turning "
                                           "arrays with at least two sides");
    }
    for (double l : d.lengths) {
        if (!(l > 0)) throw UsageError(std::string(op) + ": non-positive side length");
    }
}

void validate(const SmoothCurveData& d, const char* op) {
    size_t n = d.arc.size();
    if (n < 17 || d.curvature.size() != n || d.cumulative.size() != n) {
        throw UsageError(std::string(op) + ": curve data needs a grid of at least "
                                           "16 intervals with matching sample arrays");
    }
    for (size_t i = 1; i < n; ++i) {
        if (!(d.arc[i] > d.arc[i - 1])) {
            throw UsageError(std::string(op) + ": arc grid is not strictly increasing");
        }
    }
}

void require_admissible(double total_turning, const char* op) {
    if (!(total_turning > kAdmissibilityFloor)) {
        throw InadmissibleTotalAngle(std::string(op) + ": total turning angle " +
                                     std::to_string(total_turning) +
                                     " is below the admissibility floor 1e-6");
    }
}

// Integral of the cubic through four samples over one sub-interval,
// evaluated with a 3-point Gauss rule (exact for cubics). Stencils are
// clamped at the ends, keeping the cumulative sums fourth-order overall.
double cubic_panel(const std::vector<double>& x, const std::vector<double>& y,
                   size_t stencil, double a, double b) {
    const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int g = 0; g < 3; ++g) {
        double t = mid + half * gx[g];
        double value = 0.0;
        for (size_t i = stencil; i < stencil + 4; ++i) {
            double li = 1.0;
            for (size_t j = stencil; j < stencil + 4; ++j) {
                if (j != i) li *= (t - x[j]) / (x[i] - x[j]);
            }
            value += y[i] * li;
        }
        sum += gw[g] * value;
    }
    return half * sum;
}

std::vector<double> cumulative_integral(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        size_t stencil = i == 0 ? 0 : std::min(i - 1, n - 4);
        out[i + 1] = out[i] + cubic_panel(x, y, stencil, x[i], x[i + 1]);
    }
    return out;
}

// Cumulative curvature at an arbitrary arc position: cubic Hermite between
// grid nodes, using the curvature samples as exact slopes.
double cumulative_at(const SmoothCurveData& d, double s) {
    if (s <= d.arc.front()) return d.cumulative.front();
    if (s >= d.arc.back()) return d.cumulative.back();
    auto it = std::upper_bound(d.arc.begin(), d.arc.end(), s);
    size_t k = (it - d.arc.begin()) - 1;
    double h = d.arc[k + 1] - d.arc[k];
    double u = (s - d.arc[k]) / h;
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * d.cumulative[k] + (u3 - 2 * u2 + u) * h * d.curvature[k] +
           (-2 * u3 + 3 * u2) * d.cumulative[k + 1] + (u3 - u2) * h * d.curvature[k + 1];
}

double wrap_into(double x, double period) {
    double w = std::fmod(x, period);
    if (w < 0) w += period;
    return w;
}

} // namespace

double PolygonData::total_length() const {
    double s = 0.0;
    for (double l : lengths) s += l;
    return s;
}

double PolygonData::total_turning() const {
    double s = 0.0;
    for (double a : turning) s += a;
    return s;
}

SmoothCurveData make_smooth_data(const ParamCurve& c, int samples, double fiducial_arc) {
    if (samples < 16) throw UsageError("make_smooth_data: need at least 16 intervals");
    double L = c.length();
    SmoothCurveData d;
    d.arc.resize(samples + 1);
    d.curvature.resize(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        d.arc[i] = L * static_cast<double>(i) / samples;
        d.curvature[i] = c.geodesic_curvature_at_arc(fiducial_arc + d.arc[i]);
    }
    d.cumulative = cumulative_integral(d.arc, d.curvature);
    d.fiducial = c.frame_at_arc(fiducial_arc);
    return d;
}

SmoothCurveData make_smooth_data_at_params(const ParamCurve& c,
                                           const std::vector<double>& params) {
    if (params.size() < 17) {
        throw UsageError("make_smooth_data_at_params: need at least 16 intervals");
    }
    SmoothCurveData d;
    size_t n = params.size();
    d.arc.resize(n);
    d.curvature.resize(n);
    double s0 = c.arc_at_param(params.front());
    for (size_t i = 0; i < n; ++i) {
        d.arc[i] = c.arc_at_param(params[i]) - s0;
        d.curvature[i] = c.geodesic_curvature_at_param(params[i]);
    }
    d.cumulative = cumulative_integral(d.arc, d.curvature);
    d.fiducial = c.frame_at_arc(s0);
    return d;
}

// ---- transport ------------------------------------------------------------

double side_angle(const PolygonData& d, int side, TransportMode mode) {
    validate(d, "side_angle");
    int q = d.sides();
    if (side < 0 || side >= q) throw UsageError("side_angle: side index out of range");
    double partial = 0.0;
    for (int j = 0; j < side; ++j) partial += d.turning[j];
    if (mode == TransportMode::Parallel) return partial;
    double total = d.total_turning();
    require_admissible(total, "side_angle");
    return kTwoPi * partial / total;
}

double transport_angle(const PolygonData& d, TransportMode mode, double s) {
    validate(d, "transport_angle");
    double L = d.total_length();
    if (s < -1e-12 || s > L * (1.0 + 1e-12)) {
        throw UsageError("transport_angle: arc position outside [0, length]");
    }
    double partial = 0.0;
    double walked = 0.0;
    int q = d.sides();
    for (int i = 0; i < q; ++i) {
        if (s <= walked + d.lengths[i] * (1.0 - 1e-15) || i == q - 1) {
            if (s >= L * (1.0 - 1e-15) && i == q - 1) partial += d.turning[q - 1];
            break;
        }
        walked += d.lengths[i];
        partial += d.turning[i];
    }
    if (mode == TransportMode::Parallel) return partial;
    double total = d.total_turning();
    require_admissible(total, "transport_angle");
    return kTwoPi * partial / total;
}

double transport_angle(const SmoothCurveData& d, TransportMode mode, double s) {
    validate(d, "transport_angle");
    if (s < -1e-12 || s > d.total_length() * (1.0 + 1e-12)) {
        throw UsageError("transport_angle: arc position outside [0, length]");
    }
    double cum = cumulative_at(d, s);
    if (mode == TransportMode::Parallel) return cum;
    double total = d.total_turning();
    require_admissible(total, "transport_angle");
    return kTwoPi * cum / total;
}

namespace {

template <class Data>
TangentVector conormal_impl(const Data& d, TransportMode mode, double s) {
    double ang = transport_angle(d, mode, s);
    return {d.fiducial.base, frame_vector(d.fiducial, ang)};
}

} // namespace

TangentVector transport_conormal(const PolygonData& d, TransportMode mode, double s) {
    return conormal_impl(d, mode, s);
}

TangentVector transport_conormal(const SmoothCurveData& d, TransportMode mode, double s) {
    return conormal_impl(d, mode, s);
}

// ---- irreducible components -----------------------------------------------

double IrreducibleComponents::magnitude() const { return std::hypot(g1, g2); }

double IrreducibleComponents::anisotropy() const {
    return length > 0 ? magnitude() / length : 0.0;
}

IrreducibleComponents components(const PolygonData& d, int rank, TransportMode mode) {
    validate(d, "components");
    if (rank < 0) throw UsageError("components: rank must be non-negative");
    double total = d.total_turning();
    if (mode == TransportMode::DefectCorrected) require_admissible(total, "components");
    double m = mode == TransportMode::DefectCorrected ? kTwoPi / total : 1.0;

    IrreducibleComponents out;
    out.rank = rank;
    double partial = 0.0;
    for (int i = 0; i < d.sides(); ++i) {
        double f = m * partial;
        out.g1 += d.lengths[i] * std::cos(rank * f);
        out.g2 += d.lengths[i] * std::sin(rank * f);
        out.length += d.lengths[i];
        partial += d.turning[i];
    }
    return out;
}

IrreducibleComponents components(const SmoothCurveData& d, int rank, TransportMode mode) {
    validate(d, "components");
    if (rank < 0) throw UsageError("components: rank must be non-negative");
    double total = d.total_turning();
    if (mode == TransportMode::DefectCorrected) require_admissible(total, "components");
    double m = mode == TransportMode::DefectCorrected ? kTwoPi / total : 1.0;

    // Composite trapezoid over the arc grid. On the equispaced grids the
    // constructors produce, the periodic integrand makes this spectrally
    // accurate rather than merely second order.
    IrreducibleComponents out;
    out.rank = rank;
    out.length = d.total_length();
    size_t n = d.arc.size();
    double prev1 = std::cos(rank * m * d.cumulative[0]);
    double prev2 = std::sin(rank * m * d.cumulative[0]);
    for (size_t i = 1; i < n; ++i) {
        double f = m * d.cumulative[i];
        double c = std::cos(rank * f), sgn = std::sin(rank * f);
        double w = 0.5 * (d.arc[i] - d.arc[i - 1]);
        out.g1 += w * (prev1 + c);
        out.g2 += w * (prev2 + sgn);
        prev1 = c;
        prev2 = sgn;
    }
    return out;
}

// ---- eigen directions -----------------------------------------------------

EigenDirections eigen_directions(const IrreducibleComponents& c, const CurveFrame& fiducial) {
    EigenDirections out;
    out.rank = c.rank;
    out.mu = c.anisotropy();
    if (c.rank == 0) {
        out.direction_defined = false;
        return out;
    }
    out.direction_defined = c.magnitude() >= kDirectionFloor * c.length;
    if (!out.direction_defined) return out;

    double base = std::atan2(c.g2, c.g1); // in (-pi, pi]
    double sector = kTwoPi / c.rank;
    double plus0 = wrap_into(base / c.rank, sector);
    double minus0 = wrap_into((kPi + base) / c.rank, sector);

    for (int n = 0; n < c.rank; ++n) {
        out.plus_angles.push_back(plus0 + sector * n);
        out.minus_angles.push_back(minus0 + sector * n);
    }
    for (double a : out.plus_angles) {
        out.plus_vectors.push_back({fiducial.base, frame_vector(fiducial, a)});
    }
    for (double a : out.minus_angles) {
        out.minus_vectors.push_back({fiducial.base, frame_vector(fiducial, a)});
    }
    return out;
}

const EigenDirections& ShapeSpectrum::rank(int p) const {
    for (const auto& e : entries) {
        if (e.rank == p) return e;
    }
    throw UsageError("spectrum: rank " + std::to_string(p) + " was not computed");
}

namespace {

template <class Data>
ShapeSpectrum spectrum_impl(const Data& d, const std::vector<int>& ranks) {
    ShapeSpectrum s;
    for (int p : ranks) {
        s.entries.push_back(eigen_directions(components(d, p), d.fiducial));
    }
    return s;
}

} // namespace

ShapeSpectrum spectrum(const PolygonData& d, const std::vector<int>& ranks) {
    return spectrum_impl(d, ranks);
}

ShapeSpectrum spectrum(const SmoothCurveData& d, const std::vector<int>& ranks) {
    return spectrum_impl(d, ranks);
}

// ---- functionals ----------------------------------------------------------

Functionals functionals(const PolygonData& d) {
    validate(d, "functionals");
    return {d.total_length(), d.total_turning(), std::nullopt};
}

Functionals functionals(const SmoothCurveData& d) {
    validate(d, "functionals");
    return {d.total_length(), d.total_turning(), std::nullopt};
}

namespace {

template <class Data>
Functionals functionals_on_impl(const Data& d, const Surface& s) {
    Functionals f = functionals(d);
    if (s.kind() != SurfaceKind::Sphere) {
        throw W0Unavailable("functionals: enclosed area is only available on sphere "
                            "backends (use clipped_area for mesh levelsets)");
    }
    double r = static_cast<const Sphere&>(s).radius();
    f.area = r * r * (kTwoPi - f.total_turning);
    return f;
}

} // namespace

Functionals functionals_on(const PolygonData& d, const Surface& s) {
    return functionals_on_impl(d, s);
}

Functionals functionals_on(const SmoothCurveData& d, const Surface& s) {
    return functionals_on_impl(d, s);
}

// ---- vertex insertion -----------------------------------------------------

PolygonData perturb_polygon(const PolygonData& d, int side,
                            const std::array<double, 3>& beta, bool inside) {
    validate(d, "perturb_polygon");
    int q = d.sides();
    if (side < 0 || side >= q) throw UsageError("perturb_polygon: side index out of range");
    double sgn = inside ? 1.0 : -1.0;

    PolygonData out;
    out.fiducial = d.fiducial;
    out.lengths.reserve(q + 1);
    out.turning.reserve(q + 1);
    for (int i = 0; i < q; ++i) {
        if (i == side) {
            out.lengths.push_back(0.5 * d.lengths[i]);
            out.turning.push_back(beta[1]);
            out.lengths.push_back(0.5 * d.lengths[i]);
            out.turning.push_back(d.turning[i] + beta[2] + sgn * kPi);
        } else {
            out.lengths.push_back(d.lengths[i]);
            out.turning.push_back(d.turning[i]);
        }
    }
    // The turn entering the perturbed side sits at the end of the previous
    // side, wrapping to the last entry when side 0 is split.
    int prev = side == 0 ? q : side - 1;
    out.turning[prev] += beta[0] + sgn * kPi;
    return out;
}

} // namespace surfmink
