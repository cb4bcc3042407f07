#pragma once

// Oracles and randomized-instance generators shared by the test binaries.

#include <cmath>
#include <random>
#include <vector>

#include "surfmink/curve_approx.hpp"

namespace surfmink::testsupport {

constexpr double kTestPi = 3.14159265358979323846;

inline PolyChain planar_chain(const std::vector<Vec3>& points) {
    PolyChain chain;
    for (const Vec3& p : points) chain.points.push_back({p, Vec3::UnitZ()});
    return chain;
}

// Flat rank-p Minkowski tensor oracle: assemble the symmetric tensor
// A = sum_i l_i nu_i^(x)p entry by entry (a 2D symmetric rank-p tensor has
// p+1 distinct entries), contract it with a rotating direction, and read the
// irreducible part off the top Fourier harmonic. cos^p carries its p-th
// harmonic with weight 2^(1-p), which fixes the normalization.
inline IrreducibleComponents flat_oracle(const PolyChain& chain, int p) {
    int q = chain.size();
    CurveFrame fid = frame_from_tangent(chain.points[0],
                                        chain.points[1].position - chain.points[0].position);

    std::vector<double> entries(p + 1, 0.0);
    double total = 0.0;
    for (int i = 0; i < q; ++i) {
        Vec3 chord = chain.points[(i + 1) % q].position - chain.points[i].position;
        double l = chord.norm();
        Vec3 nu = chord.normalized().cross(Vec3::UnitZ());
        double nx = nu.dot(fid.nu), ny = nu.dot(fid.tau);
        for (int k = 0; k <= p; ++k) {
            entries[k] += l * std::pow(nx, p - k) * std::pow(ny, k);
        }
        total += l;
    }

    auto binomial = [](int n, int k) {
        double b = 1.0;
        for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
        return b;
    };
    auto contract = [&](double phi) {
        double c = std::cos(phi), s = std::sin(phi), sum = 0.0;
        for (int k = 0; k <= p; ++k) {
            sum += binomial(p, k) * entries[k] * std::pow(c, p - k) * std::pow(s, k);
        }
        return sum;
    };

    int n = 4096;
    double cp = 0.0, sp = 0.0;
    for (int j = 0; j < n; ++j) {
        double phi = 2 * kTestPi * j / n;
        double f = contract(phi);
        cp += f * std::cos(p * phi);
        sp += f * std::sin(p * phi);
    }
    double scale = std::pow(2.0, p - 1) * 2.0 / n;

    IrreducibleComponents out;
    out.rank = p;
    out.g1 = scale * cp;
    out.g2 = scale * sp;
    out.length = total;
    return out;
}

// Star-shaped spherical polygon around the north pole: longitudes sorted
// with a minimum gap, colatitudes jittered around pi/4. Counterclockwise
// seen from +z; the enclosed cap is well below a hemisphere, so the total
// turning stays comfortably positive.
inline PolyChain random_sphere_chain(std::mt19937_64& rng, const Sphere& sphere) {
    std::uniform_int_distribution<int> qd(4, 8);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int q = qd(rng);
    std::vector<double> lon(q);
    double acc = 0.0;
    for (int i = 0; i < q; ++i) {
        acc += 0.35 + uni(rng);
        lon[i] = acc;
    }
    double scale = 2 * kTestPi / (acc + 0.35 + uni(rng));
    PolyChain chain;
    for (int i = 0; i < q; ++i) {
        double colat = kTestPi / 4 + 0.3 * (uni(rng) - 0.5);
        Vec3 dir(std::sin(colat) * std::cos(lon[i] * scale),
                 std::sin(colat) * std::sin(lon[i] * scale), std::cos(colat));
        chain.points.push_back(sphere.at(dir));
    }
    return chain;
}

// Simple flat star polygon in the z = 0 plane, counterclockwise.
inline PolyChain random_flat_chain(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> qd(5, 12);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int q = qd(rng);
    PolyChain chain;
    for (int i = 0; i < q; ++i) {
        double a = 2 * kTestPi * (i + 0.8 * uni(rng)) / q;
        double r = 0.5 + 1.5 * uni(rng);
        chain.points.push_back({Vec3(r * std::cos(a), r * std::sin(a), 0), Vec3::UnitZ()});
    }
    return chain;
}

inline ParamCurve random_flower(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto ell = make_ellipsoid(0.9 + 0.8 * uni(rng), 0.9 + 0.8 * uni(rng),
                              0.9 + 0.8 * uni(rng));
    FlowerParams p;
    p.r0 = 0.4 + 0.4 * uni(rng);
    p.a = 0.25 * p.r0 * uni(rng);
    p.omega = 2 + static_cast<int>(4.999 * uni(rng));
    p.x0 = kTestPi / 2 + 0.6 * (uni(rng) - 0.5);
    p.y0 = kTestPi / 4 + 0.6 * (uni(rng) - 0.5);
    return flower_curve(ell, p, 2048);
}

} // namespace surfmink::testsupport
