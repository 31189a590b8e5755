#pragma once

// Rank-2 lattices, the Weierstrass zeta-function by direct summation, and
// the quasi-periods (eta1, eta2) by the direct and the modular route.

#include "core.hpp"
#include "qforms.hpp"

#include <cmath>

namespace qperiods
{

/// The lattice generated by omega1 and omega2, normalized so that
/// tau = omega1/omega2 lies in the upper half-plane.
class Lattice
{
public:
    Lattice(complex omega1, complex omega2) : w1_(omega1), w2_(omega2)
    {
        if (omega1 == complex(0.0) || omega2 == complex(0.0)) {
            throw error(errc::degenerate_lattice, "lattice generators must be non-zero");
        }
        const complex t = omega1 / omega2;
        if (std::abs(t.imag()) <= 1e-14 * std::abs(t)) {
            throw error(errc::degenerate_lattice, "generators are linearly dependent over R");
        }
        if (t.imag() < 0.0) {
            w2_ = -w2_;
        }
    }

    complex omega1() const { return w1_; }
    complex omega2() const { return w2_; }
    TauPoint tau() const { return TauPoint(w1_ / w2_); }

    complex point(long k, long n) const { return double(k) * w1_ + double(n) * w2_; }

    /// Real coordinates (x, y) with z = x omega1 + y omega2.
    std::pair<double, double> coordinates(complex z) const
    {
        // Solve the real 2x2 system [w1 w2] (x, y)^T = z.
        const double a = w1_.real(), b = w2_.real(), c = w1_.imag(), d = w2_.imag();
        const double det = a * d - b * c;
        return {(d * z.real() - b * z.imag()) / det, (-c * z.real() + a * z.imag()) / det};
    }

private:
    complex w1_, w2_;
};

inline Lattice lattice_new(complex omega1, complex omega2)
{
    return Lattice(omega1, omega2);
}

enum class QuasiPeriodSource
{
    direct,
    modular
};

struct QuasiPeriods
{
    complex eta1{0.0, 0.0};
    complex eta2{0.0, 0.0};
    QuasiPeriodSource source = QuasiPeriodSource::modular;
};

struct ZetaParams
{
    /// Summation window |k|, |n| <= radius.
    int radius = 400;
    /// Richardson-combine the radius and 2*radius partial sums.
    bool extrapolate = false;

    ZetaParams() = default;
    ZetaParams(int r, bool e = false) : radius(r), extrapolate(e)
    {
        if (r < 10) {
            throw error(errc::invalid_argument, "zeta summation radius must be >= 10");
        }
    }
};

inline constexpr double pole_proximity = 1e-9;

namespace detail
{

/// Symmetric partial sum of the zeta series over |k|, |n| <= radius.
/// Each compensated term equals u^2 / (gamma^2 (u - gamma)) = O(|gamma|^-3).
inline complex zeta_window(complex u, const Lattice &lat, int radius)
{
    const complex w1 = lat.omega1(), w2 = lat.omega2();
    complex sum = 1.0 / u;
    for (int k = -radius; k <= radius; ++k) {
        complex row{0.0, 0.0};
        for (int n = -radius; n <= radius; ++n) {
            if (k == 0 && n == 0) {
                continue;
            }
            const complex g = double(k) * w1 + double(n) * w2;
            row += u * u / (g * g * (u - g));
        }
        sum += row;
    }
    return sum;
}

} // namespace detail

/// Weierstrass zeta by direct summation; a low-precision oracle with
/// truncation error O(1/radius).
inline complex zeta_direct(complex u, const Lattice &lat, const ZetaParams &params = {})
{
    const int window = params.extrapolate ? 2 * params.radius : params.radius;
    const auto [x, y] = lat.coordinates(u);
    const double kx = std::round(x), ny = std::round(y);
    if (std::abs(kx) <= window && std::abs(ny) <= window &&
        std::abs(u - lat.point(long(kx), long(ny))) < pole_proximity * std::abs(lat.omega2())) {
        throw error(errc::pole_at_lattice_point, "argument is within the pole threshold of a lattice point");
    }
    const complex z1 = detail::zeta_window(u, lat, params.radius);
    if (!params.extrapolate) {
        return z1;
    }
    const complex z2 = detail::zeta_window(u, lat, 2 * params.radius);
    return 2.0 * z2 - z1;
}

/// eta_k = 2 zeta(omega_k / 2), summed directly.
inline QuasiPeriods quasi_periods_direct(const Lattice &lat, const ZetaParams &params = {})
{
    return {2.0 * zeta_direct(0.5 * lat.omega1(), lat, params), 2.0 * zeta_direct(0.5 * lat.omega2(), lat, params),
            QuasiPeriodSource::direct};
}

/// eta2 = pi^2 E2(tau) / (3 omega2), eta1 = -2 pi i / omega2 + pi^2 omega1 E2(tau) / (3 omega2^2).
inline QuasiPeriods quasi_periods_modular(const Lattice &lat, const SeriesParams &params = {})
{
    const complex w1 = lat.omega1(), w2 = lat.omega2();
    const complex e2 = eval_E2(lat.tau(), params).value;
    const complex eta2 = pi * pi * e2 / (3.0 * w2);
    const complex eta1 = -2.0 * pi * I / w2 + pi * pi * w1 * e2 / (3.0 * w2 * w2);
    return {eta1, eta2, QuasiPeriodSource::modular};
}

/// |omega1 eta2 - omega2 eta1 - 2 pi i|
inline double legendre_residual(const QuasiPeriods &qp, const Lattice &lat)
{
    return std::abs(lat.omega1() * qp.eta2 - lat.omega2() * qp.eta1 - 2.0 * pi * I);
}

/// |zeta(u + k omega1 + n omega2) - zeta(u) - k eta1 - n eta2| with zeta summed directly.
inline double quasi_periodicity_residual(complex u, long k, long n, const Lattice &lat, const QuasiPeriods &qp,
                                         const ZetaParams &params = {})
{
    if (k == 0 && n == 0) {
        return 0.0;
    }
    const complex shifted = zeta_direct(u + lat.point(k, n), lat, params);
    const complex base = zeta_direct(u, lat, params);
    return std::abs(shifted - base - double(k) * qp.eta1 - double(n) * qp.eta2);
}

} // namespace qperiods
