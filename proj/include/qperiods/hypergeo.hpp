#pragma once

// Normalized periods Omega_k and quasi-periods H_k as functions of J, their
// first-order system, the two hypergeometric equations they satisfy,
// triangle angles and Schwarzian derivatives.

#include "core.hpp"
#include "group.hpp"
#include "pmap.hpp"
#include "qforms.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <utility>

namespace qperiods
{

/// Exact rational p/q with q > 0 in lowest terms.
struct Rational
{
    long num = 0;
    long den = 1;

    Rational() = default;
    Rational(long n, long d = 1) : num(n), den(d)
    {
        if (d == 0) {
            throw error(errc::division_by_zero, "rational with zero denominator");
        }
        const long g = std::gcd(n, d);
        num = (d < 0 ? -n : n) / g;
        den = (d < 0 ? -d : d) / g;
    }

    double to_double() const { return double(num) / double(den); }

    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend bool operator==(const Rational &, const Rational &) = default;
};

struct NormalizedPeriods
{
    complex Omega1, Omega2, H1, H2;
    TauPoint tau;
};

struct HypergeomCoeffs
{
    Rational alpha, beta, gamma;
};

/// Angles in units of pi.
struct TriangleAngles
{
    double lambda = 0.0;
    double mu = 0.0;
    double nu = 0.0;
};

enum class Family
{
    H,
    Omega
};

/// J-plane exclusion radius around the singular values J = 0 and J = 1.
inline constexpr double j_singular_radius = 1e-2;

namespace detail
{

inline void require_direct_regime(const TauPoint &tau, double floor = reduction_threshold)
{
    if (tau.im() < floor) {
        throw error(errc::out_of_regime, "argument lies below the direct-series regime");
    }
}

inline void require_k(int k)
{
    if (k != 1 && k != 2) {
        throw error(errc::invalid_argument, "index k must be 1 or 2");
    }
}

} // namespace detail

/// Omega1 = tau Delta^(1/12), Omega2 = Delta^(1/12), H1 = (tau E2 - 6i/pi) / Delta^(1/12),
/// H2 = E2 / Delta^(1/12), with the product-form branch of Delta^(1/12).
inline NormalizedPeriods eval_normalized(const TauPoint &tau, const SeriesParams &params = {})
{
    detail::require_direct_regime(tau);
    const complex t = tau.value();
    const complex r = delta_root(tau, 12, params).value;
    const complex e2 = eval_E2(tau, params).value;
    return {t * r, r, (t * e2 - 6.0 * I / pi) / r, e2 / r, tau};
}

namespace detail
{

/// Everything the J-variable identities need at one point.
struct JFrame
{
    complex J, Jc, Js; // J, J^(1/3), (J - 1)^(1/2)
    complex dJ;        // D J = (1/2 pi i) dJ/dtau, closed form
    NormalizedPeriods np;
    std::array<complex, 2> dOmega; // d Omega_k / dJ, termwise
    std::array<complex, 2> dH;     // d H_k / dJ, termwise
};

inline JFrame j_frame(const TauPoint &tau, const SeriesParams &params)
{
    require_direct_regime(tau);
    const complex J = eval_J(tau, params).value;
    if (std::abs(J) < j_singular_radius || std::abs(J - 1.0) < j_singular_radius) {
        throw error(errc::singular_point, "J is within the exclusion radius of 0 or 1");
    }
    const complex Jc = eval_J_cbrt(tau, params).value;
    const complex Js = eval_Jm1_sqrt(tau, params).value;
    const complex dJ = -2.0 * sqrt3 * Jc * Jc * Js * delta_root(tau, 6, params).value;
    const NormalizedPeriods np = eval_normalized(tau, params);

    const complex t = tau.value();
    const complex r = np.Omega2;
    const complex dr = eval_D_delta_root_termwise(tau, 12, params).value;
    const complex e2 = eval_E2(tau, params).value;
    const complex de2 = eval_D(Form::E2, tau, params, DerivMethod::termwise).value;
    const complex inv2pii = 1.0 / (2.0 * pi * I);

    const complex dO2 = dr;
    const complex dO1 = t * dr + inv2pii * r;
    const complex num1 = t * e2 - 6.0 * I / pi;
    const complex dnum1 = t * de2 + inv2pii * e2;
    const complex dH2 = de2 / r - e2 * dr / (r * r);
    const complex dH1 = dnum1 / r - num1 * dr / (r * r);
    return {J, Jc, Js, dJ, np, {dO1 / dJ, dO2 / dJ}, {dH1 / dJ, dH2 / dJ}};
}

/// -(1/(24 sqrt3)) J^(-2/3) (J - 1)^(-1/2)
inline complex omega_coefficient(const JFrame &f)
{
    return -1.0 / (24.0 * sqrt3 * f.Jc * f.Jc * f.Js);
}

/// (1/(2 sqrt3)) J^(-1/3) (J - 1)^(-1/2)
inline complex h_coefficient(const JFrame &f)
{
    return 1.0 / (2.0 * sqrt3 * f.Jc * f.Js);
}

inline double relative_gap(complex a, complex b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace detail

/// Relative residuals of dOmega_k/dJ = a H_k and dH_k/dJ = b Omega_k, with
/// the left sides from termwise derivatives.
inline std::pair<double, double> first_order_residual(const TauPoint &tau, int k, const SeriesParams &params = {})
{
    detail::require_k(k);
    const auto f = detail::j_frame(tau, params);
    const std::size_t i = std::size_t(k - 1);
    const complex H = k == 1 ? f.np.H1 : f.np.H2;
    const complex Om = k == 1 ? f.np.Omega1 : f.np.Omega2;
    return {detail::relative_gap(f.dOmega[i], detail::omega_coefficient(f) * H),
            detail::relative_gap(f.dH[i], detail::h_coefficient(f) * Om)};
}

/// Residual of w'' + P w' + Q w relative to the largest of the three terms.
/// w' comes from the first-order system, w'' from differentiating it once
/// more with the other function's derivative taken termwise.
inline double hypergeom_residual(const TauPoint &tau, int k, Family family, const SeriesParams &params = {})
{
    detail::require_k(k);
    const auto f = detail::j_frame(tau, params);
    const std::size_t i = std::size_t(k - 1);
    const complex J = f.J;
    const complex H = k == 1 ? f.np.H1 : f.np.H2;
    const complex Om = k == 1 ? f.np.Omega1 : f.np.Omega2;
    const complex Q = 1.0 / (144.0 * J * (J - 1.0));
    complex w, w1, w2, P;
    if (family == Family::H) {
        const complex a = detail::h_coefficient(f);
        w = H;
        w1 = a * Om;
        w2 = a * (-1.0 / (3.0 * J) - 1.0 / (2.0 * (J - 1.0))) * Om + a * f.dOmega[i];
        P = (5.0 * J - 2.0) / (6.0 * J * (J - 1.0));
    } else {
        const complex b = detail::omega_coefficient(f);
        w = Om;
        w1 = b * H;
        w2 = b * (-2.0 / (3.0 * J) - 1.0 / (2.0 * (J - 1.0))) * H + b * f.dH[i];
        P = (7.0 * J - 4.0) / (6.0 * J * (J - 1.0));
    }
    const double scale = std::max({std::abs(w2), std::abs(P * w1), std::abs(Q * w)});
    return scale == 0.0 ? 0.0 : std::abs(w2 + P * w1 + Q * w) / scale;
}

/// Friction coefficient P(J) of the hypergeometric equation for the family.
inline complex hypergeom_friction(Family family, complex J)
{
    const double c = family == Family::H ? 5.0 : 7.0;
    const double d = family == Family::H ? 2.0 : 4.0;
    return (c * J - d) / (6.0 * J * (J - 1.0));
}

inline TriangleAngles triangle_params(const HypergeomCoeffs &c)
{
    return {(Rational(1) - c.gamma).to_double(), (c.gamma - c.alpha - c.beta).to_double(),
            (c.alpha - c.beta).to_double()};
}

/// The three coefficients (1-l^2)/2, (1-m^2)/2, (1-l^2-m^2+n^2)/2.
inline std::array<double, 3> schwarzian_coefficients(const TriangleAngles &a)
{
    const double l2 = a.lambda * a.lambda, m2 = a.mu * a.mu, n2 = a.nu * a.nu;
    return {(1.0 - l2) / 2.0, (1.0 - m2) / 2.0, (1.0 - l2 - m2 + n2) / 2.0};
}

inline complex schwarzian_closed(const TriangleAngles &angles, complex z)
{
    if (z == complex(0.0) || z == complex(1.0)) {
        throw error(errc::singular_point, "Schwarzian of the triangle map is singular at 0 and 1");
    }
    const auto c = schwarzian_coefficients(angles);
    return c[0] / (z * z) + c[1] / ((1.0 - z) * (1.0 - z)) + c[2] / (z * (1.0 - z));
}

struct Derivatives3
{
    complex d1, d2, d3;
};

/// First three derivatives by 5-point central stencils at spacings h and
/// h/2, Richardson-combined (O(h^4) stencils for d1, d2; O(h^2) for d3).
/// T sets the working precision of the stencil abscissae and sums.
template <typename F, typename T = double>
Derivatives3 fd_derivatives(F &&f, std::complex<T> z, T h)
{
    using C = std::complex<T>;
    auto stencil = [&](T s) {
        const C m2 = f(z - T(2) * s), m1 = f(z - s), c = f(z), p1 = f(z + s), p2 = f(z + T(2) * s);
        return std::array<C, 3>{(m2 - T(8) * m1 + T(8) * p1 - p2) / (T(12) * s),
                                (-m2 + T(16) * m1 - T(30) * c + T(16) * p1 - p2) / (T(12) * s * s),
                                (-m2 + T(2) * m1 - T(2) * p1 + p2) / (T(2) * s * s * s)};
    };
    const auto a = stencil(h), b = stencil(h / T(2));
    auto out = [](C v) { return complex(double(v.real()), double(v.imag())); };
    return {out((T(16) * b[0] - a[0]) / T(15)), out((T(16) * b[1] - a[1]) / T(15)), out((T(4) * b[2] - a[2]) / T(3))};
}

inline complex schwarzian_of(const Derivatives3 &d)
{
    const complex r = d.d2 / d.d1;
    return d.d3 / d.d1 - 1.5 * r * r;
}

/// Finite-difference Schwarzian {f, z}.
template <typename F>
complex schwarzian_fd(F &&f, complex z, double h)
{
    return schwarzian_of(fd_derivatives(std::forward<F>(f), z, h));
}

namespace detail
{

using lcomplex = std::complex<long double>;

/// p - tau + 6i/pi = (6i/pi) u/(1 + u), u = E2 - 1 = -24 sum sigma1(n) q^n,
/// summed in extended precision.
inline lcomplex p_offset_extended(lcomplex tau, int order)
{
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    const lcomplex q = std::exp(lcomplex(0.0L, two_pi) * tau);
    const double r = double(std::abs(q));
    const int N = choose_order([&](int n) { return 24.0 * poly_tail(2, r, n); }, 1e-19, order, "E2 series");
    const auto sig = sigma_table(1, N);
    lcomplex u{0.0L, 0.0L}, qn{1.0L, 0.0L};
    for (int n = 1; n <= N; ++n) {
        qn *= q;
        u += static_cast<long double>(sig[n]) * qn;
    }
    u *= -24.0L;
    const lcomplex c(0.0L, 6.0L / std::numbers::pi_v<long double>);
    return c * u / (1.0L + u);
}

} // namespace detail

/// {p, tau} by finite differences of the smooth offset p - tau + 6i/pi.
/// Offsets and stencil points are carried in long double, which keeps the
/// third-difference roundoff well below the truncation error at h = 1e-3.
inline complex schwarzian_p_fd(const TauPoint &tau, double step, const SeriesParams &params = {})
{
    if (tau.im() < reduction_threshold + 2.0 * step) {
        throw error(errc::out_of_regime, "offset series is summed directly only for Im(tau) >= 0.35");
    }
    const detail::lcomplex z(tau.value().real(), tau.value().imag());
    Derivatives3 d = fd_derivatives([&](detail::lcomplex w) { return detail::p_offset_extended(w, params.order); },
                                    z, static_cast<long double>(step));
    d.d1 += 1.0;
    return schwarzian_of(d);
}

/// -1152 pi^2 Delta / E4^2
inline complex schwarzian_p_closed(const TauPoint &tau, const SeriesParams &params = {})
{
    const complex e4 = eval_E4(tau, params).value;
    return -1152.0 * pi * pi * eval_Delta(tau, DeltaMethod::product, params).value / (e4 * e4);
}

inline constexpr double schwarzian_min_im = 0.5;

inline double schwarzian_p_residual(const TauPoint &tau, double step = 1e-3, const SeriesParams &params = {})
{
    detail::require_direct_regime(tau, schwarzian_min_im);
    if (!(step > 0.0) || 2.0 * step >= tau.im() - reduction_threshold) {
        throw error(errc::invalid_argument, "finite-difference step must be positive and keep the stencil in range");
    }
    if (is_rho_equivalent(tau, 1e-2)) {
        throw error(errc::singular_point, "E4 vanishes on the rho orbit");
    }
    return std::abs(schwarzian_p_fd(tau, step, params) - schwarzian_p_closed(tau, params));
}

/// |{p,tau} - ({p,J} (dJ/dtau)^2 + {J,tau})| with {p,J} from the closed
/// triangle form, dJ/dtau = 2 pi i DJ and {J,tau} by finite differences.
inline double schwarzian_chain_residual(const TauPoint &tau, double step = 1e-3, const SeriesParams &params = {})
{
    detail::require_direct_regime(tau, schwarzian_min_im);
    const complex J = eval_J(tau, params).value;
    if (std::abs(J) < j_singular_radius || std::abs(J - 1.0) < j_singular_radius) {
        throw error(errc::singular_point, "J is within the exclusion radius of 0 or 1");
    }
    const TriangleAngles h_angles = triangle_params({Rational(-1, 12), Rational(-1, 12), Rational(1, 3)});
    const complex dj = 2.0 * pi * I * eval_D(Form::J, tau, params).value;
    const complex sj = schwarzian_fd([&](complex z) { return eval_J(TauPoint(z), params).value; }, tau.value(), step);
    const complex rhs = schwarzian_closed(h_angles, J) * dj * dj + sj;
    return std::abs(schwarzian_p_fd(tau, step, params) - rhs);
}

} // namespace qperiods
