#pragma once

// The quasi-period ratio p(tau) = tau - 6i/(pi E2(tau)) as a map into the
// Riemann sphere: derivative, equivariance, the E2 bound and axis zero, and
// inversion by multistart Newton.

#include "core.hpp"
#include "group.hpp"
#include "qforms.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace qperiods
{

inline constexpr double p_infinity_threshold = 1e12;

struct PValue
{
    ExtComplex value;
    bool at_infinity = false;
};

/// Imaginary parts lo < hi bracketing a sign change of E2 on the imaginary axis.
struct ZeroBracket
{
    double lo = 0.5;
    double hi = 1.0;
};

inline PValue eval_p(const TauPoint &tau, const SeriesParams &params = {})
{
    const complex e2 = eval_E2(tau, params).value;
    if (e2 == complex(0.0)) {
        return {ExtComplex::infinity(), true};
    }
    const complex v = tau.value() - 6.0 * I / (pi * e2);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > p_infinity_threshold) {
        return {ExtComplex::infinity(), true};
    }
    return {ExtComplex(v), false};
}

/// p(tau) - tau + 6i/pi = (6i/pi) u/(1+u) with u = E2 - 1 summed directly.
/// Smooth and small for large Im(tau); used for finite differencing.
inline complex eval_p_offset(const TauPoint &tau, const SeriesParams &params = {})
{
    const complex u = eval_E2_minus_one(tau, params).value;
    return (6.0 * I / pi) * u / (1.0 + u);
}

/// p' = E4 / E2^2.
inline complex eval_p_prime(const TauPoint &tau, const SeriesParams &params = {})
{
    const complex e2 = eval_E2(tau, params).value;
    if (e2 == complex(0.0)) {
        throw error(errc::division_by_zero, "p' is undefined at a zero of E2");
    }
    const complex v = eval_E4(tau, params).value / (e2 * e2);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw error(errc::division_by_zero, "p' is undefined at a zero of E2");
    }
    return v;
}

/// Chordal distance between p(g tau) and g(p(tau)). For anti-holomorphic g
/// the conjugation is part of g, e.g. p(-conj(tau)) = -conj(p(tau)).
inline double equivariance_residual(const ExtendedMap &g, const TauPoint &tau, const SeriesParams &params = {})
{
    if (g == ExtendedMap::identity()) {
        return 0.0;
    }
    const ExtComplex gt = apply(g, ExtComplex(tau.value()));
    const ExtComplex lhs = eval_p(TauPoint(gt.value()), params).value;
    const ExtComplex rhs = apply(g, eval_p(tau, params).value);
    return chordal(lhs, rhs);
}

/// |E2(S tau) - (c tau + d)^2 E2(tau) + (6i/pi) c (c tau + d)|
inline double e2_transform_residual(const UnimodularMap &s, const TauPoint &tau, const SeriesParams &params = {})
{
    const complex j = s.factor(tau.value());
    const complex lhs = eval_E2(TauPoint(apply(s, tau.value())), params).value;
    const complex rhs = j * j * eval_E2(tau, params).value - (6.0 * I / pi) * double(s.c()) * j;
    return std::abs(lhs - rhs);
}

/// 24|q| / (1 - |q|)^3, an upper bound for |E2 - 1|.
inline double e2_bound(const TauPoint &tau)
{
    const double r = std::exp(-2.0 * pi * tau.im());
    return 24.0 * r / std::pow(1.0 - r, 3);
}

/// bound - |E2 - 1|, split as (bound - S) + (S - |E2 - 1|) with
/// S = 24 sum sigma1(n) |q|^n. The first part is the series
/// 24 sum (n(n+1)/2 - sigma1(n)) |q|^n of nonnegative terms, starting at
/// 48|q|^3; the second is nonnegative by the triangle inequality and is
/// clamped at 0 against rounding. Summing the two keeps the margin positive
/// where the plain difference cancels to zero.
inline double e2_bound_margin(const TauPoint &tau, const SeriesParams &params = {})
{
    const complex u = tau.im() >= reduction_threshold ? eval_E2_minus_one(tau, params).value
                                                       : eval_E2(tau, params).value - 1.0;
    const double r = std::exp(-2.0 * pi * tau.im());
    double gap = 0.0, s = 0.0, rn = 1.0;
    bool resolved = false;
    for (int n = 1; n <= params.order; ++n) {
        rn *= r;
        const double sig = double(divisor_sum(1, n));
        s += 24.0 * sig * rn;
        gap += 24.0 * (0.5 * n * (n + 1.0) - sig) * rn;
        const double rest = 24.0 * detail::poly_tail(2, r, n);
        if (n >= 3 && rest <= 1e-17 * gap) {
            resolved = true;
            break;
        }
    }
    if (!resolved) {
        return e2_bound(tau) - std::abs(u);
    }
    return gap + std::max(0.0, s - std::abs(u));
}

/// E2(i s), real up to rounding.
inline double e2_on_axis(double s, const SeriesParams &params = {})
{
    return eval_E2(TauPoint(complex(0.0, s)), params).value.real();
}

/// Zero i s* of E2 on the imaginary axis inside the bracket. Bisection to
/// width 1e-6, then Newton with d/ds E2(is) = -2 pi DE2 = -pi (E2^2 - E4)/6.
inline TauPoint find_e2_zero_on_axis(const ZeroBracket &bracket, double tol, const SeriesParams &params = {})
{
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo)) {
        throw error(errc::invalid_bracket, "bracket must satisfy 0 < lo < hi");
    }
    double lo = bracket.lo, hi = bracket.hi;
    double flo = e2_on_axis(lo, params);
    const double fhi = e2_on_axis(hi, params);
    if (!(flo * fhi < 0.0)) {
        throw error(errc::invalid_bracket, "E2 has the same sign at both bracket endpoints");
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fm = e2_on_axis(mid, params);
        if (fm == 0.0) {
            return TauPoint(complex(0.0, mid));
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const TauPoint t(complex(0.0, s));
        const double e2 = eval_E2(t, params).value.real();
        if (std::abs(e2) < tol) {
            return t;
        }
        const double e4 = eval_E4(t, params).value.real();
        const double slope = -pi * (e2 * e2 - e4) / 6.0;
        const double next = s - e2 / slope;
        if (next == s) {
            break;
        }
        s = next;
    }
    const TauPoint t(complex(0.0, s));
    if (std::abs(e2_on_axis(s, params)) < tol) {
        return t;
    }
    throw error(errc::tolerance_unreachable, "Newton polish did not reach the requested E2 tolerance");
}

namespace detail
{

/// Damped Newton for p(tau) = target, staying in the upper half-plane.
/// Near a critical point (the rho orbit, where p - target vanishes to
/// second order) the doubled step is tried first. After the residual
/// drops below tol a few further steps polish the root while they help.
inline bool newton_p(complex &tau, complex target, double tol, const SeriesParams &params)
{
    auto resid = [&](complex z) { return chordal(eval_p(TauPoint(z), params).value, ExtComplex(target)); };
    double r = resid(tau);
    int polish = 0;
    for (int it = 0; it < 200 && polish < 5; ++it) {
        if (r < tol) {
            ++polish;
        }
        const PValue pv = eval_p(TauPoint(tau), params);
        if (pv.at_infinity) {
            break;
        }
        const complex d = eval_p_prime(TauPoint(tau), params);
        if (d == complex(0.0)) {
            break;
        }
        const complex step = (pv.value.value() - target) / d;
        double scale = std::abs(d) < 0.1 ? 2.0 : 1.0;
        bool moved = false;
        for (int h = 0; h <= 51; ++h, scale *= 0.5) {
            const complex cand = tau - scale * step;
            if (!(cand.imag() > 0.0) || !std::isfinite(cand.real()) || !std::isfinite(cand.imag())) {
                continue;
            }
            const double rc = resid(cand);
            if (rc < r) {
                tau = cand;
                r = rc;
                moved = true;
                break;
            }
        }
        if (!moved || tau.imag() > 1e6) {
            break;
        }
    }
    return r < tol;
}

} // namespace detail

/// Up to count distinct tau with chordal |p(tau) - w| < tol. Newton runs on
/// p(tau0) = S^-1(w) from seeds inside T0 for each holomorphic word S of
/// tessellation depth <= 6, and each root is relocated to S(tau0).
inline std::vector<TauPoint> invert_p(const ExtComplex &w, int count, double tol, const SeriesParams &params = {})
{
    if (count < 1 || !(tol > 0.0)) {
        throw error(errc::invalid_argument, "count must be positive and tol > 0");
    }
    static const complex seeds[] = {{0.25, 1.3}, {0.1, 1.05}, {0.4, 1.0}, {0.25, 2.5}, {0.05, 4.0}};
    std::vector<TauPoint> found;
    int attempts = 0;
    for (const UnimodularMap &s : unimodular_words(6)) {
        const ExtComplex target = apply(inverse(ExtendedMap(s)), w);
        if (target.is_infinity()) {
            continue;
        }
        for (complex seed : seeds) {
            ++attempts;
            complex t0 = seed;
            if (!detail::newton_p(t0, target.value(), 0.1 * tol, params)) {
                continue;
            }
            const complex z = apply(s, t0);
            if (!(z.imag() > 0.0)) {
                continue;
            }
            const TauPoint tau(z);
            if (chordal(eval_p(tau, params).value, w) >= tol) {
                continue;
            }
            bool distinct = true;
            for (const auto &f : found) {
                distinct = distinct && std::abs(f.value() - z) > 10.0 * tol;
            }
            if (distinct) {
                found.push_back(tau);
                if (int(found.size()) >= count) {
                    return found;
                }
            }
            break;
        }
    }
    if (found.empty()) {
        std::ostringstream msg;
        msg << "no Newton start converged (" << attempts << " starts over depth-6 words)";
        throw error(errc::not_found, msg.str());
    }
    return found;
}

} // namespace qperiods
