#pragma once

// q-series engine for E2, E4, E6, Delta, J, the fixed-branch roots of Delta
// and J, and their derivatives D = (1/2 pi i) d/dtau.
//
// Every evaluator returns a FormValue: the truncated series value together
// with a guaranteed bound on the discarded tail, valid under the coefficient
// bounds documented next to each series. Tail bounds are absolute. Rounding
// error is not included.
//
// For Im(tau) below reduction_threshold the weight-k forms are evaluated at
// the reduced point and transported back through their transformation laws.
// The roots of Delta carry a multiplier system and are therefore only
// evaluated by direct summation.

#include "core.hpp"
#include "group.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace qperiods
{

inline constexpr double reduction_threshold = 0.35;

struct SeriesParams
{
    /// Maximum number of q-powers the evaluators may keep.
    int order = 1024;
    /// Target absolute truncation error.
    double tol = 1e-15;
    /// Reduce low-Im arguments to the fundamental domain first.
    bool reduce = true;

    SeriesParams() = default;
    SeriesParams(int order_, double tol_, bool reduce_ = true) : order(order_), tol(tol_), reduce(reduce_)
    {
        if (order < 1 || !(tol > 0.0)) {
            throw error(errc::invalid_argument, "series order must be >= 1 and tol > 0");
        }
    }

    SeriesParams with_tol(double t) const { return {order, t, reduce}; }
};

/// A series value and a bound on |exact - value| coming from truncation.
struct FormValue
{
    complex value{0.0, 0.0};
    double tail_bound = 0.0;

    FormValue() = default;
    FormValue(complex v, double tail = 0.0) : value(v), tail_bound(tail) {}

    friend FormValue operator+(const FormValue &a, const FormValue &b)
    {
        return {a.value + b.value, a.tail_bound + b.tail_bound};
    }
    friend FormValue operator-(const FormValue &a, const FormValue &b)
    {
        return {a.value - b.value, a.tail_bound + b.tail_bound};
    }
    friend FormValue operator-(const FormValue &a) { return {-a.value, a.tail_bound}; }
    friend FormValue operator*(const FormValue &a, const FormValue &b)
    {
        return {a.value * b.value,
                std::abs(a.value) * b.tail_bound + std::abs(b.value) * a.tail_bound + a.tail_bound * b.tail_bound};
    }
    friend FormValue operator*(complex s, const FormValue &a) { return {s * a.value, std::abs(s) * a.tail_bound}; }
    friend FormValue operator*(const FormValue &a, complex s) { return s * a; }
    friend FormValue operator/(const FormValue &a, const FormValue &b)
    {
        const double bb = std::abs(b.value);
        const double tail = bb > b.tail_bound
                                ? (a.tail_bound * bb + std::abs(a.value) * b.tail_bound) / (bb * (bb - b.tail_bound))
                                : std::numeric_limits<double>::infinity();
        return {a.value / b.value, tail};
    }
    friend FormValue operator/(const FormValue &a, complex s) { return {a.value / s, a.tail_bound / std::abs(s)}; }
};

inline complex nome(const TauPoint &tau)
{
    return std::exp(2.0 * pi * I * tau.value());
}

/// sigma_k(n) = sum of d^k over the divisors d of n, in exact arithmetic.
inline std::uint64_t divisor_sum(int k, std::int64_t n)
{
    if (k < 1 || n < 1) {
        throw error(errc::invalid_argument, "divisor_sum needs k >= 1 and n >= 1");
    }
    auto power = [k](std::uint64_t d) {
        std::uint64_t r = 1;
        for (int i = 0; i < k; ++i) {
            if (__builtin_mul_overflow(r, d, &r)) {
                throw error(errc::overflow, "divisor_sum overflows 64 bits");
            }
        }
        return r;
    };
    std::uint64_t s = 0;
    const auto un = static_cast<std::uint64_t>(n);
    for (std::uint64_t d = 1; d * d <= un; ++d) {
        if (un % d != 0) {
            continue;
        }
        const std::uint64_t e = un / d;
        if (__builtin_add_overflow(s, power(d), &s) || (e != d && __builtin_add_overflow(s, power(e), &s))) {
            throw error(errc::overflow, "divisor_sum overflows 64 bits");
        }
    }
    return s;
}

/// Dimension of the space of modular forms of weight k.
inline int dim_Mk(int k)
{
    if (k < 1) {
        throw error(errc::invalid_argument, "weight must be positive");
    }
    if (k % 2 != 0) {
        return 0;
    }
    return k % 12 == 2 ? k / 12 : k / 12 + 1;
}

namespace detail
{

using int128 = __int128;

/// sigma_k(n) for n = 0..n_max as doubles (index 0 unused).
inline std::vector<double> sigma_table(int k, int n_max)
{
    std::vector<double> s(n_max + 1, 0.0);
    for (int d = 1; d <= n_max; ++d) {
        const double dk = std::pow(double(d), k);
        for (int m = d; m <= n_max; m += d) {
            s[m] += dk;
        }
    }
    return s;
}

/// Bound for sum_{n > N} n^m r^n. Consecutive term ratios ((n+1)/n)^m r
/// decrease in n, so the tail is dominated by a geometric series.
inline double poly_tail(int m, double r, int N)
{
    if (r == 0.0) {
        return 0.0;
    }
    const double n1 = N + 1.0;
    const double ratio = std::pow((n1 + 1.0) / n1, m) * r;
    if (ratio >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(m * std::log(n1) + n1 * std::log(r)) / (1.0 - ratio);
}

/// Smallest N <= order with tail(N) <= tol.
template <typename Tail>
int choose_order(Tail &&tail, double tol, int order, const char *what)
{
    for (int n = 1; n <= order; ++n) {
        if (tail(n) <= tol) {
            return n;
        }
    }
    throw error(errc::tolerance_unreachable, std::string(what) + ": tolerance not reachable within the maximum order");
}

/// sum_{n=1}^{N} a[n] q^n
inline complex power_sum(const std::vector<double> &a, complex q, int N)
{
    complex s{0.0, 0.0}, qn{1.0, 0.0};
    for (int n = 1; n <= N; ++n) {
        qn *= q;
        s += a[n] * qn;
    }
    return s;
}

struct EisensteinSpec
{
    double coef;  // 1 + coef * sum sigma_p(n) q^n
    int sigma_power;
    int weight;
};

inline EisensteinSpec eisenstein_spec(int weight)
{
    switch (weight) {
        case 2: return {-24.0, 1, 2};
        case 4: return {240.0, 3, 4};
        case 6: return {-504.0, 5, 6};
    }
    throw error(errc::invalid_weight, "Eisenstein series available for weights 2, 4, 6");
}

/// coef * sum_{n>=1} n^deriv sigma_p(n) q^n, truncated with the bound
/// sigma_p(n) <= n^(p+1).
inline FormValue eisenstein_tail_series(const EisensteinSpec &spec, const TauPoint &tau, double tol, int order,
                                        int deriv)
{
    const complex q = nome(tau);
    const double r = std::abs(q);
    const double c = std::abs(spec.coef);
    const int m = spec.sigma_power + 1 + deriv;
    const int N = choose_order([&](int n) { return c * poly_tail(m, r, n); }, tol, order, "Eisenstein series");
    auto sig = sigma_table(spec.sigma_power, N);
    if (deriv > 0) {
        for (int n = 1; n <= N; ++n) {
            sig[n] *= std::pow(double(n), deriv);
        }
    }
    return {spec.coef * power_sum(sig, q, N), c * poly_tail(m, r, N)};
}

/// Automorphy data for tau = S(tau_r): j = c tau_r + d.
struct Transport
{
    TauPoint tau_r;
    complex j;
    double c;
};

inline Transport transport_of(const TauPoint &tau)
{
    const auto red = reduce_to_fundamental(tau);
    const auto &s = red.map;
    return {red.tau_reduced, s.factor(red.tau_reduced.value()), double(s.c())};
}

inline bool needs_reduction(const TauPoint &tau, const SeriesParams &p)
{
    return p.reduce && tau.im() < reduction_threshold;
}

/// Delta coefficients tau(n), n = 0..n_max (index 0 is 0), from
/// (E4^3 - E6^2)/1728 in exact 128-bit arithmetic.
inline std::vector<int128> e4_cubed_minus_e6_squared(int n_max)
{
    std::vector<int128> e4(n_max + 1), e6(n_max + 1);
    e4[0] = e6[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        e4[n] = 240 * int128(divisor_sum(3, n));
        e6[n] = -504 * int128(divisor_sum(5, n));
    }
    auto mul = [n_max](const std::vector<int128> &a, const std::vector<int128> &b) {
        std::vector<int128> c(n_max + 1, 0);
        for (int i = 0; i <= n_max; ++i) {
            for (int j = 0; i + j <= n_max; ++j) {
                int128 t;
                if (__builtin_mul_overflow(a[i], b[j], &t) || __builtin_add_overflow(c[i + j], t, &c[i + j])) {
                    throw error(errc::overflow, "q-expansion coefficient overflow");
                }
            }
        }
        return c;
    };
    const auto e4sq = mul(e4, e4);
    const auto e4cube = mul(e4sq, e4);
    const auto e6sq = mul(e6, e6);
    std::vector<int128> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        out[n] = e4cube[n] - e6sq[n];
    }
    return out;
}

inline std::vector<int128> e4_cubed(int n_max)
{
    std::vector<int128> e4(n_max + 1);
    e4[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        e4[n] = 240 * int128(divisor_sum(3, n));
    }
    std::vector<int128> sq(n_max + 1, 0), cube(n_max + 1, 0);
    for (int i = 0; i <= n_max; ++i) {
        for (int j = 0; i + j <= n_max; ++j) {
            sq[i + j] += e4[i] * e4[j];
        }
    }
    for (int i = 0; i <= n_max; ++i) {
        for (int j = 0; i + j <= n_max; ++j) {
            int128 t;
            if (__builtin_mul_overflow(sq[i], e4[j], &t) || __builtin_add_overflow(cube[i + j], t, &cube[i + j])) {
                throw error(errc::overflow, "q-expansion coefficient overflow");
            }
        }
    }
    return cube;
}

} // namespace detail

/// Ramanujan tau(n) for n = 0..n_max (tau(0) = 0), via the Eisenstein route.
inline std::vector<std::int64_t> delta_coefficients(int n_max)
{
    const auto d = detail::e4_cubed_minus_e6_squared(n_max);
    std::vector<std::int64_t> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        if (d[n] % 1728 != 0) {
            throw error(errc::overflow, "E4^3 - E6^2 coefficient not divisible by 1728");
        }
        out[n] = static_cast<std::int64_t>(d[n] / 1728);
    }
    return out;
}

/// Coefficients of q * prod (1 - q^n)^24 up to q^n_max, by expanding the
/// product in exact integer arithmetic. Intermediate coefficients grow
/// quickly; n_max beyond ~40 reports overflow.
inline std::vector<std::int64_t> delta_product_coefficients(int n_max)
{
    using detail::int128;
    // prod_{m=1}^{n_max-1} (1 - q^m)^24 mod q^{n_max}
    std::vector<int128> p(n_max, 0);
    p[0] = 1;
    for (int m = 1; m < n_max; ++m) {
        for (int rep = 0; rep < 24; ++rep) {
            for (int i = n_max - 1; i >= m; --i) {
                if (__builtin_sub_overflow(p[i], p[i - m], &p[i])) {
                    throw error(errc::overflow, "product expansion overflow");
                }
            }
        }
    }
    std::vector<std::int64_t> out(n_max + 1, 0);
    for (int n = 1; n <= n_max; ++n) {
        const int128 v = p[n - 1];
        if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
            throw error(errc::overflow, "product coefficient exceeds 64 bits");
        }
        out[n] = static_cast<std::int64_t>(v);
    }
    return out;
}

/// Coefficients c(n), n = -1..n_max, of 1728 J = j = 1/q + 744 + 196884 q + ...
/// Element i of the result holds c(i - 1).
inline std::vector<double> j_coefficients(int n_max)
{
    const int len = n_max + 2;
    const auto num = detail::e4_cubed(len - 1);
    const auto den = delta_coefficients(len);  // den[n+1] = coefficient of q^n in Delta/q
    std::vector<double> c(len, 0.0);
    for (int n = 0; n < len; ++n) {
        double s = double(num[n]);
        for (int k = 1; k <= n; ++k) {
            s -= double(den[k + 1]) * c[n - k];
        }
        c[n] = s;  // den[1] == 1
    }
    return c;
}

// ---------------------------------------------------------------------------
// E2, E4, E6

namespace detail
{

inline FormValue eval_eisenstein_direct(int weight, const TauPoint &tau, double tol, int order)
{
    const auto spec = eisenstein_spec(weight);
    const FormValue t = eisenstein_tail_series(spec, tau, tol, order, 0);
    return {1.0 + t.value, t.tail_bound};
}

inline FormValue eval_eisenstein(int weight, const TauPoint &tau, const SeriesParams &p)
{
    if (!needs_reduction(tau, p)) {
        return eval_eisenstein_direct(weight, tau, p.tol, p.order);
    }
    const auto tr = transport_of(tau);
    const double jk = std::pow(std::abs(tr.j), weight);
    const FormValue g = eval_eisenstein_direct(weight, tr.tau_r, p.tol / jk, p.order);
    FormValue out = std::pow(tr.j, weight) * g;
    if (weight == 2) {
        out.value -= (6.0 * I / pi) * tr.c * tr.j;
    }
    return out;
}

} // namespace detail

inline FormValue eval_E2(const TauPoint &tau, const SeriesParams &p = {})
{
    return detail::eval_eisenstein(2, tau, p);
}
inline FormValue eval_E4(const TauPoint &tau, const SeriesParams &p = {})
{
    return detail::eval_eisenstein(4, tau, p);
}
inline FormValue eval_E6(const TauPoint &tau, const SeriesParams &p = {})
{
    return detail::eval_eisenstein(6, tau, p);
}

/// E2 - 1 summed directly (no cancellation against the constant term).
/// Requires Im(tau) >= reduction_threshold.
inline FormValue eval_E2_minus_one(const TauPoint &tau, const SeriesParams &p = {})
{
    if (tau.im() < reduction_threshold) {
        throw error(errc::out_of_regime, "E2 - 1 is summed directly only for Im(tau) >= 0.35");
    }
    return detail::eisenstein_tail_series(detail::eisenstein_spec(2), tau, p.tol, p.order, 0);
}

/// Lattice sum G_k(tau) = sum' (m tau + n)^-k over max(|m|,|n|) <= radius.
/// The tail bound counts the 8s points on each square shell s > radius, each
/// of modulus >= s * delta with delta = min |x tau + y| on the unit square's
/// boundary: tail <= 8 delta^-k radius^(2-k) / (k - 2).
inline FormValue eval_G_lattice(int k, const TauPoint &tau, int radius)
{
    if (k != 4 && k != 6) {
        throw error(errc::invalid_weight, "lattice sums implemented for k = 4 and k = 6");
    }
    if (radius < 10) {
        throw error(errc::invalid_argument, "lattice radius must be >= 10");
    }
    const complex t = tau.value();
    complex sum{0.0, 0.0};
    // Pair (m, n) with (-m, -n): even k makes the two terms equal.
    for (int m = 0; m <= radius; ++m) {
        complex row{0.0, 0.0};
        for (int n = (m == 0 ? 1 : -radius); n <= radius; ++n) {
            const complex w = double(m) * t + double(n);
            const complex w2 = w * w;
            row += k == 4 ? 1.0 / (w2 * w2) : 1.0 / (w2 * w2 * w2);
        }
        sum += row;
    }
    sum *= 2.0;

    // min of |x tau + y| over the boundary of [-1,1]^2 (by symmetry, the
    // segments {tau + y} and {x tau + 1}).
    auto seg_dist = [](complex a, complex b) {
        const complex d = b - a;
        const double s = std::clamp(-std::real(std::conj(d) * a) / std::norm(d), 0.0, 1.0);
        return std::abs(a + s * d);
    };
    const double delta = std::min(seg_dist(t - 1.0, t + 1.0), seg_dist(1.0 - t, 1.0 + t));
    const double tail = 8.0 * std::pow(delta, -k) * std::pow(double(radius), 2 - k) / (k - 2);
    return {sum, tail};
}

// ---------------------------------------------------------------------------
// Delta and its roots

namespace detail
{

/// Delta^(1/k) = e^(2 pi i tau / k) prod (1 - q^n)^(24/k), with the factors
/// combined through principal logarithms (|q^n| < 1 keeps every factor in
/// the right half-plane), so the result is holomorphic in tau and positive
/// on the imaginary axis. The discarded factors satisfy
/// |sum_{n>N} log(1 - q^n)| <= r^(N+1) / (1 - r)^2.
inline FormValue delta_root_direct(const TauPoint &tau, int k, double tol, int order)
{
    const complex q = nome(tau);
    const double r = std::abs(q);
    const double expo = 24.0 / k;
    const complex prefactor = std::exp(2.0 * pi * I * tau.value() / double(k));
    const double pref_abs = std::abs(prefactor);
    auto log_tail = [&](int n) { return expo * std::pow(r, n + 1) / ((1.0 - r) * (1.0 - r)); };
    // |partial| <= pref_abs * exp(expo * r / (1 - r)^2) gives an a priori size bound.
    const double size = pref_abs * std::exp(expo * r / ((1.0 - r) * (1.0 - r)));
    // Extra factors are cheap, so the product also meets a relative target.
    const int N = choose_order([&](int n) { return size * std::expm1(log_tail(n)); }, std::min(tol, 1e-16 * size),
                               order, "Delta product");
    complex logsum{0.0, 0.0}, qn{1.0, 0.0};
    for (int n = 1; n <= N; ++n) {
        qn *= q;
        logsum += std::log(1.0 - qn);
    }
    const complex value = prefactor * std::exp(expo * logsum);
    return {value, std::abs(value) * std::expm1(log_tail(N))};
}

/// Delta from its q-expansion (Eisenstein route). Coefficients obey
/// |tau(n)| <= d(n) n^(11/2) <= 2 n^6.
inline FormValue delta_series_direct(const TauPoint &tau, double tol, int order, int deriv)
{
    const complex q = nome(tau);
    const double r = std::abs(q);
    // |Delta| >= r exp(-24 r/(1-r)^2) from the product; the order also meets
    // a relative target against this floor.
    const double floor = r * std::exp(-24.0 * r / ((1.0 - r) * (1.0 - r)));
    const int N = choose_order([&](int n) { return 2.0 * poly_tail(6 + deriv, r, n); }, std::min(tol, 1e-16 * floor),
                               std::min(order, 120), "Delta series");
    const auto coeffs = delta_coefficients(N);
    std::vector<double> a(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) {
        a[n] = double(coeffs[n]) * std::pow(double(n), deriv);
    }
    return {power_sum(a, q, N), 2.0 * poly_tail(6 + deriv, r, N)};
}

} // namespace detail

enum class DeltaMethod
{
    eisenstein,
    product
};

inline FormValue eval_Delta(const TauPoint &tau, DeltaMethod method = DeltaMethod::product, const SeriesParams &p = {})
{
    auto direct = [&](const TauPoint &t, double tol) {
        return method == DeltaMethod::product ? detail::delta_root_direct(t, 1, tol, p.order)
                                              : detail::delta_series_direct(t, tol, p.order, 0);
    };
    if (!detail::needs_reduction(tau, p)) {
        return direct(tau, p.tol);
    }
    const auto tr = detail::transport_of(tau);
    const double j12 = std::pow(std::abs(tr.j), 12);
    return std::pow(tr.j, 12) * direct(tr.tau_r, p.tol / j12);
}

inline bool divides_24(int k)
{
    return k >= 1 && k <= 24 && 24 % k == 0;
}

/// Delta^(1/k) for k | 24 on the branch that is positive on the imaginary axis.
inline FormValue delta_root(const TauPoint &tau, int k, const SeriesParams &p = {})
{
    if (!divides_24(k)) {
        throw error(errc::invalid_root, "Delta roots are defined for divisors of 24 only");
    }
    return detail::delta_root_direct(tau, k, p.tol, p.order);
}

// ---------------------------------------------------------------------------
// J and its roots

inline FormValue eval_J(const TauPoint &tau, const SeriesParams &p = {})
{
    const FormValue e4 = eval_E4(tau, p);
    const FormValue delta = eval_Delta(tau, DeltaMethod::eisenstein, p);
    return (e4 * e4 * e4) / (1728.0 * delta);
}

/// J^(1/3) = E4 / (12 Delta^(1/3)).
inline FormValue eval_J_cbrt(const TauPoint &tau, const SeriesParams &p = {})
{
    return eval_E4(tau, p) / (12.0 * delta_root(tau, 3, p));
}

/// (J - 1)^(1/2) = E6 / (24 sqrt3 Delta^(1/2)).
inline FormValue eval_Jm1_sqrt(const TauPoint &tau, const SeriesParams &p = {})
{
    return eval_E6(tau, p) / (24.0 * sqrt3 * delta_root(tau, 2, p));
}

// ---------------------------------------------------------------------------
// Derivatives

enum class Form
{
    E2,
    E4,
    E6,
    Delta,
    J
};

enum class DerivMethod
{
    closed_form,
    termwise
};

inline int weight_of(Form f)
{
    switch (f) {
        case Form::E2: return 2;
        case Form::E4: return 4;
        case Form::E6: return 6;
        case Form::Delta: return 12;
        case Form::J: return 0;
    }
    return 0;
}

inline FormValue eval_form(Form f, const TauPoint &tau, const SeriesParams &p = {})
{
    switch (f) {
        case Form::E2: return eval_E2(tau, p);
        case Form::E4: return eval_E4(tau, p);
        case Form::E6: return eval_E6(tau, p);
        case Form::Delta: return eval_Delta(tau, DeltaMethod::product, p);
        case Form::J: return eval_J(tau, p);
    }
    return {};
}

namespace detail
{

inline FormValue d_closed_form(Form f, const TauPoint &tau, const SeriesParams &p)
{
    switch (f) {
        case Form::E2: {
            const auto e2 = eval_E2(tau, p);
            return (e2 * e2 - eval_E4(tau, p)) / 12.0;
        }
        case Form::E4: return (eval_E2(tau, p) * eval_E4(tau, p) - eval_E6(tau, p)) / 3.0;
        case Form::E6: {
            const auto e4 = eval_E4(tau, p);
            return (eval_E2(tau, p) * eval_E6(tau, p) - e4 * e4) / 2.0;
        }
        case Form::Delta: return eval_Delta(tau, DeltaMethod::product, p) * eval_E2(tau, p);
        case Form::J: {
            const auto c = eval_J_cbrt(tau, p);
            return complex(-2.0 * sqrt3) * c * c * eval_Jm1_sqrt(tau, p) * delta_root(tau, 6, p);
        }
    }
    return {};
}

/// Bound for the j-coefficients: c(n) <= e^(4 pi sqrt n) / (sqrt2 n^(3/4)).
/// Successive ratios of n^deriv c(n) r^n decrease, so the tail is dominated
/// by a geometric series once the ratio drops below one.
inline double j_tail(double r, int N, int deriv)
{
    if (r == 0.0) {
        return 0.0;
    }
    auto log_term = [&](double n) {
        return 4.0 * pi * std::sqrt(n) - 0.5 * std::log(2.0) + (deriv - 0.75) * std::log(n) + n * std::log(r);
    };
    const double n1 = N + 1.0;
    const double ratio = std::exp(log_term(n1 + 1.0) - log_term(n1));
    if (ratio >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(log_term(n1)) / (1.0 - ratio);
}

inline FormValue d_termwise_direct(Form f, const TauPoint &tau, double tol, int order)
{
    switch (f) {
        case Form::E2:
        case Form::E4:
        case Form::E6:
            return eisenstein_tail_series(eisenstein_spec(weight_of(f)), tau, tol, order, 1);
        case Form::Delta: return delta_series_direct(tau, tol, order, 1);
        case Form::J: {
            const complex q = nome(tau);
            const double r = std::abs(q);
            const int N = choose_order([&](int n) { return j_tail(r, n, 1) / 1728.0; }, tol, std::min(order, 120),
                                       "J series");
            const auto c = j_coefficients(N);
            std::vector<double> a(N + 1, 0.0);
            for (int n = 1; n <= N; ++n) {
                a[n] = n * c[n + 1];
            }
            const complex v = -1.0 / q + power_sum(a, q, N);
            return {v / 1728.0, j_tail(r, N, 1) / 1728.0};
        }
    }
    return {};
}

} // namespace detail

/// D f = (1/2 pi i) df/dtau. closed_form uses the Ramanujan identities and
/// their consequences; termwise differentiates the q-expansion coefficientwise.
inline FormValue eval_D(Form f, const TauPoint &tau, const SeriesParams &p = {},
                        DerivMethod method = DerivMethod::closed_form)
{
    if (method == DerivMethod::closed_form) {
        return detail::d_closed_form(f, tau, p);
    }
    if (!detail::needs_reduction(tau, p)) {
        return detail::d_termwise_direct(f, tau, p.tol, p.order);
    }
    // f(tau) = j^k g(tau_r) [- (6i/pi) c j for E2], dtau/dtau_r = j^-2:
    // Df(tau) = j^(k+2) Dg(tau_r) + k c j^(k+1) g(tau_r) / (2 pi i) [- 3 c^2 j^2 / pi^2].
    const auto tr = detail::transport_of(tau);
    const int k = weight_of(f);
    const double aj = std::abs(tr.j);
    const double scale = std::pow(aj, k + 2) + std::abs(k * tr.c) * std::pow(aj, k + 1) / (2.0 * pi);
    SeriesParams inner = p.with_tol(p.tol / scale);
    inner.reduce = false;
    const FormValue dg = detail::d_termwise_direct(f, tr.tau_r, inner.tol, p.order);
    const FormValue g = f == Form::J ? eval_J(tr.tau_r, inner) : eval_form(f, tr.tau_r, inner);
    FormValue out = std::pow(tr.j, k + 2) * dg + (double(k) * tr.c / (2.0 * pi * I)) * std::pow(tr.j, k + 1) * g;
    if (f == Form::E2) {
        out.value -= 3.0 * tr.c * tr.c * tr.j * tr.j / (pi * pi);
    }
    return out;
}

/// Serre derivative theta_k f = Df - (k/12) E2 f for f in {E4, E6}, with Df
/// taken termwise.
inline FormValue serre_derivative(Form f, const TauPoint &tau, const SeriesParams &p = {})
{
    if (f != Form::E4 && f != Form::E6) {
        throw error(errc::invalid_weight, "Serre derivative implemented for E4 and E6");
    }
    const double k = weight_of(f);
    return eval_D(f, tau, p, DerivMethod::termwise) - (k / 12.0) * (eval_E2(tau, p) * eval_form(f, tau, p));
}

/// D of Delta^(1/k), differentiating the product factor by factor:
/// D log Delta^(1/k) = 1/k - (24/k) sum n q^n / (1 - q^n).
/// The discarded Lambert terms are bounded by sum_{n>N} n r^n / (1 - r).
inline FormValue eval_D_delta_root_termwise(const TauPoint &tau, int k, const SeriesParams &p = {})
{
    const FormValue root = delta_root(tau, k, p);
    const complex q = nome(tau);
    const double r = std::abs(q);
    const double expo = 24.0 / k;
    const double scale = std::max(1.0, std::abs(root.value));
    const int N = detail::choose_order([&](int n) { return scale * expo * detail::poly_tail(1, r, n) / (1.0 - r); },
                                       p.tol, p.order, "Lambert series");
    complex lam{0.0, 0.0}, qn{1.0, 0.0};
    for (int n = 1; n <= N; ++n) {
        qn *= q;
        lam += double(n) * qn / (1.0 - qn);
    }
    const FormValue dlog(1.0 / k - expo * lam, expo * detail::poly_tail(1, r, N) / (1.0 - r));
    return root * dlog;
}

} // namespace qperiods
