#pragma once

// Shared vocabulary: points of the upper half-plane, points of the Riemann
// sphere, the chordal metric and the library's error type.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qperiods
{

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt3 = std::numbers::sqrt3;
inline constexpr complex I{0.0, 1.0};

/// The corner rho = (1 + i sqrt 3)/2 of the fundamental domain.
inline const complex rho{0.5, 0.5 * sqrt3};

enum class errc
{
    invalid_argument,
    invalid_tau,
    overflow,
    tolerance_unreachable,
    invalid_weight,
    invalid_root,
    degenerate_lattice,
    pole_at_lattice_point,
    iteration_limit,
    invalid_bracket,
    not_found,
    division_by_zero,
    out_of_regime,
    singular_point,
    coincident_points,
    not_a_lune,
    wrong_angles,
    ambiguous_winding,
    cap_too_low,
};

inline const char *to_string(errc e)
{
    switch (e) {
        case errc::invalid_argument: return "invalid-argument";
        case errc::invalid_tau: return "invalid-tau";
        case errc::overflow: return "overflow";
        case errc::tolerance_unreachable: return "tolerance-unreachable";
        case errc::invalid_weight: return "invalid-weight";
        case errc::invalid_root: return "invalid-root";
        case errc::degenerate_lattice: return "degenerate-lattice";
        case errc::pole_at_lattice_point: return "pole-at-lattice-point";
        case errc::iteration_limit: return "iteration-limit";
        case errc::invalid_bracket: return "invalid-bracket";
        case errc::not_found: return "not-found";
        case errc::division_by_zero: return "division-by-zero";
        case errc::out_of_regime: return "out-of-regime";
        case errc::singular_point: return "singular-point";
        case errc::coincident_points: return "coincident-points";
        case errc::not_a_lune: return "not-a-lune";
        case errc::wrong_angles: return "wrong-angles";
        case errc::ambiguous_winding: return "ambiguous-winding";
        case errc::cap_too_low: return "cap-too-low";
    }
    return "unknown";
}

class error : public std::runtime_error
{
public:
    error(errc code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// A point of the open upper half-plane.
class TauPoint
{
public:
    explicit TauPoint(complex z) : z_(z)
    {
        if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw error(errc::invalid_tau, "Im(tau) must be strictly positive and finite");
        }
    }

    complex value() const { return z_; }
    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }

private:
    complex z_;
};

/// A point of the Riemann sphere: either a finite complex number or infinity.
class ExtComplex
{
public:
    ExtComplex() = default;
    ExtComplex(complex z) : z_(z) {}
    ExtComplex(double x) : z_(x, 0.0) {}

    static ExtComplex infinity()
    {
        ExtComplex r;
        r.inf_ = true;
        return r;
    }

    bool is_infinity() const { return inf_; }
    /// Finite value; meaningless when is_infinity().
    complex value() const { return z_; }

    friend ExtComplex conj(const ExtComplex &w)
    {
        return w.inf_ ? w : ExtComplex(std::conj(w.z_));
    }

private:
    complex z_{0.0, 0.0};
    bool inf_ = false;
};

/// Chordal distance on the Riemann sphere (diameter 2).
inline double chordal(const ExtComplex &a, const ExtComplex &b)
{
    if (a.is_infinity() && b.is_infinity()) {
        return 0.0;
    }
    if (a.is_infinity() || b.is_infinity()) {
        const complex z = a.is_infinity() ? b.value() : a.value();
        return 2.0 / std::sqrt(1.0 + std::norm(z));
    }
    const complex z = a.value(), w = b.value();
    return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

} // namespace qperiods
