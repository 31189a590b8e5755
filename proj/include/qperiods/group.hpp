#pragma once

// The modular group PSL2(Z), the extended group G generated by the
// reflections in the sides of T0, fundamental-domain reduction and
// tessellation words.

#include "core.hpp"

#include <array>
#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

namespace qperiods
{

namespace detail
{

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw error(errc::overflow, "integer matrix entry overflow");
    }
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw error(errc::overflow, "integer matrix entry overflow");
    }
    return r;
}

} // namespace detail

/// Integer 2x2 matrix [a b; c d].
struct IntMatrix
{
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const
    {
        return detail::checked_add(detail::checked_mul(a, d), -detail::checked_mul(b, c));
    }

    friend IntMatrix operator*(const IntMatrix &x, const IntMatrix &y)
    {
        using detail::checked_add;
        using detail::checked_mul;
        return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
                checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
                checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
                checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
    }

    /// Representative of {M, -M} with c > 0, or c == 0 and d > 0.
    IntMatrix canonical() const
    {
        if (c < 0 || (c == 0 && d < 0)) {
            return {-a, -b, -c, -d};
        }
        return *this;
    }

    friend bool operator==(const IntMatrix &, const IntMatrix &) = default;
};

/// Fractional-linear action of a real matrix on the sphere.
inline ExtComplex moebius_apply(double a, double b, double c, double d, const ExtComplex &z)
{
    if (z.is_infinity()) {
        if (c == 0.0) {
            return ExtComplex::infinity();
        }
        return ExtComplex(complex(a / c, 0.0));
    }
    const complex den = c * z.value() + d;
    if (den == complex(0.0, 0.0)) {
        return ExtComplex::infinity();
    }
    return ExtComplex((a * z.value() + b) / den);
}

/// An element of PSL2(Z), stored with the canonical sign.
class UnimodularMap
{
public:
    UnimodularMap() = default;

    UnimodularMap(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
        : m_(IntMatrix{a, b, c, d}.canonical())
    {
        if (m_.det() != 1) {
            throw error(errc::invalid_argument, "unimodular map needs ad - bc = 1");
        }
    }

    explicit UnimodularMap(const IntMatrix &m) : UnimodularMap(m.a, m.b, m.c, m.d) {}

    static UnimodularMap identity() { return {}; }
    static UnimodularMap translation(std::int64_t n = 1) { return {1, n, 0, 1}; }
    static UnimodularMap inversion() { return {0, -1, 1, 0}; }

    std::int64_t a() const { return m_.a; }
    std::int64_t b() const { return m_.b; }
    std::int64_t c() const { return m_.c; }
    std::int64_t d() const { return m_.d; }
    const IntMatrix &matrix() const { return m_; }

    UnimodularMap inverse() const { return {m_.d, -m_.b, -m_.c, m_.a}; }

    /// c*z + d, the automorphy factor.
    complex factor(complex z) const { return double(m_.c) * z + double(m_.d); }

    friend UnimodularMap operator*(const UnimodularMap &x, const UnimodularMap &y)
    {
        return UnimodularMap(x.m_ * y.m_);
    }

    friend bool operator==(const UnimodularMap &, const UnimodularMap &) = default;

private:
    IntMatrix m_{};
};

/// An element of G: z -> (a w + b)/(c w + d) with w = conj(z) when
/// conjugate_first is set. Determinant is +1 for holomorphic elements and
/// -1 for anti-holomorphic ones, so both preserve the upper half-plane.
struct ExtendedMap
{
    IntMatrix m{};
    bool conjugate_first = false;

    ExtendedMap() = default;
    ExtendedMap(const IntMatrix &mat, bool conj) : m(mat), conjugate_first(conj)
    {
        const auto det = m.det();
        if (det != (conj ? -1 : 1)) {
            throw error(errc::invalid_argument, "extended map must have det +1 (holomorphic) or -1 (with conjugation)");
        }
    }
    ExtendedMap(const UnimodularMap &s) : m(s.matrix()), conjugate_first(false) {}

    static ExtendedMap identity() { return {}; }
    /// z -> -conj(z), reflection in the imaginary axis.
    static ExtendedMap reflect_a() { return {{-1, 0, 0, 1}, true}; }
    /// z -> 1/conj(z), reflection in the unit circle.
    static ExtendedMap reflect_b() { return {{0, 1, 1, 0}, true}; }
    /// z -> 1 - conj(z), reflection in Re(z) = 1/2.
    static ExtendedMap reflect_c() { return {{-1, 1, 0, 1}, true}; }

    bool is_holomorphic() const { return !conjugate_first; }

    ExtendedMap canonical() const
    {
        ExtendedMap r = *this;
        r.m = m.canonical();
        return r;
    }

    auto key() const
    {
        const auto c = m.canonical();
        return std::make_tuple(c.a, c.b, c.c, c.d, conjugate_first);
    }

    friend bool operator==(const ExtendedMap &x, const ExtendedMap &y) { return x.key() == y.key(); }
};

inline ExtComplex apply(const ExtendedMap &g, const ExtComplex &z)
{
    const ExtComplex w = g.conjugate_first ? conj(z) : z;
    return moebius_apply(double(g.m.a), double(g.m.b), double(g.m.c), double(g.m.d), w);
}

inline ExtComplex apply(const UnimodularMap &s, const ExtComplex &z)
{
    return moebius_apply(double(s.a()), double(s.b()), double(s.c()), double(s.d()), z);
}

inline complex apply(const UnimodularMap &s, complex z)
{
    return (double(s.a()) * z + double(s.b())) / (double(s.c()) * z + double(s.d()));
}

/// g o h. Entries are real, so conjugation commutes with the matrix action
/// and the flags combine by parity.
inline ExtendedMap compose(const ExtendedMap &g, const ExtendedMap &h)
{
    ExtendedMap r;
    r.m = g.m * h.m;
    r.conjugate_first = g.conjugate_first != h.conjugate_first;
    return r;
}

inline ExtendedMap inverse(const ExtendedMap &g)
{
    // (a w + b)/(c w + d) = z  =>  w = (d z - b)/(-c z + a); for the
    // anti-holomorphic case w = conj(z') and conjugating back is free.
    ExtendedMap r;
    const auto det = g.m.det();
    r.m = {det * g.m.d, -det * g.m.b, -det * g.m.c, det * g.m.a};
    r.conjugate_first = g.conjugate_first;
    return r;
}

struct ReductionResult
{
    TauPoint tau_reduced;
    /// Satisfies map(tau_reduced) == input tau.
    UnimodularMap map;
};

inline constexpr long reduction_iteration_limit = 1'000'000;

/// Gauss reduction into the closed fundamental domain
/// {|Re| <= 1/2, |tau| >= 1}. Boundary points are not tie-broken.
inline ReductionResult reduce_to_fundamental(const TauPoint &tau)
{
    complex w = tau.value();
    IntMatrix s{};
    const IntMatrix inv{0, -1, 1, 0};
    for (long it = 0; it < reduction_iteration_limit; ++it) {
        if (std::abs(w.real()) > 0.5) {
            const double n = std::floor(w.real() + 0.5);
            w -= n;
            s = s * IntMatrix{1, static_cast<std::int64_t>(n), 0, 1};
        }
        if (std::norm(w) < 1.0) {
            w = -1.0 / w;
            s = s * inv;
            continue;
        }
        return {TauPoint(w), UnimodularMap(s)};
    }
    throw error(errc::iteration_limit, "fundamental-domain reduction did not terminate");
}

/// True iff tau reduces to within tol of rho or of rho - 1.
inline bool is_rho_equivalent(const TauPoint &tau, double tol)
{
    const complex r = reduce_to_fundamental(tau).tau_reduced.value();
    return std::abs(r - rho) <= tol || std::abs(r - (rho - 1.0)) <= tol;
}

inline constexpr int max_tessellation_depth = 12;

/// All distinct elements of G expressible as words of length <= depth in the
/// three side reflections of T0, in breadth-first order. Element g stands for
/// the tessellation triangle g(T0).
inline std::vector<ExtendedMap> tessellate(int depth)
{
    if (depth < 0 || depth > max_tessellation_depth) {
        throw error(errc::invalid_argument, "tessellation depth must lie in [0, 12]");
    }
    const std::array<ExtendedMap, 3> gens{ExtendedMap::reflect_a(), ExtendedMap::reflect_b(),
                                          ExtendedMap::reflect_c()};
    std::vector<ExtendedMap> out{ExtendedMap::identity()};
    std::set<decltype(out[0].key())> seen{out[0].key()};
    std::size_t level_begin = 0;
    for (int level = 1; level <= depth; ++level) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (const auto &g : gens) {
                const ExtendedMap w = compose(out[i], g).canonical();
                if (seen.insert(w.key()).second) {
                    out.push_back(w);
                }
            }
        }
        level_begin = level_end;
    }
    return out;
}

/// Holomorphic (even-length) elements of tessellate(depth) as PSL2(Z) maps.
inline std::vector<UnimodularMap> unimodular_words(int depth)
{
    std::vector<UnimodularMap> out;
    for (const auto &g : tessellate(depth)) {
        if (g.is_holomorphic()) {
            out.emplace_back(g.m);
        }
    }
    return out;
}

} // namespace qperiods
