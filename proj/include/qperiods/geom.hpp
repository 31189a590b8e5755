#pragma once

// Moebius geometry on the Riemann sphere: generalized circles, circular-arc
// triangles and their complements, classification against the model
// triangles, winding numbers of sampled curves, and the boundary and
// argument-principle verifiers for maps between triangles.

#include "core.hpp"
#include "group.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace qperiods
{

/// z -> (a z + b)/(c z + d) with complex entries.
struct ComplexMatrix
{
    complex a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    static ComplexMatrix identity() { return {}; }

    complex det() const { return a * d - b * c; }

    ComplexMatrix inverse() const { return {d, -b, -c, a}; }

    friend ComplexMatrix operator*(const ComplexMatrix &x, const ComplexMatrix &y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

inline ComplexMatrix to_complex_matrix(const IntMatrix &m)
{
    return {double(m.a), double(m.b), double(m.c), double(m.d)};
}

inline ExtComplex apply(const ComplexMatrix &m, const ExtComplex &z)
{
    if (z.is_infinity()) {
        if (m.c == complex(0.0)) {
            return ExtComplex::infinity();
        }
        return ExtComplex(m.a / m.c);
    }
    const complex den = m.c * z.value() + m.d;
    if (den == complex(0.0)) {
        return ExtComplex::infinity();
    }
    return ExtComplex((m.a * z.value() + m.b) / den);
}

/// The map sending z1, z2, z3 to 0, 1, infinity.
inline ComplexMatrix to_zero_one_infinity(const ExtComplex &z1, const ExtComplex &z2, const ExtComplex &z3)
{
    if (z1.is_infinity()) {
        return {0.0, z2.value() - z3.value(), 1.0, -z3.value()};
    }
    if (z2.is_infinity()) {
        return {1.0, -z1.value(), 1.0, -z3.value()};
    }
    if (z3.is_infinity()) {
        return {1.0, -z1.value(), 0.0, z2.value() - z1.value()};
    }
    const complex p = z2.value() - z3.value(), r = z2.value() - z1.value();
    return {p, -z1.value() * p, r, -z3.value() * r};
}

/// The Moebius map sending z_k to w_k.
inline ComplexMatrix moebius_through(const std::array<ExtComplex, 3> &z, const std::array<ExtComplex, 3> &w)
{
    return to_zero_one_infinity(w[0], w[1], w[2]).inverse() * to_zero_one_infinity(z[0], z[1], z[2]);
}

/// Locus A|z|^2 + 2 Re(conj(B) z) + C = 0; a line (through infinity) when A = 0.
struct GeneralizedCircle
{
    double A = 0.0;
    complex B{0.0, 0.0};
    double C = 0.0;

    bool is_line() const { return A == 0.0; }

    complex center() const { return -B / A; }
    double radius() const { return std::sqrt(std::norm(B) - A * C) / std::abs(A); }

    /// Euclidean distance from a finite point to the locus.
    double distance(complex z) const
    {
        if (is_line()) {
            return std::abs(2.0 * (std::conj(B) * z).real() + C) / (2.0 * std::abs(B));
        }
        return std::abs(std::abs(z - center()) - radius());
    }

    double distance(const ExtComplex &z) const
    {
        if (z.is_infinity()) {
            return is_line() ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return distance(z.value());
    }
};

namespace detail
{

inline GeneralizedCircle normalized_circle(double A, complex B, double C)
{
    if (std::abs(A) < 1e-12 * std::max(std::abs(B), std::abs(C))) {
        A = 0.0;
    }
    const double s = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (s == 0.0 || !(std::norm(B) - A * C > 0.0)) {
        throw error(errc::coincident_points, "degenerate generalized circle");
    }
    return {A / s, B / s, C / s};
}

inline double det3(const std::array<std::array<double, 3>, 3> &m)
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double mod_2pi(double x)
{
    const double t = std::fmod(x, 2.0 * pi);
    return t < 0.0 ? t + 2.0 * pi : t;
}

} // namespace detail

inline GeneralizedCircle circle_through(const ExtComplex &p1, const ExtComplex &p2, const ExtComplex &p3)
{
    const std::array<ExtComplex, 3> pts{p1, p2, p3};
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (chordal(pts[i], pts[j]) < 1e-12) {
                throw error(errc::coincident_points, "circle_through needs three distinct points");
            }
        }
    }
    // Rows (|z|^2, 2x, 2y, 1) annihilate (A, Re B, Im B, C); infinity gives (1, 0, 0, 0).
    std::array<std::array<double, 4>, 3> rows{};
    for (int i = 0; i < 3; ++i) {
        if (pts[i].is_infinity()) {
            rows[i] = {1.0, 0.0, 0.0, 0.0};
        } else {
            const complex z = pts[i].value();
            rows[i] = {std::norm(z), 2.0 * z.real(), 2.0 * z.imag(), 1.0};
        }
    }
    std::array<double, 4> v{};
    for (int col = 0; col < 4; ++col) {
        std::array<std::array<double, 3>, 3> minor{};
        for (int r = 0; r < 3; ++r) {
            int k = 0;
            for (int c = 0; c < 4; ++c) {
                if (c != col) {
                    minor[r][k++] = rows[r][c];
                }
            }
        }
        v[col] = ((col % 2) ? -1.0 : 1.0) * detail::det3(minor);
    }
    return detail::normalized_circle(v[0], complex(v[1], v[2]), v[3]);
}

/// Image of a circle under z -> M(z), or z -> M(conj z) when conjugate_first.
/// The Hermitian form H = [[A, B], [conj B, C]] transforms as M^-* H M^-1.
inline GeneralizedCircle moebius_image(const ComplexMatrix &m, bool conjugate_first, const GeneralizedCircle &circ)
{
    const complex B = conjugate_first ? std::conj(circ.B) : circ.B;
    const ComplexMatrix n = m.inverse();
    // H' = N^* H N with N = [[n.a, n.b], [n.c, n.d]].
    const complex h00 = circ.A, h01 = B, h10 = std::conj(B), h11 = circ.C;
    const complex hn00 = h00 * n.a + h01 * n.c, hn01 = h00 * n.b + h01 * n.d;
    const complex hn10 = h10 * n.a + h11 * n.c, hn11 = h10 * n.b + h11 * n.d;
    const complex r00 = std::conj(n.a) * hn00 + std::conj(n.c) * hn10;
    const complex r01 = std::conj(n.a) * hn01 + std::conj(n.c) * hn11;
    const complex r11 = std::conj(n.b) * hn01 + std::conj(n.d) * hn11;
    return detail::normalized_circle(r00.real(), r01, r11.real());
}

inline GeneralizedCircle moebius_image(const ExtendedMap &g, const GeneralizedCircle &circ)
{
    return moebius_image(to_complex_matrix(g.m), g.conjugate_first, circ);
}

inline bool same_circle(const GeneralizedCircle &x, const GeneralizedCircle &y, double tol)
{
    const std::array<double, 4> u{x.A, x.B.real(), x.B.imag(), x.C}, v{y.A, y.B.real(), y.B.imag(), y.C};
    double nu = 0.0, nv = 0.0, dot = 0.0;
    for (int i = 0; i < 4; ++i) {
        nu += u[i] * u[i];
        nv += v[i] * v[i];
        dot += u[i] * v[i];
    }
    // |sin| of the angle between the coefficient vectors.
    return 1.0 - dot * dot / (nu * nv) <= tol * tol;
}

enum class Orientation
{
    left,
    right
};

inline Orientation flipped(Orientation o)
{
    return o == Orientation::left ? Orientation::right : Orientation::left;
}

/// Side k runs from vertices[k] through mids[k] to vertices[k+1] on sides[k].
/// The orientation says on which side of this boundary the interior lies.
struct ArcTriangle
{
    std::array<ExtComplex, 3> vertices;
    std::array<ExtComplex, 3> mids;
    std::array<GeneralizedCircle, 3> sides;
    Orientation orientation = Orientation::left;
};

inline ArcTriangle make_triangle(const std::array<ExtComplex, 3> &vertices, const std::array<ExtComplex, 3> &mids,
                                 Orientation orientation)
{
    ArcTriangle t{vertices, mids, {}, orientation};
    for (int k = 0; k < 3; ++k) {
        t.sides[k] = circle_through(vertices[k], mids[k], vertices[(k + 1) % 3]);
    }
    return t;
}

/// {0 <= Re <= 1/2, |tau| >= 1}: vertices (inf, i, rho).
inline ArcTriangle triangle_T0()
{
    return make_triangle({ExtComplex::infinity(), I, rho},
                         {complex(0, 2), std::polar(1.0, 5.0 * pi / 12.0), complex(0.5, 2)}, Orientation::left);
}

/// The image of T0 under p: vertices (inf, -i, conj rho).
inline ArcTriangle triangle_T1()
{
    return make_triangle({ExtComplex::infinity(), -I, std::conj(rho)}, {0.0, std::polar(1.0, -5.0 * pi / 12.0), 0.5},
                         Orientation::left);
}

/// {0 <= Re <= 1, |tau - 1/2| >= 1/2}: vertices (inf, 0, 1), all angles zero.
inline ArcTriangle triangle_V0()
{
    return make_triangle({ExtComplex::infinity(), 0.0, 1.0}, {I, complex(0.5, 0.5), complex(1, 1)},
                         Orientation::left);
}

inline ArcTriangle image(const ComplexMatrix &m, bool conjugate_first, const ArcTriangle &t)
{
    std::array<ExtComplex, 3> v, md;
    for (int k = 0; k < 3; ++k) {
        v[k] = apply(m, conjugate_first ? conj(t.vertices[k]) : t.vertices[k]);
        md[k] = apply(m, conjugate_first ? conj(t.mids[k]) : t.mids[k]);
    }
    ArcTriangle r{v, md, {}, conjugate_first ? flipped(t.orientation) : t.orientation};
    for (int k = 0; k < 3; ++k) {
        r.sides[k] = moebius_image(m, conjugate_first, t.sides[k]);
    }
    return r;
}

inline ArcTriangle image(const ExtendedMap &g, const ArcTriangle &t)
{
    return image(to_complex_matrix(g.m), g.conjugate_first, t);
}

inline ArcTriangle conj(const ArcTriangle &t)
{
    return image(ComplexMatrix::identity(), true, t);
}

/// Position of a point of side k in (0, 1), increasing from vertices[k] to vertices[k+1].
inline double side_parameter(const ArcTriangle &t, int k, const ExtComplex &z)
{
    const ComplexMatrix m = to_zero_one_infinity(t.vertices[k], t.mids[k], t.vertices[(k + 1) % 3]);
    const ExtComplex w = apply(m, z);
    if (w.is_infinity()) {
        return 1.0;
    }
    const double x = w.value().real();
    if (x <= 0.0) {
        return x;
    }
    return x / (1.0 + x);
}

namespace detail
{

/// Unit tangent at the finite point v of the arc from v through m to e.
inline complex arc_tangent(const GeneralizedCircle &circ, complex v, const ExtComplex &m, const ExtComplex &e)
{
    if (!circ.is_line()) {
        const complex c = circ.center();
        const double tv = std::arg(v - c);
        const double dm = mod_2pi(std::arg(m.value() - c) - tv);
        const double de = mod_2pi(std::arg(e.value() - c) - tv);
        const complex radial = (v - c) / std::abs(v - c);
        return dm < de ? I * radial : -I * radial;
    }
    const complex d0 = I * circ.B / std::abs(circ.B);
    auto pos = [&](complex z) { return ((z - v) * std::conj(d0)).real(); };
    if (m.is_infinity()) {
        return pos(e.value()) > 0.0 ? -d0 : d0;
    }
    const double sm = pos(m.value());
    if (e.is_infinity()) {
        return sm > 0.0 ? d0 : -d0;
    }
    const double se = pos(e.value());
    if (sm > 0.0) {
        return (se > 0.0 && se < sm) ? -d0 : d0;
    }
    return (se < 0.0 && se > sm) ? d0 : -d0;
}

inline double finite_vertex_angle(const ArcTriangle &t, int k)
{
    const int prev = (k + 2) % 3, next = (k + 1) % 3;
    const complex v = t.vertices[k].value();
    const complex u = arc_tangent(t.sides[k], v, t.mids[k], t.vertices[next]);
    const complex w = arc_tangent(t.sides[prev], v, t.mids[prev], t.vertices[prev]);
    double a = t.orientation == Orientation::left ? mod_2pi(std::arg(w / u)) : mod_2pi(std::arg(u / w));
    // Tangent circles give u = w up to rounding; report the cusp as 0.
    if (a > 2.0 * pi - 1e-9) {
        a = 0.0;
    }
    return a;
}

} // namespace detail

inline double angle_at_vertex(const ArcTriangle &t, int index)
{
    if (index < 0 || index > 2) {
        throw error(errc::invalid_argument, "vertex index must be 0, 1 or 2");
    }
    if (!t.vertices[index].is_infinity()) {
        return detail::finite_vertex_angle(t, index);
    }
    // Move infinity to 0 by z -> -1/(z - a) with a clear of all marked points.
    static const complex candidates[] = {{0.1234, 0.5678}, {-0.3141, 0.2718}, {0.577, -0.161}, {2.2, 1.7}};
    for (complex a : candidates) {
        bool clear = true;
        for (int k = 0; k < 3; ++k) {
            clear = clear && chordal(t.vertices[k], a) > 1e-6 && chordal(t.mids[k], a) > 1e-6;
        }
        if (clear) {
            return detail::finite_vertex_angle(image(ComplexMatrix{0.0, -1.0, 1.0, -a}, false, t), index);
        }
    }
    throw error(errc::invalid_argument, "no auxiliary point available for the vertex at infinity");
}

inline std::array<double, 3> angles(const ArcTriangle &t)
{
    return {angle_at_vertex(t, 0), angle_at_vertex(t, 1), angle_at_vertex(t, 2)};
}

inline constexpr double zero_angle_tol = 1e-9;

/// The closure of (D1 n D2) \ T for the lune D1 n D2 formed at the zero-angle
/// vertex: the two sides through that vertex are replaced by the
/// complementary arcs of their circles and the orientation flips.
inline ArcTriangle complementary_triangle(const ArcTriangle &t)
{
    int k = -1;
    for (int i = 0; i < 3; ++i) {
        if (angle_at_vertex(t, i) < zero_angle_tol) {
            k = i;
            break;
        }
    }
    if (k < 0) {
        throw error(errc::not_a_lune, "no vertex where the two incident circles touch");
    }
    ArcTriangle r = t;
    for (int side : {k, (k + 2) % 3}) {
        const ComplexMatrix m = to_zero_one_infinity(t.vertices[side], t.mids[side], t.vertices[(side + 1) % 3]);
        r.mids[side] = apply(m.inverse(), ExtComplex(-1.0));
    }
    r.orientation = flipped(t.orientation);
    return r;
}

/// Same vertices in order, same carrying circles, same arcs and orientation.
inline bool same_triangle(const ArcTriangle &x, const ArcTriangle &y, double tol)
{
    if (x.orientation != y.orientation) {
        return false;
    }
    for (int k = 0; k < 3; ++k) {
        if (chordal(x.vertices[k], y.vertices[k]) > tol || !same_circle(x.sides[k], y.sides[k], tol)) {
            return false;
        }
        const double s = side_parameter(y, k, x.mids[k]);
        if (!(s > 0.0 && s < 1.0)) {
            return false;
        }
    }
    return true;
}

enum class TriangleClass
{
    T0,
    conjT0,
    T1,
    conjT1
};

inline const char *to_string(TriangleClass c)
{
    switch (c) {
        case TriangleClass::T0: return "T0";
        case TriangleClass::conjT0: return "conjT0";
        case TriangleClass::T1: return "T1";
        case TriangleClass::conjT1: return "conjT1";
    }
    return "?";
}

struct Classification
{
    TriangleClass cls;
    /// Sends the vertices (zero angle, right angle, third) to the model's.
    ComplexMatrix map;
    /// Indices of the zero-angle, right-angle and third vertex.
    std::array<int, 3> order;
};

/// Vertices (inf, right-angle vertex, third vertex) of each model.
inline std::array<ExtComplex, 3> model_vertices(TriangleClass c)
{
    const bool upper = c == TriangleClass::T0 || c == TriangleClass::conjT1;
    return upper ? std::array<ExtComplex, 3>{ExtComplex::infinity(), I, rho}
                 : std::array<ExtComplex, 3>{ExtComplex::infinity(), -I, std::conj(rho)};
}

inline ArcTriangle model_triangle(TriangleClass c)
{
    switch (c) {
        case TriangleClass::T0: return triangle_T0();
        case TriangleClass::conjT0: return conj(triangle_T0());
        case TriangleClass::T1: return triangle_T1();
        case TriangleClass::conjT1: return conj(triangle_T1());
    }
    return triangle_T0();
}

inline Classification classify_triangle(const ArcTriangle &t, double tol)
{
    const auto a = angles(t);
    int iz = -1, ir = -1, it = -1;
    bool third_is_obtuse = false;
    for (int k = 0; k < 3; ++k) {
        if (a[k] < tol && iz < 0) {
            iz = k;
        } else if (std::abs(a[k] - pi / 2) < tol && ir < 0) {
            ir = k;
        } else if (std::abs(a[k] - pi / 3) < tol && it < 0) {
            it = k;
        } else if (std::abs(a[k] - 2 * pi / 3) < tol && it < 0) {
            it = k;
            third_is_obtuse = true;
        }
    }
    if (iz < 0 || ir < 0 || it < 0) {
        throw error(errc::wrong_angles, "angles match neither (0, pi/2, pi/3) nor (0, pi/2, 2pi/3)");
    }
    // Listing the vertices against their cyclic order reverses the traversal.
    const bool cyclic = ir == (iz + 1) % 3;
    const Orientation o = cyclic ? t.orientation : flipped(t.orientation);
    TriangleClass cls;
    if (!third_is_obtuse) {
        cls = o == Orientation::left ? TriangleClass::T0 : TriangleClass::conjT0;
    } else {
        cls = o == Orientation::left ? TriangleClass::T1 : TriangleClass::conjT1;
    }
    const ComplexMatrix m = moebius_through({t.vertices[iz], t.vertices[ir], t.vertices[it]}, model_vertices(cls));
    return {cls, m, {iz, ir, it}};
}

/// A closed polyline on the sphere; the last point connects to the first.
struct SampledCurve
{
    std::vector<ExtComplex> points;
};

namespace detail
{

inline double segment_distance(complex w, complex a, complex b)
{
    const complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) {
        return std::abs(w - a);
    }
    const double t = std::clamp(((w - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(w - (a + t * d));
}

} // namespace detail

inline constexpr double winding_rounding_gap = 0.3;

/// Total turning of (point - w) along the closed polyline over 2 pi, rounded.
/// Each segment must stay at least three of its own lengths away from w.
inline int winding_number(const SampledCurve &curve, complex w)
{
    const auto &pts = curve.points;
    if (pts.size() < 3) {
        throw error(errc::invalid_argument, "a closed curve needs at least three points");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const ExtComplex &p = pts[i], &q = pts[(i + 1) % pts.size()];
        if (p.is_infinity() || q.is_infinity()) {
            throw error(errc::invalid_argument, "winding number needs a finite curve");
        }
        const complex a = p.value(), b = q.value();
        if (detail::segment_distance(w, a, b) < 3.0 * std::abs(b - a)) {
            throw error(errc::ambiguous_winding, "point lies within three mesh lengths of the curve");
        }
        total += std::arg((b - w) / (a - w));
    }
    const double x = total / (2.0 * pi);
    const double n = std::round(x);
    if (std::abs(x - n) > 0.5 - winding_rounding_gap) {
        throw error(errc::ambiguous_winding, "turning number is too far from an integer");
    }
    return int(n);
}

/// One boundary sample: source point, side index (3 marks the cap) and
/// whether it is a vertex.
struct BoundarySample
{
    ExtComplex tau;
    int side = 0;
    bool vertex = false;
};

/// Samples of the boundary of t truncated near its zero-angle vertex, in
/// traversal order. In the chart of the classification map the two sides
/// through the cusp are vertical rays, cut at |Im| = cutoff and joined by a
/// horizontal cap; rays are sampled geometrically in the distance from
/// their finite end, the third side uniformly in angle.
inline std::vector<BoundarySample> sample_boundary(const ArcTriangle &t, int samples, double cutoff)
{
    if (samples < 4 || !(cutoff > 2.0)) {
        throw error(errc::invalid_argument, "need samples >= 4 and cutoff > 2");
    }
    const Classification cl = classify_triangle(t, 1e-6);
    const ComplexMatrix to_chart = cl.map, from_chart = cl.map.inverse();
    const int cusp = cl.order[0];
    auto back = [&](complex z) { return apply(from_chart, ExtComplex(z)); };

    // Cap height: the rays head toward +i infinity for upper models, -i infinity otherwise.
    const ArcTriangle model = image(to_chart, false, t);
    const int into_cusp = (cusp + 2) % 3; // side ending at the cusp
    const complex ray_start = model.vertices[into_cusp].value();
    const double sgn = model.mids[into_cusp].value().imag() > ray_start.imag() ? 1.0 : -1.0;
    const double cap_y = sgn * cutoff;

    std::vector<BoundarySample> out;
    auto ray = [&](complex foot, bool outward) {
        const double span = std::abs(cap_y - foot.imag()) + 1.0;
        std::vector<complex> pts;
        for (int j = 1; j < samples; ++j) {
            const double u = std::pow(span, double(j) / samples) - 1.0;
            pts.emplace_back(foot.real(), foot.imag() + sgn * u);
        }
        pts.emplace_back(foot.real(), cap_y);
        if (!outward) {
            std::reverse(pts.begin(), pts.end());
        }
        return pts;
    };
    for (int k = 0; k < 3; ++k) {
        const int next = (k + 1) % 3;
        std::vector<complex> pts;
        if (k == cusp) {
            // From the cap down to the finite end vertex.
            pts = ray(model.vertices[next].value(), false);
        } else if (next == cusp) {
            pts = ray(model.vertices[k].value(), true);
        } else {
            const GeneralizedCircle &c = model.sides[k];
            const complex v0 = model.vertices[k].value(), v1 = model.vertices[next].value();
            if (c.is_line()) {
                for (int j = 1; j < samples; ++j) {
                    pts.push_back(v0 + (v1 - v0) * (double(j) / samples));
                }
            } else {
                const complex ctr = c.center();
                const double th0 = std::arg(v0 - ctr);
                double sweep = detail::mod_2pi(std::arg(v1 - ctr) - th0);
                if (detail::mod_2pi(std::arg(model.mids[k].value() - ctr) - th0) > sweep) {
                    sweep -= 2.0 * pi;
                }
                for (int j = 1; j < samples; ++j) {
                    pts.push_back(ctr + std::polar(c.radius(), th0 + sweep * j / samples));
                }
            }
        }
        if (k != cusp) {
            out.push_back({t.vertices[k], k, true});
        }
        for (complex z : pts) {
            out.push_back({back(z), k, false});
        }
        if (next == cusp) {
            // Cap from the end of this ray to the start of the next one.
            const complex from = pts.back();
            const complex to(model.vertices[(cusp + 1) % 3].value().real(), cap_y);
            for (int j = 1; j < samples; ++j) {
                out.push_back({back(from + (to - from) * (double(j) / samples)), 3, false});
            }
        }
    }
    return out;
}

struct BoundaryReport
{
    std::array<double, 3> side_distance{};
    std::array<double, 3> max_backtrack{};
    /// Min over non-adjacent sample pairs of image distance / local image mesh.
    double injectivity_ratio = 0.0;
    double min_image_distance = 0.0;
    int orientation_winding = 0;
    int expected_winding = 1;
    /// Min Re of the chart derivative on the truncated part above cutoff/2.
    double cap_proxy_min_re = 0.0;

    double distance_threshold = 1e-10;
    double backtrack_threshold = 1e-10;
    double injectivity_threshold = 0.25;

    bool distance_ok() const
    {
        return std::all_of(side_distance.begin(), side_distance.end(),
                           [&](double d) { return d < distance_threshold; });
    }
    bool monotone_ok() const
    {
        return std::all_of(max_backtrack.begin(), max_backtrack.end(),
                           [&](double d) { return d <= backtrack_threshold; });
    }
    bool injective_ok() const { return injectivity_ratio > injectivity_threshold; }
    bool orientation_ok() const { return orientation_winding == expected_winding; }
    bool cap_proxy_ok() const { return cap_proxy_min_re > 0.0; }
    bool pass() const { return distance_ok() && monotone_ok() && injective_ok() && orientation_ok() && cap_proxy_ok(); }
};

/// A point well inside each model triangle.
inline complex model_interior_point(TriangleClass c)
{
    switch (c) {
        case TriangleClass::T0: return {0.25, 1.5};
        case TriangleClass::conjT0: return {0.25, -1.5};
        case TriangleClass::T1: return {0.25, 0.5};
        case TriangleClass::conjT1: return {0.25, -0.5};
    }
    return {0.25, 1.5};
}

/// Checks that f carries the truncated boundary of source onto the boundary
/// of target side by side (side k to side k), monotonically, injectively
/// and with the target's interior on the correct side.
template <typename F>
BoundaryReport verify_boundary_map(F &&f, const ArcTriangle &source, const ArcTriangle &target, int samples,
                                   double cutoff = 12.0)
{
    const auto pts = sample_boundary(source, samples, cutoff);
    // Distances and winding are measured in the chart of the target's
    // classification map, where the target is a model triangle and the
    // image curve stays finite away from its cusp.
    const Classification cls_s = classify_triangle(source, 1e-6), cls_t = classify_triangle(target, 1e-6);
    const ComplexMatrix cs_inv = cls_s.map.inverse(), ct = cls_t.map;
    std::array<GeneralizedCircle, 3> chart_sides;
    for (int k = 0; k < 3; ++k) {
        chart_sides[k] = moebius_image(ct, false, target.sides[k]);
    }
    std::vector<ExtComplex> img, chart_img;
    img.reserve(pts.size());
    chart_img.reserve(pts.size());
    for (const auto &s : pts) {
        img.push_back(f(s.tau));
        chart_img.push_back(apply(ct, img.back()));
    }
    BoundaryReport rep;

    std::array<double, 3> last{-1.0, -1.0, -1.0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const int k = pts[i].side;
        if (k == 3) {
            continue;
        }
        rep.side_distance[k] = std::max(rep.side_distance[k], chart_sides[k].distance(chart_img[i]));
        const double s = side_parameter(target, k, img[i]);
        rep.max_backtrack[k] = std::max(rep.max_backtrack[k], last[k] - s);
        if (!(s >= -1e-10 && s <= 1.0 + 1e-10)) {
            rep.max_backtrack[k] = std::max(rep.max_backtrack[k], 1.0);
        }
        last[k] = s;
    }

    const std::size_t n = img.size();
    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i) {
        gap[i] = chordal(img[i], img[(i + 1) % n]);
    }
    rep.injectivity_ratio = std::numeric_limits<double>::infinity();
    rep.min_image_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double li = std::min(gap[i], gap[(i + n - 1) % n]);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) {
                continue;
            }
            const double d = chordal(img[i], img[j]);
            const double lj = std::min(gap[j], gap[j - 1]);
            rep.min_image_distance = std::min(rep.min_image_distance, d);
            rep.injectivity_ratio = std::min(rep.injectivity_ratio, d / std::min(li, lj));
        }
    }

    rep.expected_winding = target.orientation == Orientation::left ? 1 : -1;
    try {
        rep.orientation_winding = winding_number(SampledCurve{chart_img}, model_interior_point(cls_t.cls));
    } catch (const error &) {
        rep.orientation_winding = 0;
    }

    // Local injectivity near the cusp: Re of the chart derivative of f on
    // the rays above cutoff/2 and on the cap.
    rep.cap_proxy_min_re = std::numeric_limits<double>::infinity();
    auto g = [&](complex z) { return apply(ct, f(apply(cs_inv, ExtComplex(z)))).value(); };
    for (const auto &s : pts) {
        const ExtComplex zc = apply(cls_s.map, s.tau);
        if (zc.is_infinity() || std::abs(zc.value().imag()) < 0.5 * cutoff) {
            continue;
        }
        const double h = 1e-5;
        const complex d = (g(zc.value() + h) - g(zc.value() - h)) / (2.0 * h);
        rep.cap_proxy_min_re = std::min(rep.cap_proxy_min_re, d.real());
    }
    return rep;
}

/// Number of solutions of f = w inside source, counted as the winding
/// number of the image of the truncated boundary. The cap image must
/// separate w from infinity: |f| > 2|w| there.
template <typename F>
int argument_principle_count(F &&f, const ArcTriangle &source, complex w, int samples, double cutoff = 12.0)
{
    const auto pts = sample_boundary(source, samples, cutoff);
    SampledCurve curve;
    for (const auto &s : pts) {
        const ExtComplex v = f(s.tau);
        if (s.side == 3 && !v.is_infinity() && std::abs(v.value()) <= 2.0 * std::abs(w)) {
            throw error(errc::cap_too_low, "the cap image does not separate w from infinity");
        }
        curve.points.push_back(v);
    }
    return winding_number(curve, w);
}

} // namespace qperiods
