#include <qperiods/geom.hpp>
#include <qperiods/pmap.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qperiods;

namespace
{

ExtComplex p_of(const ExtComplex &t)
{
    return eval_p(TauPoint(t.value())).value;
}

SampledCurve unit_circle(int n, int turns = 1)
{
    SampledCurve c;
    for (int k = 0; k < n * turns; ++k) {
        c.points.emplace_back(std::polar(1.0, 2.0 * pi * k / n));
    }
    return c;
}

void expect_same_line(const GeneralizedCircle &c, double A, complex B, double C)
{
    EXPECT_TRUE(same_circle(c, GeneralizedCircle{A, B, C}, 1e-12)) << c.A << " " << c.B << " " << c.C;
}

} // namespace

TEST(CircleThrough, Examples)
{
    const auto real_axis = circle_through(0.0, 1.0, ExtComplex::infinity());
    EXPECT_EQ(real_axis.A, 0.0);
    expect_same_line(real_axis, 0.0, complex(0, 1), 0.0);

    const auto unit = circle_through(1.0, I, -1.0);
    EXPECT_NEAR(unit.A, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(unit.B), 0.0, 1e-15);
    EXPECT_NEAR(unit.C, -1.0, 1e-15);

    const auto imag_axis = circle_through(I, 2.0 * I, ExtComplex::infinity());
    EXPECT_EQ(imag_axis.A, 0.0);
    expect_same_line(imag_axis, 0.0, 1.0, 0.0);

    try {
        circle_through(1.0, 1.0, I);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::coincident_points);
    }
}

TEST(MoebiusImage, Examples)
{
    const auto unit = circle_through(1.0, I, -1.0);
    EXPECT_TRUE(same_circle(moebius_image(ExtendedMap(UnimodularMap::inversion()), unit), unit, 1e-12));
    const auto re0 = circle_through(0.0, I, ExtComplex::infinity());
    const auto re1 = circle_through(1.0, 1.0 + I, ExtComplex::infinity());
    EXPECT_TRUE(same_circle(moebius_image(ExtendedMap(UnimodularMap::translation()), re0), re1, 1e-12));
    const auto half = circle_through(0.5, 0.5 + I, ExtComplex::infinity());
    const auto minus_half = circle_through(-0.5, -0.5 + I, ExtComplex::infinity());
    EXPECT_TRUE(same_circle(moebius_image(ExtendedMap::reflect_a(), half), minus_half, 1e-12));
}

TEST(Angles, Models)
{
    const auto t0 = triangle_T0();
    EXPECT_NEAR(angle_at_vertex(t0, 1), pi / 2, 1e-12);
    EXPECT_NEAR(angle_at_vertex(t0, 2), pi / 3, 1e-12);
    EXPECT_NEAR(angle_at_vertex(t0, 0), 0.0, 1e-12);
    const auto t1 = triangle_T1();
    EXPECT_NEAR(angle_at_vertex(t1, 2), 2 * pi / 3, 1e-12);
    EXPECT_NEAR(angle_at_vertex(t1, 1), pi / 2, 1e-12);
    EXPECT_NEAR(angle_at_vertex(t1, 0), 0.0, 1e-12);
    for (double a : angles(triangle_V0())) {
        EXPECT_NEAR(a, 0.0, 1e-12);
    }
    for (double a : angles(conj(t0))) {
        EXPECT_GE(a, 0.0);
    }
    EXPECT_NEAR(angle_at_vertex(conj(t0), 2), pi / 3, 1e-12);
    EXPECT_THROW(angle_at_vertex(t0, 3), error);
}

TEST(Angles, OrthogonalCircles)
{
    // Quarter disc cut by Re(z) = 0 and |z| = 1 in the first quadrant.
    const auto t = make_triangle({0.0, 1.0, I}, {0.5, std::polar(1.0, pi / 4), 0.5 * I}, Orientation::left);
    EXPECT_NEAR(angle_at_vertex(t, 2), pi / 2, 1e-12);
    EXPECT_NEAR(angle_at_vertex(t, 0), pi / 2, 1e-12);
}

TEST(Complementary, Examples)
{
    const auto t0 = triangle_T0();
    const auto c = complementary_triangle(t0);
    EXPECT_TRUE(same_triangle(c, conj(triangle_T1()), 1e-12));
    EXPECT_TRUE(same_triangle(complementary_triangle(c), t0, 1e-12));
    const ComplexMatrix shift{1.0, 1.0, 0.0, 1.0};
    EXPECT_TRUE(same_triangle(complementary_triangle(image(shift, false, t0)), image(shift, false, c), 1e-12));
    const auto a = angles(c);
    EXPECT_NEAR(a[0], 0.0, 1e-9);
    EXPECT_NEAR(a[1], pi / 2, 1e-9);
    EXPECT_NEAR(a[2], 2 * pi / 3, 1e-9);
}

TEST(Complementary, NotALune)
{
    const auto t = make_triangle({0.0, 1.0, I}, {0.5, std::polar(1.0, pi / 4), 0.5 * I}, Orientation::left);
    try {
        complementary_triangle(t);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::not_a_lune);
    }
}

TEST(Classify, Examples)
{
    const auto c0 = classify_triangle(triangle_T0(), 1e-9);
    EXPECT_EQ(c0.cls, TriangleClass::T0);
    for (complex z : {complex(0.3, 0.7), complex(-2, 1)}) {
        EXPECT_LT(chordal(apply(c0.map, ExtComplex(z)), z), 1e-12);
    }
    EXPECT_EQ(classify_triangle(image(ExtendedMap::reflect_a(), triangle_T0()), 1e-9).cls, TriangleClass::conjT0);
    EXPECT_EQ(classify_triangle(triangle_T1(), 1e-9).cls, TriangleClass::T1);
    EXPECT_EQ(classify_triangle(conj(triangle_T1()), 1e-9).cls, TriangleClass::conjT1);

    // S(T0) goes back to T0 by S^-1 = S.
    const ExtendedMap s(UnimodularMap::inversion());
    const auto cs = classify_triangle(image(s, triangle_T0()), 1e-9);
    EXPECT_EQ(cs.cls, TriangleClass::T0);
    for (complex z : {complex(0.3, 0.7), complex(-2, 1), complex(0.1, 5)}) {
        EXPECT_LT(chordal(apply(cs.map, ExtComplex(z)), apply(s, ExtComplex(z))), 1e-12);
    }

    try {
        classify_triangle(triangle_V0(), 1e-6);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::wrong_angles);
    }
}

TEST(Classify, MoebiusInvariance)
{
    std::mt19937_64 rng(31);
    const auto words = unimodular_words(4);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (int i = 0; i < 20; ++i) {
        const auto w = words[pick(rng)];
        EXPECT_EQ(classify_triangle(image(ExtendedMap(w), triangle_T0()), 1e-8).cls, TriangleClass::T0);
    }
}

TEST(Winding, UnitCircle)
{
    EXPECT_EQ(winding_number(unit_circle(256), 0.0), 1);
    EXPECT_EQ(winding_number(unit_circle(256), 3.0), 0);
    EXPECT_EQ(winding_number(unit_circle(256, 2), 0.0), 2);
    try {
        winding_number(unit_circle(256), 1.001);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::ambiguous_winding);
    }
}

TEST(BoundaryMap, PMapsT0OntoT1)
{
    const auto rep = verify_boundary_map(p_of, triangle_T0(), triangle_T1(), 200, 12.0);
    for (double d : rep.side_distance) {
        EXPECT_LT(d, 1e-10);
    }
    EXPECT_TRUE(rep.monotone_ok());
    EXPECT_TRUE(rep.injective_ok()) << rep.injectivity_ratio;
    EXPECT_EQ(rep.orientation_winding, 1);
    EXPECT_TRUE(rep.cap_proxy_ok()) << rep.cap_proxy_min_re;
    EXPECT_TRUE(rep.pass());
    EXPECT_LT(chordal(p_of(I), -I), 1e-13);
    EXPECT_LT(chordal(p_of(rho), std::conj(rho)), 1e-13);
}

TEST(BoundaryMap, Identity)
{
    const auto rep = verify_boundary_map([](const ExtComplex &z) { return z; }, triangle_T0(), triangle_T0(), 200);
    EXPECT_TRUE(rep.pass());
}

TEST(BoundaryMap, WrongTargetFails)
{
    const auto rep = verify_boundary_map(p_of, triangle_T0(), triangle_T0(), 50);
    EXPECT_FALSE(rep.pass());
}

TEST(BoundaryMap, TransportedByWords)
{
    for (const auto &w : unimodular_words(2)) {
        const ExtendedMap g(w);
        const auto rep = verify_boundary_map(p_of, image(g, triangle_T0()), image(g, triangle_T1()), 100, 12.0);
        EXPECT_TRUE(rep.pass()) << w.matrix().a << " " << w.matrix().b << " " << w.matrix().c << " "
                                << w.matrix().d << " dist " << rep.side_distance[0] << " " << rep.side_distance[1]
                                << " " << rep.side_distance[2] << " back " << rep.max_backtrack[0] << " "
                                << rep.max_backtrack[1] << " " << rep.max_backtrack[2] << " inj "
                                << rep.injectivity_ratio << " wind " << rep.orientation_winding << " cap "
                                << rep.cap_proxy_min_re;
    }
}

TEST(ArgumentPrinciple, Examples)
{
    const auto t0 = triangle_T0();
    EXPECT_EQ(argument_principle_count(p_of, t0, complex(0.25, -0.25), 200), 1);
    EXPECT_EQ(argument_principle_count(p_of, t0, complex(0.25, 1.0), 200), 1);
    EXPECT_EQ(argument_principle_count(p_of, t0, complex(-1.0, 1.0), 200), 0);
    try {
        argument_principle_count(p_of, t0, complex(0.25, 9.0), 200, 4.0);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::cap_too_low);
    }
}

TEST(ArgumentPrinciple, StableUnderRefinement)
{
    const auto t0 = triangle_T0();
    for (complex w : {complex(0.25, -0.25), complex(0.25, 3.0), complex(0.8, 0.2)}) {
        EXPECT_EQ(argument_principle_count(p_of, t0, w, 200), argument_principle_count(p_of, t0, w, 400)) << w;
    }
}
