#include <qperiods/hypergeo.hpp>

#include <gtest/gtest.h>

using namespace qperiods;

namespace
{

TauPoint tp(double re, double im)
{
    return TauPoint(complex(re, im));
}

const HypergeomCoeffs h_family{Rational(-1, 12), Rational(-1, 12), Rational(1, 3)};
const HypergeomCoeffs omega_family{Rational(1, 12), Rational(1, 12), Rational(2, 3)};

} // namespace

TEST(Rational, Normalization)
{
    EXPECT_EQ(Rational(2, -4), Rational(-1, 2));
    EXPECT_EQ(Rational(1) - Rational(1, 3), Rational(2, 3));
    EXPECT_THROW(Rational(1, 0), error);
}

TEST(Normalized, Values)
{
    const auto n = eval_normalized(tp(0, 2));
    EXPECT_LT(std::abs(n.Omega1 / n.Omega2 - complex(0, 2)), 1e-12 * 2);
    const auto m = eval_normalized(tp(0, 1.5));
    EXPECT_LT(chordal(m.H1 / m.H2, eval_p(tp(0, 1.5)).value), 1e-12);
    for (double t : {1.0, 2.0}) {
        const complex o = eval_normalized(tp(0, t)).Omega2;
        EXPECT_GT(o.real(), 0.0);
        EXPECT_EQ(o.imag(), 0.0);
    }
    try {
        eval_normalized(tp(0.1, 0.3));
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::out_of_regime);
    }
}

TEST(FirstOrder, Residuals)
{
    auto [a, b] = first_order_residual(tp(0, 2), 2);
    EXPECT_LT(a, 1e-8);
    EXPECT_LT(b, 1e-8);
    std::tie(a, b) = first_order_residual(tp(0.25, 1.4), 1);
    EXPECT_LT(a, 1e-8);
    EXPECT_LT(b, 1e-8);
    try {
        first_order_residual(tp(0, 1), 1);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::singular_point);
    }
    EXPECT_THROW(first_order_residual(TauPoint(rho), 1), error);
    EXPECT_THROW(first_order_residual(tp(0, 2), 3), error);
}

TEST(SecondOrder, Residuals)
{
    EXPECT_LT(hypergeom_residual(tp(0, 2), 2, Family::H), 1e-6);
    EXPECT_LT(hypergeom_residual(tp(0, 2), 2, Family::Omega), 1e-6);
    EXPECT_LT(hypergeom_residual(tp(0.3, 0.7), 1, Family::H), 1e-6);
    EXPECT_LT(hypergeom_residual(tp(-0.2, 0.9), 1, Family::Omega), 1e-6);
    EXPECT_NEAR(std::abs(hypergeom_friction(Family::H, 2.0) - 2.0 / 3.0), 0.0, 1e-15);
}

TEST(Wronskian, NonVanishing)
{
    // H1 dH2/dJ - H2 dH1/dJ = (H1 Omega2 - H2 Omega1) b, and
    // H1 Omega2 - H2 Omega1 = -6i/pi is a nonzero constant.
    for (complex z : {complex(0, 2), complex(0.3, 0.7), complex(-0.4, 1.6)}) {
        const auto n = eval_normalized(TauPoint(z));
        EXPECT_NEAR(std::abs(n.H1 * n.Omega2 - n.H2 * n.Omega1 + 6.0 * I / pi), 0.0, 1e-12);
    }
}

TEST(TriangleParams, Examples)
{
    auto a = triangle_params(h_family);
    EXPECT_DOUBLE_EQ(a.lambda, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(a.mu, 0.5);
    EXPECT_DOUBLE_EQ(a.nu, 0.0);
    a = triangle_params(omega_family);
    EXPECT_DOUBLE_EQ(a.lambda, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(a.mu, 0.5);
    EXPECT_DOUBLE_EQ(a.nu, 0.0);
    a = triangle_params({Rational(0), Rational(0), Rational(1)});
    EXPECT_DOUBLE_EQ(a.lambda, 0.0);
    EXPECT_DOUBLE_EQ(a.mu, 1.0);
    EXPECT_DOUBLE_EQ(a.nu, 0.0);
}

TEST(SchwarzianClosed, Coefficients)
{
    auto c = schwarzian_coefficients(triangle_params(h_family));
    EXPECT_NEAR(c[0], 5.0 / 18.0, 1e-15);
    EXPECT_NEAR(c[1], 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(c[2], 11.0 / 72.0, 1e-15);
    c = schwarzian_coefficients(triangle_params(omega_family));
    EXPECT_NEAR(c[0], 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(c[1], 3.0 / 8.0, 1e-15);
    EXPECT_NEAR(c[2], 23.0 / 72.0, 1e-15);
    // All three coefficients vanish for angles (1, 1, 1); in particular
    // 1 - 1 - 1 + 1 = 0 removes the mixed term.
    EXPECT_EQ(schwarzian_closed({1, 1, 1}, 2.0), complex(0.0));
    EXPECT_NEAR(std::abs(schwarzian_closed({0, 0, 0}, 2.0) - (0.5 / 4.0 + 0.5 + 0.5 / (2.0 * -1.0))), 0.0, 1e-15);
    EXPECT_THROW(schwarzian_closed({1, 1, 1}, 0.0), error);
    EXPECT_THROW(schwarzian_closed({1, 1, 1}, 1.0), error);
}

TEST(SchwarzianFd, MoebiusOracle)
{
    // The Schwarzian of a Moebius map vanishes; that of exp(a z) is -a^2/2.
    // A coarser step keeps the third-difference roundoff of O(1) values small.
    const complex z(0.3, 1.1);
    EXPECT_LT(std::abs(schwarzian_fd([](complex w) { return (2.0 * w + 1.0) / (w + 3.0); }, z, 1e-2)), 1e-7);
    const complex a(0.7, -0.4);
    EXPECT_LT(std::abs(schwarzian_fd([&](complex w) { return std::exp(a * w); }, z, 1e-2) + a * a / 2.0), 1e-8);
}

TEST(SchwarzianP, Residuals)
{
    EXPECT_LT(schwarzian_p_residual(tp(0, 2), 1e-3), 1e-6);
    EXPECT_LT(schwarzian_p_residual(tp(0.1, 1.2), 1e-3), 1e-6);
    EXPECT_THROW(schwarzian_p_residual(TauPoint(rho), 1e-3), error);
    EXPECT_THROW(schwarzian_p_residual(tp(0, 0.4), 1e-3), error);
}

TEST(SchwarzianP, MoebiusInvariance)
{
    const auto t = tp(0, 2);
    // Differencing T o p = p + 1 directly; its values are O(1), so the step
    // is coarser than for the small offset used by schwarzian_p_fd.
    const complex shifted = schwarzian_fd([](complex z) { return eval_p(TauPoint(z)).value.value() + 1.0; },
                                          t.value(), 1e-2);
    EXPECT_LT(std::abs(shifted - schwarzian_p_fd(t, 1e-3)), 1e-6);
}

TEST(SchwarzianP, ChainRule)
{
    for (complex z : {complex(0, 2), complex(0.1, 1.2), complex(0.3, 0.7), complex(-0.35, 1.5)}) {
        EXPECT_LT(schwarzian_chain_residual(TauPoint(z)), 1e-5) << z;
    }
}

TEST(SchwarzianP, WeightFour)
{
    const complex z(0, 1.3);
    const complex s = -1.0 / z;
    const complex f = schwarzian_p_fd(TauPoint(z), 1e-3);
    const complex fs = schwarzian_p_fd(TauPoint(s), 1e-3 * s.imag() / z.imag());
    EXPECT_LT(std::abs(fs / std::pow(z, 4) - f), 1e-6);
}
