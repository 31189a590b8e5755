#include <qperiods/pmap.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qperiods;

namespace
{

TauPoint tp(double re, double im)
{
    return TauPoint(complex(re, im));
}

complex pval(complex z)
{
    const auto v = eval_p(TauPoint(z));
    EXPECT_FALSE(v.at_infinity);
    return v.value.value();
}

} // namespace

TEST(EvalP, SpecialValues)
{
    EXPECT_LT(chordal(eval_p(tp(0, 1)).value, complex(0, -1)), 1e-13);
    EXPECT_LT(chordal(eval_p(TauPoint(rho)).value, std::conj(rho)), 1e-13);
    EXPECT_NEAR(std::abs(pval(complex(0, 10)) - complex(0, 10.0 - 6.0 / pi)), 0.0, 1e-13);
    EXPECT_NEAR(10.0 - 6.0 / pi, 8.0901, 1e-4);
}

TEST(EvalP, InfinityAtE2Zero)
{
    const TauPoint z = find_e2_zero_on_axis({}, 1e-14);
    const auto v = eval_p(z);
    // |E2| < 1e-14 there, so |p| exceeds 1e13 and p is reported as infinity.
    EXPECT_TRUE(v.at_infinity);
    EXPECT_LT(chordal(v.value, ExtComplex::infinity()), 1e-12);
}

TEST(EvalPPrime, Values)
{
    EXPECT_LT(std::abs(eval_p_prime(TauPoint(rho))), 1e-12);
    EXPECT_LT(std::abs(eval_p_prime(tp(0.3, 30.0)) - 1.0), 1e-15);
    const complex z(0, 1.3);
    const double h = 1e-4;
    const complex fd = (pval(z + h) - pval(z - h)) / (2.0 * h);
    EXPECT_LT(std::abs(fd - eval_p_prime(TauPoint(z))), 1e-6);
}

TEST(EvalPPrime, CriticalPoints)
{
    EXPECT_LT(std::abs(eval_p_prime(TauPoint(rho))), 1e-8);
    EXPECT_LT(std::abs(eval_p_prime(TauPoint(rho + 1.0))), 1e-8);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.6, 2.5);
    int checked = 0;
    while (checked < 50) {
        const TauPoint t(complex(re(rng), im(rng)));
        if (is_rho_equivalent(t, 0.05)) {
            continue;
        }
        EXPECT_GT(std::abs(eval_p_prime(t)), 1e-3);
        ++checked;
    }
}

TEST(Equivariance, Examples)
{
    EXPECT_EQ(equivariance_residual(ExtendedMap::identity(), tp(0.2, 1.1)), 0.0);
    EXPECT_LT(equivariance_residual(UnimodularMap::inversion(), tp(0, 1.2)), 1e-10);
    EXPECT_LT(equivariance_residual(ExtendedMap::reflect_a(), tp(0.2, 1.5)), 1e-10);
}

TEST(Equivariance, RandomWords)
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.5, 2.0);
    const auto words = tessellate(4);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (int i = 0; i < 100; ++i) {
        EXPECT_LT(equivariance_residual(words[pick(rng)], tp(re(rng), im(rng))), 1e-9);
    }
}

TEST(NoFixedPoints, Samples)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.3, 3.0);
    for (int i = 0; i < 50; ++i) {
        const complex z(re(rng), im(rng));
        EXPECT_GT(chordal(eval_p(TauPoint(z)).value, z), 0.0);
    }
}

TEST(BoundaryCharacterizations, Samples)
{
    for (int i = 0; i < 100; ++i) {
        const double t = 0.87 + 0.05 * i;
        EXPECT_NEAR(pval(complex(0, t)).real(), 0.0, 1e-10);
        EXPECT_NEAR(pval(complex(0.5, t)).real(), 0.5, 1e-10);
        const double theta = pi / 3.0 + (pi / 6.0) * (i + 0.5) / 100.0;
        EXPECT_NEAR(std::abs(pval(std::polar(1.0, theta))), 1.0, 1e-10);
    }
}

TEST(E2Transform, Examples)
{
    EXPECT_LT(e2_transform_residual(UnimodularMap::translation(), tp(0.2, 1.1)), 1e-14);
    EXPECT_LT(e2_transform_residual(UnimodularMap::inversion(), tp(0, 1)), 1e-10);
    EXPECT_LT(e2_transform_residual(UnimodularMap(1, 0, 1, 1), tp(0.3, 1.1), SeriesParams(4096, 1e-15, false)), 1e-9);
}

TEST(E2Bound, Values)
{
    const TauPoint t(complex(0, sqrt3 / 2));
    EXPECT_NEAR(e2_bound(t), 0.105, 1e-3);
    EXPECT_GE(e2_bound_margin(t), 0.0);
    const auto t2 = tp(0, 2);
    EXPECT_GT(e2_bound_margin(t2), 0.0);
    EXPECT_LT(std::abs(eval_E2(t2).value - 1.0), 1e-4);
    const auto t10 = tp(0, 10);
    EXPECT_GT(e2_bound_margin(t10), 0.0);
    EXPECT_LT(e2_bound(t10), 1e-25);
    EXPECT_LT(std::abs(eval_E2_minus_one(t10).value), 1e-25);
}

TEST(E2Zero, BracketAndZero)
{
    EXPECT_NEAR(e2_on_axis(1.0), 3.0 / pi, 1e-14);
    const double half = e2_on_axis(0.5);
    EXPECT_LT(half, 0.0);
    // E2(i/2) = -4 E2(2i) + 12/pi
    EXPECT_NEAR(half, -4.0 * e2_on_axis(2.0) + 12.0 / pi, 1e-12);
    EXPECT_NEAR(half, -0.18, 0.01);

    const TauPoint z = find_e2_zero_on_axis({}, 1e-12);
    EXPECT_GT(z.im(), 0.5);
    EXPECT_LT(z.im(), 1.0);
    EXPECT_LT(std::abs(eval_E2(z).value), 1e-12);
    // Regression constant for the axis zero.
    EXPECT_NEAR(z.im(), 0.523521700018, 1e-11);
}

TEST(E2Zero, InvalidBracket)
{
    try {
        find_e2_zero_on_axis({1.0, 2.0}, 1e-12);
        FAIL();
    } catch (const error &e) {
        EXPECT_EQ(e.code(), errc::invalid_bracket);
    }
}

TEST(InvertP, SpecialValues)
{
    auto contains = [](const std::vector<TauPoint> &v, complex z) {
        for (const auto &t : v) {
            if (std::abs(t.value() - z) < 1e-6) {
                return true;
            }
        }
        return false;
    };
    EXPECT_TRUE(contains(invert_p(complex(0, -1), 1, 1e-10), complex(0, 1)));
    EXPECT_TRUE(contains(invert_p(std::conj(rho), 1, 1e-10), rho));
}

TEST(InvertP, SeveralPreimages)
{
    const complex w(0.2, 2.0);
    const auto sols = invert_p(w, 3, 1e-10);
    ASSERT_EQ(sols.size(), 3u);
    for (std::size_t i = 0; i < sols.size(); ++i) {
        EXPECT_LT(chordal(eval_p(sols[i]).value, w), 1e-9);
        for (std::size_t j = i + 1; j < sols.size(); ++j) {
            EXPECT_GT(std::abs(sols[i].value() - sols[j].value()), 1e-9);
        }
    }
}
