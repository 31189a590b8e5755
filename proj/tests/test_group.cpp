#include <qperiods/group.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qperiods;

namespace
{

complex act(const ExtendedMap &g, complex z)
{
    return qperiods::apply(g, ExtComplex(z)).value();
}

ExtendedMap random_word(std::mt19937_64 &rng, int max_len)
{
    const ExtendedMap gens[] = {ExtendedMap::reflect_a(), ExtendedMap::reflect_b(), ExtendedMap::reflect_c()};
    std::uniform_int_distribution<int> len(0, max_len), pick(0, 2);
    ExtendedMap g;
    for (int i = len(rng); i > 0; --i) {
        g = compose(g, gens[pick(rng)]);
    }
    return g;
}

} // namespace

TEST(Apply, Generators)
{
    EXPECT_EQ(qperiods::apply(UnimodularMap::translation(), complex(0, 1)), complex(1, 1));
    EXPECT_NEAR(std::abs(qperiods::apply(UnimodularMap::inversion(), complex(0, 1)) - complex(0, 1)), 0.0, 1e-16);
    EXPECT_EQ(act(ExtendedMap::reflect_a(), complex(0.3, 1)), complex(-0.3, 1));
}

TEST(Apply, Infinity)
{
    EXPECT_TRUE(qperiods::apply(UnimodularMap::translation(), ExtComplex::infinity()).is_infinity());
    const auto w = qperiods::apply(UnimodularMap::inversion(), ExtComplex::infinity());
    EXPECT_FALSE(w.is_infinity());
    EXPECT_EQ(w.value(), complex(0.0));
    EXPECT_TRUE(qperiods::apply(UnimodularMap::inversion(), ExtComplex(0.0)).is_infinity());
}

TEST(Unimodular, CanonicalSignAndDeterminant)
{
    const UnimodularMap s(-1, 0, -1, -1);
    EXPECT_EQ(s.c(), 1);
    EXPECT_EQ(s.d(), 1);
    EXPECT_THROW(UnimodularMap(1, 1, 1, 1), error);
    EXPECT_THROW(ExtendedMap(IntMatrix{1, 0, 0, 1}, true), error);
}

TEST(Compose, Identities)
{
    const ExtendedMap t = UnimodularMap::translation();
    const ExtendedMap tinv = UnimodularMap::translation(-1);
    EXPECT_EQ(compose(t, tinv), ExtendedMap::identity());
    EXPECT_EQ(compose(ExtendedMap::reflect_a(), ExtendedMap::reflect_a()), ExtendedMap::identity());
    const auto ac = compose(ExtendedMap::reflect_a(), ExtendedMap::reflect_c());
    for (complex z : {complex(0, 1), complex(0, 2), complex(0.3, 1)}) {
        // r_A(r_C(z)) = -conj(1 - conj(z)) = z - 1
        EXPECT_NEAR(std::abs(act(ac, z) - (z - 1.0)), 0.0, 1e-15);
    }
    EXPECT_TRUE(ac.is_holomorphic());
}

TEST(Compose, GroupActionProperty)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-2, 2), im(0.2, 3);
    for (int i = 0; i < 100; ++i) {
        const auto g = random_word(rng, 5), h = random_word(rng, 5);
        const complex z(re(rng), im(rng));
        const complex lhs = act(compose(g, h), z);
        const complex rhs = act(g, act(h, z));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
        EXPECT_GT(lhs.imag(), 0.0);
        EXPECT_LT(std::abs(act(inverse(g), act(g, z)) - z), 1e-10 * std::max(1.0, std::abs(z)));
    }
}

TEST(Reduction, Examples)
{
    auto r = reduce_to_fundamental(TauPoint(complex(1, 2)));
    EXPECT_EQ(r.tau_reduced.value(), complex(0, 2));
    EXPECT_EQ(r.map, UnimodularMap::translation());

    r = reduce_to_fundamental(TauPoint(complex(1, 1)));
    EXPECT_EQ(r.tau_reduced.value(), complex(0, 1));
    EXPECT_EQ(r.map, UnimodularMap::translation());

    const complex z(0.3, 0.1);
    r = reduce_to_fundamental(TauPoint(z));
    EXPECT_GE(std::abs(r.tau_reduced.value()), 1.0);
    EXPECT_LE(std::abs(r.tau_reduced.re()), 0.5);
    EXPECT_LT(std::abs(qperiods::apply(r.map, r.tau_reduced.value()) - z), 1e-12 * std::abs(z));
}

TEST(Reduction, RoundTripRandom)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-5, 5), logim(-4, 1);
    for (int i = 0; i < 1000; ++i) {
        const complex z(re(rng), std::pow(10.0, logim(rng)));
        const auto r = reduce_to_fundamental(TauPoint(z));
        const complex w = r.tau_reduced.value();
        ASSERT_LE(std::abs(w.real()), 0.5);
        ASSERT_GE(std::norm(w), 1.0 - 1e-15);
        EXPECT_LT(std::abs(qperiods::apply(r.map, w) - z), 1e-12 * std::abs(z)) << z;
    }
}

TEST(RhoEquivalence, Examples)
{
    EXPECT_TRUE(is_rho_equivalent(TauPoint(rho), 1e-12));
    EXPECT_TRUE(is_rho_equivalent(TauPoint(rho + 1.0), 1e-12));
    EXPECT_TRUE(is_rho_equivalent(TauPoint(qperiods::apply(UnimodularMap(2, 1, 3, 2), rho)), 1e-10));
    EXPECT_FALSE(is_rho_equivalent(TauPoint(complex(0, 2)), 1e-6));
}

TEST(Tessellation, Counts)
{
    EXPECT_EQ(tessellate(0).size(), 1u);
    EXPECT_EQ(tessellate(1).size(), 4u);
    // Brute force: enumerate every word of length <= 2 and deduplicate by
    // the action on two generic points.
    const ExtendedMap gens[] = {ExtendedMap::reflect_a(), ExtendedMap::reflect_b(), ExtendedMap::reflect_c()};
    std::vector<ExtendedMap> words{ExtendedMap::identity()};
    for (const auto &g : gens) {
        words.push_back(g);
        for (const auto &h : gens) {
            words.push_back(compose(g, h));
        }
    }
    std::vector<std::pair<complex, complex>> images;
    const complex p1(0.123, 1.789), p2(-0.311, 0.577);
    for (const auto &w : words) {
        const auto im = std::make_pair(act(w, p1), act(w, p2));
        bool dup = false;
        for (const auto &e : images) {
            dup = dup || (std::abs(e.first - im.first) < 1e-12 && std::abs(e.second - im.second) < 1e-12);
        }
        if (!dup) {
            images.push_back(im);
        }
    }
    EXPECT_EQ(tessellate(2).size(), images.size());
    EXPECT_EQ(images.size(), 9u);
    EXPECT_THROW(tessellate(13), error);
}

TEST(Tessellation, EvenWordsAreUnimodular)
{
    const auto words = tessellate(6);
    for (const auto &g : words) {
        const auto det = g.m.det();
        if (g.is_holomorphic()) {
            EXPECT_EQ(det, 1);
        } else {
            EXPECT_EQ(det, -1);
        }
    }
    EXPECT_FALSE(unimodular_words(6).empty());
}

TEST(Tessellation, InteriorImagesDisjoint)
{
    // The interior point c of T0 has pairwise distinct images under distinct words.
    const complex c(0.25, 1.3);
    const auto words = tessellate(4);
    std::vector<complex> pts;
    for (const auto &g : words) {
        pts.push_back(act(g, c));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            EXPECT_GT(std::abs(pts[i] - pts[j]), 1e-6);
        }
        // Each image reduces back into T0 or its mirror image.
        const auto r = reduce_to_fundamental(TauPoint(pts[i]));
        EXPECT_NEAR(std::abs(r.tau_reduced.re()), 0.25, 1e-9);
        EXPECT_NEAR(r.tau_reduced.im(), 1.3, 1e-9);
    }
}
