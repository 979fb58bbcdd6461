#include <gtest/gtest.h>

#include "hopfkit/errors.hpp"
#include "hopfkit/frobvers.hpp"
#include "hopfkit/shadows.hpp"

using namespace hopfkit;

TEST(Shadows, UniversalPairingIsMultilinear) {
    for (unsigned p : {2u, 3u, 5u}) {
        auto u = universal_pairing(p, 2, 1);
        EXPECT_TRUE(u.certified()) << p;
        EXPECT_EQ(u.element[0], 1u);
    }
    auto u = universal_pairing(3, 2, 2);
    EXPECT_TRUE(u.certified());
    EXPECT_TRUE(universal_pairing(2, 3, 2).certified());
    EXPECT_THROW(universal_pairing(3, 1, 1), ArgumentError);
}

TEST(Shadows, TensorShadow) {
    for (unsigned p : {2u, 3u}) {
        for (unsigned k : {1u, 2u}) {
            auto t = tensor_shadow(p, 2, k);
            EXPECT_TRUE(t.carrier_valid);
            EXPECT_TRUE(t.map_certified) << p << " " << k;
            EXPECT_EQ(t.carrier->dim(), k == 1 ? p : p * p);
            auto rep = tensor_universal_property(t);
            EXPECT_GT(rep.checked, 0u);
            EXPECT_TRUE(rep.all_factor) << p << " " << k;
            EXPECT_TRUE(rep.unique) << p << " " << k;
        }
        auto t = tensor_shadow(p, 2, 1);
        EXPECT_TRUE(hopf_isomorphism_search(t.carrier, share(alpha_group(p, 1))).has_value());
        FpVector yy(p * p, 0);
        yy[p + 1] = 1;
        EXPECT_EQ(t.universal_map.column(1), yy);
    }
}

TEST(Shadows, LargestQuotient) {
    for (unsigned p : {2u, 3u}) {
        auto a = share(alpha_group(p, 1));
        auto w = share(direct_sum(*a, *a));
        FpMatrix swap(p, p * p, p * p);
        for (unsigned i = 0; i < p; ++i)
            for (unsigned j = 0; j < p; ++j) swap.at(j * p + i, i * p + j) = 1;
        HopfMorphism s(w, w, swap);
        ASSERT_TRUE(s.certified());
        auto q = share(largest_quotient(w, {s}));
        EXPECT_TRUE(hopf_isomorphism_search(q, a).has_value());
        EXPECT_TRUE(largest_quotient(w, {HopfMorphism::identity(w)}).same_structure(*w) ||
                    largest_quotient(w, {HopfMorphism::identity(w)}).dim() == w->dim());
        EXPECT_EQ(largest_quotient(w, {}).dim(), w->dim());
        EXPECT_THROW(largest_quotient(w, {HopfMorphism::zero(w, w)}), ArgumentError);
    }
}

TEST(Shadows, SymmetricAndAlternatingShadows) {
    for (unsigned p : {2u, 3u}) {
        auto sym = sym_shadow(p, 2, 1);
        EXPECT_TRUE(sym.carrier_valid);
        EXPECT_TRUE(sym.map_certified);
        EXPECT_EQ(sym.carrier->dim(), p);
        auto alt = alt_shadow(p, 2, 1);
        EXPECT_TRUE(alt.carrier_valid);
        EXPECT_TRUE(alt.map_certified);
        EXPECT_EQ(alt.carrier->dim(), p == 2 ? 2u : 1u);
    }
    EXPECT_EQ(alt_shadow(3, 3, 1).carrier->dim(), 1u);
    EXPECT_EQ(alt_shadow(2, 3, 1).carrier->dim(), 2u);
}

TEST(Shadows, MooreMap) {
    for (unsigned p : {2u, 3u, 5u}) {
        auto one = moore_alt_map(p, 1);
        EXPECT_TRUE(one.certified());
        EXPECT_EQ(one.morphism.coordinate_map(), FpMatrix::identity(p, p));
        auto two = moore_alt_map(p, 2);
        EXPECT_TRUE(two.certified()) << p;
        auto sources = two.morphism.sources;
        FpMatrix alt = alt_subspace(mult_space_additive(sources)).basis();
        // At p = 2 the squares x (x) x also vanish on the diagonal.
        ASSERT_EQ(alt.cols(), p == 2 ? 2u : 1u);
        EXPECT_TRUE(span_contains(alt, two.morphism.generator_image));
    }
    auto m = moore_alt_map(3, 2);
    // y1 (x) y2^3 - y1^3 (x) y2 on alpha_9 x alpha_9.
    FpVector f(81, 0);
    f[1 * 9 + 3] = 1;
    f[3 * 9 + 1] = 2;
    EXPECT_EQ(m.morphism.generator_image, f);
    EXPECT_TRUE(moore_alt_map(3, 3).certified());
}

TEST(Shadows, VerschiebungSquare) {
    const unsigned p = 3;
    std::vector<HopfPtr> sources{share(alpha_group(p, 2)), share(alpha_group(p, 2))};
    auto target = share(alpha_group(p, 1));
    FpMatrix basis = mult_space_into(sources, TargetSpec::finite(target)).basis();
    ASSERT_EQ(basis.cols(), 3u);
    for (std::size_t c = 0; c < basis.cols(); ++c) {
        auto v = verschiebung_annihilation_check({sources, target, basis.column(c)});
        EXPECT_TRUE(v.square_commutes);
    }
    auto moore = moore_alt_map(p, 2);
    auto v = verschiebung_annihilation_check(moore.morphism);
    EXPECT_TRUE(v.square_commutes);
    EXPECT_TRUE(v.annihilated);
    auto zero = verschiebung_annihilation_check({sources, target, FpVector(81, 0)});
    EXPECT_TRUE(zero.square_commutes && zero.annihilated);
    FpVector bogus(81, 0);
    bogus[1] = 1;
    EXPECT_THROW(verschiebung_annihilation_check({sources, target, bogus}), ArgumentError);
    // Multiplicative target.
    std::vector<HopfPtr> s1{share(alpha_group(p, 1)), share(alpha_group(p, 1))};
    auto mu = share(mu_group(p));
    for (const auto& u : multilinear_into_finite(s1, mu, false))
        EXPECT_TRUE(verschiebung_annihilation_check({s1, mu, u}).square_commutes);
}

TEST(Shadows, Prop12Pipeline) {
    for (auto [n, p] : std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {1, 3}, {2, 5}}) {
        auto rep = prop12_pipeline(n, p);
        ASSERT_EQ(rep.stages.size(), 4u);
        for (const auto& s : rep.stages) EXPECT_TRUE(s.pass) << n << " " << p << " " << s.name << ": " << s.detail;
    }
    try {
        prop12_pipeline(2, 2);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("p odd"), std::string::npos);
    }
}
