#include <gtest/gtest.h>

#include "hopfkit/errors.hpp"
#include "hopfkit/morphspaces.hpp"
#include "hopfkit/oracle.hpp"

using namespace hopfkit;

TEST(Oracle, PointCounts) {
    for (unsigned p : {2u, 3u, 5u}) {
        auto fp_ring = prime_field_ring(p);
        auto dual = ring_spec_parse("F" + std::to_string(p) + "[e]/(e^2)");
        auto a = share(alpha_group(p, 1));
        EXPECT_EQ(enumerate_points(a, fp_ring).size(), 1u);
        auto pd = enumerate_points(a, dual);
        EXPECT_EQ(pd.size(), p);
        EXPECT_TRUE(pd.laws_hold);
        auto c = enumerate_points(share(constant_group(p)), fp_ring);
        EXPECT_EQ(c.size(), p);
        EXPECT_TRUE(c.laws_hold);
        EXPECT_EQ(enumerate_points(share(mu_group(p)), fp_ring).size(), 1u);
        EXPECT_EQ(enumerate_points(share(trivial_group(p)), dual).size(), 1u);
    }
}

TEST(Oracle, PointsOfDirectSumMultiply) {
    const unsigned p = 2;
    auto r = ring_spec_parse("F2[e]/(e^2)");
    auto g = alpha_group(p, 2), h = constant_group(p);
    auto s = enumerate_points(share(direct_sum(g, h)), r);
    EXPECT_EQ(s.size(), enumerate_points(share(g), r).size() * enumerate_points(share(h), r).size());
    EXPECT_TRUE(s.laws_hold);
}

TEST(Oracle, HopfHomCounts) {
    auto f2 = prime_field_ring(2);
    auto f3 = prime_field_ring(3);
    EXPECT_EQ(enumerate_hopf_homs(share(alpha_group(2, 2)), share(alpha_group(2, 1)), f2).size(), 2u);
    EXPECT_EQ(enumerate_hopf_homs(share(alpha_group(3, 1)), share(alpha_group(3, 2)), f3).size(), 3u);
    EXPECT_EQ(enumerate_hopf_homs(share(alpha_group(3, 2)), share(trivial_group(3)), f3).size(), 1u);
    EXPECT_EQ(enumerate_hopf_homs(share(trivial_group(3)), share(alpha_group(3, 1)), f3).size(), 1u);
    // Z/p -> Z/p over GF(p) is End(Z/p).
    EXPECT_EQ(enumerate_hopf_homs(share(constant_group(3)), share(constant_group(3)), f3).size(), 3u);
    // alpha_p -> mu_p over GF(p) is trivial, and Z/p -> mu_p too.
    EXPECT_EQ(enumerate_hopf_homs(share(alpha_group(2, 1)), share(mu_group(2)), f2).size(), 1u);
}

TEST(Oracle, HomsAgreeWithSolver) {
    for (unsigned p : {2u, 3u}) {
        auto r = ring_spec_parse("F" + std::to_string(p) + "[e]/(e^2)");
        auto g = share(alpha_group(p, 2));
        auto homs = enumerate_hopf_homs(g, share(alpha_group(p, 1)), r);
        auto hs = hom_space(g, TargetSpec::alpha(1), r);
        EXPECT_EQ(homs.size(), hs.predicted_count) << p;
    }
}

TEST(Oracle, BaseChangeAndComposition) {
    const unsigned p = 3;
    auto r = ring_spec_parse("F3[e]/(e^2)");
    auto a = share(alpha_group(p, 1));
    auto id = base_change(HopfMorphism::identity(a), r);
    auto homs = enumerate_hopf_homs(a, a, r);
    ASSERT_FALSE(homs.empty());
    for (const auto& f : homs) {
        EXPECT_EQ(compose_over(id, f, r), f);
        EXPECT_EQ(compose_over(f, id, r), f);
    }
    auto zero = base_change(HopfMorphism::zero(a, a), r);
    EXPECT_TRUE(is_trivial(zero, r));
    EXPECT_FALSE(is_trivial(id, r));
    std::size_t trivial = 0;
    for (const auto& f : homs) trivial += is_trivial(f, r);
    EXPECT_EQ(trivial, 1u);
}

TEST(Oracle, PointMultilinearCounts) {
    auto f2 = prime_field_ring(2);
    auto z = share(constant_group(2));
    EXPECT_EQ(count_point_multilinear({z, z}, z, f2), 2u);
    EXPECT_EQ(count_point_multilinear({share(trivial_group(2)), z}, z, f2), 1u);
    EXPECT_EQ(count_point_multilinear({z}, z, f2), 2u);
}

TEST(Oracle, InducedPointMaps) {
    auto r = ring_spec_parse("F2[e]/(e^2)");
    auto a = share(alpha_group(2, 1));
    std::vector<HopfPtr> src{a, a};
    // x (x) 1 (x) 1 reads off the first point; x (x) 1 (x) e vanishes since e^2 = 0;
    // x (x) y (x) 1 vanishes for the same reason.
    FpVector f(8, 0), g(8, 0), h(8, 0), zero(8, 0);
    f[2 * 2 + 0] = 1;
    g[2 * 2 + 1] = 1;
    h[3 * 2 + 0] = 1;
    EXPECT_EQ(induced_point_map_count(src, r, {zero}), 1u);
    EXPECT_EQ(induced_point_map_count(src, r, {zero, f}), 2u);
    EXPECT_EQ(induced_point_map_count(src, r, {zero, g, h}), 1u);
    EXPECT_EQ(induced_point_map_count(src, r, {f, g, h}), 2u);
}

TEST(Oracle, MultiPrimitiveMatchesSolver) {
    for (unsigned p : {2u, 3u}) {
        std::vector<HopfPtr> src{share(alpha_group(p, 1)), share(alpha_group(p, 2))};
        auto brute = enumerate_multiprimitive(src);
        auto space = mult_space_additive(src);
        std::size_t expected = 1;
        for (std::size_t i = 0; i < space.dim(); ++i) expected *= p;
        EXPECT_EQ(brute.size(), expected);
        auto alpha = enumerate_multiprimitive(src, 1);
        auto into = mult_space_into(src, TargetSpec::alpha(1));
        expected = 1;
        for (std::size_t i = 0; i < into.dim(); ++i) expected *= p;
        EXPECT_EQ(alpha.size(), expected);
    }
}

TEST(Oracle, BruteForceGroupLike) {
    auto a = share(alpha_group(2, 1));
    auto found = brute_force_multi_grouplike({a, a, a});
    EXPECT_EQ(found.size(), 2u);
    EXPECT_EQ(brute_force_multi_grouplike({a}).size(), 1u);
    EXPECT_THROW(brute_force_multi_grouplike({share(alpha_group(2, 3)), share(alpha_group(2, 3))}, 1000), ResourceError);
}

TEST(Oracle, MultisetBasis) {
    EXPECT_EQ(multiset_count(2, 2), 3u);
    EXPECT_EQ(multiset_count(3, 2), 6u);
    EXPECT_EQ(multiset_count(1, 4), 1u);
    for (unsigned p : {2u, 3u}) {
        auto b = symmetric_multiset_basis(p, 2, 2);
        EXPECT_EQ(rank(b), multiset_count(2, 2));
    }
}

TEST(Oracle, SchemeMapsInducePointMapsWithinPointCount) {
    // Mult(alpha_2 x alpha_2, alpha_2) over F2[e]/(e^2): the scheme-level elements are c x (x) y
    // with c in R (4 of them), more than the 2 point-level bilinear maps; all 4 induce the zero map.
    auto r = ring_spec_parse("F2[e]/(e^2)");
    auto a = share(alpha_group(2, 1));
    std::vector<HopfPtr> src{a, a};
    std::vector<FpVector> scheme;
    for (std::size_t idx = 0; idx < r.element_count(); ++idx) {
        FpVector c = r.element(idx), f(8, 0);
        for (std::size_t k = 0; k < 2; ++k) f[3 * 2 + k] = c[k];
        scheme.push_back(f);
    }
    const auto point_count = count_point_multilinear(src, a, r);
    EXPECT_EQ(point_count, 2u);
    EXPECT_EQ(scheme.size(), 4u);
    EXPECT_LE(induced_point_map_count(src, r, scheme), point_count);
}
