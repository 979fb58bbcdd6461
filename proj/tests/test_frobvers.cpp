#include <gtest/gtest.h>

#include "hopfkit/frobvers.hpp"

using namespace hopfkit;

namespace {

bool is_trivial(const HopfMorphism& f) {
    return f.coordinate_map() == HopfMorphism::zero(f.source_ptr(), f.target_ptr()).coordinate_map();
}

bool is_invertible(const HopfMorphism& f) { return inverse(f.coordinate_map()).has_value(); }

}  // namespace

TEST(FrobVers, FrobeniusOnCatalog) {
    for (unsigned p : {2u, 3u, 5u}) {
        auto a = share(alpha_group(p, 1));
        auto a2 = share(alpha_group(p, 2));
        auto mu = share(mu_group(p));
        auto cz = share(constant_group(p));
        EXPECT_TRUE(is_trivial(frobenius(a)));
        EXPECT_TRUE(is_trivial(frobenius(mu)));
        EXPECT_TRUE(is_invertible(frobenius(cz)));
        auto f2 = frobenius(a2);
        EXPECT_TRUE(f2.certified());
        EXPECT_EQ(f2.target_twist().exponent, 1u);
        auto im = share(image_subgroup(f2));
        EXPECT_TRUE(hopf_isomorphism_search(im, a).has_value());
    }
}

TEST(FrobVers, VerschiebungOnCatalog) {
    for (unsigned p : {2u, 3u}) {
        for (unsigned n : {1u, 2u, 3u}) EXPECT_TRUE(is_trivial(verschiebung(share(alpha_group(p, n)))));
        auto mu = share(mu_group(p));
        auto cz = share(constant_group(p));
        EXPECT_TRUE(verschiebung(mu).certified());
        EXPECT_TRUE(is_invertible(verschiebung(mu)));
        EXPECT_TRUE(is_trivial(verschiebung(cz)));
    }
}

TEST(FrobVers, DualityIntertwining) {
    for (const char* id : {"alpha:2^2", "alpha:3^1", "mu:3", "const:Z/2", "alpha:2^1 + mu:2"}) {
        auto g = share(catalog_group(id));
        auto d = share(cartier_dual(*g));
        EXPECT_EQ(frobenius(g).coordinate_map(), verschiebung(d).coordinate_map().transpose()) << id;
        EXPECT_EQ(verschiebung(g).coordinate_map(), frobenius(d).coordinate_map().transpose()) << id;
    }
}

TEST(FrobVers, MultiplicationBy) {
    for (const char* id : {"alpha:3^2", "mu:3", "const:Z/3", "alpha:2^1 + const:Z/2"}) {
        auto g = share(catalog_group(id));
        EXPECT_EQ(multiplication_by(1, g).coordinate_map(), FpMatrix::identity(g->p(), g->dim())) << id;
        EXPECT_TRUE(is_trivial(multiplication_by(0, g))) << id;
        EXPECT_TRUE(is_trivial(multiplication_by(g->p(), g))) << id;
    }
    // [2] on Z/3 swaps the idempotents e_1 and e_2.
    auto cz = share(constant_group(3));
    auto two = multiplication_by(2, cz);
    EXPECT_TRUE(two.certified());
    FpMatrix swap(3, 3, 3);
    swap.at(0, 0) = 1;
    swap.at(2, 1) = 1;
    swap.at(1, 2) = 1;
    EXPECT_EQ(two.coordinate_map(), swap);
}

TEST(FrobVers, VFIdentity) {
    for (const char* id : {"alpha:2^2", "alpha:3^2", "mu:2", "mu:3", "const:Z/3", "alpha:3^1 + mu:3"})
        EXPECT_TRUE(vf_identity_check(share(catalog_group(id))).holds()) << id;
}

TEST(FrobVers, CokernelOfVerschiebung) {
    for (unsigned p : {2u, 3u}) {
        auto a = share(alpha_group(p, 1));
        for (unsigned k : {1u, 2u, 3u}) {
            auto coker = share(coker_verschiebung(share(cartier_dual(alpha_group(p, k)))));
            EXPECT_TRUE(hopf_isomorphism_search(coker, a).has_value()) << p << " " << k;
        }
        EXPECT_EQ(coker_verschiebung(share(mu_group(p))).dim(), 1u);
        EXPECT_TRUE(coker_verschiebung(a).same_structure(*a) || coker_verschiebung(a).dim() == p);
    }
}

TEST(FrobVers, CokernelMatchesDualOfFrobeniusKernel) {
    for (const char* id : {"alpha:2^2", "alpha:3^2", "mu:3", "const:Z/2", "alpha:2^1 + mu:2"}) {
        auto g = share(catalog_group(id));
        auto lhs = share(coker_verschiebung(share(cartier_dual(*g))));
        auto rhs = share(cartier_dual(kernel_subgroup(frobenius(g))));
        ASSERT_EQ(lhs->dim(), rhs->dim()) << id;
        EXPECT_TRUE(hopf_isomorphism_search(lhs, rhs).has_value()) << id;
    }
}
