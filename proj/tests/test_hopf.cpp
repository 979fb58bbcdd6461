#include <gtest/gtest.h>

#include "hopfkit/errors.hpp"
#include "hopfkit/hopf.hpp"
#include "hopfkit/search.hpp"

using namespace hopfkit;

namespace {

HopfMorphism inclusion_first(const HopfPtr& g, const HopfPtr& sum, const HopfAlgebra& h) {
    FpMatrix m(g->p(), g->dim(), sum->dim());
    for (std::size_t i = 0; i < g->dim(); ++i)
        for (std::size_t k = 0; k < h.dim(); ++k) m.at(i, i * h.dim() + k) = h.counit()[k];
    return HopfMorphism(g, sum, m);
}

HopfMorphism projection_second(const HopfPtr& sum, const HopfPtr& h, const HopfAlgebra& g) {
    FpMatrix m(h->p(), sum->dim(), h->dim());
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t k = 0; k < h->dim(); ++k) m.at(i * h->dim() + k, k) = g.algebra().unit()[i];
    return HopfMorphism(sum, h, m);
}

void replace_once(std::string& s, const std::string& from, const std::string& to) {
    auto pos = s.find(from);
    ASSERT_NE(pos, std::string::npos) << from;
    s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Hopf, CatalogSatisfiesAxioms) {
    for (const char* id : {"alpha:2^1", "alpha:2^3", "alpha:3^2", "alpha:5^1", "mu:2", "mu:3", "mu:5", "const:Z/2",
                           "const:Z/3", "const:Z/5", "trivial:3", "alpha:3^1 + mu:3", "mu:2 ⊕ const:Z/2 + alpha:2^1"}) {
        HopfAlgebra h = catalog_group(id);
        auto report = verify_hopf_axioms(h);
        EXPECT_TRUE(report.all_pass()) << id << ": " << (report.first_failure() ? report.first_failure()->witness : "");
        EXPECT_EQ(report.checks.size(), 6u);
    }
}

TEST(Hopf, CatalogIdsAndErrors) {
    EXPECT_EQ(catalog_group("alpha:3^2").dim(), 9u);
    EXPECT_EQ(catalog_group("alpha:2^1 ⊕ mu:2").name(), "alpha:2^1 + mu:2");
    EXPECT_THROW(catalog_group("beta:3"), ArgumentError);
    EXPECT_THROW(catalog_group("alpha:2^1 + mu:3"), ArgumentError);
    EXPECT_THROW(catalog_group("mu:4"), ArgumentError);
    EXPECT_THROW(alpha_group(5, 9, 20000), ResourceError);
}

TEST(Hopf, BrokenCoassociativityIsReported) {
    HopfAlgebra a = alpha_group(3, 1);
    auto comul = a.comul_entries();
    comul.push_back({2, 2, 0, 1});
    HopfAlgebra bad(a.algebra(), comul, a.counit(), a.antipode());
    auto report = verify_hopf_axioms(bad);
    ASSERT_FALSE(report.all_pass());
    EXPECT_EQ(report.first_failure()->axiom, "coassociativity");
    EXPECT_NE(report.first_failure()->witness.find("e2"), std::string::npos);
}

TEST(Hopf, DualityAndIsomorphisms) {
    for (unsigned p : {2u, 3u, 5u}) {
        auto a = share(alpha_group(p, 1));
        auto mu = share(mu_group(p));
        auto cz = share(constant_group(p));
        auto da = share(cartier_dual(*a));
        auto dmu = share(cartier_dual(*mu));
        EXPECT_TRUE(verify_hopf_axioms(*da).all_pass());
        EXPECT_TRUE(hopf_isomorphism_search(da, a).has_value()) << p;
        auto iso = hopf_isomorphism_search(dmu, cz);
        ASSERT_TRUE(iso.has_value()) << p;
        EXPECT_TRUE(iso->certified());
        EXPECT_FALSE(hopf_isomorphism_search(mu, cz).has_value()) << p;
        EXPECT_FALSE(hopf_isomorphism_search(a, mu).has_value()) << p;
        EXPECT_TRUE(cartier_dual(*da).same_structure(*a));
    }
    auto a2 = share(alpha_group(2, 2));
    auto sum = share(catalog_group("alpha:2^1 + alpha:2^1"));
    EXPECT_FALSE(hopf_isomorphism_search(a2, sum).has_value());
    EXPECT_EQ(cartier_dual(*a2).name(), "dual(alpha:2^2)");
    EXPECT_EQ(cartier_dual(*a2).algebra().labels()[1], "ξ[x]");
}

TEST(Hopf, PrimitivesAndGroupLikes) {
    EXPECT_EQ(primitive_elements(alpha_group(2, 3)).cols(), 3u);
    EXPECT_EQ(primitive_elements(alpha_group(3, 2)).cols(), 2u);
    EXPECT_EQ(primitive_elements(mu_group(3)).cols(), 0u);
    EXPECT_EQ(primitive_elements(constant_group(3)).cols(), 1u);
    for (unsigned p : {2u, 3u}) {
        auto fp_ring = prime_field_ring(p);
        auto dual_numbers = ring_spec_parse("F" + std::to_string(p) + "[e]/(e^2)");
        EXPECT_EQ(group_like_points(mu_group(p), fp_ring).size(), p);
        EXPECT_EQ(group_like_points(constant_group(p), fp_ring).size(), 1u);
        EXPECT_EQ(group_like_points(alpha_group(p, 1), fp_ring).size(), 1u);
        EXPECT_EQ(group_like_points(alpha_group(p, 1), dual_numbers).size(), p);
    }
}

TEST(Hopf, AugmentationBasisDegrees) {
    auto b = augmentation_basis(alpha_group(2, 2));
    ASSERT_EQ(b.degrees.size(), 3u);
    EXPECT_EQ(b.degrees, (std::vector<unsigned>{1, 2, 3}));
    auto c = augmentation_basis(constant_group(3));
    EXPECT_EQ(c.degrees, (std::vector<unsigned>{1, 1}));
}

TEST(Hopf, QuadraticSolverBasics) {
    // x0^2 - 1 = 0 over GF(5): two roots.
    RingTables ring(prime_field_ring(5));
    QuadraticSystem sys;
    sys.num_vars = 1;
    sys.equations.push_back({4, {}, {{0, 0, 1}}});
    EXPECT_EQ(solve_quadratic_system(sys, ring, 100).size(), 2u);
    // x1 = 2 x0: one free variable.
    QuadraticSystem lin;
    lin.num_vars = 2;
    lin.equations.push_back({0, {{1, 1}, {0, 3}}, {}});
    EXPECT_EQ(solve_quadratic_system(lin, ring, 100).size(), 5u);
    QuadraticSystem big;
    big.num_vars = 10;
    EXPECT_THROW(solve_quadratic_system(big, ring, 1000), ResourceError);
}

TEST(Hopf, MorphismsAndExactness) {
    auto g = share(alpha_group(3, 1));
    auto h = share(mu_group(3));
    auto sum = share(direct_sum(*g, *h));
    auto iota = inclusion_first(g, sum, *h);
    auto pi = projection_second(sum, h, *g);
    EXPECT_TRUE(iota.certified());
    EXPECT_TRUE(pi.certified());
    EXPECT_TRUE(exactness_check(iota, pi).exact());
    auto id = HopfMorphism::identity(g);
    auto v = exactness_check(id, id);
    EXPECT_TRUE(v.closed_immersion);
    EXPECT_TRUE(v.quotient_map);
    EXPECT_FALSE(v.exact());

    auto composite = compose(pi, iota);
    EXPECT_EQ(composite.coordinate_map(), HopfMorphism::zero(g, h).coordinate_map());
    EXPECT_FALSE(HopfMorphism(g, g, FpMatrix::identity(3, 3) + FpMatrix::identity(3, 3)).certified());
}

TEST(Hopf, KernelsImagesCokernels) {
    auto g = share(alpha_group(2, 2));
    auto a = share(alpha_group(2, 1));
    auto z = HopfMorphism::zero(g, a);
    EXPECT_EQ(kernel_subgroup(z).dim(), 4u);
    EXPECT_EQ(image_subgroup(z).dim(), 1u);
    EXPECT_EQ(cokernel_quotient(z).dim(), 2u);
    auto id = HopfMorphism::identity(g);
    EXPECT_EQ(kernel_subgroup(id).dim(), 1u);
    EXPECT_EQ(cokernel_quotient(id).dim(), 1u);
    // Frobenius-type map alpha_4 -> alpha_4, x -> x^2.
    FpMatrix m(2, 4, 4);
    m.at(0, 0) = 1;
    m.at(2, 1) = 1;
    auto f = HopfMorphism(g, g, m);
    ASSERT_TRUE(f.certified());
    EXPECT_EQ(kernel_subgroup(f).dim(), 2u);
    EXPECT_EQ(image_subgroup(f).dim(), 2u);
    EXPECT_EQ(cokernel_quotient(f).dim(), 2u);
    auto ki = kernel_inclusion(f);
    EXPECT_TRUE(ki.certified());
    EXPECT_TRUE(exactness_check(ki, cokernel_projection(ki)).exact());
    EXPECT_THROW(kernel_subgroup(HopfMorphism(g, g, FpMatrix(2, 4, 4))), ArgumentError);
}

TEST(Hopf, HopfIdeals) {
    auto g = share(alpha_group(3, 2));
    FpVector x3(9, 0);
    x3[3] = 1;
    FpMatrix ideal = generated_ideal(g->algebra(), FpMatrix::from_columns(3, 9, {x3}));
    EXPECT_TRUE((SubgroupData{g, ideal}.is_hopf_ideal()));
    FpVector x2(9, 0);
    x2[2] = 1;
    FpMatrix bad = generated_ideal(g->algebra(), FpMatrix::from_columns(3, 9, {x2}));
    EXPECT_FALSE((SubgroupData{g, bad}.is_hopf_ideal()));
    EXPECT_THROW(quotient_by_hopf_ideal({g, bad}), ValidationError);
    auto q = quotient_by_hopf_ideal({g, ideal});
    EXPECT_EQ(q.algebra.dim(), 3u);
    EXPECT_TRUE(verify_hopf_axioms(q.algebra).all_pass());
}

TEST(HopfJson, RoundTripIsByteStable) {
    for (const char* id : {"alpha:3^1", "mu:2 + const:Z/2", "alpha:2^2"}) {
        HopfAlgebra h = catalog_group(id);
        std::string text = hopf_to_json(h);
        HopfAlgebra back = import_hopf_json(text);
        EXPECT_TRUE(back.same_structure(h)) << id;
        EXPECT_EQ(hopf_to_json(back), text) << id;
    }
    std::string dual = hopf_to_json(cartier_dual(alpha_group(2, 2)));
    EXPECT_EQ(hopf_to_json(import_hopf_json(dual)), dual);
}

TEST(HopfJson, ErrorsCarryFieldPaths) {
    std::string text = hopf_to_json(alpha_group(3, 1));
    try {
        hopf_from_json("{\"p\": 4}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field_path(), "/p");
    }
    std::string bad = text;
    replace_once(bad, "\"mul\": [[0,0,0,1]", "\"mul\": [[0,0,7,1]");
    try {
        hopf_from_json(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field_path(), "/mul/0/2");
    }
    EXPECT_THROW(hopf_from_json("{\"p\": "), ParseError);
    std::string broken = text;
    replace_once(broken, "\"comul\": [[0,0,0,1]", "\"comul\": [[0,0,0,2]");
    EXPECT_THROW(import_hopf_json(broken), ValidationError);
}
