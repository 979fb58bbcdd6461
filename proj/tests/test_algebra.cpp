#include <gtest/gtest.h>

#include <random>

#include "hopfkit/algebra.hpp"

using namespace hopfkit;

TEST(TruncatedPolynomial, SpecExamples) {
    auto a = truncated_polynomial_algebra(2, {1});
    EXPECT_EQ(a.dim(), 2u);
    EXPECT_EQ(a.labels(), (std::vector<std::string>{"1", "x"}));
    auto x = a.basis_vector(1);
    EXPECT_EQ(a.multiply(x, x), a.zero());
    EXPECT_EQ(truncated_polynomial_algebra(3, {2}).dim(), 9u);
    auto b = truncated_polynomial_algebra(2, {1, 1});
    EXPECT_EQ(b.labels(), (std::vector<std::string>{"1", "x2", "x1", "x1*x2"}));
    EXPECT_THROW(truncated_polynomial_algebra(5, {3, 3}, 100), ResourceError);
}

TEST(TruncatedPolynomial, PowersTruncate) {
    auto a = truncated_polynomial_algebra(3, {2});
    auto x = a.basis_vector(1);
    EXPECT_EQ(a.power(x, 8), a.basis_vector(8));
    EXPECT_EQ(a.power(x, 9), a.zero());
}

TEST(FiniteAlgebraValidation, RejectsBadTables) {
    // Non-commutative: e1*e1 = e1 but ... e1*e2 = e2, e2*e1 = 0.
    std::vector<MulEntry> base{{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {0, 2, 2, 1}, {2, 0, 2, 1}};
    EXPECT_NO_THROW(FiniteAlgebra(3, {"1", "a", "b"}, {1, 0, 0}, base));
    auto noncomm = base;
    noncomm.push_back({1, 2, 2, 1});
    EXPECT_THROW(FiniteAlgebra(3, {"1", "a", "b"}, {1, 0, 0}, noncomm), ValidationError);
    // a^2 = b, a*b = a is commutative but not associative: (a a) a = b a = a, a (a a) = a b = a; (a b) b = a b = a vs a (b b)= 0.
    auto nonassoc = base;
    nonassoc.insert(nonassoc.end(), {{1, 1, 2, 1}, {1, 2, 1, 1}, {2, 1, 1, 1}});
    EXPECT_THROW(FiniteAlgebra(3, {"1", "a", "b"}, {1, 0, 0}, nonassoc), ValidationError);
    EXPECT_THROW(FiniteAlgebra(3, {"1", "a", "b"}, {0, 1, 0}, base), ValidationError);
}

TEST(TensorAlgebra, SpecExamplesAndAssociativity) {
    auto a = truncated_polynomial_algebra(2, {1});
    auto r = ring_spec_parse("F2 x F2 x F2");
    EXPECT_EQ(tensor_algebra(a, r.algebra()).dim(), 6u);
    auto u = unit_algebra(2);
    EXPECT_TRUE(tensor_algebra(a, u).same_structure(a));
    auto t = tensor_algebra(a, a);
    FpVector x1{0, 0, 1, 0}, y1{0, 1, 0, 0};
    EXPECT_EQ(t.multiply(x1, y1), (FpVector{0, 0, 0, 1}));
    EXPECT_EQ(t.multiply(x1, x1), t.zero());
    auto b = truncated_polynomial_algebra(3, {1});
    auto c = ring_spec_parse("F3[e]/(e^2)").algebra();
    auto d = truncated_polynomial_algebra(3, {2});
    auto left = tensor_algebra(tensor_algebra(b, c), d);
    auto right = tensor_algebra(b, tensor_algebra(c, d));
    EXPECT_TRUE(left.same_structure(right));
    EXPECT_THROW(tensor_algebra(a, b), ArgumentError);
}

TEST(TensorAlgebra, CarriesPresentation) {
    auto a = truncated_polynomial_algebra(3, {1});
    auto t = tensor_algebra(a, a);
    ASSERT_TRUE(t.presentation());
    const auto& pres = *t.presentation();
    EXPECT_EQ(pres.generators.size(), 2u);
    for (std::size_t i = 0; i < t.dim(); ++i)
        EXPECT_EQ(evaluate_polynomial(t, pres.basis_polynomials[i], pres.generators), t.basis_vector(i));
}

TEST(BaseExtend, SpecExamples) {
    auto a = truncated_polynomial_algebra(2, {1});
    EXPECT_TRUE(base_extend(a, prime_field_ring(2)).algebra.same_structure(a));
    auto r = ring_spec_parse("F2[e]/(e^2)");
    auto ext = base_extend(a, r);
    EXPECT_EQ(ext.algebra.dim(), 4u);
    EXPECT_EQ(ext.scalars.column(1), (FpVector{0, 1, 0, 0}));
    EXPECT_TRUE(base_extend(unit_algebra(2), r).algebra.same_structure(r.algebra()));
}

TEST(RingSpec, ParsesGrammar) {
    auto f3 = ring_spec_parse("F3");
    EXPECT_EQ(f3.dim(), 1u);
    EXPECT_EQ(f3.p(), 3u);
    auto dual = ring_spec_parse("F2[e]/(e^2)");
    EXPECT_EQ(dual.dim(), 2u);
    EXPECT_EQ(dual.algebra().multiply(FpVector{0, 1}, FpVector{0, 1}), (FpVector{0, 0}));
    auto split = ring_spec_parse("F2 x F2");
    EXPECT_EQ(split.dim(), 2u);
    FpVector e1{1, 0}, e2{0, 1};
    EXPECT_EQ(split.algebra().multiply(e1, e1), e1);
    EXPECT_EQ(split.algebra().multiply(e1, e2), (FpVector{0, 0}));
    EXPECT_EQ(split.algebra().unit(), (FpVector{1, 1}));
}

TEST(RingSpec, CanonicalRoundTrip) {
    for (std::string s : {"F2", "F3[e]/(e^3)", "F2[e]/(e^2) x F2", "F5 x F5 x F5[e]/(e^2)"}) {
        auto r = ring_spec_parse(s);
        EXPECT_EQ(r.spec(), s);
        EXPECT_EQ(ring_spec_parse(r.spec()).spec(), s);
    }
    EXPECT_EQ(ring_spec_parse("  F2[ e ]/( e^2 )x F2").spec(), "F2[e]/(e^2) x F2");
}

TEST(RingSpec, Errors) {
    try {
        ring_spec_parse("F2[e]/(f^2)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 7u);
    }
    EXPECT_THROW(ring_spec_parse("G2"), ParseError);
    EXPECT_THROW(ring_spec_parse("F2 x"), ParseError);
    EXPECT_THROW(ring_spec_parse("F2 junk"), ParseError);
    EXPECT_THROW(ring_spec_parse("F4"), ValidationError);
    EXPECT_THROW(ring_spec_parse("F2[e]/(e^1)"), ValidationError);
    EXPECT_THROW(ring_spec_parse("F2 x F3"), ValidationError);
}

TEST(CoefficientRingTest, EnumerationRoundTrip) {
    auto r = ring_spec_parse("F3[e]/(e^2)");
    EXPECT_EQ(r.element_count(), 9u);
    for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(r.index_of(r.element(i)), i);
    EXPECT_EQ(r.element(1), (FpVector{0, 1}));
}

TEST(Presentation, DerivedForLocalAndSplitAlgebras) {
    auto local = ring_spec_parse("F3[e]/(e^3)").algebra();
    auto pres = derive_presentation(local, FpVector{1, 0, 0});
    EXPECT_EQ(pres.generators.size(), 1u);
    for (std::size_t i = 0; i < local.dim(); ++i)
        EXPECT_EQ(evaluate_polynomial(local, pres.basis_polynomials[i], pres.generators), local.basis_vector(i));
    auto split = ring_spec_parse("F3 x F3 x F3").algebra();
    auto ps = derive_presentation(split, FpVector{1, 0, 0});
    EXPECT_GE(ps.generators.size(), 1u);
    for (std::size_t i = 0; i < split.dim(); ++i)
        EXPECT_EQ(evaluate_polynomial(split, ps.basis_polynomials[i], ps.generators), split.basis_vector(i));
    auto two = tensor_algebra(local, local);
    EXPECT_EQ(derive_presentation(two, two.basis_vector(0)).generators.size(), 2u);
}

TEST(Element, Arithmetic) {
    auto alg = std::make_shared<const FiniteAlgebra>(truncated_polynomial_algebra(3, {1}));
    AlgebraElement x(alg, {0, 1, 0});
    AlgebraElement one(alg, {1, 0, 0});
    EXPECT_EQ((x + one).pow(3).coefficients(), (FpVector{1, 0, 0}));
    EXPECT_EQ((x * x).to_string(), "x^2");
    EXPECT_TRUE((x - x).is_zero());
    EXPECT_EQ(x.scaled(2).to_string(), "2*x");
    EXPECT_THROW(AlgebraElement(alg, {1, 0}), ArgumentError);
}

TEST(TorsionWitness, SpecExamples) {
    auto w2 = torsion_witness_tate_oort(2);
    EXPECT_EQ(w2.element_normal_form, "y^2 + y");
    EXPECT_TRUE(w2.nonzero());
    EXPECT_TRUE(w2.annihilated());
    auto w3 = torsion_witness_tate_oort(3);
    EXPECT_EQ(w3.element_normal_form, "y^3 + 2*y");
    EXPECT_TRUE(w3.nonzero());
    EXPECT_TRUE(w3.annihilated());
    for (unsigned p : {2u, 3u, 5u, 17u}) EXPECT_TRUE(torsion_witness_tate_oort(p).sanity_vanishes());
}

TEST(TorsionWitness, RewriteIsConfluentOnCappedRange) {
    std::mt19937 rng(2024);
    for (unsigned p : {2u, 3u, 5u}) {
        TateOortRewriter rw(p);
        for (int trial = 0; trial < 200; ++trial) {
            TateOortRewriter::Poly f;
            for (int t = 0; t < 6; ++t) {
                unsigned dx = rng() % (rw.x_cap() + 1), dy = rng() % (rw.y_cap() + 1);
                f[{dx, dy}] = rng() % p;
            }
            std::erase_if(f, [](const auto& t) { return t.second == 0; });
            auto det = rw.normal_form(f);
            EXPECT_TRUE(rw.is_normal(det));
            EXPECT_EQ(rw.normal_form_randomized(f, rng), det);
        }
    }
}
