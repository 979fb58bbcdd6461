#include <gtest/gtest.h>

#include <algorithm>

#include "hopfkit/errors.hpp"
#include "hopfkit/morphspaces.hpp"
#include "hopfkit/search.hpp"

using namespace hopfkit;

namespace {

std::vector<HopfPtr> alphas(unsigned p, std::vector<unsigned> ns) {
    std::vector<HopfPtr> out;
    for (auto n : ns) out.push_back(share(alpha_group(p, n)));
    return out;
}

FpVector monomial_tensor(const std::vector<HopfPtr>& sources, std::vector<std::size_t> exps) {
    std::vector<std::size_t> dims;
    for (const auto& s : sources) dims.push_back(s->dim());
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    FpVector v(n, 0);
    v[kron_index(dims, exps)] = 1;
    return v;
}

HopfMorphism alpha_inclusion(unsigned p) {
    // alpha_p -> alpha_{p^2}: x -> y.
    auto small = share(alpha_group(p, 1));
    auto big = share(alpha_group(p, 2));
    FpMatrix m(p, p, p * p);
    for (unsigned i = 0; i < p; ++i) m.at(i, i) = 1;
    return HopfMorphism(small, big, m);
}

HopfMorphism alpha_frobenius_quotient(unsigned p) {
    // alpha_{p^2} -> alpha_p: y -> x^p.
    auto big = share(alpha_group(p, 2));
    auto small = share(alpha_group(p, 1));
    FpMatrix m(p, p * p, p);
    for (unsigned i = 0; i < p; ++i) m.at(i * p, i) = 1;
    return HopfMorphism(big, small, m);
}

}  // namespace

TEST(Morphspaces, PrimitiveSpaces) {
    EXPECT_EQ(primitive_space(share(alpha_group(3, 2))).dim(), 2u);
    EXPECT_EQ(primitive_space(share(mu_group(3))).dim(), 0u);
    EXPECT_EQ(primitive_space(share(catalog_group("alpha:2^1 + alpha:2^1"))).dim(), 2u);
    auto b = primitive_space(share(alpha_group(2, 3))).basis();
    ASSERT_EQ(b.cols(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        FpVector expected(8, 0);
        expected[1u << i] = 1;
        EXPECT_EQ(b.column(i), expected);
    }
}

TEST(Morphspaces, MultiPrimitiveDimensions) {
    EXPECT_EQ(mult_space_additive(alphas(2, {2, 1})).dim(), 2u);
    EXPECT_EQ(mult_space_additive(alphas(3, {2, 2})).dim(), 4u);
    EXPECT_EQ(mult_space_additive(alphas(2, {3, 2, 2})).dim(), 12u);
    EXPECT_EQ(mult_space_additive(alphas(5, {3, 3, 3})).dim(), 27u);
    auto s = alphas(3, {2, 2});
    auto basis = mult_space_additive(s).basis();
    for (std::size_t a : {1u, 3u})
        for (std::size_t b : {1u, 3u}) EXPECT_TRUE(span_contains(basis, monomial_tensor(s, {a, b})));
    EXPECT_EQ(mult_space_additive(alphas(3, {2})).basis(), primitive_space(s[0]).basis());
}

TEST(Morphspaces, CurryingAgreesWithDirectSolve) {
    for (auto [p, ns] : std::vector<std::pair<unsigned, std::vector<unsigned>>>{
             {2, {2, 1}}, {3, {1, 1, 1}}, {2, {2}}, {2, {1, 1, 1}}, {3, {2, 1}}}) {
        auto v = curry_consistency(alphas(p, ns));
        EXPECT_TRUE(v.consistent());
        std::size_t prod = 1;
        for (auto n : ns) prod *= n;
        EXPECT_EQ(v.direct_dim, prod);
    }
    auto mixed = curry_consistency({share(alpha_group(2, 1)), share(catalog_group("alpha:2^1 + alpha:2^1"))});
    EXPECT_TRUE(mixed.consistent());
    EXPECT_EQ(mixed.direct_dim, 2u);
}

TEST(Morphspaces, DiagonalRestriction) {
    auto s2 = alphas(2, {1, 1});
    EXPECT_EQ(diagonal_restriction(monomial_tensor(s2, {1, 1}), s2, 0, 1), FpVector(2, 0));
    auto s3 = alphas(3, {1, 1});
    EXPECT_EQ(diagonal_restriction(monomial_tensor(s3, {1, 1}), s3, 0, 1), (FpVector{0, 0, 1}));
    auto s9 = alphas(3, {2, 2});
    FpVector f = monomial_tensor(s9, {1, 3});
    FpVector g = monomial_tensor(s9, {3, 1});
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = fp::sub(f[i], g[i], 3);
    EXPECT_EQ(diagonal_restriction(f, s9, 0, 1), FpVector(9, 0));
}

TEST(Morphspaces, AlternatingAndSymmetric) {
    EXPECT_EQ(alt_subspace(mult_space_additive(alphas(3, {2, 2}))).dim(), 1u);
    EXPECT_EQ(alt_subspace(mult_space_additive(alphas(3, {1, 1}))).dim(), 0u);
    EXPECT_EQ(alt_subspace(mult_space_additive(alphas(2, {1, 1}))).dim(), 1u);
    EXPECT_EQ(sym_subspace(mult_space_additive(alphas(3, {2, 2}))).dim(), 3u);
    EXPECT_EQ(sym_subspace(mult_space_additive(alphas(3, {3, 3}))).dim(), 6u);
    auto one = mult_space_additive(alphas(3, {2}));
    EXPECT_EQ(sym_subspace(one).dim(), one.dim());
    EXPECT_THROW(alt_subspace(mult_space_additive(alphas(3, {2, 1}))), ArgumentError);
    // Binomial counts for p > 2.
    EXPECT_EQ(alt_subspace(mult_space_additive(alphas(5, {3, 3, 3}))).dim(), 1u);
    EXPECT_EQ(alt_subspace(mult_space_additive(alphas(3, {3, 3}))).dim(), 3u);
    EXPECT_EQ(alt_subspace(mult_space_additive(alphas(3, {2, 2, 2}))).dim(), 0u);
}

TEST(Morphspaces, AlternatingFormsAreAntisymmetric) {
    auto s = alphas(3, {3, 3});
    auto alt = alt_subspace(mult_space_additive(s));
    auto b = alt.basis();
    std::vector<std::size_t> dims{27, 27};
    for (std::size_t c = 0; c < b.cols(); ++c) {
        FpVector v = b.column(c);
        FpVector w = permute_slots(v, dims, {1, 0});
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(w[i], fp::neg(v[i], 3));
    }
    auto sym = sym_subspace(mult_space_additive(s)).basis();
    for (std::size_t c = 0; c < sym.cols(); ++c) EXPECT_EQ(permute_slots(sym.column(c), dims, {1, 0}), sym.column(c));
}

TEST(Morphspaces, AlphaTargets) {
    auto ap = alphas(3, {1, 1});
    auto into = mult_space_into(ap, TargetSpec::alpha(1));
    EXPECT_EQ(into.dim(), 1u);
    EXPECT_EQ(into.basis().column(0), monomial_tensor(ap, {1, 1}));
    EXPECT_EQ(mult_space_into(ap, TargetSpec::finite(share(constant_group(3)))).dim(), 0u);
    auto a9 = alphas(3, {2, 2});
    EXPECT_EQ(mult_space_into(a9, TargetSpec::alpha(1)).dim(), 3u);
    auto par = alpha_parameterization(mult_space_additive(a9), 1);
    EXPECT_EQ(par.constrained, 1u);
    EXPECT_EQ(par.free, 3u);
    EXPECT_EQ(mult_space_into(a9, TargetSpec::finite(share(alpha_group(3, 1)))).dim(), 3u);
}

TEST(Morphspaces, HomSpaces) {
    auto a4 = share(alpha_group(2, 2));
    auto f2 = prime_field_ring(2);
    auto h = hom_space(a4, TargetSpec::alpha(1), f2);
    EXPECT_EQ(h.points.size(), 2u);
    EXPECT_EQ(h.predicted_count, 2u);
    auto dual_numbers = ring_spec_parse("F2[e]/(e^2)");
    auto hd = hom_space(a4, TargetSpec::alpha(1), dual_numbers);
    EXPECT_EQ(hd.points.size(), 8u);
    EXPECT_EQ(hd.predicted_count, 8u);
    for (unsigned p : {2u, 3u}) {
        auto g = share(alpha_group(p, 1));
        EXPECT_EQ(hom_space(g, TargetSpec::alpha(2), prime_field_ring(p)).points.size(), p);
        EXPECT_EQ(hom_space(g, TargetSpec::finite(share(mu_group(p))), prime_field_ring(p)).points.size(), 1u);
    }
    EXPECT_EQ(alpha_points(dual_numbers, 1), 2u);
    EXPECT_EQ(alpha_points(ring_spec_parse("F3[e]/(e^3)"), 1), 9u);
    EXPECT_THROW(hom_space(share(alpha_group(2, 3)), TargetSpec::alpha(1), ring_spec_parse("F2[e]/(e^3)"), 10),
                 ResourceError);
}

TEST(Morphspaces, MultiplicativeTargets) {
    for (unsigned p : {2u, 3u}) {
        auto s = alphas(p, {1, 1});
        auto fam = exponential_family(s, prime_field_ring(p));
        EXPECT_EQ(fam.size(), p);
        MultiGroupLikeOptions opt;
        auto solved = solve_multi_grouplike(s, prime_field_ring(p), opt);
        EXPECT_EQ(fam, solved);
        for (const auto& u : fam) EXPECT_TRUE(is_multi_grouplike(s, prime_field_ring(p), u));
        EXPECT_TRUE(std::find(fam.begin(), fam.end(), monomial_tensor(s, {0, 0})) != fam.end());
    }
    auto s3 = alphas(2, {1, 1, 1});
    EXPECT_EQ(mult_space_into_gm(s3, prime_field_ring(2)).size(), 2u);
    FpVector bad(8, 0);
    bad[0] = 1;
    bad[1] = 1;
    EXPECT_FALSE(is_multi_grouplike(s3, prime_field_ring(2), bad));
}

TEST(Morphspaces, FactorThroughQuotient) {
    const unsigned p = 3;
    auto iota = alpha_inclusion(p);
    auto pi = alpha_frobenius_quotient(p);
    ASSERT_TRUE(iota.certified());
    ASSERT_TRUE(pi.certified());
    std::vector<HopfPtr> s{share(alpha_group(p, 2)), share(alpha_group(p, 1))};
    FpVector psi = monomial_tensor(s, {p, 1});
    std::vector<HopfPtr> q{share(alpha_group(p, 1)), share(alpha_group(p, 1))};
    EXPECT_EQ(factor_through_quotient(psi, s, 0, iota, pi), monomial_tensor(q, {1, 1}));
    EXPECT_THROW(factor_through_quotient(monomial_tensor(s, {1, 1}), s, 0, iota, pi), PreconditionError);
    EXPECT_EQ(factor_through_quotient(FpVector(psi.size(), 0), s, 0, iota, pi), FpVector(q[0]->dim() * p, 0));
}

TEST(Morphspaces, RestrictionRho) {
    for (unsigned p : {3u, 5u}) {
        auto r = restriction_rho(alpha_inclusion(p), share(alpha_group(p, 1)), 1, 1);
        EXPECT_TRUE(r.injective) << p;
        EXPECT_TRUE(r.hypothesis_holds) << p;
        auto id = restriction_rho(alpha_inclusion(p), share(alpha_group(p, 1)), 0, 2);
        EXPECT_EQ(id.matrix, FpMatrix::identity(p, id.domain_dim));
    }
    auto r2 = restriction_rho(alpha_inclusion(2), share(alpha_group(2, 1)), 1, 1);
    EXPECT_FALSE(r2.hypothesis_holds);
    // y^2 (x) y^2 dies on alpha_2, so rho drops rank at p = 2
    EXPECT_FALSE(r2.injective);
    EXPECT_EQ(r2.domain_dim, 2u);
    EXPECT_EQ(r2.rank, 1u);
}

TEST(Morphspaces, OmegaPullback) {
    const unsigned p = 3;
    auto a = share(alpha_group(p, 1));
    auto sum = share(direct_sum(*a, *a));
    FpMatrix inc(p, p, p * p), sec(p, p, p * p), proj1(p, p * p, p), proj2(p, p * p, p);
    for (unsigned i = 0; i < p; ++i) {
        inc.at(i, i * p) = 1;   // first factor
        sec.at(i, i) = 1;       // second factor
        proj1.at(i * p, i) = 1;
        proj2.at(i, i) = 1;
    }
    HopfMorphism iota(a, sum, inc), section(a, sum, sec), retraction(sum, a, proj1), pi(sum, a, proj2);
    ASSERT_TRUE(iota.certified() && section.certified() && retraction.certified() && pi.certified());
    auto w = omega_pullback(iota, pi, section, retraction, 1, 1);
    EXPECT_EQ(w.mu_omega.cols(), 1u);
    EXPECT_TRUE(w.identity);
    EXPECT_TRUE(w.image_alternating);
    auto w0 = omega_pullback(iota, pi, section, retraction, 2, 0);
    EXPECT_TRUE(w0.identity);
    EXPECT_THROW(omega_pullback(iota, pi, iota, retraction, 1, 1), PreconditionError);
}

TEST(Morphspaces, MultilinearIntoFinite) {
    auto s = alphas(3, {1, 1});
    auto mu = share(mu_group(3));
    auto into_mu = multilinear_into_finite(s, mu, false);
    EXPECT_EQ(into_mu.size(), 3u);
    auto ap = share(alpha_group(3, 1));
    auto into_a = multilinear_into_finite(s, ap, false);
    EXPECT_EQ(into_a.size(), 3u);
    for (const auto& g : into_a) {
        MultilinearMorphism m{s, ap, g};
        EXPECT_TRUE(m.certified());
    }
    FpVector not_multilinear(9, 0);
    not_multilinear[1] = 1;
    EXPECT_FALSE((MultilinearMorphism{s, ap, not_multilinear}.certified()));
    EXPECT_EQ(multilinear_into_finite(s, ap, true).size(), 1u);
}

TEST(Morphspaces, TargetParsing) {
    EXPECT_EQ(parse_target("Ga", 3).kind, TargetKind::additive);
    EXPECT_EQ(parse_target("alpha:2", 3).m, 2u);
    EXPECT_EQ(parse_target("mu:3", 3).kind, TargetKind::finite);
    EXPECT_THROW(parse_target("mu:3", 2), ArgumentError);
    EXPECT_THROW(parse_target("beta", 3), ArgumentError);
    EXPECT_THROW(TargetSpec::alpha(0), ArgumentError);
}
