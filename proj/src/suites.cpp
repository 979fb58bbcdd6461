#include "hopfkit/suites.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <set>
#include <sstream>

#include "hopfkit/errors.hpp"
#include "hopfkit/frobvers.hpp"
#include "hopfkit/oracle.hpp"
#include "hopfkit/search.hpp"
#include "hopfkit/shadows.hpp"
#include "json.hpp"

namespace hopfkit {

namespace {

using Task = std::function<std::vector<Check>()>;

std::size_t binom(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::size_t out = 1;
    for (long long i = 1; i <= k; ++i) out = out * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return out;
}

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t out = 1;
    while (e--) out *= b;
    return out;
}

std::string join(const std::vector<unsigned>& v, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
    return out;
}

std::string ps(unsigned p) { return "p=" + std::to_string(p); }

Check make(std::string suite, std::string params, std::string anchor, const std::string& computed,
           const std::string& expected, Provenance prov) {
    Check c{std::move(suite), std::move(params), std::move(anchor), computed, expected, prov, CheckStatus::fail};
    c.status = computed == expected ? CheckStatus::pass : CheckStatus::fail;
    return c;
}

template <class T>
Check make(std::string suite, std::string params, std::string anchor, T computed, T expected, Provenance prov) {
    std::ostringstream a, b;
    a << std::boolalpha << computed;
    b << std::boolalpha << expected;
    return make(std::move(suite), std::move(params), std::move(anchor), a.str(), b.str(), prov);
}

// A documented disagreement with the published value: WARN when only that disagrees.
Check discrepancy(std::string suite, std::string params, std::string anchor, std::size_t computed,
                  std::size_t published) {
    Check c = make(std::move(suite), std::move(params), std::move(anchor), computed, published, Provenance::published);
    if (c.status == CheckStatus::fail) c.status = CheckStatus::warn;
    return c;
}

std::vector<HopfPtr> alphas(unsigned p, const std::vector<unsigned>& ns) {
    std::vector<HopfPtr> out;
    for (auto n : ns) out.push_back(share(alpha_group(p, n)));
    return out;
}

std::size_t ambient(unsigned p, const std::vector<unsigned>& ns) {
    std::size_t e = 0;
    for (auto n : ns) e += n;
    return ipow(p, e);
}

std::vector<unsigned> primes_or(const SuiteOptions& o, std::vector<unsigned> fallback) {
    return o.primes.empty() ? fallback : o.primes;
}

std::vector<unsigned> values_or(const std::optional<unsigned>& v, std::vector<unsigned> fallback) {
    return v ? std::vector<unsigned>{*v} : fallback;
}

std::string ring_name(unsigned p, unsigned k) {
    return k == 1 ? "F" + std::to_string(p) : "F" + std::to_string(p) + "[e]/(e^" + std::to_string(k) + ")";
}

std::vector<std::string> rings_or(const SuiteOptions& o, unsigned p, std::vector<unsigned> levels) {
    if (o.ring) return {*o.ring};
    std::vector<std::string> out;
    for (auto k : levels) out.push_back(ring_name(p, k));
    return out;
}

std::string cat(unsigned p, const std::string& kind, unsigned n = 1) {
    const std::string ps = std::to_string(p);
    if (kind == "alpha") return "alpha:" + ps + "^" + std::to_string(n);
    if (kind == "mu") return "mu:" + ps;
    if (kind == "const") return "const:Z/" + ps;
    return "trivial:" + ps;
}

HopfMorphism alpha_inclusion(unsigned p) {
    FpMatrix m(p, p, p * p);
    for (unsigned i = 0; i < p; ++i) m.at(i, i) = 1;
    return HopfMorphism(share(alpha_group(p, 1)), share(alpha_group(p, 2)), m);
}

HopfMorphism alpha_quotient(unsigned p) {
    FpMatrix m(p, p * p, p);
    for (unsigned i = 0; i < p; ++i) m.at(i * p, i) = 1;
    return HopfMorphism(share(alpha_group(p, 2)), share(alpha_group(p, 1)), m);
}

// Alternating morphisms into a finite catalog target, as multilinear morphisms.
std::vector<MultilinearMorphism> alternating_into(const std::vector<HopfPtr>& sources, const HopfPtr& target,
                                                  std::size_t cap) {
    std::vector<MultilinearMorphism> out;
    if (target->name().rfind("mu", 0) == 0) {
        for (auto& u : multilinear_into_finite(sources, target, true, cap)) out.push_back({sources, target, u});
        return out;
    }
    FpMatrix b = alt_subspace(mult_space_into(sources, TargetSpec::finite(target))).basis();
    for (std::size_t c = 0; c < b.cols(); ++c) out.push_back({sources, target, b.column(c)});
    return out;
}

std::size_t alt_count_into(const std::vector<HopfPtr>& sources, const HopfPtr& target, std::size_t cap) {
    if (target->name().rfind("mu", 0) == 0) return multilinear_into_finite(sources, target, true, cap).size() - 1;
    return alt_subspace(mult_space_into(sources, TargetSpec::finite(target))).dim();
}

std::vector<Task> suite_ex1(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3, 5}))
        tasks.push_back([p] {
            auto w = torsion_witness_tate_oort(p);
            const std::string s = "ex1", prm = ps(p);
            return std::vector<Check>{
                make(s, prm, "y^p - y is a nonzero normal form (" + w.element_normal_form + ")", w.nonzero(), true,
                     Provenance::published),
                make(s, prm, "x annihilates y^p - y in the rewrite ring", w.annihilated(), true, Provenance::published),
                make(s, prm, "with relation y^p = y the element vanishes", w.sanity_vanishes(), true,
                     Provenance::definitional)};
        });
    return tasks;
}

std::vector<Task> suite_ex2(const SuiteOptions& o) {
    std::vector<std::pair<unsigned, unsigned>> grid;
    if (o.primes.empty() && !o.n) grid = {{2, 2}, {2, 3}, {3, 2}};
    else
        for (unsigned p : primes_or(o, {2, 3}))
            for (unsigned n : values_or(o.n, {2})) grid.emplace_back(p, n);
    std::vector<Task> tasks;
    for (auto [p, n] : grid)
        tasks.push_back([p, n, cap = o.enum_cap] {
            std::vector<HopfPtr> src(n, share(alpha_group(p, 1)));
            auto fp_ring = prime_field_ring(p);
            auto family = mult_space_into_gm(src, fp_ring, cap);
            MultiGroupLikeOptions opt;
            opt.node_cap = cap;
            auto solved = solve_multi_grouplike(src, fp_ring, opt);
            auto brute = brute_force_multi_grouplike(src, cap);
            auto expo = exponential_family(src, fp_ring);
            std::sort(expo.begin(), expo.end());
            std::sort(family.begin(), family.end());
            std::sort(solved.begin(), solved.end());
            bool all_grouplike = std::all_of(family.begin(), family.end(),
                                             [&](const FpVector& u) { return is_multi_grouplike(src, fp_ring, u); });
            const std::string s = "ex2", prm = ps(p) + " n=" + std::to_string(n);
            return std::vector<Check>{
                make(s, prm, "|Mult(alpha_p^n, Gm)(F_p)| = p", family.size(), std::size_t{p}, Provenance::published),
                make(s, prm, "every element is a truncated exponential E(c y_1...y_n)", family == expo, true,
                     Provenance::published),
                make(s, prm, "structured family equals the group-like solver", family == solved, true,
                     Provenance::computed),
                make(s, prm, "structured family equals exhaustive search", family == brute, true, Provenance::computed),
                make(s, prm, "each element is multi-group-like", all_grouplike, true, Provenance::definitional)};
        });
    return tasks;
}

std::vector<Task> suite_ex3(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3}))
        for (unsigned n : values_or(o.n, {1, 2, 3}))
            for (unsigned m : values_or(o.m, {1, 2, 3}))
                for (const auto& rs : rings_or(o, p, {1, 2, 3}))
                    tasks.push_back([=, cap = o.enum_cap] {
                        auto r = ring_spec_parse(rs);
                        auto g = share(alpha_group(p, n));
                        std::size_t formula = m < n ? ipow(alpha_points(r, m), n - m) * ipow(r.element_count(), m)
                                                    : ipow(r.element_count(), n);
                        auto hs = hom_space(g, TargetSpec::alpha(m), r, cap);
                        auto oracle = enumerate_hopf_homs(g, share(alpha_group(p, m)), r, cap).size();
                        const std::string s = "ex3",
                                          prm = ps(p) + " n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                                " R=" + rs;
                        return std::vector<Check>{
                            make(s, prm, "|Hom(alpha_{p^n}, alpha_{p^m})(R)| parameterized count", hs.predicted_count,
                                 formula, Provenance::published),
                            make(s, prm, "exhaustive morphism search agrees", oracle, formula, Provenance::computed)};
                    });
    return tasks;
}

std::vector<Task> suite_ex4(const SuiteOptions& o) {
    std::vector<std::vector<unsigned>> tuples;
    if (!o.ns.empty()) tuples.push_back(o.ns);
    else
        for (unsigned r = 1; r <= 3; ++r) {
            std::vector<unsigned> t(r, 1);
            for (;;) {
                tuples.push_back(t);
                std::size_t i = r;
                while (i > 0 && t[i - 1] == 3) t[--i] = 1;
                if (i == 0) break;
                ++t[i - 1];
            }
        }
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3, 5}))
        for (const auto& ns : tuples) {
            if (o.ns.empty() && ambient(p, ns) > o.dim_cap) continue;
            tasks.push_back([=, dcap = o.dim_cap, ecap = o.enum_cap] {
                auto src = alphas(p, ns);
                std::size_t prod = 1;
                for (auto n : ns) prod *= n;
                auto space = mult_space_additive(src, dcap);
                const std::string s = "ex4", prm = ps(p) + " ns=" + join(ns);
                std::vector<Check> out{make(s, prm, "dim Mult(alpha_{p^n1} x ... x alpha_{p^nr}, Ga) = n1...nr",
                                            space.dim(), prod, Provenance::published)};
                if (ambient(p, ns) * ipow(p, space.dim()) <= ecap / 4)
                    out.push_back(make(s, prm, "exhaustive multi-primitive enumeration agrees",
                                       enumerate_multiprimitive(src, 0, ecap).size(), ipow(p, space.dim()),
                                       Provenance::computed));
                return out;
            });
        }
    // Mult(alpha_{p^n}^n, alpha_p) against the closed form with exponent (n-1)^n.
    if (o.ns.empty())
        for (unsigned p : primes_or(o, {2, 3, 5}))
            for (unsigned n : values_or(o.n, {1, 2})) {
                std::vector<unsigned> ns(n, n);
                if (ambient(p, ns) > o.dim_cap) continue;
                tasks.push_back([=, ecap = o.enum_cap] {
                    auto src = alphas(p, ns);
                    auto add = mult_space_additive(src);
                    auto into = mult_space_into(src, TargetSpec::alpha(1));
                    auto par = alpha_parameterization(add, 1);
                    const std::size_t paper = ipow(n - 1, n);
                    const std::string s = "ex4", prm = ps(p) + " Mult(alpha_{p^" + std::to_string(n) + "}^" +
                                                           std::to_string(n) + ", alpha_p)";
                    std::vector<Check> out{
                        make(s, prm, "alpha_p exponent of Mult(alpha_{p^n}^n, alpha_p) is (n-1)^n", par.constrained,
                             paper, Provenance::published),
                        discrepancy(s, prm, "Ga exponent of Mult(alpha_{p^n}^n, alpha_p): computed vs (n-1)^n",
                                    into.dim(), paper),
                        make(s, prm, "Ga exponent equals n^n - (n-1)^n", into.dim(), ipow(n, n) - paper,
                             Provenance::computed)};
                    if (ambient(p, ns) * ipow(p, into.dim()) <= ecap / 4)
                        out.push_back(make(s, prm, "exhaustive enumeration of f with f^p = 0 agrees",
                                           enumerate_multiprimitive(src, 1, ecap).size(), ipow(p, into.dim()),
                                           Provenance::computed));
                    return out;
                });
            }
    return tasks;
}

std::vector<Task> suite_ex5(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3, 5}))
        for (unsigned n : values_or(o.n, {1, 2, 3}))
            for (unsigned r : values_or(o.r, {1, 2, 3})) {
                std::vector<unsigned> ns(r, n);
                if (ambient(p, ns) > o.dim_cap) {
                    if (o.n && o.r) throw ResourceError("dimension cap " + std::to_string(o.dim_cap),
                                                        "ambient of alpha_{p^n}^r exceeds the cap");
                    continue;
                }
                tasks.push_back([=, dcap = o.dim_cap] {
                    auto src = alphas(p, ns);
                    auto mult = mult_space_additive(src, dcap);
                    const std::string s = "ex5", prm = ps(p) + " n=" + std::to_string(n) + " r=" + std::to_string(r);
                    std::vector<Check> out;
                    if (p > 2)
                        out.push_back(make(s, prm, "dim Alt(alpha_{p^n}^r, Ga) = binom(n, r)", alt_subspace(mult).dim(),
                                           binom(n, r), Provenance::published));
                    if (r < 2) return out;
                    auto sym = sym_subspace(mult);
                    const std::size_t multiset = multiset_count(n, r);
                    out.push_back(make(s, prm, "dim Sym(alpha_{p^n}^r, Ga) = multiset count binom(n+r-1, r)", sym.dim(),
                                       multiset, Provenance::computed));
                    out.push_back(make(s, prm, "Sym basis spans the orbit-sum basis of the multiset oracle",
                                       same_span(sym.basis(dcap), symmetric_multiset_basis(p, n, r)), true,
                                       Provenance::computed));
                    out.push_back(discrepancy(s, prm, "dim Sym vs the published binom(n+r-1, r-1)", sym.dim(),
                                              binom(n + r - 1, r - 1)));
                    return out;
                });
            }
    return tasks;
}

std::vector<std::string> catalog_for(unsigned p) {
    std::vector<std::string> ids{cat(p, "alpha", 1), cat(p, "mu"), cat(p, "const"), cat(p, "trivial")};
    if (p <= 3) {
        ids.push_back(cat(p, "alpha", 2));
        ids.push_back(cat(p, "alpha", 1) + "+" + cat(p, "const"));
    }
    return ids;
}

std::vector<Task> suite_ex6(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3, 5})) {
        tasks.push_back([p] {
            auto a = share(alpha_group(p, 1));
            auto dual = share(cartier_dual(*a));
            FpMatrix m(p, p, p);
            for (unsigned i = 0; i < p; ++i) m.at(i, i) = fp::inv_factorial(i, p);
            HopfMorphism iso(a, dual, m);
            return std::vector<Check>{make("ex6", ps(p), "xi_i -> y^i / i! is a Hopf isomorphism alpha_p -> alpha_p^*",
                                           iso.certified() && rank(m) == p, true, Provenance::published)};
        });
        for (const auto& id : catalog_for(p))
            for (const auto& rs : rings_or(o, p, {1, 2}))
                tasks.push_back([=, cap = o.enum_cap] {
                    auto g = share(catalog_group(id));
                    auto r = ring_spec_parse(rs);
                    auto dual = share(cartier_dual(*g));
                    const std::string s = "ex6", prm = ps(p) + " G=" + id + " R=" + rs;
                    return std::vector<Check>{
                        make(s, prm, "double dual equals G", cartier_dual(*dual).same_structure(*g), true,
                             Provenance::definitional),
                        make(s, prm, "|group-like(A (x) R)| = |G^*(R)|", group_like_points(*g, r, cap).size(),
                             enumerate_points(dual, r, cap).size(), Provenance::computed)};
                });
    }
    return tasks;
}

std::vector<Task> suite_ex7(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3, 5}))
        for (unsigned r : values_or(o.r, {2, 3}))
            tasks.push_back([=] {
                std::vector<HopfPtr> src(r, share(alpha_group(p, 1)));
                auto mult = mult_space_additive(src);
                const std::string s = "ex7", prm = ps(p) + " r=" + std::to_string(r);
                std::vector<Check> out;
                if (p > 2) {
                    out.push_back(make(s, prm, "Alt(alpha_p^r, Ga) = 0 for p > 2", alt_subspace(mult).dim(),
                                       std::size_t{0}, Provenance::published));
                    out.push_back(make(s, prm, "Sym(alpha_p^r, Ga) = Mult(alpha_p^r, Ga)", sym_subspace(mult).dim(),
                                       mult.dim(), Provenance::published));
                } else {
                    out.push_back(make(s, prm, "Alt(alpha_2^r, Ga) = Mult(alpha_2^r, Ga)", alt_subspace(mult).dim(),
                                       mult.dim(), Provenance::published));
                }
                // The universal Gm-valued pairing is symmetric.
                auto family = exponential_family(src, prime_field_ring(p));
                std::vector<std::size_t> dims(r, p), perm(r);
                for (std::size_t i = 0; i < r; ++i) perm[i] = (i + 1) % r;
                bool symmetric = std::all_of(family.begin(), family.end(),
                                             [&](const FpVector& u) { return permute_slots(u, dims, perm) == u; });
                out.push_back(make(s, prm, "E(s y_1...y_r) is symmetric in the alpha_p slots", symmetric, true,
                                   Provenance::published));
                return out;
            });
    return tasks;
}

using RingHomSet = std::set<std::vector<std::vector<std::uint32_t>>>;

std::vector<Task> suite_prop1(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3})) {
        tasks.push_back([p] {
            return std::vector<Check>{make("prop1", ps(p), "0 -> alpha_p -> alpha_{p^2} -> alpha_p -> 0 is exact",
                                           exactness_check(alpha_inclusion(p), alpha_quotient(p)).exact(), true,
                                           Provenance::definitional)};
        });
        for (const auto& hid : {cat(p, "alpha", 1), cat(p, "alpha", 2), cat(p, "const"), cat(p, "mu")})
            for (const auto& rs : rings_or(o, p, {1, 2}))
                tasks.push_back([=, cap = o.enum_cap] {
                    auto r = ring_spec_parse(rs);
                    auto h = share(catalog_group(hid));
                    auto iota = alpha_inclusion(p), pi = alpha_quotient(p);
                    auto i_r = base_change(iota, r), pi_r = base_change(pi, r);
                    auto sub = iota.source_ptr(), mid = iota.target_ptr(), quo = pi.target_ptr();
                    auto collect = [](const std::vector<RingHom>& v) {
                        RingHomSet out;
                        for (const auto& f : v) out.insert(f.images);
                        return out;
                    };
                    // Hom(-, H): 0 -> Hom(G'', H) -> Hom(G, H) -> Hom(G', H)
                    auto from_quo = enumerate_hopf_homs(quo, h, r, cap);
                    auto from_mid = enumerate_hopf_homs(mid, h, r, cap);
                    RingHomSet pulled, restricted_trivial;
                    for (const auto& f : from_quo) pulled.insert(compose_over(f, pi_r, r).images);
                    for (const auto& g : from_mid)
                        if (is_trivial(compose_over(g, i_r, r), r)) restricted_trivial.insert(g.images);
                    // Hom(H, -): 0 -> Hom(H, G') -> Hom(H, G) -> Hom(H, G'')
                    auto into_sub = enumerate_hopf_homs(h, sub, r, cap);
                    auto into_mid = enumerate_hopf_homs(h, mid, r, cap);
                    RingHomSet pushed, killed;
                    for (const auto& f : into_sub) pushed.insert(compose_over(i_r, f, r).images);
                    for (const auto& g : into_mid)
                        if (is_trivial(compose_over(pi_r, g, r), r)) killed.insert(g.images);
                    const std::string s = "prop1", prm = ps(p) + " H=" + hid + " R=" + rs;
                    return std::vector<Check>{
                        make(s, prm, "Hom(-, H): precomposition with the quotient is injective", pulled.size(),
                             collect(from_quo).size(), Provenance::published),
                        make(s, prm, "Hom(-, H): kernel of restriction equals image of the quotient",
                             restricted_trivial == pulled, true, Provenance::published),
                        make(s, prm, "Hom(H, -): composition with the inclusion is injective", pushed.size(),
                             collect(into_sub).size(), Provenance::published),
                        make(s, prm, "Hom(H, -): kernel of the quotient equals image of the inclusion", killed == pushed,
                             true, Provenance::published)};
                });
    }
    return tasks;
}

std::vector<Task> suite_prop2(const SuiteOptions& o) {
    std::vector<std::vector<unsigned>> tuples = o.ns.empty()
                                                    ? std::vector<std::vector<unsigned>>{{1}, {2, 1}, {1, 2}, {1, 1, 1},
                                                                                         {2, 2}, {2, 1, 1}}
                                                    : std::vector<std::vector<unsigned>>{o.ns};
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3}))
        for (const auto& ns : tuples)
            tasks.push_back([=] {
                auto src = alphas(p, ns);
                auto v = curry_consistency(src);
                const std::string s = "prop2", prm = ps(p) + " ns=" + join(ns);
                return std::vector<Check>{
                    make(s, prm, "iterated currying and the direct solve give the same space", v.consistent(), true,
                         Provenance::published),
                    make(s, prm, "dimension of the direct solve", v.direct_dim, mult_space_direct(src).dim(),
                         Provenance::computed)};
            });
    return tasks;
}

std::vector<Task> suite_prop5(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {3, 5}))
        for (unsigned r : values_or(o.r, {2, 3}))
            tasks.push_back([=, cap = o.enum_cap] {
                std::vector<HopfPtr> src(r, share(alpha_group(p, 1)));
                auto mult = mult_space_additive(src);
                const std::string s = "prop5", prm = ps(p) + " r=" + std::to_string(r);
                std::vector<Check> out{make(s, prm, "hypothesis: every multilinear map into Ga is symmetric",
                                            sym_subspace(mult).dim(), mult.dim(), Provenance::computed)};
                if (p == 2) return out;
                out.push_back(make(s, prm, "Alt(alpha_p^r, Ga) = 0", alt_subspace(mult).dim(), std::size_t{0},
                                   Provenance::published));
                for (const auto& hid : {cat(p, "alpha", 1), cat(p, "const"), cat(p, "mu")})
                    out.push_back(make(s, prm, "Alt(alpha_p^r, " + hid + ") = 0",
                                       alt_count_into(src, share(catalog_group(hid)), cap), std::size_t{0},
                                       Provenance::published));
                return out;
            });
    return tasks;
}

std::vector<Task> suite_prop7(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {3, 5}))
        tasks.push_back([=] {
            const std::string s = "prop7", prm = ps(p);
            auto big = share(alpha_group(p, 2));
            auto a = alpha_group(p, 1);
            auto split = share(direct_sum(a, a));
            std::vector<Check> out;
            out.push_back(make(s, prm, "Alt(alpha_{p^2}^3, Ga) = 0, matching binom(2, 3)",
                               alt_subspace(mult_space_additive({big, big, big})).dim(), binom(2, 3),
                               Provenance::published));
            out.push_back(make(s, prm, "Alt((alpha_p + alpha_p)^3, Ga) = 0",
                               alt_subspace(mult_space_additive({split, split, split})).dim(), std::size_t{0},
                               Provenance::published));
            auto ap = share(a);
            out.push_back(make(s, prm, "Alt(alpha_p^2, Ga) = 0 for the group of order p",
                               alt_subspace(mult_space_additive({ap, ap})).dim(), std::size_t{0}, Provenance::published));
            return out;
        });
    return tasks;
}

std::vector<Task> suite_prop12(const SuiteOptions& o) {
    std::vector<std::pair<unsigned, unsigned>> grid;
    if (o.primes.empty() && !o.n) grid = {{3, 1}, {3, 2}, {5, 2}};
    else
        for (unsigned p : primes_or(o, {3, 5}))
            for (unsigned n : values_or(o.n, {2})) grid.emplace_back(p, n);
    std::vector<Task> tasks;
    for (auto [p, n] : grid)
        tasks.push_back([p, n, cap = o.enum_cap] {
            auto rep = prop12_pipeline(n, p, cap);
            std::vector<Check> out;
            for (const auto& st : rep.stages) {
                Check c = make("prop12", ps(p) + " n=" + std::to_string(n), st.name + " (" + st.detail + ")", st.pass,
                               true, Provenance::published);
                out.push_back(c);
            }
            return out;
        });
    return tasks;
}

std::vector<HopfPtr> catalog_targets(unsigned p) {
    return {share(alpha_group(p, 1)), share(alpha_group(p, 2)), share(constant_group(p)), share(mu_group(p))};
}

std::vector<Task> suite_prop13(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {3, 5}))
        tasks.push_back([=, cap = o.enum_cap] {
            auto g = share(alpha_group(p, 1));
            const std::string s = "prop13", prm = ps(p) + " G=alpha_p n=2 m=3";
            auto vanishes = [&](unsigned arity) {
                std::vector<HopfPtr> src(arity, g);
                if (alt_subspace(mult_space_additive(src)).dim() != 0) return false;
                for (const auto& h : catalog_targets(p))
                    if (alt_count_into(src, h, cap) != 0) return false;
                return true;
            };
            bool premise = vanishes(2);
            return std::vector<Check>{
                make(s, prm, "premise: Alt(G^2, H) = 0 for Ga and every catalog target", premise, true,
                     Provenance::computed),
                make(s, prm, "conclusion: Alt(G^3, H) = 0 for Ga and every catalog target", vanishes(3), premise,
                     Provenance::published)};
        });
    return tasks;
}

std::vector<Task> suite_cor1(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {3, 5})) {
        tasks.push_back([=] {
            auto a = alpha_group(p, 1);
            auto ap = share(a);
            auto split = share(direct_sum(a, a));
            const std::string s = "cor1", prm = ps(p) + " G=H=alpha_p";
            auto alt = alt_subspace(mult_space_additive({split, split})).dim();
            auto mult = mult_space_additive({ap, ap}).dim();
            return std::vector<Check>{make(s, prm, "dim Alt((G + H)^2, Ga) = dim Mult(G x H, Ga)", alt, mult,
                                           Provenance::published),
                                      make(s, prm, "dim Mult(alpha_p x alpha_p, Ga) = 1", mult, std::size_t{1},
                                           Provenance::published)};
        });
        if (ipow(p * p * p, 3) <= o.dim_cap)
            tasks.push_back([=] {
                auto g = alpha_group(p, 2), h = alpha_group(p, 1);
                auto gh = share(direct_sum(g, h));
                auto gp = share(g), hp = share(h);
                const std::string s = "cor1", prm = ps(p) + " G=alpha_{p^2} H=alpha_p";
                auto lhs = alt_subspace(mult_space_additive({gh, gh, gh})).dim();
                auto rhs = block_alt_subspace(mult_space_additive({gp, gp, hp}), {{0, 1}, {2}}).dim();
                return std::vector<Check>{make(s, prm, "dim Alt((G + H)^3, Ga) = dim Alt(G^2 x H, Ga)", lhs, rhs,
                                               Provenance::published)};
            });
    }
    return tasks;
}

std::vector<Task> suite_prop9(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {3}))
        for (auto [n1, n2] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 1}})
            tasks.push_back([=] {
                auto g1 = share(alpha_group(p, n1)), g2 = share(alpha_group(p, n2));
                auto bi = block_alt_subspace(mult_space_additive({g1, g1, g2}), {{0, 1}, {2}}).dim();
                auto a1 = alt_subspace(mult_space_additive({g1, g1})).dim();
                auto a2 = mult_space_additive({g2}).dim();
                return std::vector<Check>{
                    make("cor1", ps(p) + " G1=alpha_{p^" + std::to_string(n1) + "} G2=alpha_{p^" + std::to_string(n2) +
                                      "} r1=2 r2=1",
                         "bi-alternating dim = dim Alt(G1^2, Ga) * dim Alt(G2, Ga)", bi, a1 * a2, Provenance::computed)};
            });
    return tasks;
}

std::vector<Task> suite_lem7(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3})) {
        tasks.push_back([p] {
            auto rho = restriction_rho(alpha_inclusion(p), share(alpha_group(p, 1)), 1, 1);
            const std::string s = "lem7", prm = ps(p) + " G=alpha_{p^2} G'=alpha_p m'=m''=1";
            return std::vector<Check>{
                // At p = 2 the quotient has Alt(alpha_2^2, Ga) = Mult, so the hypothesis must fail.
                make(s, prm, "hypothesis: Alt(G''^2, H) = 0 at the checked level", rho.hypothesis_holds, p > 2,
                     Provenance::computed),
                make(s, prm, "(a) restriction rho is injective (rank " + std::to_string(rho.rank) + " of " +
                                 std::to_string(rho.domain_dim) + ")",
                     rho.injective, true, Provenance::published)};
        });
        if (p > 2) {
            tasks.push_back([p] {
                // (b) restricted alternating maps vanish on G' in the G slot and factor through the quotient.
                auto iota = alpha_inclusion(p), pi = alpha_quotient(p);
                auto big = iota.target_ptr(), small = iota.source_ptr();
                FpMatrix alt = alt_subspace(mult_space_additive({big, big})).basis();
                std::vector<std::size_t> dims{big->dim(), big->dim()};
                std::vector<HopfPtr> restricted_sources{small, big};
                std::vector<std::size_t> rdims{small->dim(), big->dim()};
                bool all = true;
                for (std::size_t c = 0; c < alt.cols(); ++c) {
                    FpVector psi = apply_slot_map(alt.column(c), dims, 0, iota.coordinate_map());
                    FpVector on_sub = apply_slot_map(psi, rdims, 1, iota.coordinate_map());
                    if (std::any_of(on_sub.begin(), on_sub.end(), [](Residue x) { return x != 0; })) {
                        all = false;
                        continue;
                    }
                    FpVector factored = factor_through_quotient(psi, restricted_sources, 1, iota, pi);
                    std::vector<std::size_t> fdims{small->dim(), pi.target().dim()};
                    all = all && apply_slot_map(factored, fdims, 1, pi.coordinate_map()) == psi;
                }
                return std::vector<Check>{make("lem7", ps(p) + " G=alpha_{p^2} G'=alpha_p",
                                               "(b) the image of rho factors through the quotient in the G slot", all,
                                               true, Provenance::published)};
            });
            tasks.push_back([p] {
                auto a = share(alpha_group(p, 1));
                auto sum = share(direct_sum(*a, *a));
                FpMatrix inc(p, p, p * p), sec(p, p, p * p), proj1(p, p * p, p), proj2(p, p * p, p);
                for (unsigned i = 0; i < p; ++i) {
                    inc.at(i, i * p) = 1;
                    sec.at(i, i) = 1;
                    proj1.at(i * p, i) = 1;
                    proj2.at(i, i) = 1;
                }
                HopfMorphism iota(a, sum, inc), section(a, sum, sec), retraction(sum, a, proj1), pi(sum, a, proj2);
                auto w = omega_pullback(iota, pi, section, retraction, 1, 1);
                const std::string s = "lem7", prm = ps(p) + " G=alpha_p+alpha_p m'=m''=1";
                return std::vector<Check>{
                    make(s, prm, "(d) mu o omega^* is the identity", w.identity, true, Provenance::published),
                    make(s, prm, "omega^* lands in the alternating subspace", w.image_alternating, true,
                         Provenance::definitional)};
            });
        }
    }
    return tasks;
}

std::vector<Task> suite_lem11(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3}))
        for (unsigned k : values_or(o.n, {1, 2, 3}))
            tasks.push_back([=] {
                auto dual = share(cartier_dual(alpha_group(p, k)));
                auto coker = share(coker_verschiebung(dual));
                bool iso = hopf_isomorphism_search(coker, share(alpha_group(p, 1))).has_value();
                return std::vector<Check>{make("lem11", ps(p) + " k=" + std::to_string(k),
                                               "coker(V) on alpha_{p^k}^* is alpha_p", iso, true,
                                               Provenance::published)};
            });
    return tasks;
}

std::vector<Task> suite_lem12(const SuiteOptions& o) {
    std::vector<std::vector<unsigned>> tuples =
        o.ns.empty() ? std::vector<std::vector<unsigned>>{{1}, {2}, {1, 1}, {1, 2}, {2, 1}, {2, 2}}
                     : std::vector<std::vector<unsigned>>{o.ns};
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {3}))
        for (const auto& ns : tuples)
            for (const char* kind : {"alpha1", "alpha2", "const", "mu"})
                tasks.push_back([=, cap = o.enum_cap] {
                    auto src = alphas(p, ns);
                    std::string k = kind;
                    HopfPtr h = k == "alpha1"   ? share(alpha_group(p, 1))
                                : k == "alpha2" ? share(alpha_group(p, 2))
                                : k == "const"  ? share(constant_group(p))
                                                : share(mu_group(p));
                    std::vector<FpVector> elems;
                    if (k == "mu") elems = multilinear_into_finite(src, h, false, cap);
                    else {
                        FpMatrix b = mult_space_into(src, TargetSpec::finite(h)).basis();
                        for (std::size_t c = 0; c < b.cols(); ++c) elems.push_back(b.column(c));
                    }
                    std::size_t commuting = 0;
                    for (const auto& e : elems) commuting += verschiebung_annihilation_check({src, h, e}).square_commutes;
                    return std::vector<Check>{make("lem12", ps(p) + " ns=" + join(ns) + " H=" + h->name(),
                                                   "V square commutes for all " + std::to_string(elems.size()) +
                                                       " elements",
                                                   commuting, elems.size(), Provenance::published)};
                });
    return tasks;
}

std::vector<Task> suite_lem13(const SuiteOptions& o) {
    std::vector<Task> tasks;
    for (unsigned p : primes_or(o, {2, 3, 5})) {
        tasks.push_back([p] {
            std::vector<Check> out;
            for (unsigned n = 1; n <= 3; ++n) {
                auto g = share(alpha_group(p, n));
                auto v = verschiebung(g);
                out.push_back(make("lem13", ps(p) + " n=" + std::to_string(n), "V = 0 on alpha_{p^n}",
                                   v.coordinate_map() == HopfMorphism::zero(v.source_ptr(), v.target_ptr()).coordinate_map(),
                                   true, Provenance::published));
            }
            for (const auto& id : catalog_for(p))
                out.push_back(make("lem13", ps(p) + " G=" + id, "V o F = [p]",
                                   vf_identity_check(share(catalog_group(id))).holds(), true, Provenance::published));
            return out;
        });
        if (p > 2)
            tasks.push_back([p, cap = o.enum_cap] {
                const unsigned n = 2;
                std::vector<HopfPtr> src(n, share(alpha_group(p, n)));
                std::vector<Check> out;
                for (const auto& h : catalog_targets(p)) {
                    auto maps = alternating_into(src, h, cap);
                    std::size_t killed = 0;
                    for (const auto& f : maps) killed += verschiebung_annihilation_check(f).annihilated;
                    out.push_back(make("lem13", ps(p) + " n=2 H=" + h->name(),
                                       "V annihilates all " + std::to_string(maps.size()) + " alternating maps", killed,
                                       maps.size(), Provenance::published));
                }
                return out;
            });
    }
    return tasks;
}

const std::vector<std::pair<std::string, std::function<std::vector<Task>(const SuiteOptions&)>>>& registry() {
    static const std::vector<std::pair<std::string, std::function<std::vector<Task>(const SuiteOptions&)>>> r{
        {"ex1", suite_ex1},       {"ex2", suite_ex2},     {"ex3", suite_ex3},   {"ex4", suite_ex4},
        {"ex5", suite_ex5},       {"ex6", suite_ex6},     {"ex7", suite_ex7},   {"prop1", suite_prop1},
        {"prop2", suite_prop2},   {"prop5", suite_prop5}, {"prop7", suite_prop7}, {"prop12", suite_prop12},
        {"prop13", suite_prop13}, {"cor1", suite_cor1},   {"lem7", suite_lem7}, {"lem11", suite_lem11},
        {"lem12", suite_lem12},   {"lem13", suite_lem13}};
    return r;
}

}  // namespace

const std::vector<std::string>& suite_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& [id, fn] : registry()) out.push_back(id);
        return out;
    }();
    return ids;
}

bool known_suite(const std::string& id) {
    return id == "all" || std::find(suite_ids().begin(), suite_ids().end(), id) != suite_ids().end();
}

std::vector<Check> run_suite(const std::string& id, const SuiteOptions& options) {
    if (!known_suite(id)) throw ArgumentError("unknown suite '" + id + "'");
    if (options.dim_cap == 0 || options.enum_cap == 0) throw ArgumentError("caps must be positive");
    for (unsigned p : options.primes)
        if (!is_prime(p)) throw ArgumentError("p = " + std::to_string(p) + " is not prime");
    std::vector<Task> tasks;
    for (const auto& [name, fn] : registry()) {
        if (id != "all" && id != name) continue;
        auto t = fn(options);
        // The bi-alternating instances ride along with the cor1 suite.
        if (name == "cor1") {
            auto extra = suite_prop9(options);
            t.insert(t.end(), extra.begin(), extra.end());
        }
        tasks.insert(tasks.end(), t.begin(), t.end());
    }
    std::vector<std::vector<Check>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        try {
            results[i] = tasks[i]();
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<Check> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    return out;
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "PASS";
        case CheckStatus::warn: return "WARN";
        case CheckStatus::fail: return "FAIL";
    }
    return "FAIL";
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::published: return "published";
        case Provenance::computed: return "computed";
        case Provenance::definitional: return "definitional";
    }
    return "computed";
}

bool any_failure(const std::vector<Check>& checks) {
    return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::fail; });
}

std::string format_report(const std::vector<Check>& checks, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : checks)
            arr.push_back({{"status", status_name(c.status)},
                           {"suite", c.suite},
                           {"params", c.params},
                           {"anchor", c.anchor},
                           {"computed", c.computed},
                           {"expected", c.expected},
                           {"provenance", provenance_name(c.provenance)}});
        out << arr.dump(2) << "\n";
        return out.str();
    }
    if (format == ReportFormat::csv) {
        auto quote = [](const std::string& s) {
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        };
        out << "status,suite,params,anchor,computed,expected,provenance\n";
        for (const auto& c : checks)
            out << status_name(c.status) << ',' << c.suite << ',' << quote(c.params) << ',' << quote(c.anchor) << ','
                << quote(c.computed) << ',' << quote(c.expected) << ',' << provenance_name(c.provenance) << "\n";
        return out.str();
    }
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& c : checks) {
        ++counts[static_cast<int>(c.status)];
        out << status_name(c.status) << "  " << c.suite << "  [" << c.params << "]  " << c.anchor
            << "  computed=" << c.computed << " expected=" << c.expected << "  (" << provenance_name(c.provenance)
            << ")\n";
    }
    out << counts[0] << " passed, " << counts[1] << " warned, " << counts[2] << " failed\n";
    return out.str();
}

}  // namespace hopfkit
