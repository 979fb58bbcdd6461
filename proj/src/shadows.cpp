#include "hopfkit/shadows.hpp"

#include <algorithm>
#include <numeric>

#include "hopfkit/frobvers.hpp"

namespace hopfkit {

namespace {

std::vector<std::size_t> dims_of(const std::vector<HopfPtr>& sources) {
    std::vector<std::size_t> d;
    for (const auto& s : sources) d.push_back(s->dim());
    return d;
}

std::size_t checked_size(const std::vector<std::size_t>& dims, std::size_t cap) {
    std::size_t n = 1;
    for (auto d : dims) {
        if (n > cap / d) throw ResourceError("dimension cap " + std::to_string(cap), "ambient tensor space too large");
        n *= d;
    }
    return n;
}

FpMatrix comul_matrix(const HopfAlgebra& h) {
    const std::size_t d = h.dim();
    FpMatrix m(h.p(), d * d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& t : h.comul_terms(i)) m.at(t.j * d + t.k, i) = t.c;
    return m;
}

FpMatrix trivial_map(const std::vector<HopfPtr>& sources, const HopfAlgebra& target) {
    FpVector unit = tensor_unit(sources);
    FpMatrix out(target.p(), unit.size(), target.dim());
    for (std::size_t j = 0; j < target.dim(); ++j)
        for (std::size_t t = 0; t < unit.size(); ++t) out.at(t, j) = fp::mul(unit[t], target.counit()[j], target.p());
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> slot_pairs(std::size_t r) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) out.emplace_back(i, j);
    return out;
}

// D_ij(Phi b) = eps(b) 1 for every pair, column by column.
bool diagonals_trivial(const std::vector<HopfPtr>& sources, const HopfAlgebra& target, const FpMatrix& phi) {
    const unsigned p = target.p();
    for (auto [i, j] : slot_pairs(sources.size())) {
        std::vector<HopfPtr> rest;
        for (std::size_t s = 0; s < sources.size(); ++s)
            if (s != j) rest.push_back(sources[s]);
        FpVector unit = tensor_unit(rest);
        for (std::size_t c = 0; c < phi.cols(); ++c) {
            FpVector d = diagonal_restriction(phi.column(c), sources, i, j);
            for (std::size_t t = 0; t < d.size(); ++t)
                if (d[t] != fp::mul(unit[t], target.counit()[c], p)) return false;
        }
    }
    return true;
}

bool permutation_invariant(const std::vector<HopfPtr>& sources, const FpMatrix& phi) {
    auto dims = dims_of(sources);
    for (std::size_t t = 0; t + 1 < sources.size(); ++t) {
        std::vector<std::size_t> perm(sources.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[t], perm[t + 1]);
        for (std::size_t c = 0; c < phi.cols(); ++c)
            if (permute_slots(phi.column(c), dims, perm) != phi.column(c)) return false;
    }
    return true;
}

std::vector<std::vector<std::size_t>> adjacent_transpositions(std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t t = 0; t + 1 < r; ++t) {
        std::vector<std::size_t> perm(r);
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[t], perm[t + 1]);
        out.push_back(perm);
    }
    return out;
}

}  // namespace

bool UniversalPairing::certified() const {
    return !slot_certified.empty() && std::all_of(slot_certified.begin(), slot_certified.end(), [](bool b) { return b; });
}

UniversalPairing universal_pairing(unsigned p, unsigned n, unsigned k, std::size_t cap) {
    if (n < 2 || k < 1) throw ArgumentError("universal pairing needs arity >= 2 and level >= 1");
    UniversalPairing u;
    u.p = p;
    u.arity = n;
    u.level = k;
    u.slots.push_back(share(alpha_group(p, k, cap)));
    auto ap = share(alpha_group(p, 1));
    for (unsigned i = 0; i < n; ++i) u.slots.push_back(ap);
    auto dims = dims_of(u.slots);
    u.element.assign(checked_size(dims, cap), 0);
    for (unsigned i = 0; i < p; ++i) {
        if (i >= dims[0]) break;
        u.element[kron_index(dims, std::vector<std::size_t>(dims.size(), i))] = fp::inv_factorial(i, p);
    }
    auto field = prime_field_ring(p);
    for (std::size_t s = 0; s < u.slots.size(); ++s)
        u.slot_certified.push_back(is_grouplike_in_slot(u.slots, field, u.element, s));
    return u;
}

ShadowPower tensor_shadow(unsigned p, unsigned n, unsigned k, std::size_t cap) {
    UniversalPairing u = universal_pairing(p, n, k, cap);
    ShadowPower s;
    s.kind = ShadowKind::tensor;
    s.p = p;
    s.arity = n;
    s.level = k;
    s.sources.assign(u.slots.begin() + 1, u.slots.end());
    s.carrier = share(cartier_dual(*u.slots[0]));
    // xi_i -> the coefficient of s^i in the pairing.
    auto dims = dims_of(u.slots);
    const std::size_t level_dim = dims[0], rest = u.element.size() / level_dim;
    s.universal_map = FpMatrix(p, rest, level_dim);
    for (std::size_t i = 0; i < level_dim; ++i)
        for (std::size_t t = 0; t < rest; ++t) s.universal_map.at(t, i) = u.element[i * rest + t];
    s.carrier_valid = verify_hopf_axioms(*s.carrier).all_pass();
    s.map_certified = u.certified() && is_multilinear_map(s.sources, *s.carrier, s.universal_map);
    return s;
}

FactorizationReport tensor_universal_property(const ShadowPower& shadow) {
    const unsigned p = shadow.p;
    FactorizationReport rep;
    FpMatrix prim = primitive_elements(*shadow.carrier);
    FpMatrix image = shadow.universal_map * prim;
    rep.unique = prim.cols() == 0 || rank(image) == prim.cols();
    rep.all_factor = true;
    for (unsigned kp = 1; kp <= shadow.level; ++kp) {
        unsigned long long e = 1;
        for (unsigned i = 0; i < kp; ++i) e *= p;
        FpMatrix basis = mult_space_into(shadow.sources, TargetSpec::alpha(kp)).basis();
        for (std::size_t c = 0; c < basis.cols(); ++c) {
            ++rep.checked;
            auto coeff = prim.cols() ? solve(image, basis.column(c)) : std::nullopt;
            if (!coeff) {
                rep.all_factor = false;
                continue;
            }
            FpVector z = prim.apply(*coeff);
            FpVector zp = shadow.carrier->algebra().power(z, e);
            if (std::any_of(zp.begin(), zp.end(), [](Residue x) { return x != 0; })) rep.all_factor = false;
        }
    }
    return rep;
}

HopfMorphism induced_carrier_action(const ShadowPower& shadow, const std::vector<std::size_t>& perm) {
    const FpMatrix& phi = shadow.universal_map;
    auto dims = dims_of(shadow.sources);
    std::vector<FpVector> cols;
    for (std::size_t c = 0; c < phi.cols(); ++c) cols.push_back(permute_slots(phi.column(c), dims, perm));
    FpMatrix permuted = FpMatrix::from_columns(shadow.p, phi.rows(), cols);
    // The universal map need not be injective; prefer the identity when it solves.
    if (permuted == phi) return HopfMorphism::identity(shadow.carrier);
    auto gamma = solve_columns(phi, permuted);
    if (!gamma) throw ValidationError("slot permutation does not descend to the carrier");
    HopfMorphism out(shadow.carrier, shadow.carrier, *gamma);
    if (!out.certified()) throw ValidationError("induced carrier map is not a homomorphism");
    return out;
}

HopfMorphism largest_quotient_projection(const HopfPtr& w, const std::vector<HopfMorphism>& action) {
    for (const auto& g : action) {
        if (!g.certified() || !g.source().same_structure(*w) || !g.target().same_structure(*w) ||
            !inverse(g.coordinate_map()))
            throw ArgumentError("action elements must be certified automorphisms of the group");
    }
    if (action.empty()) return HopfMorphism::identity(w);
    const unsigned p = w->p();
    const std::size_t d = w->dim(), m = action.size();
    std::vector<FpMatrix> diffs;
    for (const auto& g : action) diffs.push_back(convolve(*w, *w, g.coordinate_map(), w->antipode()));
    HopfAlgebra power = *w;
    for (std::size_t t = 1; t < m; ++t) power = direct_sum(power, *w);
    FpMatrix delta = comul_matrix(*w);
    FpMatrix psi(p, power.dim(), d);
    for (std::size_t j = 0; j < d; ++j) {
        FpVector v = w->algebra().basis_vector(j);
        std::vector<std::size_t> dims{d};
        for (std::size_t t = 1; t < m; ++t) {
            v = apply_slot_map(v, dims, t - 1, delta);
            dims.back() = d;
            dims.push_back(d);
        }
        std::vector<const FpMatrix*> maps;
        for (const auto& f : diffs) maps.push_back(&f);
        psi.set_column(j, apply_slot_maps(v, dims, maps));
    }
    HopfMorphism combined(share(std::move(power)), w, psi);
    return cokernel_projection(combined);
}

HopfAlgebra largest_quotient(const HopfPtr& w, const std::vector<HopfMorphism>& action) {
    return largest_quotient_projection(w, action).target();
}

ShadowPower sym_shadow(unsigned p, unsigned n, unsigned k, std::size_t cap) {
    ShadowPower t = tensor_shadow(p, n, k, cap);
    std::vector<HopfMorphism> action;
    for (const auto& perm : adjacent_transpositions(n)) action.push_back(induced_carrier_action(t, perm));
    HopfMorphism proj = largest_quotient_projection(t.carrier, action);
    ShadowPower s = t;
    s.kind = ShadowKind::sym;
    s.carrier = proj.target_ptr();
    s.universal_map = t.universal_map * proj.coordinate_map();
    s.carrier_valid = verify_hopf_axioms(*s.carrier).all_pass();
    s.map_certified = is_multilinear_map(s.sources, *s.carrier, s.universal_map) &&
                      permutation_invariant(s.sources, s.universal_map);
    return s;
}

ShadowPower alt_shadow(unsigned p, unsigned n, unsigned k, std::size_t cap) {
    ShadowPower t = tensor_shadow(p, n, k, cap);
    const HopfAlgebra& w = *t.carrier;
    const std::size_t d = w.dim();
    // Equalizer of the diagonal restrictions and the trivial map: a subalgebra.
    std::vector<FpVector> cond_cols(d);
    for (auto [i, j] : slot_pairs(n)) {
        std::vector<HopfPtr> rest;
        for (std::size_t s = 0; s < n; ++s)
            if (s != j) rest.push_back(t.sources[s]);
        FpVector unit = tensor_unit(rest);
        for (std::size_t b = 0; b < d; ++b) {
            FpVector diag = diagonal_restriction(t.universal_map.column(b), t.sources, i, j);
            for (std::size_t q = 0; q < diag.size(); ++q)
                diag[q] = fp::sub(diag[q], fp::mul(unit[q], w.counit()[b], p), p);
            cond_cols[b].insert(cond_cols[b].end(), diag.begin(), diag.end());
        }
    }
    FpMatrix v = cond_cols.front().empty()
                     ? FpMatrix::identity(p, d)
                     : kernel_basis(FpMatrix::from_columns(p, cond_cols.front().size(), cond_cols));
    // Largest subcoalgebra inside: b with Delta b in V (x) V, iterated.
    const FpMatrix delta = comul_matrix(w);
    for (;;) {
        if (v.cols() == 0) break;
        FpMatrix ve = column_echelon(v);
        auto lead = leading_rows(ve);
        // Reduction modulo V: kill the V-component using the echelon form.
        FpMatrix reduce = FpMatrix::identity(p, d) - ve * FpMatrix::identity(p, d).select_rows(lead);
        std::vector<FpVector> cols;
        for (std::size_t c = 0; c < v.cols(); ++c) {
            FpVector dv = delta.apply(v.column(c));
            FpVector left = apply_slot_map(dv, {d, d}, 0, reduce);
            FpVector right = apply_slot_map(dv, {d, d}, 1, reduce);
            left.insert(left.end(), right.begin(), right.end());
            cols.push_back(std::move(left));
        }
        FpMatrix ker = kernel_basis(FpMatrix::from_columns(p, 2 * d * d, cols));
        if (ker.cols() == v.cols()) break;
        v = ker.cols() ? column_echelon(v * ker) : FpMatrix(p, d, 0);
    }
    if (v.cols() == 0) throw ValidationError("alternating core lost the unit");
    SubHopfAlgebra sub = sub_hopf_algebra(w, v);
    ShadowPower s = t;
    s.kind = ShadowKind::alt;
    s.carrier = share(sub.algebra.renamed("alt(" + w.name() + ")"));
    s.universal_map = t.universal_map * sub.inclusion;
    s.carrier_valid = verify_hopf_axioms(*s.carrier).all_pass();
    s.map_certified = is_multilinear_map(s.sources, *s.carrier, s.universal_map) &&
                      diagonals_trivial(s.sources, *s.carrier, s.universal_map);
    return s;
}

MooreMap moore_alt_map(unsigned p, unsigned n, std::size_t cap) {
    if (n < 1) throw ArgumentError("Moore map needs n >= 1");
    auto g = share(alpha_group(p, n, cap));
    std::vector<HopfPtr> sources(n, g);
    auto dims = dims_of(sources);
    FpVector f(checked_size(dims, cap), 0);
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::size_t> pw(n, 1);
    for (unsigned i = 1; i < n; ++i) pw[i] = pw[i - 1] * p;
    do {
        int sign = 1;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (sigma[a] > sigma[b]) sign = -sign;
        std::vector<std::size_t> exps(n);
        for (std::size_t j = 0; j < n; ++j) exps[j] = pw[sigma[j]];
        auto& slot = f[kron_index(dims, exps)];
        slot = fp::add(slot, sign > 0 ? 1 : fp::neg(1, p), p);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    MooreMap out;
    out.morphism = {sources, share(alpha_group(p, 1)), f};
    FpMatrix phi = out.morphism.coordinate_map();
    out.multilinear = is_multilinear_map(sources, *out.morphism.target, phi);
    out.alternating = true;
    for (auto [i, j] : slot_pairs(n)) {
        FpVector dij = diagonal_restriction(f, sources, i, j);
        if (std::any_of(dij.begin(), dij.end(), [](Residue x) { return x != 0; })) out.alternating = false;
    }
    FpVector fp_ = tensor_power(sources, f, p);
    out.p_nilpotent = std::all_of(fp_.begin(), fp_.end(), [](Residue x) { return x == 0; });
    return out;
}

VerschiebungVerdict verschiebung_annihilation_check(const MultilinearMorphism& phi) {
    FpMatrix map = phi.coordinate_map();
    if (!is_multilinear_map(phi.sources, *phi.target, map))
        throw ArgumentError("verschiebung check needs a certified multilinear morphism");
    const auto& sources = phi.sources;
    auto dims = dims_of(sources);
    FpMatrix vh = verschiebung(phi.target).coordinate_map();
    FpMatrix v1 = verschiebung(sources[0]).coordinate_map();
    std::vector<FpMatrix> frob;
    for (const auto& s : sources) frob.push_back(frobenius(s).coordinate_map());
    std::vector<const FpMatrix*> lhs_maps(sources.size(), nullptr), rhs_maps(sources.size(), nullptr);
    lhs_maps[0] = &v1;
    for (std::size_t s = 1; s < sources.size(); ++s) rhs_maps[s] = &frob[s];
    FpMatrix after_v = map * vh;
    VerschiebungVerdict out;
    out.square_commutes = true;
    for (std::size_t j = 0; j < map.cols(); ++j)
        if (apply_slot_maps(map.column(j), dims, lhs_maps) != apply_slot_maps(after_v.column(j), dims, rhs_maps))
            out.square_commutes = false;
    out.annihilated = after_v == trivial_map(sources, *phi.target);
    return out;
}

bool Prop12Report::all_pass() const {
    return !stages.empty() && std::all_of(stages.begin(), stages.end(), [](const PipelineStage& s) { return s.pass; });
}

Prop12Report prop12_pipeline(unsigned n, unsigned p, std::size_t cap) {
    require_supported_prime(p);
    if (p % 2 == 0) throw PreconditionError("the alternating-power pipeline requires p odd (got p = 2)");
    if (n < 1) throw ArgumentError("n must be at least 1");
    Prop12Report rep;
    rep.p = p;
    rep.n = n;
    auto g = share(alpha_group(p, n));
    std::vector<HopfPtr> sources(n, g);
    auto ap = share(alpha_group(p, 1));

    std::size_t alt_dim = alt_subspace(mult_space_additive(sources)).dim();
    rep.stages.push_back({"alternating maps into Ga form a line", alt_dim == 1, "dim = " + std::to_string(alt_dim)});

    bool coker_ok = true;
    std::string coker_detail;
    for (unsigned k = 1; k <= n; ++k) {
        auto coker = share(coker_verschiebung(share(cartier_dual(alpha_group(p, k)))));
        bool iso = hopf_isomorphism_search(coker, ap).has_value();
        coker_ok = coker_ok && iso;
        coker_detail += (k > 1 ? ", " : "") + std::string("k=") + std::to_string(k) + (iso ? " alpha_p" : " other");
    }
    rep.stages.push_back({"Verschiebung cokernels of dual levels are alpha_p", coker_ok, coker_detail});

    std::vector<HopfPtr> targets{ap, share(alpha_group(p, 2)), share(mu_group(p)), share(constant_group(p))};
    bool annihilated = true;
    std::size_t checked = 0;
    for (const auto& h : targets)
        for (const auto& gen : multilinear_into_finite(sources, h, true, cap)) {
            ++checked;
            if (!verschiebung_annihilation_check({sources, h, gen}).annihilated) annihilated = false;
        }
    rep.stages.push_back(
        {"V kills every alternating map into the catalog targets", annihilated, std::to_string(checked) + " maps"});

    MooreMap moore = moore_alt_map(p, n);
    FpMatrix lambda = moore.morphism.coordinate_map();
    bool bijective = moore.certified();
    std::string detail;
    for (const auto& h : {targets[0], targets[1]}) {
        auto homs = hom_space(ap, TargetSpec::finite(h), prime_field_ring(p), cap).points;
        std::vector<FpVector> images;
        for (const auto& z : homs) images.push_back(lambda.apply(z));
        std::sort(images.begin(), images.end());
        bool injective = std::adjacent_find(images.begin(), images.end()) == images.end();
        auto alt = multilinear_into_finite(sources, h, true, cap);
        bijective = bijective && injective && images == alt;
        detail += (detail.empty() ? "" : "; ") + h->name() + ": " + std::to_string(homs.size()) + " -> " +
                  std::to_string(alt.size());
    }
    rep.stages.push_back({"precomposition with the Moore map is a bijection", bijective, detail});
    return rep;
}

}  // namespace hopfkit
