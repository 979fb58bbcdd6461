#include "hopfkit/morphspaces.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "hopfkit/search.hpp"

namespace hopfkit {

TargetSpec TargetSpec::alpha(unsigned m) {
    if (m == 0) throw ArgumentError("alpha target needs m >= 1");
    return {TargetKind::alpha, m, nullptr};
}

TargetSpec TargetSpec::finite(HopfPtr h) {
    if (!h) throw ArgumentError("finite target must be set");
    if (!h->is_catalog()) throw ArgumentError("finite targets must be catalog members");
    return {TargetKind::finite, 0, std::move(h)};
}

std::string TargetSpec::label() const {
    switch (kind) {
        case TargetKind::additive: return "Ga";
        case TargetKind::multiplicative: return "Gm";
        case TargetKind::alpha: return "alpha:" + std::to_string(m);
        case TargetKind::finite: return group->name();
    }
    return "?";
}

TargetSpec parse_target(const std::string& text, unsigned p, std::size_t cap) {
    if (text == "Ga") return TargetSpec::additive();
    if (text == "Gm") return TargetSpec::multiplicative();
    if (text.rfind("alpha:", 0) == 0 && text.find('^') == std::string::npos) {
        const std::string rest = text.substr(6);
        if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
            rest.size() > 3)
            throw ArgumentError("bad target '" + text + "'");
        return TargetSpec::alpha(static_cast<unsigned>(std::stoul(rest)));
    }
    auto h = share(catalog_group(text, cap));
    if (h->p() != p) throw ArgumentError("target '" + text + "' is over a different prime");
    return TargetSpec::finite(std::move(h));
}

namespace {

std::vector<std::size_t> dims_of(const std::vector<HopfPtr>& sources) {
    std::vector<std::size_t> d;
    for (const auto& s : sources) d.push_back(s->dim());
    return d;
}

std::size_t saturating_product(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (auto d : dims) {
        if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) return std::numeric_limits<std::size_t>::max();
        n *= d;
    }
    return n;
}

unsigned common_prime(const std::vector<HopfPtr>& sources) {
    if (sources.empty()) throw ArgumentError("need at least one source");
    unsigned p = sources.front()->p();
    for (const auto& s : sources)
        if (s->p() != p) throw ArgumentError("sources over different primes");
    return p;
}

// Kind of a one-generator catalog atom.
enum class AtomKind { alpha, constant, mu, trivial };

AtomKind atom_kind(const HopfAlgebra& h, unsigned* level = nullptr) {
    if (h.dim() == 1) return AtomKind::trivial;
    const auto& gens = h.catalog_generators();
    if (gens.size() != 1) throw ArgumentError("target '" + h.name() + "' is not a catalog atom");
    const auto& g = gens.front();
    const unsigned p = h.p();
    if (g.kind == GeneratorKind::multiplicative) return AtomKind::mu;
    bool frob_like = g.relation.size() == p + 1 && g.relation[1] == p - 1;
    if (frob_like) {
        bool rest_zero = true;
        for (std::size_t e = 2; e < p; ++e) rest_zero = rest_zero && g.relation[e] == 0;
        if (rest_zero && g.relation[0] == 0 && p > 1) return AtomKind::constant;
    }
    unsigned m = 0;
    for (std::size_t d = h.dim(); d > 1; d /= p) ++m;
    if (level) *level = m;
    return AtomKind::alpha;
}

// Sparse product of basis tensors, one slot at a time.
struct Sparse {
    std::map<std::size_t, Residue> c;
};

void accumulate(std::map<std::size_t, Residue>& acc, std::size_t k, Residue v, unsigned p) {
    if (v == 0) return;
    auto it = acc.find(k);
    if (it == acc.end()) {
        acc.emplace(k, v);
        return;
    }
    it->second = fp::add(it->second, v, p);
    if (it->second == 0) acc.erase(it);
}

// Products e_a * e_b in slot algebras, combined over all slots (with optional
// slot `pair_slot` kept as the pair a (x) b in a doubled slot).
void slot_products(const std::vector<const FiniteAlgebra*>& algs, const std::vector<std::size_t>& ma,
                   const std::vector<std::size_t>& mb, std::size_t pair_slot, Residue coeff,
                   const std::vector<std::size_t>& out_dims, std::map<std::size_t, Residue>& acc, unsigned p) {
    const std::size_t r = algs.size();
    std::vector<std::pair<std::size_t, Residue>> cur{{0, coeff}};
    for (std::size_t s = 0; s < r; ++s) {
        std::vector<std::pair<std::size_t, Residue>> next;
        if (s == pair_slot) {
            std::size_t d = algs[s]->dim();
            for (const auto& [idx, c] : cur) next.emplace_back(idx * out_dims[s] + ma[s] * d + mb[s], c);
        } else {
            const auto& row = algs[s]->row(ma[s]);
            auto it = std::lower_bound(row.begin(), row.end(), mb[s],
                                       [](const FiniteAlgebra::Term& t, std::size_t v) { return t.j < v; });
            for (; it != row.end() && it->j == mb[s]; ++it)
                for (const auto& [idx, c] : cur) next.emplace_back(idx * out_dims[s] + it->k, fp::mul(c, it->c, p));
        }
        cur = std::move(next);
        if (cur.empty()) return;
    }
    for (const auto& [idx, c] : cur) accumulate(acc, idx, c, p);
}

FpMatrix comultiplication_matrix(const HopfAlgebra& h) {
    const std::size_t d = h.dim();
    FpMatrix m(h.p(), d * d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& t : h.comul_terms(i)) m.at(t.j * d + t.k, i) = t.c;
    return m;
}

FpMatrix left_unit_matrix(const HopfAlgebra& h, bool first) {
    const std::size_t d = h.dim();
    const FpVector& u = h.algebra().unit();
    FpMatrix m(h.p(), d * d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            if (u[k]) m.at(first ? i * d + k : k * d + i, i) = u[k];
    return m;
}

FpMatrix counit_row(const HopfAlgebra& h) {
    FpMatrix m(h.p(), 1, h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i) m.at(0, i) = h.counit()[i];
    return m;
}

// Rows of m at its leading positions: m = Q R with Q injective.
FpMatrix row_factor(const FpMatrix& m) {
    if (m.cols() == 0) return FpMatrix(m.modulus(), 0, 0);
    FpMatrix e = column_echelon(m);
    auto lead = leading_rows(e);
    return m.select_rows(lead);
}

FpMatrix matrix_power(const FpMatrix& m, unsigned e) {
    FpMatrix out = FpMatrix::identity(m.modulus(), m.rows());
    for (unsigned i = 0; i < e; ++i) out = m * out;
    return out;
}

// Restrict the coefficient matrix to the kernel of the given condition columns.
void restrict_to_kernel(MorphismSpace& space, const std::vector<FpVector>& condition_cols, std::size_t rows) {
    const unsigned p = space.coefficients.modulus();
    if (space.dim() == 0) return;
    FpMatrix z = FpMatrix::from_columns(p, rows, condition_cols);
    FpMatrix k = kernel_basis(z);
    space.coefficients = k.cols() ? column_echelon(space.coefficients * k) : FpMatrix(p, space.coefficient_size(), 0);
}

std::vector<std::size_t> coefficient_dims(const MorphismSpace& s) {
    std::vector<std::size_t> k;
    for (const auto& b : s.slot_bases) k.push_back(b.cols());
    return k;
}

void require_equal_sources(const MorphismSpace& s) {
    for (std::size_t i = 1; i < s.sources.size(); ++i)
        if (!(s.sources[i] == s.sources[0] || s.sources[i]->same_structure(*s.sources[0])) ||
            !(s.slot_bases[i] == s.slot_bases[0]))
            throw ArgumentError("symmetric and alternating subspaces need equal sources");
}

// Condition columns D_ij(c) = 0 in coefficient coordinates.
std::vector<FpVector> diagonal_conditions(const MorphismSpace& s, std::size_t i, std::size_t j, std::size_t& rows) {
    const unsigned p = s.coefficients.modulus();
    auto k = coefficient_dims(s);
    const FiniteAlgebra& alg = s.sources[i]->algebra();
    const FpMatrix& bi = s.slot_bases[i];
    const FpMatrix& bj = s.slot_bases[j];
    std::vector<FpVector> prods;
    for (std::size_t a = 0; a < bi.cols(); ++a)
        for (std::size_t b = 0; b < bj.cols(); ++b) prods.push_back(alg.multiply(bi.column(a), bj.column(b)));
    FpMatrix pij = FpMatrix::from_columns(p, alg.dim(), prods);
    FpMatrix rij = row_factor(pij);
    // Move slot j next to slot i, then merge the pair.
    std::vector<std::size_t> perm;
    for (std::size_t s2 = 0; s2 < k.size(); ++s2) {
        if (s2 == j) continue;
        perm.push_back(s2);
        if (s2 == i) perm.push_back(j);
    }
    std::vector<std::size_t> permuted_dims, merged;
    for (auto q : perm) permuted_dims.push_back(k[q]);
    for (std::size_t q = 0; q < perm.size(); ++q) {
        if (perm[q] == i) {
            merged.push_back(k[i] * k[j]);
            ++q;
        } else {
            merged.push_back(k[perm[q]]);
        }
    }
    std::size_t merged_slot = static_cast<std::size_t>(std::find(perm.begin(), perm.end(), i) - perm.begin());
    std::vector<FpVector> cols;
    for (std::size_t c = 0; c < s.dim(); ++c) {
        FpVector v = permute_slots(s.coefficients.column(c), k, perm);
        cols.push_back(apply_slot_map(v, merged, merged_slot, rij));
    }
    rows = cols.empty() ? 0 : cols.front().size();
    if (cols.empty()) {
        std::size_t n = rij.rows();
        for (std::size_t q = 0; q < merged.size(); ++q)
            if (q != merged_slot) n *= merged[q];
        rows = n;
    }
    return cols;
}

}  // namespace

// Product in A_1 (x) ... (x) A_r, or the mixed product iota1(x) * iota2(y) when pair_slot < r.
FpVector tensor_product(const std::vector<HopfPtr>& sources, std::span<const Residue> x, std::span<const Residue> y,
                        std::size_t pair_slot) {
    const unsigned p = sources.front()->p();
    auto dims = dims_of(sources);
    std::vector<std::size_t> out_dims = dims;
    if (pair_slot < dims.size()) out_dims[pair_slot] = dims[pair_slot] * dims[pair_slot];
    std::vector<const FiniteAlgebra*> algs;
    for (const auto& s : sources) algs.push_back(&s->algebra());
    std::map<std::size_t, Residue> acc;
    std::vector<std::size_t> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) xs.push_back(i);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i]) ys.push_back(i);
    std::vector<std::vector<std::size_t>> ym;
    for (auto b : ys) ym.push_back(kron_unindex(dims, b));
    for (auto a : xs) {
        auto ma = kron_unindex(dims, a);
        for (std::size_t t = 0; t < ys.size(); ++t)
            slot_products(algs, ma, ym[t], pair_slot, fp::mul(x[a], y[ys[t]], p), out_dims, acc, p);
    }
    FpVector out(saturating_product(out_dims), 0);
    for (const auto& [k, c] : acc) out[k] = c;
    return out;
}

FpVector tensor_unit(const std::vector<HopfPtr>& sources) {
    FpVector acc{1};
    const unsigned p = sources.front()->p();
    for (const auto& s : sources) {
        const auto& u = s->algebra().unit();
        FpVector next(acc.size() * u.size(), 0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (acc[i])
                for (std::size_t j = 0; j < u.size(); ++j) next[i * u.size() + j] = fp::mul(acc[i], u[j], p);
        acc = std::move(next);
    }
    return acc;
}

FpVector tensor_power(const std::vector<HopfPtr>& sources, std::span<const Residue> x, unsigned long long e) {
    FpVector result = tensor_unit(sources);
    FpVector base(x.begin(), x.end());
    while (e) {
        if (e & 1) result = tensor_product(sources, result, base);
        e >>= 1;
        if (e) base = tensor_product(sources, base, base);
    }
    return result;
}

FpVector apply_slot_map(std::span<const Residue> v, const std::vector<std::size_t>& dims, std::size_t slot,
                        const FpMatrix& m) {
    if (slot >= dims.size() || m.cols() != dims[slot]) throw ArgumentError("slot map does not fit");
    const unsigned p = m.modulus();
    std::size_t outer = 1, inner = 1;
    for (std::size_t s = 0; s < slot; ++s) outer *= dims[s];
    for (std::size_t s = slot + 1; s < dims.size(); ++s) inner *= dims[s];
    const std::size_t din = dims[slot], dout = m.rows();
    if (v.size() != outer * din * inner) throw ArgumentError("vector length does not match slot dims");
    FpVector out(outer * dout * inner, 0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t c = 0; c < din; ++c)
            for (std::size_t q = 0; q < inner; ++q) {
                Residue x = v[(o * din + c) * inner + q];
                if (x == 0) continue;
                for (std::size_t r = 0; r < dout; ++r) {
                    Residue mc = m.at(r, c);
                    if (mc) {
                        auto& slot_ref = out[(o * dout + r) * inner + q];
                        slot_ref = fp::add(slot_ref, fp::mul(x, mc, p), p);
                    }
                }
            }
    return out;
}

FpVector apply_slot_maps(std::span<const Residue> v, const std::vector<std::size_t>& dims,
                         const std::vector<const FpMatrix*>& maps) {
    FpVector cur(v.begin(), v.end());
    std::vector<std::size_t> d = dims;
    for (std::size_t s = 0; s < maps.size(); ++s) {
        if (!maps[s]) continue;
        cur = apply_slot_map(cur, d, s, *maps[s]);
        d[s] = maps[s]->rows();
    }
    return cur;
}

FpVector permute_slots(std::span<const Residue> v, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> out_dims;
    for (auto q : perm) out_dims.push_back(dims[q]);
    FpVector out(v.size(), 0);
    std::vector<std::size_t> om(perm.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        if (v[idx] == 0) continue;
        auto im = kron_unindex(dims, idx);
        for (std::size_t s = 0; s < perm.size(); ++s) om[s] = im[perm[s]];
        out[kron_index(out_dims, om)] = v[idx];
    }
    return out;
}

FpVector diagonal_restriction(std::span<const Residue> f, const std::vector<HopfPtr>& sources, std::size_t i,
                              std::size_t j) {
    if (i == j || i >= sources.size() || j >= sources.size()) throw ArgumentError("bad diagonal slots");
    if (!sources[i]->algebra().same_structure(sources[j]->algebra()))
        throw ArgumentError("diagonal restriction needs equal factors");
    const unsigned p = sources.front()->p();
    auto dims = dims_of(sources);
    std::vector<std::size_t> out_dims;
    for (std::size_t s = 0; s < dims.size(); ++s)
        if (s != j) out_dims.push_back(dims[s]);
    const FiniteAlgebra& alg = sources[i]->algebra();
    FpVector out(saturating_product(out_dims), 0);
    std::vector<std::size_t> om;
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        if (f[idx] == 0) continue;
        auto m = kron_unindex(dims, idx);
        const auto& row = alg.row(m[i]);
        for (const auto& t : row) {
            if (t.j != m[j]) continue;
            om.clear();
            for (std::size_t s = 0; s < dims.size(); ++s)
                if (s != j) om.push_back(s == i ? t.k : m[s]);
            auto& slot = out[kron_index(out_dims, om)];
            slot = fp::add(slot, fp::mul(f[idx], t.c, p), p);
        }
    }
    return out;
}

std::size_t MorphismSpace::ambient_size() const { return saturating_product(ambient_dims); }

FpVector MorphismSpace::expand(std::span<const Residue> coeffs, std::size_t cap) const {
    if (ambient_size() > cap)
        throw ResourceError("dimension cap " + std::to_string(cap), "ambient tensor space too large to materialize");
    std::vector<const FpMatrix*> maps;
    for (const auto& b : slot_bases) maps.push_back(&b);
    return apply_slot_maps(coeffs, coefficient_dims(*this), maps);
}

FpMatrix MorphismSpace::basis(std::size_t cap) const {
    const unsigned p = coefficients.modulus();
    if (dim() == 0) {
        if (ambient_size() > cap)
            throw ResourceError("dimension cap " + std::to_string(cap), "ambient tensor space too large to materialize");
        return FpMatrix(p, ambient_size(), 0);
    }
    std::vector<FpVector> cols;
    for (std::size_t c = 0; c < dim(); ++c) cols.push_back(expand(coefficients.column(c), cap));
    return column_echelon(FpMatrix::from_columns(p, ambient_size(), cols));
}

MorphismSpace primitive_space(const HopfPtr& g) { return mult_space_additive({g}); }

MorphismSpace mult_space_additive(const std::vector<HopfPtr>& sources, std::size_t cap) {
    const unsigned p = common_prime(sources);
    MorphismSpace s;
    s.sources = sources;
    s.target = TargetSpec::additive();
    s.ambient_dims = dims_of(sources);
    std::size_t k = 1;
    for (const auto& g : sources) {
        s.slot_bases.push_back(primitive_elements(*g));
        std::size_t ki = s.slot_bases.back().cols();
        if (ki && k > cap / ki) throw ResourceError("dimension cap " + std::to_string(cap), "coefficient space too large");
        k *= ki;
    }
    s.coefficients = k ? FpMatrix::identity(p, k) : FpMatrix(p, 0, 0);
    s.constraints_applied.push_back("multi-primitive");
    return s;
}

MorphismSpace mult_space_direct(const std::vector<HopfPtr>& sources, std::size_t cap) {
    const unsigned p = common_prime(sources);
    auto dims = dims_of(sources);
    const std::size_t n = saturating_product(dims);
    if (n > cap) throw ResourceError("dimension cap " + std::to_string(cap), "direct solve ambient too large");
    std::size_t rows = 0;
    for (auto d : dims) rows += n * d;
    if (static_cast<double>(rows) * static_cast<double>(n) > 4e7)
        throw ResourceError("dimension cap " + std::to_string(cap), "direct solve system too large");
    FpMatrix system(p, rows, n);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        FpMatrix l = comultiplication_matrix(*sources[i]) - left_unit_matrix(*sources[i], true) -
                     left_unit_matrix(*sources[i], false);
        for (std::size_t t = 0; t < n; ++t) {
            FpVector e(n, 0);
            e[t] = 1;
            FpVector col = apply_slot_map(e, dims, i, l);
            for (std::size_t r = 0; r < col.size(); ++r) system.at(offset + r, t) = col[r];
        }
        offset += n * dims[i];
    }
    MorphismSpace s;
    s.sources = sources;
    s.target = TargetSpec::additive();
    s.ambient_dims = dims;
    for (auto d : dims) s.slot_bases.push_back(FpMatrix::identity(p, d));
    FpMatrix k = kernel_basis(system);
    s.coefficients = k.cols() ? column_echelon(k) : FpMatrix(p, n, 0);
    s.constraints_applied.push_back("multi-primitive (direct)");
    return s;
}

MorphismSpace impose_alpha(const MorphismSpace& space, unsigned m) {
    MorphismSpace s = space;
    std::vector<FpMatrix> factors;
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
        FpMatrix fm = matrix_power(s.sources[i]->algebra().frobenius_matrix(), m) * s.slot_bases[i];
        factors.push_back(row_factor(fm));
    }
    std::vector<const FpMatrix*> maps;
    std::vector<std::size_t> out_dims;
    for (const auto& f : factors) {
        maps.push_back(&f);
        out_dims.push_back(f.rows());
    }
    std::vector<FpVector> cols;
    for (std::size_t c = 0; c < s.dim(); ++c)
        cols.push_back(apply_slot_maps(s.coefficients.column(c), coefficient_dims(s), maps));
    restrict_to_kernel(s, cols, saturating_product(out_dims));
    s.target = TargetSpec::alpha(m);
    s.constraints_applied.push_back("f^(p^" + std::to_string(m) + ") = 0");
    return s;
}

MorphismSpace mult_space_into(const std::vector<HopfPtr>& sources, const TargetSpec& target, std::size_t cap) {
    switch (target.kind) {
        case TargetKind::additive: return mult_space_additive(sources, cap);
        case TargetKind::alpha: return impose_alpha(mult_space_additive(sources, cap), target.m);
        case TargetKind::multiplicative:
            throw ArgumentError("multiplicative targets are solved by mult_space_into_gm");
        case TargetKind::finite: break;
    }
    unsigned level = 0;
    AtomKind kind = atom_kind(*target.group, &level);
    MorphismSpace s = mult_space_additive(sources, cap);
    if (target.group->p() != s.coefficients.modulus()) throw ArgumentError("target over a different prime");
    switch (kind) {
        case AtomKind::alpha: s = impose_alpha(s, level); break;
        case AtomKind::trivial: s.coefficients = FpMatrix(s.coefficients.modulus(), s.coefficient_size(), 0); break;
        case AtomKind::mu: throw ArgumentError("multiplicative targets are solved by multilinear_into_finite");
        case AtomKind::constant: {
            // f^p = f, tested on the materialized ambient.
            std::vector<FpVector> cols;
            for (std::size_t c = 0; c < s.dim(); ++c) {
                FpVector f = s.expand(s.coefficients.column(c), cap);
                FpVector fp_ = tensor_power(sources, f, s.coefficients.modulus());
                for (std::size_t t = 0; t < f.size(); ++t) fp_[t] = fp::sub(fp_[t], f[t], s.coefficients.modulus());
                cols.push_back(std::move(fp_));
            }
            // Nonlinear in general, but over GF(p) the map f -> f^p - f is additive.
            restrict_to_kernel(s, cols, s.ambient_size());
            s.constraints_applied.push_back("f^p = f");
            break;
        }
    }
    s.target = target;
    return s;
}

std::size_t Parameterization::count(const CoefficientRing& r) const {
    std::size_t a = alpha_points(r, m), n = r.element_count(), out = 1;
    for (std::size_t i = 0; i < constrained; ++i) out *= a;
    for (std::size_t i = 0; i < free; ++i) out *= n;
    return out;
}

Parameterization alpha_parameterization(const MorphismSpace& additive, unsigned m) {
    std::vector<FpMatrix> factors;
    for (std::size_t i = 0; i < additive.sources.size(); ++i)
        factors.push_back(
            row_factor(matrix_power(additive.sources[i]->algebra().frobenius_matrix(), m) * additive.slot_bases[i]));
    std::vector<const FpMatrix*> maps;
    std::vector<std::size_t> out_dims;
    for (const auto& f : factors) {
        maps.push_back(&f);
        out_dims.push_back(f.rows());
    }
    std::vector<FpVector> cols;
    for (std::size_t c = 0; c < additive.dim(); ++c)
        cols.push_back(apply_slot_maps(additive.coefficients.column(c), coefficient_dims(additive), maps));
    Parameterization par;
    par.m = m;
    par.constrained =
        cols.empty() ? 0 : rank(FpMatrix::from_columns(additive.coefficients.modulus(), saturating_product(out_dims), cols));
    par.free = additive.dim() - par.constrained;
    return par;
}

std::size_t alpha_points(const CoefficientRing& r, unsigned m) {
    unsigned long long e = 1;
    for (unsigned i = 0; i < m; ++i) e *= r.p();
    std::size_t n = 0;
    for (std::size_t idx = 0; idx < r.element_count(); ++idx) {
        FpVector pw = r.algebra().power(r.element(idx), e);
        n += std::all_of(pw.begin(), pw.end(), [](Residue x) { return x == 0; });
    }
    return n;
}

namespace {

// Elements sum_v b_v (x) a_v with a_v in R, accepted by `keep`.
std::vector<FpVector> primitive_points(const HopfAlgebra& g, const CoefficientRing& r, std::size_t cap,
                                       const std::function<bool(const FpVector&)>& keep) {
    const unsigned p = g.p();
    FpMatrix prim = primitive_elements(g);
    const std::size_t k = prim.cols(), nr = r.element_count(), rd = r.dim(), d = g.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (total > cap / nr) throw ResourceError("enumeration cap " + std::to_string(cap), "too many candidate points");
        total *= nr;
    }
    std::vector<FpVector> ring_elems;
    for (std::size_t i = 0; i < nr; ++i) ring_elems.push_back(r.element(i));
    std::vector<FpVector> out;
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t n = 0; n < total; ++n) {
        FpVector f(d * rd, 0);
        for (std::size_t v = 0; v < k; ++v)
            for (std::size_t a = 0; a < d; ++a) {
                Residue b = prim.at(a, v);
                if (b == 0) continue;
                for (std::size_t t = 0; t < rd; ++t)
                    f[a * rd + t] = fp::add(f[a * rd + t], fp::mul(b, ring_elems[idx[v]][t], p), p);
            }
        if (keep(f)) out.push_back(std::move(f));
        for (std::size_t v = k; v-- > 0;) {
            if (++idx[v] < nr) break;
            idx[v] = 0;
        }
    }
    return out;
}

}  // namespace

HomSpace hom_space(const HopfPtr& g, const TargetSpec& target, const CoefficientRing& r, std::size_t cap) {
    if (g->p() != r.p()) throw ArgumentError("coefficient ring over a different prime");
    HomSpace out;
    auto ext = std::make_shared<FiniteAlgebra>(base_extend(g->algebra(), r).algebra);
    auto is_zero = [](const FpVector& v) { return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; }); };
    auto alpha_case = [&](unsigned m) {
        unsigned long long e = 1;
        for (unsigned i = 0; i < m; ++i) e *= g->p();
        out.points = primitive_points(*g, r, cap, [&](const FpVector& f) { return is_zero(ext->power(f, e)); });
        out.parameterization = alpha_parameterization(primitive_space(g), m);
        out.predicted_count = out.parameterization->count(r);
    };
    MultiGroupLikeOptions opt;
    opt.node_cap = cap;
    switch (target.kind) {
        case TargetKind::alpha: alpha_case(target.m); return out;
        case TargetKind::additive:
            out.points = primitive_points(*g, r, cap, [](const FpVector&) { return true; });
            out.predicted_count = out.points.size();
            return out;
        case TargetKind::multiplicative:
            out.points = solve_multi_grouplike({g}, r, opt);
            out.predicted_count = out.points.size();
            return out;
        case TargetKind::finite: break;
    }
    unsigned level = 0;
    switch (atom_kind(*target.group, &level)) {
        case AtomKind::alpha: alpha_case(level); break;
        case AtomKind::trivial:
            out.points = {FpVector{}};
            out.predicted_count = 1;
            break;
        case AtomKind::constant:
            out.points = primitive_points(*g, r, cap, [&](const FpVector& f) { return ext->power(f, g->p()) == f; });
            out.predicted_count = out.points.size();
            break;
        case AtomKind::mu:
            opt.p_torsion = true;
            out.points = solve_multi_grouplike({g}, r, opt);
            out.predicted_count = out.points.size();
            break;
    }
    return out;
}

std::vector<FpVector> exponential_family(const std::vector<HopfPtr>& sources, const CoefficientRing& r) {
    const unsigned p = common_prime(sources);
    for (const auto& s : sources)
        if (!s->same_structure(alpha_group(p, 1))) throw ArgumentError("exponential family needs alpha_p sources");
    std::vector<HopfPtr> slots = sources;
    // Treat R as an extra slot with trivial coalgebra structure; only its algebra is used.
    HopfAlgebra ring_slot(r.algebra(), {}, FpVector(r.dim(), 0), FpMatrix(p, r.dim(), r.dim()), "R");
    slots.push_back(share(ring_slot));
    FpVector y(p, 0);
    y[1] = 1;
    std::vector<FpVector> out;
    for (std::size_t idx = 0; idx < r.element_count(); ++idx) {
        FpVector z{1};
        for (std::size_t s = 0; s < sources.size(); ++s) {
            FpVector next(z.size() * p, 0);
            for (std::size_t a = 0; a < z.size(); ++a)
                if (z[a]) next[a * p + 1] = z[a];
            z = std::move(next);
        }
        FpVector c = r.element(idx);
        FpVector zc(z.size() * c.size(), 0);
        for (std::size_t a = 0; a < z.size(); ++a)
            if (z[a])
                for (std::size_t t = 0; t < c.size(); ++t) zc[a * c.size() + t] = fp::mul(z[a], c[t], p);
        FpVector acc = tensor_unit(slots), pw = tensor_unit(slots);
        for (unsigned i = 1; i < p; ++i) {
            pw = tensor_product(slots, pw, zc);
            Residue f = fp::inv_factorial(i, p);
            for (std::size_t t = 0; t < acc.size(); ++t) acc[t] = fp::add(acc[t], fp::mul(f, pw[t], p), p);
        }
        out.push_back(std::move(acc));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FpVector> mult_space_into_gm(const std::vector<HopfPtr>& sources, const CoefficientRing& r,
                                         std::size_t cap) {
    const unsigned p = common_prime(sources);
    bool all_alpha_p = std::all_of(sources.begin(), sources.end(),
                                   [&](const HopfPtr& s) { return s->same_structure(alpha_group(p, 1)); });
    if (all_alpha_p) return exponential_family(sources, r);
    MultiGroupLikeOptions opt;
    opt.node_cap = cap;
    return solve_multi_grouplike(sources, r, opt);
}

bool is_grouplike_in_slot(const std::vector<HopfPtr>& sources, const CoefficientRing& r, std::span<const Residue> u,
                          std::size_t slot) {
    const unsigned p = common_prime(sources);
    if (slot >= sources.size()) throw ArgumentError("slot out of range");
    std::vector<HopfPtr> slots = sources;
    HopfAlgebra ring_slot(r.algebra(), {}, FpVector(r.dim(), 0), FpMatrix(p, r.dim(), r.dim()), "R");
    slots.push_back(share(ring_slot));
    auto dims = dims_of(slots);
    if (u.size() != saturating_product(dims)) return false;
    FpVector lhs = apply_slot_map(u, dims, slot, comultiplication_matrix(*sources[slot]));
    if (lhs != tensor_product(slots, u, u, slot)) return false;
    FpVector restricted = apply_slot_map(u, dims, slot, counit_row(*sources[slot]));
    std::vector<HopfPtr> rest;
    for (std::size_t s = 0; s < slots.size(); ++s)
        if (s != slot) rest.push_back(slots[s]);
    return restricted == tensor_unit(rest);
}

bool is_multi_grouplike(const std::vector<HopfPtr>& sources, const CoefficientRing& r, std::span<const Residue> u) {
    for (std::size_t i = 0; i < sources.size(); ++i)
        if (!is_grouplike_in_slot(sources, r, u, i)) return false;
    return true;
}

MorphismSpace sym_subspace(const MorphismSpace& space) {
    require_equal_sources(space);
    MorphismSpace s = space;
    auto k = coefficient_dims(s);
    for (std::size_t t = 0; t + 1 < k.size(); ++t) {
        std::vector<std::size_t> perm(k.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[t], perm[t + 1]);
        std::vector<FpVector> cols;
        for (std::size_t c = 0; c < s.dim(); ++c) {
            FpVector v = s.coefficients.column(c);
            FpVector w = permute_slots(v, k, perm);
            for (std::size_t q = 0; q < v.size(); ++q) w[q] = fp::sub(w[q], v[q], s.coefficients.modulus());
            cols.push_back(std::move(w));
        }
        restrict_to_kernel(s, cols, s.coefficient_size());
    }
    s.constraints_applied.push_back("symmetric");
    return s;
}

MorphismSpace block_alt_subspace(const MorphismSpace& space, const std::vector<std::vector<std::size_t>>& blocks) {
    MorphismSpace s = space;
    for (const auto& block : blocks)
        for (std::size_t a = 0; a < block.size(); ++a)
            for (std::size_t b = a + 1; b < block.size(); ++b) {
                std::size_t i = block[a], j = block[b];
                if (!(s.slot_bases[i] == s.slot_bases[j]) ||
                    !s.sources[i]->algebra().same_structure(s.sources[j]->algebra()))
                    throw ArgumentError("alternating slots need equal sources");
                std::size_t rows = 0;
                auto cols = diagonal_conditions(s, i, j, rows);
                restrict_to_kernel(s, cols, rows);
            }
    s.constraints_applied.push_back("alternating");
    return s;
}

MorphismSpace alt_subspace(const MorphismSpace& space) {
    require_equal_sources(space);
    std::vector<std::size_t> all(space.sources.size());
    std::iota(all.begin(), all.end(), 0);
    return block_alt_subspace(space, {all});
}

CurryVerdict curry_consistency(const std::vector<HopfPtr>& sources, std::size_t cap) {
    const unsigned p = common_prime(sources);
    CurryVerdict v;
    MorphismSpace direct = mult_space_direct(sources, cap);
    v.direct_dim = direct.dim();
    // Solve slot s into the solution space of slots 0..s-1.
    FpMatrix w = FpMatrix::identity(p, 1);
    std::size_t n_prev = 1;
    for (const auto& g : sources) {
        const std::size_t d = g->dim();
        FpMatrix l =
            comultiplication_matrix(*g) - left_unit_matrix(*g, true) - left_unit_matrix(*g, false);
        if (w.cols() == 0) {
            n_prev *= d;
            w = FpMatrix(p, n_prev, 0);
            continue;
        }
        FpMatrix k = kernel_basis(kron(w, l));
        FpMatrix lifted = kron(w, FpMatrix::identity(p, d));
        n_prev *= d;
        w = k.cols() ? column_echelon(lifted * k) : FpMatrix(p, n_prev, 0);
    }
    v.curried_dim = w.cols();
    FpMatrix db = direct.basis(cap);
    v.same_span = (w.cols() == db.cols()) && (w.cols() == 0 || same_span(w, db));
    return v;
}

FpVector factor_through_quotient(std::span<const Residue> psi, const std::vector<HopfPtr>& sources, std::size_t slot,
                                 const HopfMorphism& iota, const HopfMorphism& pi) {
    if (slot >= sources.size()) throw ArgumentError("slot out of range");
    if (!iota.certified() || !pi.certified()) throw ArgumentError("sequence maps must be certified homomorphisms");
    if (!exactness_check(iota, pi).exact()) throw PreconditionError("sequence is not exact");
    if (!sources[slot]->same_structure(pi.source())) throw ArgumentError("slot does not carry the middle group");
    auto dims = dims_of(sources);
    FpVector restricted = apply_slot_map(psi, dims, slot, iota.coordinate_map());
    for (std::size_t t = 0; t < restricted.size(); ++t)
        if (restricted[t]) {
            std::vector<std::size_t> rd = dims;
            rd[slot] = iota.source().dim();
            throw PreconditionError("restriction to the subgroup is nonzero at coordinate " + std::to_string(t) +
                                    " (value " + std::to_string(restricted[t]) + ")");
        }
    const FpMatrix& m = pi.coordinate_map();  // dim G x dim G''
    auto piv = rref(m.transpose()).pivots;
    FpMatrix square = m.select_rows(piv);
    auto inv = inverse(square);
    if (!inv) throw PreconditionError("quotient map is not a closed surjection");
    FpMatrix sel(m.modulus(), piv.size(), m.rows());
    for (std::size_t q = 0; q < piv.size(); ++q) sel.at(q, piv[q]) = 1;
    FpMatrix left = *inv * sel;
    FpVector out = apply_slot_map(psi, dims, slot, left);
    std::vector<std::size_t> qd = dims;
    qd[slot] = pi.target().dim();
    if (apply_slot_map(out, qd, slot, m) != FpVector(psi.begin(), psi.end()))
        throw PreconditionError("element does not factor through the quotient");
    return out;
}

namespace {

// Coordinates of each column of `vectors` in the basis `basis` (must lie in its span).
FpMatrix coordinates_in(const FpMatrix& basis, const std::vector<FpVector>& vectors) {
    const unsigned p = basis.modulus();
    FpMatrix out(p, basis.cols(), vectors.size());
    for (std::size_t c = 0; c < vectors.size(); ++c) {
        auto x = solve(basis, vectors[c]);
        if (!x) throw ValidationError("vector outside the expected subspace");
        out.set_column(c, *x);
    }
    return out;
}

std::vector<HopfPtr> repeat(const HopfPtr& g, unsigned m) { return std::vector<HopfPtr>(m, g); }

int permutation_sign(const std::vector<std::size_t>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

}  // namespace

RhoResult restriction_rho(const HopfMorphism& iota, const HopfPtr& quotient, unsigned m1, unsigned m2) {
    const HopfPtr& g = iota.target_ptr();
    const HopfPtr& sub = iota.source_ptr();
    const unsigned m = m1 + m2;
    const unsigned p = g->p();
    RhoResult out;
    MorphismSpace domain = alt_subspace(mult_space_additive(repeat(g, m)));
    FpMatrix dom_basis = domain.basis();
    out.domain_dim = dom_basis.cols();

    std::vector<HopfPtr> mixed = repeat(sub, m1);
    for (unsigned i = 0; i < m2; ++i) mixed.push_back(g);
    std::vector<std::vector<std::size_t>> blocks(2);
    for (unsigned i = 0; i < m; ++i) blocks[i < m1 ? 0 : 1].push_back(i);
    MorphismSpace codomain = block_alt_subspace(mult_space_additive(mixed), blocks);
    FpMatrix cod_basis = codomain.basis();

    auto dims = domain.ambient_dims;
    std::vector<const FpMatrix*> maps(m, nullptr);
    for (unsigned i = 0; i < m1; ++i) maps[i] = &iota.coordinate_map();
    std::vector<FpVector> images;
    for (std::size_t c = 0; c < dom_basis.cols(); ++c) images.push_back(apply_slot_maps(dom_basis.column(c), dims, maps));
    out.matrix = cod_basis.cols() ? coordinates_in(cod_basis, images) : FpMatrix(p, 0, images.size());
    out.rank = out.matrix.rows() ? rank(out.matrix) : 0;
    out.injective = out.rank == out.domain_dim;

    // Lambda^{m2+1} G'' = 0 at the checked level: no alternating maps into Ga or Gm.
    auto qs = repeat(quotient, m2 + 1);
    bool ga_zero = alt_subspace(mult_space_additive(qs)).dim() == 0;
    bool gm_trivial = true;
    if (m2 + 1 >= 2) {
        MultiGroupLikeOptions opt;
        opt.alternating = true;
        gm_trivial = solve_multi_grouplike(qs, prime_field_ring(p), opt).size() == 1;
    }
    out.hypothesis_holds = ga_zero && gm_trivial;
    return out;
}

OmegaResult omega_pullback(const HopfMorphism& iota, const HopfMorphism& pi, const HopfMorphism& section,
                           const HopfMorphism& retraction, unsigned m1, unsigned m2) {
    const HopfPtr& g = iota.target_ptr();
    const HopfPtr& sub = iota.source_ptr();
    const HopfPtr& quo = pi.target_ptr();
    const unsigned p = g->p();
    const unsigned m = m1 + m2;
    if (!section.certified() || !retraction.certified())
        throw PreconditionError("section and retraction must be certified homomorphisms");
    if (compose(pi, section).coordinate_map() != FpMatrix::identity(p, quo->dim()) ||
        compose(retraction, iota).coordinate_map() != FpMatrix::identity(p, sub->dim()))
        throw PreconditionError("sequence is not split by the given section and retraction");

    std::vector<HopfPtr> mixed = repeat(sub, m1);
    for (unsigned i = 0; i < m2; ++i) mixed.push_back(quo);
    std::vector<std::vector<std::size_t>> blocks(2);
    for (unsigned i = 0; i < m; ++i) blocks[i < m1 ? 0 : 1].push_back(i);
    MorphismSpace domain = block_alt_subspace(mult_space_additive(mixed), blocks);
    FpMatrix dom_basis = domain.basis();
    const std::size_t k = dom_basis.cols();

    std::vector<std::size_t> gdims(m, g->dim());
    std::vector<const FpMatrix*> pull(m);
    for (unsigned i = 0; i < m; ++i) pull[i] = i < m1 ? &retraction.coordinate_map() : &pi.coordinate_map();

    // Subsets sigma of size m1 in increasing order, tau the complement.
    std::vector<std::vector<std::size_t>> perms;
    std::vector<bool> choose(m, false);
    std::fill(choose.begin(), choose.begin() + m1, true);
    do {
        std::vector<std::size_t> sigma, tau;
        for (unsigned i = 0; i < m; ++i) (choose[i] ? sigma : tau).push_back(i);
        std::vector<std::size_t> order = sigma;
        order.insert(order.end(), tau.begin(), tau.end());
        perms.push_back(order);
    } while (std::prev_permutation(choose.begin(), choose.end()));

    OmegaResult out;
    out.pullback = FpMatrix(p, saturating_product(gdims), k);
    for (std::size_t c = 0; c < k; ++c) {
        FpVector base = apply_slot_maps(dom_basis.column(c), domain.ambient_dims, pull);
        FpVector acc(base.size(), 0);
        for (const auto& order : perms) {
            // Output slot order[q] holds block slot q.
            std::vector<std::size_t> perm(m);
            for (unsigned q = 0; q < m; ++q) perm[order[q]] = q;
            FpVector term = permute_slots(base, gdims, perm);
            Residue sgn = permutation_sign(order) > 0 ? 1 : fp::neg(1, p);
            for (std::size_t t = 0; t < acc.size(); ++t) acc[t] = fp::add(acc[t], fp::mul(sgn, term[t], p), p);
        }
        out.pullback.set_column(c, acc);
    }

    std::vector<const FpMatrix*> inc(m);
    for (unsigned i = 0; i < m; ++i) inc[i] = i < m1 ? &iota.coordinate_map() : &section.coordinate_map();
    std::vector<FpVector> back;
    for (std::size_t c = 0; c < k; ++c) back.push_back(apply_slot_maps(out.pullback.column(c), gdims, inc));
    out.mu_omega = k ? coordinates_in(dom_basis, back) : FpMatrix(p, 0, 0);
    out.identity = out.mu_omega == FpMatrix::identity(p, k);

    FpMatrix alt = alt_subspace(mult_space_additive(repeat(g, m))).basis();
    out.image_alternating = true;
    for (std::size_t c = 0; c < k; ++c) {
        FpVector col = out.pullback.column(c);
        bool zero = std::all_of(col.begin(), col.end(), [](Residue x) { return x == 0; });
        if (!zero && (alt.cols() == 0 || !span_contains(alt, col))) out.image_alternating = false;
    }
    return out;
}

FpMatrix MultilinearMorphism::coordinate_map() const {
    const unsigned p = common_prime(sources);
    const Presentation& pres = target->presentation();
    const std::size_t n = saturating_product(dims_of(sources));
    std::size_t max_exp = 0;
    for (const auto& poly : pres.basis_polynomials)
        for (const auto& [mono, c] : poly)
            for (auto e : mono) max_exp = std::max<std::size_t>(max_exp, e);
    if (pres.generators.size() > 1) throw ArgumentError("multilinear morphisms need a one-generator target");
    std::vector<FpVector> powers{tensor_unit(sources)};
    for (std::size_t e = 1; e <= max_exp; ++e) powers.push_back(tensor_product(sources, powers.back(), generator_image));
    FpMatrix out(p, n, target->dim());
    for (std::size_t j = 0; j < target->dim(); ++j) {
        FpVector col(n, 0);
        for (const auto& [mono, c] : pres.basis_polynomials[j]) {
            const FpVector& pw = powers[mono.empty() ? 0 : mono[0]];
            for (std::size_t t = 0; t < n; ++t) col[t] = fp::add(col[t], fp::mul(c, pw[t], p), p);
        }
        out.set_column(j, col);
    }
    return out;
}

bool is_multilinear_map(const std::vector<HopfPtr>& sources, const HopfAlgebra& target, const FpMatrix& phi) {
    const unsigned p = common_prime(sources);
    auto dims = dims_of(sources);
    const std::size_t n = saturating_product(dims);
    if (phi.rows() != n || phi.cols() != target.dim()) return false;
    std::vector<FpVector> cols(target.dim());
    for (std::size_t j = 0; j < target.dim(); ++j) cols[j] = phi.column(j);
    // Algebra map.
    if (phi.apply(target.algebra().unit()) != tensor_unit(sources)) return false;
    for (std::size_t a = 0; a < target.dim(); ++a)
        for (std::size_t b = a; b < target.dim(); ++b) {
            FpVector prod = target.algebra().multiply(target.algebra().basis_vector(a), target.algebra().basis_vector(b));
            if (phi.apply(prod) != tensor_product(sources, cols[a], cols[b])) return false;
        }
    for (std::size_t i = 0; i < sources.size(); ++i) {
        FpMatrix delta = comultiplication_matrix(*sources[i]);
        std::vector<HopfPtr> rest;
        for (std::size_t s = 0; s < sources.size(); ++s)
            if (s != i) rest.push_back(sources[s]);
        FpVector rest_unit = rest.empty() ? FpVector{1} : tensor_unit(rest);
        FpMatrix eps = counit_row(*sources[i]);
        for (std::size_t j = 0; j < target.dim(); ++j) {
            FpVector lhs = apply_slot_map(cols[j], dims, i, delta);
            std::vector<std::size_t> dd = dims;
            dd[i] = dims[i] * dims[i];
            FpVector rhs(saturating_product(dd), 0);
            for (const auto& t : target.comul_terms(j)) {
                FpVector term = tensor_product(sources, cols[t.j], cols[t.k], i);
                for (std::size_t q = 0; q < rhs.size(); ++q) rhs[q] = fp::add(rhs[q], fp::mul(t.c, term[q], p), p);
            }
            if (lhs != rhs) return false;
            FpVector restricted = apply_slot_map(cols[j], dims, i, eps);
            FpVector expect = rest_unit;
            for (auto& x : expect) x = fp::mul(x, target.counit()[j], p);
            if (restricted != expect) return false;
        }
    }
    return true;
}

bool MultilinearMorphism::certified() const { return is_multilinear_map(sources, *target, coordinate_map()); }

std::vector<FpVector> multilinear_into_finite(const std::vector<HopfPtr>& sources, const HopfPtr& target,
                                              bool alternating, std::size_t cap) {
    const unsigned p = common_prime(sources);
    if (atom_kind(*target) == AtomKind::mu) {
        MultiGroupLikeOptions opt;
        opt.alternating = alternating;
        opt.p_torsion = true;
        opt.node_cap = cap;
        return solve_multi_grouplike(sources, prime_field_ring(p), opt);
    }
    if (atom_kind(*target) == AtomKind::trivial) return {FpVector{}};
    MorphismSpace s = mult_space_into(sources, TargetSpec::finite(target));
    if (alternating) s = alt_subspace(s);
    FpMatrix b = s.basis();
    std::size_t total = 1;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        if (total > cap / p) throw ResourceError("enumeration cap " + std::to_string(cap), "too many multilinear maps");
        total *= p;
    }
    std::vector<FpVector> out;
    std::vector<Residue> coef(b.cols(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        out.push_back(b.apply(coef));
        for (std::size_t c = b.cols(); c-- > 0;) {
            if (++coef[c] < p) break;
            coef[c] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hopfkit
