#include "hopfkit/search.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hopfkit {

RingTables::RingTables(const CoefficientRing& r, std::size_t max_elements) : p_(r.p()) {
    n_ = r.element_count();
    if (n_ > max_elements)
        throw ResourceError("ring size cap " + std::to_string(max_elements), "coefficient ring " + r.spec() + " too large");
    const FiniteAlgebra& a = r.algebra();
    values_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) values_.push_back(r.element(i));
    one_ = static_cast<std::uint32_t>(r.index_of(a.unit()));
    add_.resize(n_ * n_);
    mul_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            FpVector s(a.dim());
            for (std::size_t t = 0; t < a.dim(); ++t) s[t] = fp::add(values_[i][t], values_[j][t], p_);
            add_[i * n_ + j] = static_cast<std::uint32_t>(r.index_of(s));
            mul_[i * n_ + j] = static_cast<std::uint32_t>(r.index_of(a.multiply(values_[i], values_[j])));
        }
    scale_.resize(p_ * n_);
    for (unsigned c = 0; c < p_; ++c)
        for (std::size_t i = 0; i < n_; ++i) {
            FpVector s = values_[i];
            for (auto& x : s) x = fp::mul(x, c, p_);
            scale_[c * n_ + i] = static_cast<std::uint32_t>(r.index_of(s));
        }
    frob_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        std::uint32_t acc = one_;
        for (unsigned e = 0; e < p_; ++e) acc = mul_[acc * n_ + i];
        frob_[i] = acc;
    }
}

namespace {

struct PreparedEquation {
    Residue constant;
    std::vector<std::pair<std::size_t, Residue>> linear;
    std::vector<std::tuple<std::size_t, std::size_t, Residue>> quadratic;
};

PreparedEquation prepare(const QuadraticEquation& eq, unsigned p) {
    std::map<std::size_t, Residue> lin;
    std::map<std::pair<std::size_t, std::size_t>, Residue> quad;
    for (const auto& [v, c] : eq.linear) lin[v] = fp::add(lin[v], c % p, p);
    for (const auto& [v, w, c] : eq.quadratic) {
        auto key = std::minmax(v, w);
        quad[key] = fp::add(quad[key], c % p, p);
    }
    PreparedEquation out{static_cast<Residue>(eq.constant % p), {}, {}};
    for (const auto& [v, c] : lin)
        if (c) out.linear.emplace_back(v, c);
    for (const auto& [k, c] : quad)
        if (c) out.quadratic.emplace_back(k.first, k.second, c);
    return out;
}

std::uint32_t evaluate(const PreparedEquation& eq, const RingTables& ring, const Assignment& x, std::size_t skip) {
    std::uint32_t acc = ring.scale(eq.constant, ring.one());
    for (const auto& [v, c] : eq.linear)
        if (v != skip) acc = ring.add(acc, ring.scale(c, x[v]));
    for (const auto& [v, w, c] : eq.quadratic) acc = ring.add(acc, ring.scale(c, ring.mul(x[v], x[w])));
    return acc;
}

}  // namespace

std::vector<Assignment> solve_quadratic_system(const QuadraticSystem& system, const RingTables& ring,
                                               std::size_t node_cap,
                                               const std::function<bool(const Assignment&)>& accept) {
    const unsigned p = ring.p();
    const std::size_t nv = system.num_vars;
    std::vector<std::vector<PreparedEquation>> by_last(nv);
    for (const auto& raw : system.equations) {
        PreparedEquation eq = prepare(raw, p);
        std::size_t last = 0;
        bool any = false;
        for (const auto& [v, c] : eq.linear) last = std::max(last, v), any = true;
        for (const auto& [v, w, c] : eq.quadratic) last = std::max({last, v, w}), any = true;
        if (!any) {
            if (eq.constant != 0) return {};
            continue;
        }
        if (last >= nv) throw ArgumentError("equation mentions an unknown variable");
        by_last[last].push_back(std::move(eq));
    }
    // Determining equation per variable: linear in it, no product involving it.
    std::vector<std::ptrdiff_t> determining(nv, -1);
    std::vector<Residue> det_coeff(nv, 0);
    for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t e = 0; e < by_last[v].size() && determining[v] < 0; ++e) {
            const auto& eq = by_last[v][e];
            bool in_product = std::any_of(eq.quadratic.begin(), eq.quadratic.end(), [&](const auto& t) {
                return std::get<0>(t) == v || std::get<1>(t) == v;
            });
            if (in_product) continue;
            for (const auto& [w, c] : eq.linear)
                if (w == v) {
                    determining[v] = static_cast<std::ptrdiff_t>(e);
                    det_coeff[v] = c;
                }
        }

    std::vector<Assignment> out;
    Assignment x(nv, 0);
    std::size_t nodes = 0;
    auto visit = [&](auto&& self, std::size_t v) -> void {
        if (v == nv) {
            if (!accept || accept(x)) out.push_back(x);
            return;
        }
        auto check = [&] {
            if (++nodes > node_cap)
                throw ResourceError("node cap " + std::to_string(node_cap), "quadratic system search exceeded its budget");
            for (const auto& eq : by_last[v])
                if (evaluate(eq, ring, x, nv) != ring.zero()) return false;
            return true;
        };
        if (determining[v] >= 0) {
            const auto& eq = by_last[v][static_cast<std::size_t>(determining[v])];
            std::uint32_t rest = evaluate(eq, ring, x, v);
            x[v] = ring.scale(fp::neg(fp::inv(det_coeff[v], p), p), rest);
            if (check()) self(self, v + 1);
            return;
        }
        for (std::uint32_t a = 0; a < ring.size(); ++a) {
            x[v] = a;
            if (check()) self(self, v + 1);
        }
        x[v] = 0;
    };
    visit(visit, 0);
    return out;
}

AdaptedBasis augmentation_basis(const HopfAlgebra& h) {
    const FiniteAlgebra& a = h.algebra();
    const std::size_t d = a.dim();
    const unsigned p = h.p();
    FpMatrix cov(p, 1, d);
    for (std::size_t i = 0; i < d; ++i) cov.at(0, i) = h.counit()[i];
    FpMatrix aug = kernel_basis(cov);
    AdaptedBasis out;
    if (aug.cols() == 0) return out;
    aug = column_echelon(aug);

    bool nilpotent = true;
    for (std::size_t c = 0; c < aug.cols() && nilpotent; ++c) {
        FpVector pw = a.power(aug.column(c), d);
        nilpotent = std::all_of(pw.begin(), pw.end(), [](Residue x) { return x == 0; });
    }
    std::vector<FpVector> gens;
    if (nilpotent) {
        gens = derive_presentation(a, h.counit()).generators;
    } else {
        for (std::size_t c = 0; c < aug.cols(); ++c) gens.push_back(aug.column(c));
    }

    std::vector<FpMatrix> levels{aug};
    for (;;) {
        const FpMatrix& cur = levels.back();
        std::vector<FpVector> prods;
        for (const auto& g : gens) {
            FpMatrix mg = a.multiplication_matrix(g) * cur;
            for (std::size_t c = 0; c < mg.cols(); ++c) prods.push_back(mg.column(c));
        }
        FpMatrix next = prods.empty() ? FpMatrix(p, d, 0) : column_echelon(FpMatrix::from_columns(p, d, prods));
        if (next.cols() == 0 || next.cols() == cur.cols()) break;
        levels.push_back(std::move(next));
    }
    // Deepest level first, then complete each level upward.
    std::vector<std::pair<unsigned, FpVector>> chosen;
    FpMatrix have(p, d, 0);
    for (std::size_t k = levels.size(); k-- > 0;) {
        const FpMatrix& lvl = levels[k];
        for (std::size_t c = 0; c < lvl.cols(); ++c) {
            FpVector v = lvl.column(c);
            if (have.cols() && span_contains(have, v)) continue;
            chosen.emplace_back(static_cast<unsigned>(k + 1), v);
            have = have.cols() ? have.hcat(FpMatrix::from_columns(p, d, {v})) : FpMatrix::from_columns(p, d, {v});
        }
    }
    std::stable_sort(chosen.begin(), chosen.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [deg, v] : chosen) {
        out.degrees.push_back(deg);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

namespace {

using Sparse = std::vector<std::pair<std::size_t, Residue>>;

Sparse to_sparse(const FpVector& v) {
    Sparse s;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) s.emplace_back(i, v[i]);
    return s;
}

// Pure tensor of sparse factors with the given factor dimensions.
Sparse kron_sparse(const std::vector<const Sparse*>& factors, const std::vector<std::size_t>& dims, unsigned p) {
    Sparse acc{{0, 1}};
    for (std::size_t f = 0; f < factors.size(); ++f) {
        Sparse next;
        next.reserve(acc.size() * factors[f]->size());
        for (const auto& [i, a] : acc)
            for (const auto& [j, b] : *factors[f]) next.emplace_back(i * dims[f] + j, fp::mul(a, b, p));
        acc = std::move(next);
    }
    return acc;
}

Sparse tensor2(const Sparse& a, const Sparse& b, std::size_t db, unsigned p) {
    Sparse out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b) out.emplace_back(i * db + j, fp::mul(x, y, p));
    return out;
}

Sparse comul_sparse(const HopfAlgebra& h, const Sparse& v) {
    const unsigned p = h.p();
    std::map<std::size_t, Residue> acc;
    for (const auto& [i, c] : v)
        for (const auto& t : h.comul_terms(i)) {
            auto& s = acc[t.j * h.dim() + t.k];
            s = fp::add(s, fp::mul(c, t.c, p), p);
        }
    Sparse out;
    for (const auto& [k, c] : acc)
        if (c) out.emplace_back(k, c);
    return out;
}

// Coordinate -> equation, accumulated.
struct EquationBank {
    unsigned p;
    std::map<std::size_t, QuadraticEquation> eqs;
    void add_linear(const Sparse& coords, std::size_t var, Residue sign) {
        for (const auto& [k, c] : coords) eqs[k].linear.emplace_back(var, fp::mul(c, sign, p));
    }
    void add_quadratic(const Sparse& coords, std::size_t v, std::size_t w, Residue sign) {
        for (const auto& [k, c] : coords) eqs[k].quadratic.emplace_back(v, w, fp::mul(c, sign, p));
    }
    void add_constant(const Sparse& coords, Residue sign) {
        for (const auto& [k, c] : coords) {
            auto& e = eqs[k];
            e.constant = fp::add(e.constant, fp::mul(c, sign, p), p);
        }
    }
};

}  // namespace

std::vector<FpVector> solve_multi_grouplike(const std::vector<HopfPtr>& slots, const CoefficientRing& r,
                                            const MultiGroupLikeOptions& options) {
    if (slots.empty()) throw ArgumentError("need at least one factor");
    const unsigned p = slots.front()->p();
    if (r.p() != p) throw ArgumentError("coefficient ring over a different prime");
    const std::size_t nslots = slots.size();
    std::vector<std::size_t> dims;
    std::size_t total = 1;
    for (const auto& s : slots) {
        if (s->p() != p) throw ArgumentError("factors over different primes");
        dims.push_back(s->dim());
        if (total > options.dim_cap / s->dim())
            throw ResourceError("dimension cap " + std::to_string(options.dim_cap), "tensor ambient too large");
        total *= s->dim();
    }
    if (total > options.dim_cap / r.dim())
        throw ResourceError("dimension cap " + std::to_string(options.dim_cap), "tensor ambient too large");
    RingTables ring(r);

    std::vector<AdaptedBasis> bases;
    std::vector<std::vector<Sparse>> vecs(nslots);
    std::vector<Sparse> units(nslots);
    for (std::size_t s = 0; s < nslots; ++s) {
        bases.push_back(augmentation_basis(*slots[s]));
        for (const auto& v : bases[s].vectors) vecs[s].push_back(to_sparse(v));
        units[s] = to_sparse(slots[s]->algebra().unit());
    }

    // Unknowns: one per tuple of augmentation-basis vectors, ordered by total degree.
    std::vector<std::vector<std::size_t>> vars;
    {
        std::vector<std::size_t> t(nslots, 0);
        bool empty = std::any_of(vecs.begin(), vecs.end(), [](const auto& v) { return v.empty(); });
        while (!empty) {
            vars.push_back(t);
            std::size_t s = nslots;
            while (s-- > 0) {
                if (++t[s] < vecs[s].size()) break;
                t[s] = 0;
            }
            if (s == static_cast<std::size_t>(-1)) break;
        }
        auto degree = [&](const std::vector<std::size_t>& tup) {
            unsigned d = 0;
            for (std::size_t s = 0; s < nslots; ++s) d += bases[s].degrees[tup[s]];
            return d;
        };
        std::stable_sort(vars.begin(), vars.end(), [&](const auto& a, const auto& b) { return degree(a) < degree(b); });
    }
    const std::size_t nv = vars.size();

    // Products of adapted vectors within each slot.
    std::vector<std::map<std::pair<std::size_t, std::size_t>, Sparse>> prod(nslots);
    auto product = [&](std::size_t s, std::size_t a, std::size_t b) -> const Sparse& {
        auto key = std::minmax(a, b);
        auto it = prod[s].find(key);
        if (it != prod[s].end()) return it->second;
        const auto& alg = slots[s]->algebra();
        auto v = to_sparse(alg.multiply(bases[s].vectors[key.first], bases[s].vectors[key.second]));
        return prod[s].emplace(key, std::move(v)).first->second;
    };

    QuadraticSystem system;
    system.num_vars = nv;
    const Residue minus = fp::neg(1, p);
    for (std::size_t i = 0; i < nslots; ++i) {
        EquationBank bank{p, {}};
        std::vector<std::size_t> ddims = dims;
        ddims[i] = dims[i] * dims[i];
        const std::size_t di = dims[i];
        std::vector<Sparse> comuls;
        for (const auto& v : vecs[i]) comuls.push_back(comul_sparse(*slots[i], v));
        for (std::size_t v = 0; v < nv; ++v) {
            std::vector<const Sparse*> f(nslots);
            for (std::size_t s = 0; s < nslots; ++s) f[s] = &vecs[s][vars[v][s]];
            f[i] = &comuls[vars[v][i]];
            bank.add_linear(kron_sparse(f, ddims, p), v, 1);
            for (std::size_t s = 0; s < nslots; ++s) f[s] = &vecs[s][vars[v][s]];
            Sparse left = tensor2(vecs[i][vars[v][i]], units[i], di, p);
            Sparse right = tensor2(units[i], vecs[i][vars[v][i]], di, p);
            f[i] = &left;
            bank.add_linear(kron_sparse(f, ddims, p), v, minus);
            f[i] = &right;
            bank.add_linear(kron_sparse(f, ddims, p), v, minus);
        }
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t w = 0; w < nv; ++w) {
                std::vector<const Sparse*> f(nslots);
                bool zero = false;
                for (std::size_t s = 0; s < nslots && !zero; ++s) {
                    if (s == i) continue;
                    f[s] = &product(s, vars[v][s], vars[w][s]);
                    zero = f[s]->empty();
                }
                if (zero) continue;
                Sparse mid = tensor2(vecs[i][vars[v][i]], vecs[i][vars[w][i]], di, p);
                f[i] = &mid;
                bank.add_quadratic(kron_sparse(f, ddims, p), v, w, minus);
            }
        for (auto& [k, eq] : bank.eqs) system.equations.push_back(std::move(eq));
    }

    if (options.alternating) {
        for (std::size_t i = 0; i < nslots; ++i)
            for (std::size_t j = i + 1; j < nslots; ++j) {
                if (!slots[i]->algebra().same_structure(slots[j]->algebra()))
                    throw ArgumentError("alternating condition needs equal factors");
                std::vector<std::size_t> rdims;
                for (std::size_t s = 0; s < nslots; ++s)
                    if (s != j) rdims.push_back(dims[s]);
                EquationBank bank{p, {}};
                const auto& alg = slots[i]->algebra();
                for (std::size_t v = 0; v < nv; ++v) {
                    std::vector<const Sparse*> f;
                    Sparse merged = to_sparse(alg.multiply(bases[i].vectors[vars[v][i]], bases[j].vectors[vars[v][j]]));
                    for (std::size_t s = 0; s < nslots; ++s) {
                        if (s == j) continue;
                        f.push_back(s == i ? &merged : &vecs[s][vars[v][s]]);
                    }
                    if (merged.empty()) continue;
                    bank.add_linear(kron_sparse(f, rdims, p), v, 1);
                }
                for (auto& [k, eq] : bank.eqs) system.equations.push_back(std::move(eq));
            }
    }

    std::function<bool(const Assignment&)> accept;
    std::vector<Sparse> frob_terms;
    if (options.p_torsion) {
        for (std::size_t v = 0; v < nv; ++v) {
            std::vector<Sparse> pw(nslots);
            std::vector<const Sparse*> f(nslots);
            for (std::size_t s = 0; s < nslots; ++s) {
                pw[s] = to_sparse(slots[s]->algebra().power(bases[s].vectors[vars[v][s]], p));
                f[s] = &pw[s];
            }
            frob_terms.push_back(kron_sparse(f, dims, p));
        }
        accept = [&](const Assignment& x) {
            std::map<std::size_t, std::uint32_t> acc;
            for (std::size_t v = 0; v < nv; ++v) {
                std::uint32_t fx = ring.frobenius(x[v]);
                if (fx == ring.zero()) continue;
                for (const auto& [k, c] : frob_terms[v]) {
                    auto it = acc.emplace(k, ring.zero()).first;
                    it->second = ring.add(it->second, ring.scale(c, fx));
                }
            }
            return std::all_of(acc.begin(), acc.end(), [&](const auto& e) { return e.second == ring.zero(); });
        };
    }

    auto solutions = solve_quadratic_system(system, ring, options.node_cap, accept);

    const std::size_t rd = r.dim();
    std::vector<const Sparse*> uf(nslots);
    for (std::size_t s = 0; s < nslots; ++s) uf[s] = &units[s];
    Sparse one = kron_sparse(uf, dims, p);
    std::vector<Sparse> pure(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        std::vector<const Sparse*> f(nslots);
        for (std::size_t s = 0; s < nslots; ++s) f[s] = &vecs[s][vars[v][s]];
        pure[v] = kron_sparse(f, dims, p);
    }
    const FpVector& runit = r.algebra().unit();
    std::vector<FpVector> out;
    for (const auto& x : solutions) {
        FpVector u(total * rd, 0);
        for (const auto& [k, c] : one)
            for (std::size_t t = 0; t < rd; ++t) u[k * rd + t] = fp::add(u[k * rd + t], fp::mul(c, runit[t], p), p);
        for (std::size_t v = 0; v < nv; ++v) {
            const FpVector& val = ring.value(x[v]);
            for (const auto& [k, c] : pure[v])
                for (std::size_t t = 0; t < rd; ++t)
                    if (val[t]) u[k * rd + t] = fp::add(u[k * rd + t], fp::mul(c, val[t], p), p);
        }
        out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hopfkit
