#include "hopfkit/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

namespace hopfkit {

namespace {

// Operation tables on ring element indices, built straight from the ring algebra.
class RingOps {
public:
    explicit RingOps(const CoefficientRing& r) : p_(r.p()), n_(r.element_count()) {
        if (n_ > 1024) throw ResourceError("1024 ring elements", "ring too large for the oracle tables");
        std::vector<FpVector> vals(n_);
        for (std::size_t i = 0; i < n_; ++i) vals[i] = r.element(i);
        add_.resize(n_ * n_);
        mul_.resize(n_ * n_);
        scale_.resize(p_ * n_);
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) {
                FpVector s(vals[a].size());
                for (std::size_t t = 0; t < s.size(); ++t) s[t] = fp::add(vals[a][t], vals[b][t], p_);
                add_[a * n_ + b] = static_cast<std::uint32_t>(r.index_of(s));
                mul_[a * n_ + b] = static_cast<std::uint32_t>(r.index_of(r.algebra().multiply(vals[a], vals[b])));
            }
        for (unsigned c = 0; c < p_; ++c)
            for (std::size_t a = 0; a < n_; ++a) {
                FpVector s = vals[a];
                for (auto& x : s) x = fp::mul(x, c, p_);
                scale_[c * n_ + a] = static_cast<std::uint32_t>(r.index_of(s));
            }
        one_ = static_cast<std::uint32_t>(r.index_of(r.algebra().unit()));
    }
    std::size_t size() const { return n_; }
    unsigned p() const { return p_; }
    std::uint32_t one() const { return one_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * n_ + b]; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * n_ + b]; }
    std::uint32_t scale(Residue c, std::uint32_t a) const { return scale_[(c % p_) * n_ + a]; }
    std::uint32_t constant(Residue c) const { return scale(c, one_); }

private:
    unsigned p_;
    std::size_t n_;
    std::uint32_t one_ = 0;
    std::vector<std::uint32_t> add_, mul_, scale_;
};

using RVec = std::vector<std::uint32_t>;  // element of A (x) R as R-coordinates

RVec r_multiply(const FiniteAlgebra& a, const RingOps& ring, const RVec& x, const RVec& y) {
    RVec z(a.dim(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (const auto& t : a.row(i))
            if (y[t.j]) z[t.k] = ring.add(z[t.k], ring.scale(t.c, ring.mul(x[i], y[t.j])));
    }
    return z;
}

RVec r_constant(const FpVector& v, const RingOps& ring) {
    RVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = ring.constant(v[i]);
    return out;
}

// sum_j c_j * x_j for GF(p) coefficients c and R-vectors x_j.
RVec r_combine(const FpVector& c, const std::vector<RVec>& xs, const RingOps& ring, std::size_t d) {
    RVec out(d, 0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        for (std::size_t a = 0; a < d; ++a) out[a] = ring.add(out[a], ring.scale(c[j], xs[j][a]));
    }
    return out;
}

std::size_t power_or_throw(std::size_t base, std::size_t exp, std::size_t cap, const char* what) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base && n > cap / base) throw ResourceError("enumeration cap " + std::to_string(cap), what);
        n *= base;
    }
    return n;
}

// Images of the basis under the algebra map sending the presentation generators to `gens`.
std::vector<RVec> evaluate_basis(const FiniteAlgebra& target_alg, const Presentation& pres, const std::vector<RVec>& gens,
                                 const RingOps& ring, std::size_t d, const FiniteAlgebra& alg) {
    const std::size_t s = gens.size();
    std::vector<unsigned> max_exp(s, 0);
    for (const auto& poly : pres.basis_polynomials)
        for (const auto& [mono, c] : poly)
            for (std::size_t t = 0; t < mono.size() && t < s; ++t) max_exp[t] = std::max(max_exp[t], mono[t]);
    RVec one = r_constant(alg.unit(), ring);
    std::vector<std::vector<RVec>> powers(s);
    for (std::size_t t = 0; t < s; ++t) {
        powers[t].push_back(one);
        for (unsigned e = 1; e <= max_exp[t]; ++e) powers[t].push_back(r_multiply(alg, ring, powers[t].back(), gens[t]));
    }
    std::vector<RVec> out;
    for (std::size_t j = 0; j < target_alg.dim(); ++j) {
        RVec acc(d, 0);
        for (const auto& [mono, c] : pres.basis_polynomials[j]) {
            RVec term = one;
            for (std::size_t t = 0; t < mono.size() && t < s; ++t)
                if (mono[t]) term = r_multiply(alg, ring, term, powers[t][mono[t]]);
            for (std::size_t a = 0; a < d; ++a) acc[a] = ring.add(acc[a], ring.scale(c, term[a]));
        }
        out.push_back(std::move(acc));
    }
    return out;
}

struct Equation {
    Residue constant = 0;
    std::vector<std::pair<std::size_t, Residue>> linear;
    std::vector<std::tuple<std::size_t, std::size_t, Residue>> quadratic;
    std::size_t max_var() const {
        std::size_t m = 0;
        for (auto& [v, c] : linear) m = std::max(m, v);
        for (auto& [v, w, c] : quadratic) m = std::max({m, v, w});
        return m;
    }
    bool holds(const std::vector<std::uint32_t>& x, const RingOps& ring) const {
        std::uint32_t acc = ring.constant(constant);
        for (auto& [v, c] : linear) acc = ring.add(acc, ring.scale(c, x[v]));
        for (auto& [v, w, c] : quadratic) acc = ring.add(acc, ring.scale(c, ring.mul(x[v], x[w])));
        return acc == 0;
    }
};

}  // namespace

PointGroup enumerate_points(const HopfPtr& g, const CoefficientRing& r, std::size_t cap) {
    if (g->p() != r.p()) throw ArgumentError("ring over a different prime");
    RingOps ring(r);
    const FiniteAlgebra& alg = g->algebra();
    const Presentation& pres = g->presentation();
    const std::size_t s = pres.generators.size(), d = alg.dim(), n = ring.size();
    const std::size_t total = power_or_throw(n, s, cap, "too many generator assignments");
    const FiniteAlgebra scalars = r.algebra();
    std::vector<std::pair<std::size_t, RVec>> found;
#pragma omp parallel
    {
        std::vector<std::pair<std::size_t, RVec>> local;
#pragma omp for schedule(dynamic, 64)
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::vector<std::uint32_t> vals(s);
            std::size_t rest = idx;
            for (std::size_t t = s; t-- > 0;) {
                vals[t] = static_cast<std::uint32_t>(rest % n);
                rest /= n;
            }
            // Evaluate each basis polynomial at the assigned values.
            RVec phi(d, 0);
            for (std::size_t i = 0; i < d; ++i) {
                std::uint32_t acc = 0;
                for (const auto& [mono, c] : pres.basis_polynomials[i]) {
                    std::uint32_t term = ring.one();
                    for (std::size_t t = 0; t < mono.size() && t < s; ++t)
                        for (unsigned e = 0; e < mono[t]; ++e) term = ring.mul(term, vals[t]);
                    acc = ring.add(acc, ring.scale(c, term));
                }
                phi[i] = acc;
            }
            auto value = [&](const FpVector& v) {
                std::uint32_t acc = 0;
                for (std::size_t i = 0; i < d; ++i)
                    if (v[i]) acc = ring.add(acc, ring.scale(v[i], phi[i]));
                return acc;
            };
            bool ok = value(alg.unit()) == ring.one();
            for (std::size_t t = 0; ok && t < s; ++t) ok = value(pres.generators[t]) == vals[t];
            for (std::size_t a = 0; ok && a < d; ++a)
                for (std::size_t b = 0; ok && b < d; ++b) {
                    std::uint32_t prod = 0;
                    for (const auto& t : alg.row(a))
                        if (t.j == b) prod = ring.add(prod, ring.scale(t.c, phi[t.k]));
                    ok = prod == ring.mul(phi[a], phi[b]);
                }
            if (ok) local.emplace_back(idx, std::move(phi));
        }
#pragma omp critical
        found.insert(found.end(), local.begin(), local.end());
    }
    std::sort(found.begin(), found.end());
    PointGroup pg;
    pg.group = g;
    pg.ring_size = n;
    for (auto& [idx, phi] : found) pg.points.push_back(std::move(phi));
    std::map<RVec, std::size_t> index;
    for (std::size_t q = 0; q < pg.points.size(); ++q) index[pg.points[q]] = q;
    const std::size_t m = pg.points.size();
    pg.closed = true;
    pg.add_table.assign(m * m, 0);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            RVec prod(d, 0);
            for (std::size_t i = 0; i < d; ++i)
                for (const auto& t : g->comul_terms(i))
                    prod[i] = ring.add(prod[i], ring.scale(t.c, ring.mul(pg.points[a][t.j], pg.points[b][t.k])));
            auto it = index.find(prod);
            if (it == index.end()) {
                pg.closed = false;
                continue;
            }
            pg.add_table[a * m + b] = static_cast<std::uint32_t>(it->second);
        }
    RVec eps(d);
    for (std::size_t i = 0; i < d; ++i) eps[i] = ring.constant(g->counit()[i]);
    auto id_it = index.find(eps);
    bool laws = pg.closed && id_it != index.end();
    if (laws) pg.identity = id_it->second;
    pg.inverse.assign(m, 0);
    for (std::size_t a = 0; laws && a < m; ++a) {
        RVec inv(d, 0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (g->antipode().at(j, i)) inv[i] = ring.add(inv[i], ring.scale(g->antipode().at(j, i), pg.points[a][j]));
        auto it = index.find(inv);
        if (it == index.end()) {
            laws = false;
            break;
        }
        pg.inverse[a] = it->second;
        laws = pg.add(a, pg.identity) == a && pg.add(a, it->second) == pg.identity;
    }
    if (laws && static_cast<double>(m) * m * m <= 1e8)
        for (std::size_t a = 0; laws && a < m; ++a)
            for (std::size_t b = 0; laws && b < m; ++b) {
                laws = pg.add(a, b) == pg.add(b, a);
                for (std::size_t c = 0; laws && c < m; ++c) laws = pg.add(pg.add(a, b), c) == pg.add(a, pg.add(b, c));
            }
    pg.laws_hold = laws;
    return pg;
}

std::vector<RingHom> enumerate_hopf_homs(const HopfPtr& g, const HopfPtr& h, const CoefficientRing& r,
                                         std::size_t cap) {
    if (g->p() != h->p() || g->p() != r.p()) throw ArgumentError("groups and ring over different primes");
    RingOps ring(r);
    const FiniteAlgebra& a = g->algebra();
    const FiniteAlgebra& b = h->algebra();
    const std::size_t d = a.dim();
    const Presentation& pres = h->presentation();
    const auto& catalog = h->catalog_generators();
    const bool has_catalog = !catalog.empty() && catalog.size() == pres.generators.size();
    const std::size_t s = pres.generators.size();
    const std::size_t vars = s * d;

    // Constraints read directly off the comultiplication of A.
    std::vector<Equation> eqs;
    for (std::size_t t = 0; t < s; ++t) {
        const bool additive = has_catalog ? catalog[t].kind == GeneratorKind::additive : false;
        Equation counit;
        for (std::size_t i = 0; i < d; ++i)
            if (g->counit()[i]) counit.linear.emplace_back(t * d + i, g->counit()[i]);
        counit.constant = fp::neg(h->counit_of(pres.generators[t]), r.p());
        eqs.push_back(counit);
        if (!has_catalog) continue;
        std::map<std::pair<std::size_t, std::size_t>, Equation> by_component;
        for (std::size_t i = 0; i < d; ++i)
            for (const auto& term : g->comul_terms(i)) by_component[{term.j, term.k}].linear.emplace_back(t * d + i, term.c);
        const FpVector& u = a.unit();
        for (std::size_t x = 0; x < d; ++x)
            for (std::size_t y = 0; y < d; ++y) {
                if (additive) {
                    if (u[y]) by_component[{x, y}].linear.emplace_back(t * d + x, fp::neg(u[y], r.p()));
                    if (u[x]) by_component[{x, y}].linear.emplace_back(t * d + y, fp::neg(u[x], r.p()));
                } else {
                    by_component[{x, y}].quadratic.emplace_back(t * d + x, t * d + y, r.p() - 1);
                }
            }
        for (auto& [key, e] : by_component)
            if (!e.linear.empty() || !e.quadratic.empty()) eqs.push_back(std::move(e));
    }
    std::vector<std::vector<const Equation*>> at(std::max<std::size_t>(vars, 1));
    for (const auto& e : eqs)
        if (!e.linear.empty() || !e.quadratic.empty()) at[e.max_var()].push_back(&e);

    const FpVector comul_check_unit = b.unit();
    auto certify = [&](const std::vector<std::uint32_t>& x, RingHom& out) {
        std::vector<RVec> gens(s);
        for (std::size_t t = 0; t < s; ++t) gens[t].assign(x.begin() + t * d, x.begin() + (t + 1) * d);
        std::vector<RVec> img = evaluate_basis(b, pres, gens, ring, d, a);
        if (r_combine(b.unit(), img, ring, d) != r_constant(a.unit(), ring)) return false;
        for (std::size_t t = 0; t < s; ++t) {
            if (r_combine(pres.generators[t], img, ring, d) != gens[t]) return false;
            for (std::size_t k = 0; k < b.dim(); ++k) {
                FpVector prod = b.multiply(pres.generators[t], b.basis_vector(k));
                if (r_combine(prod, img, ring, d) != r_multiply(a, ring, gens[t], img[k])) return false;
            }
            // Delta_A(phi t) against (phi (x) phi)(Delta_B t).
            RVec lhs(d * d, 0), rhs(d * d, 0);
            for (std::size_t i = 0; i < d; ++i)
                for (const auto& term : g->comul_terms(i))
                    lhs[term.j * d + term.k] = ring.add(lhs[term.j * d + term.k], ring.scale(term.c, gens[t][i]));
            FpVector db = h->comultiply(pres.generators[t]);
            for (std::size_t jk = 0; jk < db.size(); ++jk) {
                if (db[jk] == 0) continue;
                const RVec& left = img[jk / b.dim()];
                const RVec& right = img[jk % b.dim()];
                for (std::size_t i = 0; i < d; ++i) {
                    if (left[i] == 0) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        if (right[j]) rhs[i * d + j] = ring.add(rhs[i * d + j], ring.scale(db[jk], ring.mul(left[i], right[j])));
                }
            }
            if (lhs != rhs) return false;
            std::uint32_t eps = 0;
            for (std::size_t i = 0; i < d; ++i) eps = ring.add(eps, ring.scale(g->counit()[i], gens[t][i]));
            if (eps != ring.constant(h->counit_of(pres.generators[t]))) return false;
        }
        out.source = g;
        out.target = h;
        out.images = std::move(img);
        return true;
    };

    std::vector<RingHom> result;
    if (vars == 0) {
        RingHom f;
        if (certify({}, f)) result.push_back(std::move(f));
        return result;
    }
    const std::size_t n = ring.size();
    std::atomic<std::size_t> nodes{0};
    std::atomic<bool> overflow{false};
    std::vector<std::vector<RingHom>> per_prefix(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t first = 0; first < n; ++first) {
        std::vector<std::uint32_t> x(vars, 0);
        std::vector<std::uint32_t> next(vars, 0);
        // Iterative depth-first search; position 0 is fixed to `first`.
        std::size_t v = 0;
        x[0] = static_cast<std::uint32_t>(first);
        next[0] = n;
        bool descend = true;
        while (!overflow.load(std::memory_order_relaxed)) {
            if (descend) {
                bool ok = true;
                for (const Equation* e : at[v])
                    if (!e->holds(x, ring)) {
                        ok = false;
                        break;
                    }
                // The cap bounds consistent partial assignments.
                if (ok && nodes.fetch_add(1, std::memory_order_relaxed) >= cap) {
                    overflow = true;
                    break;
                }
                if (ok) {
                    if (v + 1 == vars) {
                        RingHom f;
                        if (certify(x, f)) per_prefix[first].push_back(std::move(f));
                    } else {
                        ++v;
                        x[v] = 0;
                        next[v] = 1;
                        continue;
                    }
                }
            }
            // Advance the deepest open position.
            while (v > 0 && next[v] >= n) --v;
            if (v == 0) break;
            x[v] = next[v]++;
            descend = true;
        }
    }
    if (overflow) throw ResourceError("enumeration cap " + std::to_string(cap), "Hopf morphism search exceeded the node cap");
    for (auto& part : per_prefix)
        for (auto& f : part) result.push_back(std::move(f));
    return result;
}

RingHom base_change(const HopfMorphism& f, const CoefficientRing& r) {
    RingOps ring(r);
    RingHom out{f.source_ptr(), f.target_ptr(), {}};
    const FpMatrix& m = f.coordinate_map();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        RVec col(m.rows());
        for (std::size_t a = 0; a < m.rows(); ++a) col[a] = ring.constant(m.at(a, j));
        out.images.push_back(std::move(col));
    }
    return out;
}

RingHom compose_over(const RingHom& second, const RingHom& first, const CoefficientRing& r) {
    if (!first.target->same_structure(*second.source)) throw ArgumentError("morphisms are not composable");
    RingOps ring(r);
    const std::size_t d = first.source->dim();
    RingHom out{first.source, second.target, {}};
    for (const auto& col : second.images) {
        RVec acc(d, 0);
        for (std::size_t j = 0; j < col.size(); ++j) {
            if (col[j] == 0) continue;
            for (std::size_t a = 0; a < d; ++a) acc[a] = ring.add(acc[a], ring.mul(col[j], first.images[j][a]));
        }
        out.images.push_back(std::move(acc));
    }
    return out;
}

bool is_trivial(const RingHom& f, const CoefficientRing& r) {
    RingOps ring(r);
    const FpVector& u = f.source->algebra().unit();
    for (std::size_t j = 0; j < f.images.size(); ++j)
        for (std::size_t a = 0; a < u.size(); ++a)
            if (f.images[j][a] != ring.constant(fp::mul(f.target->counit()[j], u[a], r.p()))) return false;
    return true;
}

namespace {

struct AbelianGroup {
    std::size_t n = 0;
    std::vector<std::uint32_t> table;
    std::uint32_t zero = 0;
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return table[a * n + b]; }
};

AbelianGroup from_points(const PointGroup& pg) {
    return {pg.size(), pg.add_table, static_cast<std::uint32_t>(pg.identity)};
}

// Hom(a, b) as a group under pointwise addition.
AbelianGroup hom_group(const AbelianGroup& a, const AbelianGroup& b, std::size_t cap) {
    // Greedy generating set.
    std::vector<std::uint32_t> gens;
    std::vector<bool> in_sub(a.n, false);
    in_sub[a.zero] = true;
    auto close = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::uint32_t x = 0; x < a.n; ++x)
                if (in_sub[x])
                    for (auto g : gens) {
                        auto y = a.add(x, g);
                        if (!in_sub[y]) in_sub[y] = changed = true;
                    }
        }
    };
    for (std::uint32_t x = 0; x < a.n; ++x)
        if (!in_sub[x]) {
            gens.push_back(x);
            close();
        }
    const std::size_t total = power_or_throw(b.n, gens.size(), cap, "too many candidate point maps");
    std::map<std::vector<std::uint32_t>, std::uint32_t> index;
    std::vector<std::vector<std::uint32_t>> homs;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<std::uint32_t> img(gens.size());
        std::size_t rest = idx;
        for (std::size_t t = gens.size(); t-- > 0;) {
            img[t] = static_cast<std::uint32_t>(rest % b.n);
            rest /= b.n;
        }
        const std::uint32_t unset = static_cast<std::uint32_t>(b.n);
        std::vector<std::uint32_t> phi(a.n, unset);
        phi[a.zero] = b.zero;
        std::vector<std::uint32_t> queue{a.zero};
        bool ok = true;
        for (std::size_t q = 0; ok && q < queue.size(); ++q) {
            auto x = queue[q];
            for (std::size_t t = 0; ok && t < gens.size(); ++t) {
                auto y = a.add(x, gens[t]);
                auto val = b.add(phi[x], img[t]);
                if (phi[y] == unset) {
                    phi[y] = val;
                    queue.push_back(y);
                } else if (phi[y] != val) {
                    ok = false;
                }
            }
        }
        if (ok && index.emplace(phi, static_cast<std::uint32_t>(homs.size())).second) homs.push_back(std::move(phi));
    }
    AbelianGroup out;
    out.n = homs.size();
    out.table.assign(out.n * out.n, 0);
    for (std::size_t i = 0; i < out.n; ++i)
        for (std::size_t j = 0; j < out.n; ++j) {
            std::vector<std::uint32_t> sum(a.n);
            for (std::size_t x = 0; x < a.n; ++x) sum[x] = b.add(homs[i][x], homs[j][x]);
            out.table[i * out.n + j] = index.at(sum);
        }
    out.zero = index.at(std::vector<std::uint32_t>(a.n, b.zero));
    return out;
}

}  // namespace

std::size_t count_point_multilinear(const std::vector<HopfPtr>& sources, const HopfPtr& target,
                                    const CoefficientRing& r, std::size_t cap) {
    if (sources.empty()) throw ArgumentError("need at least one source");
    auto bounded = [&](const HopfPtr& g) {
        auto pg = enumerate_points(g, r, cap);
        if (pg.size() > 64) throw ResourceError("64 points", "point group too large for multilinear counting");
        if (!pg.laws_hold) throw ValidationError("point group laws fail for " + g->name());
        return from_points(pg);
    };
    AbelianGroup cur = bounded(target);
    for (std::size_t i = sources.size(); i-- > 0;) cur = hom_group(bounded(sources[i]), cur, cap);
    return cur.n;
}

std::size_t induced_point_map_count(const std::vector<HopfPtr>& sources, const CoefficientRing& r,
                                    const std::vector<FpVector>& elements, std::size_t cap) {
    RingOps ring(r);
    std::vector<PointGroup> pts;
    std::size_t tuples = 1;
    std::vector<std::size_t> dims;
    for (const auto& s : sources) {
        pts.push_back(enumerate_points(s, r, cap));
        if (pts.back().size() && tuples > cap / pts.back().size())
            throw ResourceError("enumeration cap " + std::to_string(cap), "too many point tuples");
        tuples *= pts.back().size();
        dims.push_back(s->dim());
    }
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    const std::size_t rd = r.dim();
    std::set<std::vector<std::uint32_t>> distinct;
    for (const auto& f : elements) {
        if (f.size() != n * rd) throw ArgumentError("element size does not match sources (x) R");
        std::vector<std::uint32_t> coeff(n);
        for (std::size_t m = 0; m < n; ++m)
            coeff[m] = static_cast<std::uint32_t>(r.index_of(std::span<const Residue>(f.data() + m * rd, rd)));
        std::vector<std::uint32_t> values(tuples);
        for (std::size_t t = 0; t < tuples; ++t) {
            std::vector<std::size_t> pick(sources.size());
            std::size_t rest = t;
            for (std::size_t s = sources.size(); s-- > 0;) {
                pick[s] = rest % pts[s].size();
                rest /= pts[s].size();
            }
            std::uint32_t acc = 0;
            for (std::size_t m = 0; m < n; ++m) {
                if (coeff[m] == 0) continue;
                auto multi = kron_unindex(dims, m);
                std::uint32_t term = coeff[m];
                for (std::size_t s = 0; s < sources.size() && term; ++s) term = ring.mul(term, pts[s].points[pick[s]][multi[s]]);
                acc = ring.add(acc, term);
            }
            values[t] = acc;
        }
        distinct.insert(std::move(values));
    }
    return distinct.size();
}

namespace {

// Dense product in A_1 (x) ... (x) A_r over GF(p), optionally keeping slot `pair` doubled.
FpVector oracle_tensor_mul(const std::vector<HopfPtr>& sources, const FpVector& x, const FpVector& y,
                           std::size_t pair = static_cast<std::size_t>(-1)) {
    const unsigned p = sources.front()->p();
    std::vector<std::size_t> dims, out_dims;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        dims.push_back(sources[s]->dim());
        out_dims.push_back(s == pair ? dims.back() * dims.back() : dims.back());
    }
    std::size_t total = 1;
    for (auto d : out_dims) total *= d;
    FpVector out(total, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i]) continue;
        auto mi = kron_unindex(dims, i);
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (!y[j]) continue;
            auto mj = kron_unindex(dims, j);
            std::vector<std::pair<std::size_t, Residue>> acc{{0, fp::mul(x[i], y[j], p)}};
            for (std::size_t s = 0; s < sources.size() && !acc.empty(); ++s) {
                std::vector<std::pair<std::size_t, Residue>> next;
                if (s == pair) {
                    for (auto [k, c] : acc) next.emplace_back(k * out_dims[s] + mi[s] * dims[s] + mj[s], c);
                } else {
                    for (const auto& t : sources[s]->algebra().row(mi[s]))
                        if (t.j == mj[s])
                            for (auto [k, c] : acc) next.emplace_back(k * out_dims[s] + t.k, fp::mul(c, t.c, p));
                }
                acc = std::move(next);
            }
            for (auto [k, c] : acc) out[k] = fp::add(out[k], c, p);
        }
    }
    return out;
}

FpVector oracle_unit(const std::vector<HopfPtr>& sources) {
    FpVector acc{1};
    const unsigned p = sources.front()->p();
    for (const auto& s : sources) {
        const auto& u = s->algebra().unit();
        FpVector next(acc.size() * u.size(), 0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j) next[i * u.size() + j] = fp::mul(acc[i], u[j], p);
        acc = std::move(next);
    }
    return acc;
}

// Delta applied in slot i: result has slot i doubled.
FpVector slot_comultiply(const std::vector<HopfPtr>& sources, const FpVector& u, std::size_t slot) {
    const unsigned p = sources.front()->p();
    std::vector<std::size_t> dims, out_dims;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        dims.push_back(sources[s]->dim());
        out_dims.push_back(s == slot ? dims.back() * dims.back() : dims.back());
    }
    std::size_t total = 1;
    for (auto d : out_dims) total *= d;
    FpVector out(total, 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i]) continue;
        auto m = kron_unindex(dims, i);
        for (const auto& t : sources[slot]->comul_terms(m[slot])) {
            auto om = m;
            om[slot] = t.j * dims[slot] + t.k;
            auto k = kron_index(out_dims, om);
            out[k] = fp::add(out[k], fp::mul(u[i], t.c, p), p);
        }
    }
    return out;
}

FpVector slot_counit(const std::vector<HopfPtr>& sources, const FpVector& u, std::size_t slot) {
    const unsigned p = sources.front()->p();
    std::vector<std::size_t> dims, out_dims;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        dims.push_back(sources[s]->dim());
        if (s != slot) out_dims.push_back(dims.back());
    }
    std::size_t total = 1;
    for (auto d : out_dims) total *= d;
    FpVector out(total, 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i]) continue;
        auto m = kron_unindex(dims, i);
        Residue e = sources[slot]->counit()[m[slot]];
        if (!e) continue;
        m.erase(m.begin() + static_cast<std::ptrdiff_t>(slot));
        auto k = out_dims.empty() ? 0 : kron_index(out_dims, m);
        out[k] = fp::add(out[k], fp::mul(u[i], e, p), p);
    }
    return out;
}

}  // namespace

std::vector<FpVector> enumerate_multiprimitive(const std::vector<HopfPtr>& sources, unsigned alpha_level,
                                               std::size_t cap) {
    if (sources.empty()) throw ArgumentError("need at least one source");
    const unsigned p = sources.front()->p();
    std::vector<std::size_t> dims;
    std::size_t n = 1;
    for (const auto& s : sources) {
        dims.push_back(s->dim());
        n *= s->dim();
    }
    if (n > 20000) throw ResourceError("20000 coordinates", "ambient too large for the multi-primitive oracle");
    // Equation per (slot, doubled coordinate): Delta_i f - f (x) 1 - 1 (x) f = 0.
    std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Residue>> rows;
    for (std::size_t slot = 0; slot < sources.size(); ++slot) {
        const std::size_t d = dims[slot];
        std::vector<std::size_t> dd = dims;
        dd[slot] = d * d;
        const FpVector& u = sources[slot]->algebra().unit();
        auto bump = [&](std::size_t key, std::size_t var, Residue c) {
            auto& e = rows[{slot, key}][var];
            e = fp::add(e, c, p);
        };
        for (std::size_t var = 0; var < n; ++var) {
            auto m = kron_unindex(dims, var);
            const std::size_t a = m[slot];
            for (const auto& t : sources[slot]->comul_terms(a)) {
                m[slot] = t.j * d + t.k;
                bump(kron_index(dd, m), var, t.c);
            }
            for (std::size_t k = 0; k < d; ++k) {
                if (!u[k]) continue;
                m[slot] = a * d + k;
                bump(kron_index(dd, m), var, fp::neg(u[k], p));
                m[slot] = k * d + a;
                bump(kron_index(dd, m), var, fp::neg(u[k], p));
            }
        }
    }
    std::vector<std::vector<std::vector<std::pair<std::size_t, Residue>>>> at(n);
    for (const auto& [key, row] : rows) {
        std::vector<std::pair<std::size_t, Residue>> eq;
        for (const auto& [v, c] : row)
            if (c) eq.emplace_back(v, c);
        if (!eq.empty()) at[eq.back().first].push_back(std::move(eq));
    }
    unsigned long long e = 1;
    for (unsigned i = 0; i < alpha_level; ++i) e *= p;
    std::vector<FpVector> out;
    FpVector x(n, 0);
    std::size_t nodes = 0;
    // Depth-first over coordinates in index order.
    std::vector<unsigned> next(n, 0);
    std::size_t v = 0;
    next[0] = 0;
    for (;;) {
        if (next[v] >= p) {
            x[v] = 0;
            if (v == 0) break;
            --v;
            continue;
        }
        x[v] = next[v]++;
        bool ok = true;
        for (const auto& eq : at[v]) {
            Residue acc = 0;
            for (auto [var, c] : eq) acc = fp::add(acc, fp::mul(c, x[var], p), p);
            if (acc) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (++nodes > cap) throw ResourceError("enumeration cap " + std::to_string(cap), "multi-primitive oracle");
        if (v + 1 < n) {
            ++v;
            next[v] = 0;
            continue;
        }
        bool keep = true;
        if (alpha_level > 0) {
            FpVector acc = oracle_unit(sources);
            for (unsigned long long k = 0; k < e && keep; ++k) {
                acc = oracle_tensor_mul(sources, acc, x);
                keep = std::any_of(acc.begin(), acc.end(), [](Residue r) { return r != 0; });
            }
            keep = !keep;
        }
        if (keep) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FpVector> brute_force_multi_grouplike(const std::vector<HopfPtr>& sources, std::size_t cap) {
    if (sources.empty()) throw ArgumentError("need at least one source");
    const unsigned p = sources.front()->p();
    std::size_t n = 1;
    for (const auto& s : sources) n *= s->dim();
    const std::size_t total = power_or_throw(p, n, cap, "too many group-like candidates");
    std::vector<std::vector<HopfPtr>> rests;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        std::vector<HopfPtr> rest;
        for (std::size_t s = 0; s < sources.size(); ++s)
            if (s != i) rest.push_back(sources[s]);
        rests.push_back(std::move(rest));
    }
    std::vector<std::pair<std::size_t, FpVector>> found;
#pragma omp parallel
    {
        std::vector<std::pair<std::size_t, FpVector>> local;
#pragma omp for schedule(dynamic, 256)
        for (std::size_t idx = 0; idx < total; ++idx) {
            FpVector u(n);
            std::size_t rest = idx;
            for (std::size_t t = n; t-- > 0;) {
                u[t] = static_cast<Residue>(rest % p);
                rest /= p;
            }
            bool ok = true;
            for (std::size_t i = 0; ok && i < sources.size(); ++i) {
                FpVector unit_rest = rests[i].empty() ? FpVector{1} : oracle_unit(rests[i]);
                ok = slot_counit(sources, u, i) == unit_rest &&
                     slot_comultiply(sources, u, i) == oracle_tensor_mul(sources, u, u, i);
            }
            if (ok) local.emplace_back(idx, std::move(u));
        }
#pragma omp critical
        found.insert(found.end(), local.begin(), local.end());
    }
    std::vector<FpVector> out;
    for (auto& [idx, u] : found) out.push_back(std::move(u));
    std::sort(out.begin(), out.end());
    return out;
}

FpMatrix symmetric_multiset_basis(unsigned p, unsigned n, unsigned r) {
    const std::size_t d = power_or_throw(p, n, kDefaultDimensionCap, "alpha dimension");
    std::vector<std::size_t> dims(r, d);
    std::size_t total = power_or_throw(d, r, kDefaultDimensionCap, "ambient too large for the multiset oracle");
    std::vector<std::size_t> pw(n, 1);
    for (unsigned i = 1; i < n; ++i) pw[i] = pw[i - 1] * p;
    std::vector<FpVector> cols;
    std::vector<unsigned> seq(r, 0);
    for (;;) {
        FpVector v(total, 0);
        std::vector<unsigned> perm = seq;
        do {
            std::vector<std::size_t> exps(r);
            for (unsigned j = 0; j < r; ++j) exps[j] = pw[perm[j]];
            v[kron_index(dims, exps)] = 1;
        } while (std::next_permutation(perm.begin(), perm.end()));
        cols.push_back(std::move(v));
        // Next non-decreasing sequence.
        int j = static_cast<int>(r) - 1;
        while (j >= 0 && seq[j] + 1 >= n) --j;
        if (j < 0) break;
        ++seq[j];
        for (unsigned k = j + 1; k < r; ++k) seq[k] = seq[j];
    }
    return FpMatrix::from_columns(p, total, cols);
}

std::size_t multiset_count(unsigned n, unsigned r) {
    // binom(n + r - 1, r)
    std::size_t num = 1, den = 1;
    for (unsigned i = 1; i <= r; ++i) {
        num *= n + r - i;
        den *= i;
    }
    return n == 0 ? (r == 0 ? 1 : 0) : num / den;
}

}  // namespace hopfkit
