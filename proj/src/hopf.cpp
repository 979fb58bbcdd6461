#include "hopfkit/hopf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hopfkit/search.hpp"

namespace hopfkit {

namespace {

using SparseVec = std::vector<std::pair<std::size_t, Residue>>;

void normalize(SparseVec& v, unsigned p) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (const auto& [i, c] : v) {
        if (!out.empty() && out.back().first == i)
            out.back().second = fp::add(out.back().second, c, p);
        else
            out.emplace_back(i, c % p);
    }
    std::erase_if(out, [](const auto& t) { return t.second == 0; });
    v = std::move(out);
}

// Nonzero products e_a * e_l as a range into the algebra row.
std::pair<const FiniteAlgebra::Term*, const FiniteAlgebra::Term*> product_range(const FiniteAlgebra& a, std::size_t i,
                                                                              std::size_t j) {
    const auto& row = a.row(i);
    auto first = std::lower_bound(row.begin(), row.end(), j,
                                  [](const FiniteAlgebra::Term& t, std::size_t v) { return t.j < v; });
    auto last = first;
    while (last != row.end() && last->j == j) ++last;
    return {row.data() + (first - row.begin()), row.data() + (last - row.begin())};
}

std::string basis_name(const HopfAlgebra& h, std::size_t i) { return "e" + std::to_string(i) + " (" + h.algebra().labels()[i] + ")"; }

}  // namespace

HopfAlgebra::HopfAlgebra(FiniteAlgebra algebra, std::vector<ComulEntry> comul, FpVector counit, FpMatrix antipode,
                         std::string name)
    : algebra_(std::move(algebra)), counit_(std::move(counit)), antipode_(std::move(antipode)), name_(std::move(name)) {
    const std::size_t d = algebra_.dim();
    const unsigned p = algebra_.p();
    if (counit_.size() != d) throw ValidationError("counit length differs from the dimension");
    for (auto& c : counit_) c %= p;
    if (antipode_.rows() != d || antipode_.cols() != d || antipode_.modulus() != p)
        throw ValidationError("antipode must be a dim x dim matrix over the same prime");
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Residue> acc;
    for (const auto& e : comul) {
        if (e.i >= d || e.j >= d || e.k >= d) throw ValidationError("comultiplication index out of range");
        auto& slot = acc[{e.i, e.j, e.k}];
        slot = fp::add(slot, e.c % p, p);
    }
    comul_.assign(d, {});
    for (const auto& [key, c] : acc) {
        if (c == 0) continue;
        auto [i, j, k] = key;
        comul_[i].push_back({j, k, c});
    }
}

HopfAlgebra HopfAlgebra::renamed(std::string name) const {
    HopfAlgebra copy(*this);
    copy.name_ = std::move(name);
    return copy;
}

std::vector<ComulEntry> HopfAlgebra::comul_entries() const {
    std::vector<ComulEntry> out;
    for (std::size_t i = 0; i < dim(); ++i)
        for (const auto& t : comul_[i]) out.push_back({i, t.j, t.k, t.c});
    std::sort(out.begin(), out.end());
    return out;
}

FpVector HopfAlgebra::comultiply(std::span<const Residue> v) const {
    if (v.size() != dim()) throw ArgumentError("element length differs from Hopf algebra dimension");
    const unsigned p = this->p();
    const std::size_t d = dim();
    FpVector out(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        if (v[i] == 0) continue;
        for (const auto& t : comul_[i]) {
            auto& slot = out[t.j * d + t.k];
            slot = fp::add(slot, fp::mul(v[i], t.c, p), p);
        }
    }
    return out;
}

Residue HopfAlgebra::counit_of(std::span<const Residue> v) const {
    unsigned long long acc = 0;
    for (std::size_t i = 0; i < dim(); ++i) acc += static_cast<unsigned long long>(v[i]) * counit_[i];
    return static_cast<Residue>(acc % p());
}

HopfAlgebra HopfAlgebra::with_catalog(std::vector<CatalogGenerator> gens) const {
    HopfAlgebra copy(*this);
    copy.catalog_ = std::move(gens);
    copy.cache_ = std::make_shared<PresentationCache>();
    return copy;
}

const Presentation& HopfAlgebra::presentation() const {
    std::call_once(cache_->once, [this] {
        if (algebra_.presentation())
            cache_->value = *algebra_.presentation();
        else
            cache_->value = derive_presentation(algebra_, counit_);
    });
    return *cache_->value;
}

bool HopfAlgebra::same_structure(const HopfAlgebra& o) const {
    return algebra_.same_structure(o.algebra_) && comul_entries() == o.comul_entries() && counit_ == o.counit_ &&
           antipode_ == o.antipode_;
}

bool AxiomReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
}

const AxiomCheck* AxiomReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return &c;
    return nullptr;
}

AxiomReport verify_hopf_axioms(const HopfAlgebra& h) {
    const FiniteAlgebra& a = h.algebra();
    const std::size_t d = h.dim();
    const unsigned p = h.p();
    AxiomReport report;
    auto record = [&](const std::string& name, const std::string& witness) {
        report.checks.push_back({name, witness.empty(), witness});
    };

    // Coassociativity.
    std::string witness;
    for (std::size_t i = 0; i < d && witness.empty(); ++i) {
        SparseVec left, right;
        for (const auto& t : h.comul_terms(i)) {
            for (const auto& u : h.comul_terms(t.j)) left.emplace_back((u.j * d + u.k) * d + t.k, fp::mul(t.c, u.c, p));
            for (const auto& u : h.comul_terms(t.k)) right.emplace_back((t.j * d + u.j) * d + u.k, fp::mul(t.c, u.c, p));
        }
        normalize(left, p);
        normalize(right, p);
        if (left != right) witness = "coassociativity fails on " + basis_name(h, i);
    }
    record("coassociativity", witness);

    // Counit law on both sides.
    witness.clear();
    for (std::size_t i = 0; i < d && witness.empty(); ++i) {
        FpVector left(d, 0), right(d, 0);
        for (const auto& t : h.comul_terms(i)) {
            left[t.k] = fp::add(left[t.k], fp::mul(h.counit()[t.j], t.c, p), p);
            right[t.j] = fp::add(right[t.j], fp::mul(h.counit()[t.k], t.c, p), p);
        }
        FpVector ei = a.basis_vector(i);
        if (left != ei || right != ei) witness = "counit law fails on " + basis_name(h, i);
    }
    record("counit", witness);

    // Delta is an algebra map.
    witness.clear();
    {
        FpVector one_one(d * d, 0);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) one_one[j * d + k] = fp::mul(a.unit()[j], a.unit()[k], p);
        if (h.comultiply(a.unit()) != one_one) witness = "Delta(1) differs from 1(x)1";
    }
    for (std::size_t i = 0; i < d && witness.empty(); ++i)
        for (std::size_t j = i; j < d && witness.empty(); ++j) {
            SparseVec lhs, rhs;
            auto [pf, pl] = product_range(a, i, j);
            for (auto it = pf; it != pl; ++it)
                for (const auto& t : h.comul_terms(it->k)) lhs.emplace_back(t.j * d + t.k, fp::mul(it->c, t.c, p));
            for (const auto& s : h.comul_terms(i))
                for (const auto& t : h.comul_terms(j)) {
                    auto [f1, l1] = product_range(a, s.j, t.j);
                    if (f1 == l1) continue;
                    auto [f2, l2] = product_range(a, s.k, t.k);
                    Residue c = fp::mul(s.c, t.c, p);
                    for (auto x = f1; x != l1; ++x)
                        for (auto y = f2; y != l2; ++y)
                            rhs.emplace_back(x->k * d + y->k, fp::mul(c, fp::mul(x->c, y->c, p), p));
                }
            normalize(lhs, p);
            normalize(rhs, p);
            if (lhs != rhs) witness = "Delta not multiplicative on " + basis_name(h, i) + " * " + basis_name(h, j);
        }
    record("comultiplication multiplicative", witness);

    // Counit is an algebra map.
    witness.clear();
    if (h.counit_of(a.unit()) != 1) witness = "counit(1) != 1";
    for (std::size_t i = 0; i < d && witness.empty(); ++i)
        for (std::size_t j = i; j < d && witness.empty(); ++j) {
            Residue lhs = 0;
            auto [pf, pl] = product_range(a, i, j);
            for (auto it = pf; it != pl; ++it) lhs = fp::add(lhs, fp::mul(it->c, h.counit()[it->k], p), p);
            if (lhs != fp::mul(h.counit()[i], h.counit()[j], p))
                witness = "counit not multiplicative on " + basis_name(h, i) + " * " + basis_name(h, j);
        }
    record("counit multiplicative", witness);

    // Antipode law, both sides.
    witness.clear();
    for (std::size_t i = 0; i < d && witness.empty(); ++i) {
        FpVector left = a.zero(), right = a.zero();
        for (const auto& t : h.comul_terms(i)) {
            FpVector sj = h.antipode().column(t.j), sk = h.antipode().column(t.k);
            FpVector l = a.multiply(sj, a.basis_vector(t.k));
            FpVector r = a.multiply(a.basis_vector(t.j), sk);
            for (std::size_t q = 0; q < d; ++q) {
                left[q] = fp::add(left[q], fp::mul(t.c, l[q], p), p);
                right[q] = fp::add(right[q], fp::mul(t.c, r[q], p), p);
            }
        }
        FpVector expect = a.unit();
        for (auto& x : expect) x = fp::mul(x, h.counit()[i], p);
        if (left != expect || right != expect) witness = "antipode law fails on " + basis_name(h, i);
    }
    record("antipode", witness);

    witness.clear();
    for (std::size_t i = 0; i < d && witness.empty(); ++i) {
        SparseVec fwd, swp;
        for (const auto& t : h.comul_terms(i)) {
            fwd.emplace_back(t.j * d + t.k, t.c);
            swp.emplace_back(t.k * d + t.j, t.c);
        }
        normalize(fwd, p);
        normalize(swp, p);
        if (fwd != swp) witness = "Delta not cocommutative on " + basis_name(h, i);
    }
    record("cocommutativity", witness);
    return report;
}

HopfAlgebra alpha_group(unsigned p, unsigned n, std::size_t cap) {
    require_supported_prime(p);
    if (n == 0) throw ArgumentError("alpha_{p^n} needs n >= 1");
    unsigned long long d = 1;
    for (unsigned t = 0; t < n; ++t) {
        d *= p;
        if (d > cap) throw ResourceError("dimension cap " + std::to_string(cap), "alpha group too large");
    }
    FiniteAlgebra alg = truncated_monomial_algebra(p, {d}, {"x"}, cap);
    std::vector<ComulEntry> comul;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            Residue c = fp::binomial(i, j, p);
            if (c) comul.push_back({i, j, i - j, c});
        }
    FpVector counit(d, 0);
    counit[0] = 1;
    FpMatrix s(p, d, d);
    for (std::size_t i = 0; i < d; ++i) s.at(i, i) = (i % 2 == 0) ? 1 : fp::neg(1, p);
    std::vector<Residue> relation(d + 1, 0);
    relation[d] = 1;
    HopfAlgebra h(std::move(alg), std::move(comul), std::move(counit), std::move(s),
                  "alpha:" + std::to_string(p) + "^" + std::to_string(n));
    FpVector x(d, 0);
    x[1] = 1;
    return h.with_catalog({{"x", x, GeneratorKind::additive, relation}});
}

HopfAlgebra mu_group(unsigned p) {
    require_supported_prime(p);
    std::vector<std::string> labels;
    for (unsigned i = 0; i < p; ++i) labels.push_back(i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
    std::vector<MulEntry> mul;
    std::vector<ComulEntry> comul;
    FpMatrix s(p, p, p);
    for (unsigned i = 0; i < p; ++i) {
        for (unsigned j = 0; j < p; ++j) mul.push_back({i, j, (i + j) % p, 1});
        comul.push_back({i, i, i, 1});
        s.at((p - i) % p, i) = 1;
    }
    FpVector unit(p, 0);
    unit[0] = 1;
    FiniteAlgebra alg(p, labels, unit, mul);
    Presentation pres;
    pres.generators.push_back(alg.basis_vector(1));
    for (unsigned i = 0; i < p; ++i) pres.basis_polynomials.push_back({{Monomial{i}, 1}});
    alg = alg.with_presentation(std::move(pres));
    std::vector<Residue> relation(p + 1, 0);
    relation[0] = p - 1;
    relation[p] = 1;
    HopfAlgebra h(std::move(alg), std::move(comul), FpVector(p, 1), std::move(s), "mu:" + std::to_string(p));
    return h.with_catalog({{"x", h.algebra().basis_vector(1), GeneratorKind::multiplicative, relation}});
}

HopfAlgebra constant_group(unsigned p) {
    require_supported_prime(p);
    std::vector<std::string> labels;
    std::vector<MulEntry> mul;
    std::vector<ComulEntry> comul;
    FpMatrix s(p, p, p);
    for (unsigned c = 0; c < p; ++c) {
        labels.push_back("e" + std::to_string(c));
        mul.push_back({c, c, c, 1});
        for (unsigned a = 0; a < p; ++a) comul.push_back({c, a, (c + p - a) % p, 1});
        s.at((p - c) % p, c) = 1;
    }
    FiniteAlgebra alg(p, labels, FpVector(p, 1), mul);
    FpVector t(p, 0);
    for (unsigned c = 0; c < p; ++c) t[c] = c;
    // e_c = 1 - (t - c)^{p-1}.
    Presentation pres;
    pres.generators.push_back(t);
    for (unsigned c = 0; c < p; ++c) {
        Polynomial poly;
        Residue neg_c = fp::neg(c, p);
        for (unsigned k = 0; k < p; ++k) {
            Residue coeff = fp::mul(fp::binomial(p - 1, k, p), fp::pow(neg_c, p - 1 - k, p), p);
            if (k == 0) coeff = fp::sub(1, coeff, p);
            else coeff = fp::neg(coeff, p);
            if (coeff) poly.push_back({Monomial{k}, coeff});
        }
        pres.basis_polynomials.push_back(std::move(poly));
    }
    alg = alg.with_presentation(std::move(pres));
    FpVector counit(p, 0);
    counit[0] = 1;
    std::vector<Residue> relation(p + 1, 0);
    relation[1] = p - 1;
    relation[p] = 1;
    HopfAlgebra h(std::move(alg), std::move(comul), std::move(counit), std::move(s), "const:Z/" + std::to_string(p));
    return h.with_catalog({{"t", t, GeneratorKind::additive, relation}});
}

HopfAlgebra trivial_group(unsigned p) {
    FiniteAlgebra alg = unit_algebra(p);
    return HopfAlgebra(std::move(alg), {{0, 0, 0, 1}}, FpVector{1}, FpMatrix::identity(p, 1),
                       "trivial:" + std::to_string(p));
}

HopfAlgebra direct_sum(const HopfAlgebra& g, const HopfAlgebra& h, std::size_t cap) {
    FiniteAlgebra alg = tensor_algebra(g.algebra(), h.algebra(), cap);
    const std::size_t dg = g.dim(), dh = h.dim();
    const unsigned p = g.p();
    std::vector<ComulEntry> comul;
    for (std::size_t i = 0; i < dg; ++i)
        for (std::size_t k = 0; k < dh; ++k)
            for (const auto& s : g.comul_terms(i))
                for (const auto& t : h.comul_terms(k))
                    comul.push_back({i * dh + k, s.j * dh + t.j, s.k * dh + t.k, fp::mul(s.c, t.c, p)});
    FpVector counit(dg * dh);
    for (std::size_t i = 0; i < dg; ++i)
        for (std::size_t k = 0; k < dh; ++k) counit[i * dh + k] = fp::mul(g.counit()[i], h.counit()[k], p);
    HopfAlgebra out(std::move(alg), std::move(comul), std::move(counit), kron(g.antipode(), h.antipode()),
                    g.name() + " + " + h.name());
    if (!g.is_catalog() || !h.is_catalog()) return out;
    std::vector<CatalogGenerator> gens;
    for (const auto& c : g.catalog_generators()) {
        FpVector v(dg * dh, 0);
        for (std::size_t i = 0; i < dg; ++i)
            for (std::size_t k = 0; k < dh; ++k) v[i * dh + k] = fp::mul(c.element[i], h.algebra().unit()[k], p);
        gens.push_back({c.label + "1", v, c.kind, c.relation});
    }
    for (const auto& c : h.catalog_generators()) {
        FpVector v(dg * dh, 0);
        for (std::size_t i = 0; i < dg; ++i)
            for (std::size_t k = 0; k < dh; ++k) v[i * dh + k] = fp::mul(g.algebra().unit()[i], c.element[k], p);
        gens.push_back({c.label + "2", v, c.kind, c.relation});
    }
    return out.with_catalog(std::move(gens));
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

unsigned parse_uint(const std::string& s, const std::string& id) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 6)
        throw ArgumentError("unknown catalog id '" + id + "'");
    return static_cast<unsigned>(std::stoul(s));
}

HopfAlgebra catalog_atom(const std::string& raw, std::size_t cap) {
    const std::string id = trim(raw);
    auto starts = [&](const char* prefix) { return id.rfind(prefix, 0) == 0; };
    if (starts("alpha:")) {
        auto rest = id.substr(6);
        auto caret = rest.find('^');
        if (caret == std::string::npos) throw ArgumentError("unknown catalog id '" + id + "'");
        return alpha_group(parse_uint(rest.substr(0, caret), id), parse_uint(rest.substr(caret + 1), id), cap);
    }
    if (starts("mu:")) return mu_group(parse_uint(id.substr(3), id));
    if (starts("const:Z/")) return constant_group(parse_uint(id.substr(8), id));
    if (starts("trivial:")) return trivial_group(parse_uint(id.substr(8), id));
    throw ArgumentError("unknown catalog id '" + id + "'");
}

}  // namespace

HopfAlgebra catalog_group(const std::string& id, std::size_t cap) {
    std::string text = id;
    const std::string circled_plus = "\xE2\x8A\x95";
    for (std::size_t pos; (pos = text.find(circled_plus)) != std::string::npos;) text.replace(pos, circled_plus.size(), "+");
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, '+');) parts.push_back(part);
    if (parts.empty()) throw ArgumentError("empty catalog id");
    HopfAlgebra acc = catalog_atom(parts.front(), cap);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        HopfAlgebra next = catalog_atom(parts[i], cap);
        if (next.p() != acc.p()) throw ArgumentError("catalog sum mixes primes in '" + id + "'");
        acc = direct_sum(acc, next, cap);
    }
    return acc;
}

HopfAlgebra cartier_dual(const HopfAlgebra& g) {
    const std::size_t d = g.dim();
    const unsigned p = g.p();
    std::vector<std::string> labels;
    for (const auto& l : g.algebra().labels()) labels.push_back("ξ[" + l + "]");
    std::vector<MulEntry> mul;
    for (const auto& e : g.comul_entries()) mul.push_back({e.j, e.k, e.i, e.c});
    std::vector<ComulEntry> comul;
    for (const auto& e : g.algebra().mul_entries()) comul.push_back({e.k, e.i, e.j, e.c});
    FiniteAlgebra alg(p, std::move(labels), g.counit(), std::move(mul));
    (void)d;
    return HopfAlgebra(std::move(alg), std::move(comul), g.algebra().unit(), g.antipode().transpose(),
                       "dual(" + g.name() + ")");
}

bool is_algebra_map(const FiniteAlgebra& source_alg, const FiniteAlgebra& target_alg, const FpMatrix& map) {
    if (map.rows() != source_alg.dim() || map.cols() != target_alg.dim()) return false;
    if (map.apply(target_alg.unit()) != source_alg.unit()) return false;
    std::vector<FpVector> images(target_alg.dim());
    for (std::size_t j = 0; j < target_alg.dim(); ++j) images[j] = map.column(j);
    for (std::size_t i = 0; i < target_alg.dim(); ++i)
        for (std::size_t j = i; j < target_alg.dim(); ++j) {
            FpVector prod = target_alg.multiply(target_alg.basis_vector(i), target_alg.basis_vector(j));
            if (map.apply(prod) != source_alg.multiply(images[i], images[j])) return false;
        }
    return true;
}

bool is_coalgebra_map(const HopfAlgebra& source, const HopfAlgebra& target, const FpMatrix& map) {
    const std::size_t da = source.dim(), db = target.dim();
    const unsigned p = source.p();
    if (map.rows() != da || map.cols() != db) return false;
    std::vector<FpVector> images(db);
    for (std::size_t j = 0; j < db; ++j) images[j] = map.column(j);
    for (std::size_t j = 0; j < db; ++j) {
        if (source.counit_of(images[j]) != target.counit()[j]) return false;
        FpVector lhs = source.comultiply(images[j]);
        FpVector rhs(da * da, 0);
        for (const auto& t : target.comul_terms(j)) {
            const auto& u = images[t.j];
            const auto& v = images[t.k];
            for (std::size_t a = 0; a < da; ++a) {
                if (u[a] == 0) continue;
                Residue ca = fp::mul(t.c, u[a], p);
                for (std::size_t b = 0; b < da; ++b)
                    if (v[b]) rhs[a * da + b] = fp::add(rhs[a * da + b], fp::mul(ca, v[b], p), p);
            }
        }
        if (lhs != rhs) return false;
    }
    return true;
}

HopfMorphism::HopfMorphism(HopfPtr source, HopfPtr target, FpMatrix coordinate_map, TwistMarker source_twist,
                           TwistMarker target_twist)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(coordinate_map)),
      source_twist_(source_twist), target_twist_(target_twist) {
    if (!source_ || !target_) throw ArgumentError("morphism endpoints must be set");
    if (source_->p() != target_->p() || map_.modulus() != source_->p())
        throw ArgumentError("morphism between group schemes over different primes");
    if (map_.rows() != source_->dim() || map_.cols() != target_->dim())
        throw ArgumentError("coordinate map must be dim(source) x dim(target)");
    algebra_map_ = hopfkit::is_algebra_map(source_->algebra(), target_->algebra(), map_);
    coalgebra_map_ = hopfkit::is_coalgebra_map(*source_, *target_, map_);
}

HopfMorphism HopfMorphism::identity(const HopfPtr& g) {
    return HopfMorphism(g, g, FpMatrix::identity(g->p(), g->dim()));
}

HopfMorphism HopfMorphism::zero(const HopfPtr& g, const HopfPtr& h) {
    FpMatrix m(g->p(), g->dim(), h->dim());
    for (std::size_t j = 0; j < h->dim(); ++j)
        for (std::size_t i = 0; i < g->dim(); ++i) m.at(i, j) = fp::mul(g->algebra().unit()[i], h->counit()[j], g->p());
    return HopfMorphism(g, h, std::move(m));
}

HopfMorphism compose(const HopfMorphism& second, const HopfMorphism& first) {
    if (first.target_ptr() != second.source_ptr() && !first.target().same_structure(second.source()))
        throw ArgumentError("morphisms are not composable");
    return HopfMorphism(first.source_ptr(), second.target_ptr(), first.coordinate_map() * second.coordinate_map(),
                        first.source_twist(), second.target_twist());
}

namespace {

struct QuotientCoords {
    std::vector<std::size_t> kept;
    FpMatrix projection;  // kept.size() x dim
};

QuotientCoords quotient_coords(const FpMatrix& ideal, std::size_t d, unsigned p) {
    FpMatrix ech = ideal.cols() ? column_echelon(ideal) : FpMatrix(p, d, 0);
    auto lead = leading_rows(ech);
    std::vector<bool> is_lead(d, false);
    for (auto r : lead) is_lead[r] = true;
    QuotientCoords q;
    for (std::size_t i = 0; i < d; ++i)
        if (!is_lead[i]) q.kept.push_back(i);
    std::vector<std::size_t> pos(d, 0);
    for (std::size_t t = 0; t < q.kept.size(); ++t) pos[q.kept[t]] = t;
    q.projection = FpMatrix(p, q.kept.size(), d);
    for (std::size_t i = 0; i < d; ++i) {
        FpVector v(d, 0);
        v[i] = 1;
        for (std::size_t c = 0; c < ech.cols(); ++c) {
            Residue f = v[lead[c]];
            if (f == 0) continue;
            for (std::size_t r = 0; r < d; ++r) v[r] = fp::sub(v[r], fp::mul(f, ech.at(r, c), p), p);
        }
        for (std::size_t t = 0; t < q.kept.size(); ++t) q.projection.at(t, i) = v[q.kept[t]];
    }
    return q;
}

FpVector project_tensor(const FpMatrix& proj, std::span<const Residue> v, std::size_t d) {
    const std::size_t q = proj.rows();
    const unsigned p = proj.modulus();
    FpVector out(q * q, 0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            Residue c = v[a * d + b];
            if (c == 0) continue;
            for (std::size_t s = 0; s < q; ++s) {
                Residue ps = proj.at(s, a);
                if (ps == 0) continue;
                for (std::size_t t = 0; t < q; ++t)
                    out[s * q + t] = fp::add(out[s * q + t], fp::mul(c, fp::mul(ps, proj.at(t, b), p), p), p);
            }
        }
    return out;
}

bool all_zero(std::span<const Residue> v) {
    return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

FpMatrix augmentation_ideal(const HopfAlgebra& h) {
    FpMatrix row(h.p(), 1, h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i) row.at(0, i) = h.counit()[i];
    return kernel_basis(row);
}

}  // namespace

bool SubgroupData::is_hopf_ideal() const {
    const HopfAlgebra& h = *ambient;
    const std::size_t d = h.dim();
    const unsigned p = h.p();
    if (ideal_basis.rows() != d) return false;
    auto q = quotient_coords(ideal_basis, d, p);
    for (std::size_t c = 0; c < ideal_basis.cols(); ++c) {
        FpVector v = ideal_basis.column(c);
        if (h.counit_of(v) != 0) return false;
        if (!all_zero(q.projection.apply(h.antipode().apply(v)))) return false;
        for (std::size_t i = 0; i < d; ++i)
            if (!all_zero(q.projection.apply(h.algebra().multiply(h.algebra().basis_vector(i), v)))) return false;
        if (!all_zero(project_tensor(q.projection, h.comultiply(v), d))) return false;
    }
    return true;
}

QuotientAlgebra quotient_by_hopf_ideal(const SubgroupData& data) {
    if (!data.is_hopf_ideal()) throw ValidationError("ideal is not a Hopf ideal");
    const HopfAlgebra& h = *data.ambient;
    const std::size_t d = h.dim();
    const unsigned p = h.p();
    auto q = quotient_coords(data.ideal_basis, d, p);
    const std::size_t n = q.kept.size();
    std::vector<std::string> labels;
    for (auto i : q.kept) labels.push_back("[" + h.algebra().labels()[i] + "]");
    std::vector<MulEntry> mul;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) {
            FpVector prod = q.projection.apply(
                h.algebra().multiply(h.algebra().basis_vector(q.kept[s]), h.algebra().basis_vector(q.kept[t])));
            for (std::size_t k = 0; k < n; ++k)
                if (prod[k]) mul.push_back({s, t, k, prod[k]});
        }
    FiniteAlgebra alg(p, std::move(labels), q.projection.apply(h.algebra().unit()), std::move(mul));
    std::vector<ComulEntry> comul;
    FpVector counit(n);
    FpMatrix s(p, n, n);
    for (std::size_t t = 0; t < n; ++t) {
        FpVector dv = project_tensor(q.projection, h.comultiply(h.algebra().basis_vector(q.kept[t])), d);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (dv[a * n + b]) comul.push_back({t, a, b, dv[a * n + b]});
        counit[t] = h.counit()[q.kept[t]];
        s.set_column(t, q.projection.apply(h.antipode().column(q.kept[t])));
    }
    return {HopfAlgebra(std::move(alg), std::move(comul), std::move(counit), std::move(s)), q.projection};
}

SubHopfAlgebra sub_hopf_algebra(const HopfAlgebra& h, const FpMatrix& span) {
    const std::size_t d = h.dim();
    const unsigned p = h.p();
    FpMatrix c = column_echelon(span);
    auto lead = leading_rows(c);
    const std::size_t n = c.cols();
    auto coords = [&](const FpVector& v, const char* what) {
        FpVector x(n);
        for (std::size_t t = 0; t < n; ++t) x[t] = v[lead[t]];
        if (c.apply(x) != v) throw ValidationError(std::string("subspace not closed under ") + what);
        return x;
    };
    std::vector<FpVector> basis(n);
    for (std::size_t t = 0; t < n; ++t) basis[t] = c.column(t);
    std::vector<std::string> labels;
    for (std::size_t t = 0; t < n; ++t) {
        std::string f = h.algebra().format(basis[t]);
        labels.push_back(f.size() <= 24 ? f : "c" + std::to_string(t));
    }
    std::vector<MulEntry> mul;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) {
            FpVector x = coords(h.algebra().multiply(basis[s], basis[t]), "multiplication");
            for (std::size_t k = 0; k < n; ++k)
                if (x[k]) mul.push_back({s, t, k, x[k]});
        }
    FpVector unit = coords(h.algebra().unit(), "the unit");
    FiniteAlgebra alg(p, std::move(labels), std::move(unit), std::move(mul));
    std::vector<ComulEntry> comul;
    FpVector counit(n);
    FpMatrix s(p, n, n);
    for (std::size_t t = 0; t < n; ++t) {
        FpVector dv = h.comultiply(basis[t]);
        FpVector back(d * d, 0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Residue x = dv[lead[a] * d + lead[b]];
                if (x == 0) continue;
                comul.push_back({t, a, b, x});
                for (std::size_t r1 = 0; r1 < d; ++r1) {
                    if (basis[a][r1] == 0) continue;
                    for (std::size_t r2 = 0; r2 < d; ++r2)
                        if (basis[b][r2])
                            back[r1 * d + r2] =
                                fp::add(back[r1 * d + r2], fp::mul(x, fp::mul(basis[a][r1], basis[b][r2], p), p), p);
                }
            }
        if (back != dv) throw ValidationError("subspace not closed under comultiplication");
        counit[t] = h.counit_of(basis[t]);
        s.set_column(t, coords(h.antipode().apply(basis[t]), "the antipode"));
    }
    return {HopfAlgebra(std::move(alg), std::move(comul), std::move(counit), std::move(s)), c};
}

FpMatrix generated_ideal(const FiniteAlgebra& a, const FpMatrix& elements) {
    std::vector<FpVector> cols;
    for (std::size_t c = 0; c < elements.cols(); ++c) {
        FpVector g = elements.column(c);
        for (std::size_t i = 0; i < a.dim(); ++i) cols.push_back(a.multiply(a.basis_vector(i), g));
    }
    if (cols.empty()) return FpMatrix(a.p(), a.dim(), 0);
    return column_echelon(FpMatrix::from_columns(a.p(), a.dim(), cols));
}

namespace {

void require_certified(const HopfMorphism& phi, const char* op) {
    if (!phi.certified()) throw ArgumentError(std::string(op) + " needs a certified homomorphism");
}

QuotientAlgebra kernel_data(const HopfMorphism& phi) {
    require_certified(phi, "kernel_subgroup");
    FpMatrix images = phi.coordinate_map() * augmentation_ideal(phi.target());
    FpMatrix ideal = generated_ideal(phi.source().algebra(), images);
    return quotient_by_hopf_ideal({phi.source_ptr(), ideal});
}

SubHopfAlgebra cokernel_data(const HopfMorphism& phi) {
    require_certified(phi, "cokernel_quotient");
    const HopfAlgebra& b = phi.target();
    const std::size_t d = b.dim();
    const unsigned p = b.p();
    FpMatrix j = kernel_basis(phi.coordinate_map());
    auto q = quotient_coords(j, d, p);
    const std::size_t n = q.kept.size();
    // x such that (id (x) proj)(Delta x - x (x) 1) = 0.
    FpMatrix cond(p, d * n, d);
    FpVector proj_one = q.projection.apply(b.algebra().unit());
    for (std::size_t i = 0; i < d; ++i) {
        for (const auto& t : b.comul_terms(i))
            for (std::size_t s = 0; s < n; ++s) {
                Residue x = q.projection.at(s, t.k);
                if (x) cond.at(t.j * n + s, i) = fp::add(cond.at(t.j * n + s, i), fp::mul(t.c, x, p), p);
            }
        for (std::size_t s = 0; s < n; ++s)
            cond.at(i * n + s, i) = fp::sub(cond.at(i * n + s, i), proj_one[s], p);
    }
    return sub_hopf_algebra(b, kernel_basis(cond));
}

}  // namespace

HopfAlgebra kernel_subgroup(const HopfMorphism& phi) {
    return kernel_data(phi).algebra.renamed("ker(" + phi.source().name() + " -> " + phi.target().name() + ")");
}

HopfMorphism kernel_inclusion(const HopfMorphism& phi) {
    auto data = kernel_data(phi);
    auto k = share(data.algebra.renamed("ker(" + phi.source().name() + " -> " + phi.target().name() + ")"));
    return HopfMorphism(k, phi.source_ptr(), data.projection);
}

HopfAlgebra image_subgroup(const HopfMorphism& phi) {
    require_certified(phi, "image_subgroup");
    auto data = quotient_by_hopf_ideal({phi.target_ptr(), kernel_basis(phi.coordinate_map())});
    return data.algebra.renamed("im(" + phi.source().name() + " -> " + phi.target().name() + ")");
}

HopfAlgebra cokernel_quotient(const HopfMorphism& phi) {
    return cokernel_data(phi).algebra.renamed("coker(" + phi.source().name() + " -> " + phi.target().name() + ")");
}

HopfMorphism cokernel_projection(const HopfMorphism& phi) {
    auto data = cokernel_data(phi);
    auto c = share(data.algebra.renamed("coker(" + phi.source().name() + " -> " + phi.target().name() + ")"));
    return HopfMorphism(phi.target_ptr(), c, data.inclusion);
}

ExactnessVerdict exactness_check(const HopfMorphism& iota, const HopfMorphism& pi) {
    ExactnessVerdict v;
    v.composable = iota.certified() && pi.certified() &&
                   (iota.target_ptr() == pi.source_ptr() || iota.target().same_structure(pi.source()));
    if (!v.composable) return v;
    v.closed_immersion = rank(iota.coordinate_map()) == iota.source().dim();
    v.quotient_map = rank(pi.coordinate_map()) == pi.target().dim();
    FpMatrix ker_iota = kernel_basis(iota.coordinate_map());
    FpMatrix ideal = generated_ideal(pi.source().algebra(), pi.coordinate_map() * augmentation_ideal(pi.target()));
    v.kernel_matches = ker_iota.cols() == ideal.cols() && (ideal.cols() == 0 || same_span(ker_iota, ideal));
    return v;
}

FpMatrix primitive_elements(const HopfAlgebra& g) {
    const std::size_t d = g.dim();
    const unsigned p = g.p();
    const FpVector& one = g.algebra().unit();
    std::map<std::size_t, std::size_t> row_of;
    std::vector<std::vector<std::pair<std::size_t, Residue>>> cols(d);
    for (std::size_t i = 0; i < d; ++i) {
        SparseVec v;
        for (const auto& t : g.comul_terms(i)) v.emplace_back(t.j * d + t.k, t.c);
        for (std::size_t r = 0; r < d; ++r)
            if (one[r]) {
                v.emplace_back(i * d + r, fp::neg(one[r], p));
                v.emplace_back(r * d + i, fp::neg(one[r], p));
            }
        normalize(v, p);
        for (const auto& [r, c] : v) row_of.emplace(r, row_of.size());
        cols[i] = std::move(v);
    }
    FpMatrix m(p, row_of.size(), d);
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& [r, c] : cols[i]) m.at(row_of[r], i) = c;
    FpMatrix k = kernel_basis(m);
    return k.cols() ? column_echelon(k) : FpMatrix(p, d, 0);
}

namespace {

// Minimal monic relation sum c_e g^e = 0 satisfied by g.
std::vector<Residue> minimal_relation(const FiniteAlgebra& a, const FpVector& g) {
    const unsigned p = a.p();
    std::vector<FpVector> powers{a.unit()};
    for (;;) {
        FpVector next = a.multiply(powers.back(), g);
        FpMatrix span = FpMatrix::from_columns(p, a.dim(), powers);
        auto x = solve(span, next);
        if (x) {
            std::vector<Residue> rel(powers.size() + 1, 0);
            for (std::size_t e = 0; e < powers.size(); ++e) rel[e] = fp::neg((*x)[e], p);
            rel[powers.size()] = 1;
            return rel;
        }
        powers.push_back(std::move(next));
    }
}

bool satisfies(const FiniteAlgebra& a, const FpVector& v, const std::vector<Residue>& rel) {
    const unsigned p = a.p();
    FpVector acc = a.zero(), pw = a.unit();
    for (std::size_t e = 0; e < rel.size(); ++e) {
        if (rel[e])
            for (std::size_t t = 0; t < acc.size(); ++t) acc[t] = fp::add(acc[t], fp::mul(rel[e], pw[t], p), p);
        if (e + 1 < rel.size()) pw = a.multiply(pw, v);
    }
    return all_zero(acc);
}

std::vector<FpVector> span_elements(const FpMatrix& basis, const FpVector& offset, std::size_t cap) {
    const unsigned p = basis.modulus();
    std::size_t count = 1;
    for (std::size_t c = 0; c < basis.cols(); ++c) {
        if (count > cap / p) throw ResourceError("enumeration cap " + std::to_string(cap), "candidate set too large");
        count *= p;
    }
    std::vector<FpVector> out;
    out.reserve(count);
    std::vector<Residue> coef(basis.cols(), 0);
    for (std::size_t n = 0; n < count; ++n) {
        FpVector v = offset;
        for (std::size_t c = 0; c < basis.cols(); ++c)
            if (coef[c])
                for (std::size_t r = 0; r < v.size(); ++r) v[r] = fp::add(v[r], fp::mul(coef[c], basis.at(r, c), p), p);
        out.push_back(std::move(v));
        for (std::size_t c = basis.cols(); c-- > 0;) {
            if (++coef[c] < p) break;
            coef[c] = 0;
        }
    }
    return out;
}

// Candidate images in src of each presentation generator of tgt; nullopt if over cap.
std::optional<std::vector<std::vector<FpVector>>> generator_candidates(const HopfAlgebra& src, const HopfAlgebra& tgt,
                                                                      std::size_t cap) {
    const unsigned p = src.p();
    const FiniteAlgebra& a = src.algebra();
    std::vector<std::vector<FpVector>> cands;
    try {
        if (!tgt.catalog_generators().empty()) {
            FpMatrix prim = primitive_elements(src);
            std::optional<std::vector<FpVector>> grouplikes;
            for (const auto& g : tgt.catalog_generators()) {
                std::vector<FpVector> list;
                if (g.kind == GeneratorKind::additive) {
                    list = span_elements(prim, a.zero(), cap);
                } else {
                    if (!grouplikes) {
                        grouplikes.emplace();
                        for (const auto& e : group_like_points(src, prime_field_ring(p), cap))
                            grouplikes->push_back(e.coefficients());
                    }
                    list = *grouplikes;
                }
                std::erase_if(list, [&](const FpVector& v) { return !satisfies(a, v, g.relation); });
                cands.push_back(std::move(list));
            }
        } else {
            FpMatrix aug = augmentation_ideal(src);
            for (const auto& g : tgt.presentation().generators) {
                FpVector offset = a.unit();
                Residue e = tgt.counit_of(g);
                for (auto& x : offset) x = fp::mul(x, e, p);
                auto list = span_elements(aug, offset, cap);
                auto rel = minimal_relation(tgt.algebra(), g);
                std::erase_if(list, [&](const FpVector& v) { return !satisfies(a, v, rel); });
                cands.push_back(std::move(list));
            }
        }
    } catch (const ResourceError&) {
        return std::nullopt;
    }
    return cands;
}

double product_size(const std::vector<std::vector<FpVector>>& c) {
    double n = 1;
    for (const auto& l : c) n *= static_cast<double>(l.size());
    return n;
}

std::optional<FpMatrix> search_direction(const HopfAlgebra& src, const HopfAlgebra& tgt,
                                         const std::vector<std::vector<FpVector>>& cands) {
    const Presentation& pres = tgt.catalog_generators().empty() ? tgt.presentation() : tgt.presentation();
    const std::size_t ngen = cands.size();
    if (ngen == 0) {
        FpMatrix m(src.p(), src.dim(), tgt.dim());
        for (std::size_t j = 0; j < tgt.dim(); ++j)
            m.set_column(j, evaluate_polynomial(src.algebra(), pres.basis_polynomials[j], {}));
        if (rank(m) == src.dim() && is_algebra_map(src.algebra(), tgt.algebra(), m) && is_coalgebra_map(src, tgt, m))
            return m;
        return std::nullopt;
    }
    for (const auto& l : cands)
        if (l.empty()) return std::nullopt;
    std::vector<std::size_t> idx(ngen, 0);
    for (;;) {
        std::vector<FpVector> images(ngen);
        for (std::size_t s = 0; s < ngen; ++s) images[s] = cands[s][idx[s]];
        FpMatrix m(src.p(), src.dim(), tgt.dim());
        for (std::size_t j = 0; j < tgt.dim(); ++j)
            m.set_column(j, evaluate_polynomial(src.algebra(), pres.basis_polynomials[j], images));
        if (rank(m) == src.dim() && is_algebra_map(src.algebra(), tgt.algebra(), m) && is_coalgebra_map(src, tgt, m))
            return m;
        std::size_t s = ngen;
        while (s-- > 0) {
            if (++idx[s] < cands[s].size()) break;
            idx[s] = 0;
        }
        if (s == static_cast<std::size_t>(-1)) return std::nullopt;
    }
}

}  // namespace

std::optional<HopfMorphism> hopf_isomorphism_search(const HopfPtr& g, const HopfPtr& h, std::size_t cap) {
    if (g->p() != h->p() || g->dim() != h->dim()) return std::nullopt;
    auto forward = generator_candidates(*g, *h, cap);
    auto backward = generator_candidates(*h, *g, cap);
    double fsize = forward ? product_size(*forward) : 1e300;
    double bsize = backward ? product_size(*backward) : 1e300;
    if (std::min(fsize, bsize) > static_cast<double>(cap))
        throw ResourceError("enumeration cap " + std::to_string(cap), "isomorphism search space too large");
    if (fsize <= bsize) {
        auto m = search_direction(*g, *h, *forward);
        if (!m) return std::nullopt;
        return HopfMorphism(g, h, *m);
    }
    auto m = search_direction(*h, *g, *backward);
    if (!m) return std::nullopt;
    auto inv = inverse(*m);
    if (!inv) return std::nullopt;
    return HopfMorphism(g, h, *inv);
}

std::vector<AlgebraElement> group_like_points(const HopfAlgebra& g, const CoefficientRing& r, std::size_t node_cap) {
    if (g.p() != r.p()) throw ArgumentError("coefficient ring over a different prime");
    MultiGroupLikeOptions opt;
    opt.node_cap = node_cap;
    auto vecs = solve_multi_grouplike({share(g)}, r, opt);
    auto parent = std::make_shared<const FiniteAlgebra>(base_extend(g.algebra(), r).algebra);
    std::vector<AlgebraElement> out;
    for (auto& v : vecs) out.emplace_back(parent, std::move(v));
    return out;
}

}  // namespace hopfkit
