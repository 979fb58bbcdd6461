#include "hopfkit/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <tuple>
#include <sstream>

namespace hopfkit {

namespace {

constexpr std::size_t kMaxStructureEntries = 20'000'000;

std::string monomial_label(const std::vector<std::string>& names, const std::vector<unsigned long long>& exps) {
    std::string out;
    for (std::size_t s = 0; s < exps.size(); ++s) {
        if (exps[s] == 0) continue;
        if (!out.empty()) out += "*";
        out += names[s];
        if (exps[s] > 1) out += "^" + std::to_string(exps[s]);
    }
    return out.empty() ? "1" : out;
}

// Incremental echelon basis used by presentation derivation.
class EchelonBuilder {
public:
    EchelonBuilder(unsigned p, std::size_t dim) : p_(p), dim_(dim) {}
    // Returns true when v extends the span.
    bool insert(FpVector v) {
        reduce(v);
        std::size_t lead = 0;
        while (lead < dim_ && v[lead] == 0) ++lead;
        if (lead == dim_) return false;
        Residue s = fp::inv(v[lead], p_);
        for (auto& x : v) x = fp::mul(x, s, p_);
        rows_.emplace_back(lead, std::move(v));
        return true;
    }
    bool contains(FpVector v) const {
        reduce(v);
        return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
    }
    std::size_t size() const { return rows_.size(); }

private:
    void reduce(FpVector& v) const {
        for (const auto& [lead, row] : rows_) {
            Residue f = v[lead];
            if (f == 0) continue;
            for (std::size_t t = 0; t < dim_; ++t) v[t] = fp::sub(v[t], fp::mul(f, row[t], p_), p_);
        }
    }
    unsigned p_;
    std::size_t dim_;
    std::vector<std::pair<std::size_t, FpVector>> rows_;
};

}  // namespace

FiniteAlgebra::FiniteAlgebra(unsigned p, std::vector<std::string> labels, FpVector unit, std::vector<MulEntry> mul)
    : p_(p), labels_(std::move(labels)), unit_(std::move(unit)) {
    require_supported_prime(p);
    const std::size_t d = labels_.size();
    if (d == 0) throw ValidationError("algebra must have positive dimension");
    if (unit_.size() != d) throw ValidationError("unit vector length differs from the dimension");
    for (auto& u : unit_) u %= p_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Residue> acc;
    for (const auto& e : mul) {
        if (e.i >= d || e.j >= d || e.k >= d) throw ValidationError("structure constant index out of range");
        auto& slot = acc[{e.i, e.j, e.k}];
        slot = fp::add(slot, e.c % p_, p_);
    }
    rows_.assign(d, {});
    for (const auto& [key, c] : acc) {
        if (c == 0) continue;
        auto [i, j, k] = key;
        rows_[i].push_back({j, k, c});
    }
    validate();
}

FiniteAlgebra::FiniteAlgebra(Trusted, unsigned p, std::vector<std::string> labels, FpVector unit,
                             std::vector<std::vector<Term>> rows)
    : p_(p), labels_(std::move(labels)), unit_(std::move(unit)), rows_(std::move(rows)) {}

void FiniteAlgebra::validate() const {
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i)
        for (const auto& t : rows_[i]) {
            const auto& other = rows_[t.j];
            bool found = false;
            for (const auto& u : other)
                if (u.j == i && u.k == t.k) {
                    found = u.c == t.c;
                    break;
                }
            if (!found)
                throw ValidationError("commutativity fails: e" + std::to_string(i) + "*e" + std::to_string(t.j) +
                                      " differs from e" + std::to_string(t.j) + "*e" + std::to_string(i));
        }
    for (std::size_t j = 0; j < d; ++j) {
        FpVector ej = basis_vector(j);
        if (multiply(unit_, ej) != ej) throw ValidationError("unit law fails on e" + std::to_string(j));
    }
    std::vector<unsigned long long> lhs(d), rhs(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const auto first = std::lower_bound(rows_[i].begin(), rows_[i].end(), j,
                                                [](const Term& t, std::size_t v) { return t.j < v; });
            auto last = first;
            while (last != rows_[i].end() && last->j == j) ++last;
            for (std::size_t l = 0; l < d; ++l) {
                std::fill(lhs.begin(), lhs.end(), 0ULL);
                std::fill(rhs.begin(), rhs.end(), 0ULL);
                for (auto it = first; it != last; ++it)
                    for (const auto& u : rows_[it->k])
                        if (u.j == l) lhs[u.k] += static_cast<unsigned long long>(it->c) * u.c;
                for (const auto& t : rows_[j]) {
                    if (t.j != l) continue;
                    for (const auto& u : rows_[i])
                        if (u.j == t.k) rhs[u.k] += static_cast<unsigned long long>(t.c) * u.c;
                }
                for (std::size_t k = 0; k < d; ++k)
                    if (lhs[k] % p_ != rhs[k] % p_)
                        throw ValidationError("associativity fails on (e" + std::to_string(i) + ",e" +
                                              std::to_string(j) + ",e" + std::to_string(l) + ")");
            }
        }
}

std::vector<MulEntry> FiniteAlgebra::mul_entries() const {
    std::vector<MulEntry> out;
    for (std::size_t i = 0; i < dim(); ++i)
        for (const auto& t : rows_[i]) out.push_back({i, t.j, t.k, t.c});
    std::sort(out.begin(), out.end());
    return out;
}

FpVector FiniteAlgebra::basis_vector(std::size_t i) const {
    if (i >= dim()) throw ArgumentError("basis index out of range");
    FpVector v(dim(), 0);
    v[i] = 1;
    return v;
}

FpVector FiniteAlgebra::multiply(std::span<const Residue> a, std::span<const Residue> b) const {
    if (a.size() != dim() || b.size() != dim()) throw ArgumentError("element length differs from algebra dimension");
    std::vector<unsigned long long> acc(dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i) {
        if (a[i] == 0) continue;
        for (const auto& t : rows_[i]) {
            if (b[t.j] == 0) continue;
            acc[t.k] += static_cast<unsigned long long>(a[i]) * b[t.j] % p_ * t.c;
        }
    }
    FpVector out(dim());
    for (std::size_t k = 0; k < dim(); ++k) out[k] = static_cast<Residue>(acc[k] % p_);
    return out;
}

FpVector FiniteAlgebra::power(std::span<const Residue> a, unsigned long long e) const {
    FpVector result = unit_;
    FpVector base(a.begin(), a.end());
    while (e > 0) {
        if (e & 1ULL) result = multiply(result, base);
        e >>= 1ULL;
        if (e) base = multiply(base, base);
    }
    return result;
}

FpMatrix FiniteAlgebra::multiplication_matrix(std::span<const Residue> a) const {
    FpMatrix m(p_, dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) m.set_column(j, multiply(a, basis_vector(j)));
    return m;
}

FpMatrix FiniteAlgebra::frobenius_matrix() const {
    FpMatrix m(p_, dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i) m.set_column(i, power(basis_vector(i), p_));
    return m;
}

FiniteAlgebra FiniteAlgebra::with_presentation(Presentation pres) const {
    if (pres.basis_polynomials.size() != dim()) throw ArgumentError("presentation must cover every basis element");
    FiniteAlgebra copy(*this);
    copy.presentation_ = std::move(pres);
    return copy;
}

bool FiniteAlgebra::same_structure(const FiniteAlgebra& o) const {
    return p_ == o.p_ && dim() == o.dim() && unit_ == o.unit_ && mul_entries() == o.mul_entries();
}

std::string FiniteAlgebra::format(std::span<const Residue> v) const {
    std::string out;
    for (std::size_t i = 0; i < v.size() && i < dim(); ++i) {
        if (v[i] == 0) continue;
        if (!out.empty()) out += " + ";
        if (v[i] != 1) out += std::to_string(v[i]) + "*";
        out += labels_[i];
    }
    return out.empty() ? "0" : out;
}

FpVector evaluate_polynomial(const FiniteAlgebra& target, const Polynomial& poly,
                             const std::vector<FpVector>& generator_images) {
    const unsigned p = target.p();
    std::vector<std::vector<FpVector>> powers(generator_images.size());
    auto power_of = [&](std::size_t g, unsigned e) -> const FpVector& {
        auto& cache = powers[g];
        if (cache.empty()) cache.push_back(target.unit());
        while (cache.size() <= e) cache.push_back(target.multiply(cache.back(), generator_images[g]));
        return cache[e];
    };
    FpVector out = target.zero();
    for (const auto& [mono, c] : poly) {
        if (mono.size() > generator_images.size()) throw ArgumentError("monomial references a missing generator");
        FpVector term = target.unit();
        for (std::size_t g = 0; g < mono.size(); ++g)
            if (mono[g] > 0) term = target.multiply(term, power_of(g, mono[g]));
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = fp::add(out[t], fp::mul(c, term[t], p), p);
    }
    return out;
}

FiniteAlgebra truncated_monomial_algebra(unsigned p, const std::vector<unsigned long long>& bounds,
                                         const std::vector<std::string>& names, std::size_t cap) {
    require_supported_prime(p);
    if (names.size() != bounds.size()) throw ArgumentError("one name per variable required");
    std::size_t dim = 1;
    std::size_t entries = 1;
    for (auto b : bounds) {
        if (b == 0) throw ArgumentError("exponent bound must be positive");
        if (dim > cap / b) throw ResourceError("dimension cap " + std::to_string(cap), "truncated algebra too large");
        dim *= b;
        entries *= static_cast<std::size_t>(b * (b + 1) / 2);
        if (entries > kMaxStructureEntries)
            throw ResourceError("structure entries " + std::to_string(kMaxStructureEntries),
                                "truncated algebra has too many structure constants");
    }
    std::vector<std::size_t> dims(bounds.begin(), bounds.end());
    TensorIndex index(dims.empty() ? std::vector<std::size_t>{1} : dims);
    std::vector<std::string> labels(dim);
    std::vector<std::vector<unsigned long long>> exps(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        auto m = dims.empty() ? std::vector<std::size_t>{} : index.multi(f);
        exps[f].assign(m.begin(), m.end());
        labels[f] = monomial_label(names, exps[f]);
    }
    std::vector<std::vector<FiniteAlgebra::Term>> rows(dim);
    std::vector<std::size_t> mb(dims.size());
    for (std::size_t f = 0; f < dim; ++f) {
        // Enumerate every b with a_s + b_s < bound_s, in increasing flat order.
        std::vector<std::size_t> room(dims.size());
        for (std::size_t s = 0; s < dims.size(); ++s) room[s] = dims[s] - exps[f][s];
        std::size_t count = 1;
        for (auto r : room) count *= r;
        std::fill(mb.begin(), mb.end(), 0);
        for (std::size_t c = 0; c < count; ++c) {
            std::size_t j = 0, k = 0;
            for (std::size_t s = 0; s < dims.size(); ++s) {
                j = j * dims[s] + mb[s];
                k = k * dims[s] + mb[s] + exps[f][s];
            }
            rows[f].push_back({j, k, 1});
            for (std::size_t s = dims.size(); s-- > 0;) {
                if (++mb[s] < room[s]) break;
                mb[s] = 0;
            }
        }
    }
    FpVector unit(dim, 0);
    unit[0] = 1;
    Presentation pres;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        FpVector g(dim, 0);
        if (dims[s] > 1) {
            std::vector<std::size_t> m(dims.size(), 0);
            m[s] = 1;
            g[index.flat(m)] = 1;
        }
        pres.generators.push_back(std::move(g));
    }
    for (std::size_t f = 0; f < dim; ++f) {
        Monomial mono(exps[f].begin(), exps[f].end());
        pres.basis_polynomials.push_back({{mono, 1}});
    }
    FiniteAlgebra alg(FiniteAlgebra::Trusted{}, p, std::move(labels), std::move(unit), std::move(rows));
    return alg.with_presentation(std::move(pres));
}

FiniteAlgebra truncated_polynomial_algebra(unsigned p, const std::vector<unsigned>& exponents, std::size_t cap) {
    require_supported_prime(p);
    std::vector<unsigned long long> bounds;
    std::vector<std::string> names;
    for (std::size_t s = 0; s < exponents.size(); ++s) {
        if (exponents[s] == 0) throw ArgumentError("truncation exponents must be at least 1");
        unsigned long long b = 1;
        for (unsigned t = 0; t < exponents[s]; ++t) {
            b *= p;
            if (b > cap) throw ResourceError("dimension cap " + std::to_string(cap), "truncated algebra too large");
        }
        bounds.push_back(b);
        names.push_back(exponents.size() == 1 ? "x" : "x" + std::to_string(s + 1));
    }
    return truncated_monomial_algebra(p, bounds, names, cap);
}

FiniteAlgebra unit_algebra(unsigned p) { return truncated_monomial_algebra(p, {}, {}); }

FiniteAlgebra tensor_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b, std::size_t cap) {
    if (a.p() != b.p()) throw ArgumentError("tensor product of algebras over different primes");
    const std::size_t da = a.dim(), db = b.dim();
    if (da > cap / db)
        throw ResourceError("dimension cap " + std::to_string(cap), "tensor product dimension " +
                                                                        std::to_string(da * db));
    std::size_t na = 0, nb = 0;
    for (std::size_t i = 0; i < da; ++i) na += a.row(i).size();
    for (std::size_t i = 0; i < db; ++i) nb += b.row(i).size();
    if (na != 0 && nb > kMaxStructureEntries / na)
        throw ResourceError("structure entries " + std::to_string(kMaxStructureEntries),
                            "tensor product has too many structure constants");
    const unsigned p = a.p();
    std::vector<std::string> labels(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) labels[i * db + k] = a.labels()[i] + "⊗" + b.labels()[k];
    FpVector unit(da * db, 0);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) unit[i * db + k] = fp::mul(a.unit()[i], b.unit()[k], p);
    std::vector<std::vector<FiniteAlgebra::Term>> rows(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) {
            auto& row = rows[i * db + k];
            for (const auto& t : a.row(i))
                for (const auto& u : b.row(k)) row.push_back({t.j * db + u.j, t.k * db + u.k, fp::mul(t.c, u.c, p)});
        }
    FiniteAlgebra out(FiniteAlgebra::Trusted{}, p, std::move(labels), std::move(unit), std::move(rows));
    if (a.presentation() && b.presentation()) {
        const auto& pa = *a.presentation();
        const auto& pb = *b.presentation();
        Presentation pres;
        for (const auto& g : pa.generators) {
            FpVector v(da * db, 0);
            for (std::size_t i = 0; i < da; ++i)
                for (std::size_t k = 0; k < db; ++k) v[i * db + k] = fp::mul(g[i], b.unit()[k], p);
            pres.generators.push_back(std::move(v));
        }
        for (const auto& h : pb.generators) {
            FpVector v(da * db, 0);
            for (std::size_t i = 0; i < da; ++i)
                for (std::size_t k = 0; k < db; ++k) v[i * db + k] = fp::mul(a.unit()[i], h[k], p);
            pres.generators.push_back(std::move(v));
        }
        const std::size_t ga = pa.generators.size(), gb = pb.generators.size();
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t k = 0; k < db; ++k) {
                Polynomial poly;
                for (const auto& [ma, ca] : pa.basis_polynomials[i])
                    for (const auto& [mb, cb] : pb.basis_polynomials[k]) {
                        Monomial m(ga + gb, 0);
                        std::copy(ma.begin(), ma.end(), m.begin());
                        std::copy(mb.begin(), mb.end(), m.begin() + static_cast<std::ptrdiff_t>(ga));
                        poly.emplace_back(std::move(m), fp::mul(ca, cb, p));
                    }
                pres.basis_polynomials.push_back(std::move(poly));
            }
        return out.with_presentation(std::move(pres));
    }
    return out;
}

FiniteAlgebra direct_product(const std::vector<FiniteAlgebra>& factors) {
    if (factors.empty()) throw ArgumentError("direct product needs at least one factor");
    const unsigned p = factors.front().p();
    std::vector<std::string> labels;
    FpVector unit;
    std::vector<MulEntry> mul;
    std::size_t offset = 0;
    for (std::size_t s = 0; s < factors.size(); ++s) {
        const auto& f = factors[s];
        if (f.p() != p) throw ValidationError("direct product of rings of different characteristic");
        for (const auto& l : f.labels()) labels.push_back(factors.size() == 1 ? l : l + "@" + std::to_string(s + 1));
        unit.insert(unit.end(), f.unit().begin(), f.unit().end());
        for (const auto& e : f.mul_entries()) mul.push_back({e.i + offset, e.j + offset, e.k + offset, e.c});
        offset += f.dim();
    }
    return FiniteAlgebra(p, std::move(labels), std::move(unit), std::move(mul));
}

Presentation derive_presentation(const FiniteAlgebra& a, const std::optional<FpVector>& augmentation) {
    const unsigned p = a.p();
    const std::size_t d = a.dim();
    std::vector<FpVector> candidates;
    std::vector<FpVector> gens;
    if (augmentation) {
        if (augmentation->size() != d) throw ArgumentError("augmentation length differs from algebra dimension");
        FpMatrix row(p, 1, d);
        for (std::size_t i = 0; i < d; ++i) row.at(0, i) = (*augmentation)[i] % p;
        FpMatrix m = column_echelon(kernel_basis(row));
        for (std::size_t c = 0; c < m.cols(); ++c) candidates.push_back(m.column(c));
        // Powers of the augmentation ideal decide whether a minimal generating set exists.
        std::vector<FpVector> level = candidates;
        std::vector<FpVector> square;
        bool nilpotent = candidates.empty();
        for (std::size_t step = 0; step <= d && !level.empty(); ++step) {
            std::vector<FpVector> next;
            for (const auto& x : level)
                for (const auto& y : candidates) next.push_back(a.multiply(x, y));
            FpMatrix ech = column_echelon(FpMatrix::from_columns(p, d, next));
            const std::size_t before = level.size();
            level.clear();
            for (std::size_t c = 0; c < ech.cols(); ++c) level.push_back(ech.column(c));
            if (step == 0) square = level;
            if (level.empty()) nilpotent = true;
            if (level.size() == before) break;
        }
        if (nilpotent) {
            EchelonBuilder span(p, d);
            for (const auto& s : square) span.insert(s);
            for (const auto& c : candidates)
                if (span.insert(c)) gens.push_back(c);
            candidates.clear();
        }
    } else {
        for (std::size_t i = 0; i < d; ++i) candidates.push_back(a.basis_vector(i));
    }

    struct Spanner {
        std::vector<Monomial> monos;
        std::vector<FpVector> vecs;
    };
    auto close = [&](const std::vector<FpVector>& g, Spanner& out) {
        EchelonBuilder ech(p, d);
        out.monos = {Monomial(g.size(), 0)};
        out.vecs = {a.unit()};
        ech.insert(a.unit());
        for (std::size_t q = 0; q < out.vecs.size() && ech.size() < d; ++q)
            for (std::size_t s = 0; s < g.size() && ech.size() < d; ++s) {
                FpVector v = a.multiply(out.vecs[q], g[s]);
                if (ech.insert(v)) {
                    Monomial m = out.monos[q];
                    ++m[s];
                    out.monos.push_back(std::move(m));
                    out.vecs.push_back(std::move(v));
                }
            }
        return ech.size();
    };

    Spanner sp;
    std::size_t got = close(gens, sp);
    for (const auto& c : candidates) {
        if (got == d) break;
        EchelonBuilder ech(p, d);
        for (const auto& v : sp.vecs) ech.insert(v);
        if (ech.contains(c)) continue;
        gens.push_back(c);
        got = close(gens, sp);
    }
    if (got != d) throw ValidationError("could not find generators for the algebra");

    FpMatrix m = FpMatrix::from_columns(p, d, sp.vecs);
    auto inv = inverse(m);
    if (!inv) throw ValidationError("monomial spanning set is not a basis");
    Presentation pres;
    pres.generators = gens;
    for (std::size_t i = 0; i < d; ++i) {
        Polynomial poly;
        for (std::size_t j = 0; j < d; ++j) {
            Residue c = inv->at(j, i);
            if (c != 0) poly.emplace_back(sp.monos[j], c);
        }
        pres.basis_polynomials.push_back(std::move(poly));
    }
    return pres;
}

CoefficientRing::CoefficientRing(FiniteAlgebra algebra, std::string spec)
    : algebra_(std::move(algebra)), spec_(std::move(spec)) {}

std::size_t CoefficientRing::element_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < dim(); ++i) {
        n *= p();
        if (n > (std::size_t{1} << 31)) throw ResourceError("2^31 ring elements", "ring too large to enumerate");
    }
    return n;
}

FpVector CoefficientRing::element(std::size_t index) const {
    FpVector v(dim(), 0);
    for (std::size_t i = dim(); i-- > 0;) {
        v[i] = static_cast<Residue>(index % p());
        index /= p();
    }
    return v;
}

std::size_t CoefficientRing::index_of(std::span<const Residue> v) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dim(); ++i) idx = idx * p() + v[i];
    return idx;
}

CoefficientRing prime_field_ring(unsigned p) { return CoefficientRing(unit_algebra(p), "F" + std::to_string(p)); }

namespace {

class RingSpecParser {
public:
    explicit RingSpecParser(const std::string& text) : s_(text) {}

    CoefficientRing parse() {
        std::vector<FiniteAlgebra> factors;
        std::vector<std::string> specs;
        std::optional<unsigned> prime;
        do {
            auto [alg, spec] = factor();
            if (prime && *prime != alg.p()) throw ValidationError("ring factors of different characteristic");
            prime = alg.p();
            factors.push_back(std::move(alg));
            specs.push_back(std::move(spec));
            skip();
        } while (accept('x'));
        skip();
        if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        std::string canonical;
        for (std::size_t i = 0; i < specs.size(); ++i) canonical += (i ? " x " : "") + specs[i];
        if (factors.size() == 1) return CoefficientRing(std::move(factors.front()), canonical);
        return CoefficientRing(direct_product(factors), canonical);
    }

private:
    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    unsigned number() {
        skip();
        std::size_t start = pos_;
        unsigned long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<unsigned>(s_[pos_] - '0');
            if (v > 1'000'000) throw ParseError("number too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected a number", pos_);
        return static_cast<unsigned>(v);
    }
    std::pair<FiniteAlgebra, std::string> factor() {
        expect('F');
        std::size_t at = pos_;
        unsigned p = number();
        if (!is_prime(p)) throw ValidationError("F" + std::to_string(p) + ": " + std::to_string(p) + " is not prime");
        if (p > kMaxPrime) throw ValidationError("prime " + std::to_string(p) + " exceeds the supported maximum");
        (void)at;
        std::string spec = "F" + std::to_string(p);
        if (!accept('[')) return {unit_algebra(p), spec};
        expect('e');
        expect(']');
        expect('/');
        expect('(');
        expect('e');
        expect('^');
        unsigned k = number();
        expect(')');
        if (k < 2) throw ValidationError("nilpotency exponent must be at least 2");
        spec += "[e]/(e^" + std::to_string(k) + ")";
        return {truncated_monomial_algebra(p, {k}, {"e"}), spec};
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

CoefficientRing ring_spec_parse(const std::string& text) { return RingSpecParser(text).parse(); }

FpVector ExtendedAlgebra::embed(std::span<const Residue> a, std::span<const Residue> r) const {
    if (a.size() != base_dim || r.size() != ring_dim) throw ArgumentError("embedding shape mismatch");
    const unsigned p = algebra.p();
    FpVector v(base_dim * ring_dim, 0);
    for (std::size_t i = 0; i < base_dim; ++i)
        for (std::size_t j = 0; j < ring_dim; ++j) v[i * ring_dim + j] = fp::mul(a[i], r[j], p);
    return v;
}

ExtendedAlgebra base_extend(const FiniteAlgebra& a, const CoefficientRing& r, std::size_t cap) {
    ExtendedAlgebra ext{tensor_algebra(a, r.algebra(), cap), a.dim(), r.dim(), FpMatrix(a.p(), a.dim() * r.dim(), r.dim())};
    for (std::size_t j = 0; j < r.dim(); ++j) ext.scalars.set_column(j, ext.embed(a.unit(), r.algebra().basis_vector(j)));
    return ext;
}

AlgebraElement::AlgebraElement(std::shared_ptr<const FiniteAlgebra> parent, FpVector coeffs)
    : parent_(std::move(parent)), coeffs_(std::move(coeffs)) {
    if (!parent_) throw ArgumentError("element without parent algebra");
    if (coeffs_.size() != parent_->dim()) throw ArgumentError("coefficient length differs from parent dimension");
    for (auto& c : coeffs_) c %= parent_->p();
}

void AlgebraElement::check_parent(const AlgebraElement& o) const {
    if (parent_ != o.parent_ && !parent_->same_structure(*o.parent_))
        throw ArgumentError("elements of different algebras");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    check_parent(o);
    FpVector v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fp::add(coeffs_[i], o.coeffs_[i], parent_->p());
    return {parent_, std::move(v)};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    check_parent(o);
    FpVector v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fp::sub(coeffs_[i], o.coeffs_[i], parent_->p());
    return {parent_, std::move(v)};
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    check_parent(o);
    return {parent_, parent_->multiply(coeffs_, o.coeffs_)};
}

AlgebraElement AlgebraElement::scaled(Residue c) const {
    FpVector v(coeffs_);
    for (auto& x : v) x = fp::mul(x, c % parent_->p(), parent_->p());
    return {parent_, std::move(v)};
}

AlgebraElement AlgebraElement::pow(unsigned long long e) const { return {parent_, parent_->power(coeffs_, e)}; }

bool AlgebraElement::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue x) { return x == 0; });
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    return parent_->same_structure(*o.parent_) && coeffs_ == o.coeffs_;
}

TateOortRewriter::TateOortRewriter(unsigned p, bool requires_x) : p_(p), requires_x_(requires_x) {
    require_supported_prime(p);
}

bool TateOortRewriter::reducible(unsigned dx, unsigned dy) const {
    return dy >= p_ && (!requires_x_ || dx >= 1);
}

void TateOortRewriter::check_caps(const Poly& f) const {
    for (const auto& [m, c] : f)
        if (m.first > x_cap() || m.second > y_cap())
            throw ArgumentError("monomial exceeds the rewrite degree cap");
}

bool TateOortRewriter::is_normal(const Poly& f) const {
    return std::none_of(f.begin(), f.end(), [&](const auto& t) { return reducible(t.first.first, t.first.second); });
}

TateOortRewriter::Poly TateOortRewriter::normal_form(const Poly& f) const {
    check_caps(f);
    Poly out;
    for (const auto& [m, c] : f) {
        auto [dx, dy] = m;
        while (reducible(dx, dy)) dy -= p_ - 1;
        auto& slot = out[{dx, dy}];
        slot = fp::add(slot, c % p_, p_);
        if (slot == 0) out.erase({dx, dy});
    }
    return out;
}

TateOortRewriter::Poly TateOortRewriter::normal_form_randomized(const Poly& f, std::mt19937& rng) const {
    check_caps(f);
    Poly cur;
    for (const auto& [m, c] : f)
        if (c % p_) cur[m] = c % p_;
    for (;;) {
        std::vector<std::pair<unsigned, unsigned>> redexes;
        for (const auto& [m, c] : cur)
            if (reducible(m.first, m.second)) redexes.push_back(m);
        if (redexes.empty()) return cur;
        auto m = redexes[std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng)];
        Residue c = cur[m];
        cur.erase(m);
        std::pair<unsigned, unsigned> target{m.first, m.second - (p_ - 1)};
        auto& slot = cur[target];
        slot = fp::add(slot, c, p_);
        if (slot == 0) cur.erase(target);
    }
}

TateOortRewriter::Poly TateOortRewriter::multiply(const Poly& a, const Poly& b) const {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::pair<unsigned, unsigned> m{ma.first + mb.first, ma.second + mb.second};
            auto& slot = out[m];
            slot = fp::add(slot, fp::mul(ca, cb, p_), p_);
        }
    std::erase_if(out, [](const auto& t) { return t.second == 0; });
    check_caps(out);
    return out;
}

std::string TateOortRewriter::format(const Poly& f) const {
    if (f.empty()) return "0";
    std::string out;
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        auto [dx, dy] = it->first;
        std::string mono;
        if (dx) mono += dx == 1 ? "x" : "x^" + std::to_string(dx);
        if (dy) mono += std::string(mono.empty() ? "" : "*") + (dy == 1 ? "y" : "y^" + std::to_string(dy));
        if (mono.empty()) mono = "1";
        if (!out.empty()) out += " + ";
        out += (it->second == 1 ? "" : std::to_string(it->second) + "*") + mono;
    }
    return out;
}

bool RewriteWitness::nonzero() const { return !TateOortRewriter(p).normal_form(element).empty(); }

bool RewriteWitness::annihilated() const {
    TateOortRewriter rw(p);
    return rw.normal_form(rw.multiply(annihilator, element)).empty();
}

bool RewriteWitness::sanity_vanishes() const { return TateOortRewriter(p, false).normal_form(element).empty(); }

RewriteWitness torsion_witness_tate_oort(unsigned p) {
    TateOortRewriter rw(p);
    RewriteWitness w{p, {{{0u, p}, 1}, {{0u, 1u}, p - 1}}, {{{1u, 0u}, 1}}, "", "x"};
    w.element_normal_form = rw.format(rw.normal_form(w.element));
    return w;
}

}  // namespace hopfkit
