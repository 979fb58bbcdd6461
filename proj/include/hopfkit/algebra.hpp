#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopfkit/exactlinalg.hpp"

namespace hopfkit {

// Largest dimension allowed for any materialized algebra or tensor ambient.
inline constexpr std::size_t kDefaultDimensionCap = 20000;

// e_i * e_j has coefficient c on e_k.
struct MulEntry {
    std::size_t i, j, k;
    Residue c;
    auto operator<=>(const MulEntry&) const = default;
};

// Polynomial in presentation generators: list of (exponent vector, coefficient).
using Monomial = std::vector<unsigned>;
using Polynomial = std::vector<std::pair<Monomial, Residue>>;

struct Presentation {
    std::vector<FpVector> generators;
    // basis_polynomials[i] evaluated at the generators gives e_i.
    std::vector<Polynomial> basis_polynomials;
};

class FiniteAlgebra {
public:
    // Validates commutativity, associativity and the unit law; throws ValidationError.
    FiniteAlgebra(unsigned p, std::vector<std::string> labels, FpVector unit, std::vector<MulEntry> mul);

    unsigned p() const noexcept { return p_; }
    std::size_t dim() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const FpVector& unit() const noexcept { return unit_; }
    // Sorted, without zero coefficients.
    std::vector<MulEntry> mul_entries() const;

    FpVector basis_vector(std::size_t i) const;
    FpVector zero() const { return FpVector(dim(), 0); }
    FpVector multiply(std::span<const Residue> a, std::span<const Residue> b) const;
    FpVector power(std::span<const Residue> a, unsigned long long e) const;
    // Column j is a * e_j.
    FpMatrix multiplication_matrix(std::span<const Residue> a) const;
    // Column i is e_i^p.
    FpMatrix frobenius_matrix() const;

    const std::optional<Presentation>& presentation() const noexcept { return presentation_; }
    FiniteAlgebra with_presentation(Presentation pres) const;

    // Same p, dimension, unit and structure constants (labels ignored).
    bool same_structure(const FiniteAlgebra& o) const;
    std::string format(std::span<const Residue> v) const;

    struct Term {
        std::size_t j, k;
        Residue c;
    };
    // Nonzero products e_i * e_j, sorted by j.
    const std::vector<Term>& row(std::size_t i) const { return rows_[i]; }

private:
    struct Trusted {};
    FiniteAlgebra(Trusted, unsigned p, std::vector<std::string> labels, FpVector unit,
                  std::vector<std::vector<Term>> rows);
    void validate() const;
    friend FiniteAlgebra tensor_algebra(const FiniteAlgebra&, const FiniteAlgebra&, std::size_t);
    friend FiniteAlgebra truncated_monomial_algebra(unsigned, const std::vector<unsigned long long>&,
                                                    const std::vector<std::string>&, std::size_t);

    unsigned p_;
    std::vector<std::string> labels_;
    FpVector unit_;
    std::vector<std::vector<Term>> rows_;
    std::optional<Presentation> presentation_;
};

FpVector evaluate_polynomial(const FiniteAlgebra& target, const Polynomial& poly,
                             const std::vector<FpVector>& generator_images);

// Monomial algebra k[x_1..x_s]/(x_i^{b_i}) with explicit exponent bounds.
FiniteAlgebra truncated_monomial_algebra(unsigned p, const std::vector<unsigned long long>& bounds,
                                         const std::vector<std::string>& names,
                                         std::size_t cap = kDefaultDimensionCap);
// k[x_1..x_s]/(x_i^{p^{n_i}}).
FiniteAlgebra truncated_polynomial_algebra(unsigned p, const std::vector<unsigned>& exponents,
                                           std::size_t cap = kDefaultDimensionCap);
FiniteAlgebra unit_algebra(unsigned p);

// Basis e_a (x) e_b at kron position a*dim(B)+b.
FiniteAlgebra tensor_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b,
                             std::size_t cap = kDefaultDimensionCap);
// Finite product A_1 x ... x A_s (idempotent decomposition).
FiniteAlgebra direct_product(const std::vector<FiniteAlgebra>& factors);

// Generators and basis polynomials. With an augmentation covector, generators are
// taken in its kernel and, when the augmentation ideal is nilpotent, minimal.
Presentation derive_presentation(const FiniteAlgebra& a, const std::optional<FpVector>& augmentation = {});

class CoefficientRing {
public:
    CoefficientRing(FiniteAlgebra algebra, std::string spec);
    const FiniteAlgebra& algebra() const noexcept { return algebra_; }
    const std::string& spec() const noexcept { return spec_; }
    unsigned p() const noexcept { return algebra_.p(); }
    std::size_t dim() const noexcept { return algebra_.dim(); }
    // p^dim; throws ResourceError past 2^31.
    std::size_t element_count() const;
    // Lexicographic enumeration, first basis coordinate most significant.
    FpVector element(std::size_t index) const;
    std::size_t index_of(std::span<const Residue> v) const;

private:
    FiniteAlgebra algebra_;
    std::string spec_;
};

CoefficientRing prime_field_ring(unsigned p);
// Grammar: Fp | Fp[e]/(e^k) | spec x spec.
CoefficientRing ring_spec_parse(const std::string& text);

// A (x) R with the R-module structure recorded.
struct ExtendedAlgebra {
    FiniteAlgebra algebra;
    std::size_t base_dim = 0;
    std::size_t ring_dim = 0;
    // Column j is 1_A (x) r_j.
    FpMatrix scalars;
    FpVector embed(std::span<const Residue> a, std::span<const Residue> r) const;
};
ExtendedAlgebra base_extend(const FiniteAlgebra& a, const CoefficientRing& r,
                            std::size_t cap = kDefaultDimensionCap);

class AlgebraElement {
public:
    AlgebraElement(std::shared_ptr<const FiniteAlgebra> parent, FpVector coeffs);
    const FiniteAlgebra& parent() const { return *parent_; }
    const FpVector& coefficients() const noexcept { return coeffs_; }
    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement scaled(Residue c) const;
    AlgebraElement pow(unsigned long long e) const;
    bool is_zero() const;
    bool operator==(const AlgebraElement& o) const;
    std::string to_string() const { return parent_->format(coeffs_); }

private:
    void check_parent(const AlgebraElement& o) const;
    std::shared_ptr<const FiniteAlgebra> parent_;
    FpVector coeffs_;
};

// Polynomials in x, y over GF(p) modulo x*y^p = x*y, via the rewrite x*y^p -> x*y.
class TateOortRewriter {
public:
    using Poly = std::map<std::pair<unsigned, unsigned>, Residue>;  // (deg x, deg y) -> coeff

    // With requires_x = false the rule becomes y^p -> y (the sanity ring).
    explicit TateOortRewriter(unsigned p, bool requires_x = true);
    unsigned p() const noexcept { return p_; }
    unsigned x_cap() const noexcept { return 2; }
    unsigned y_cap() const noexcept { return p_ + 2; }

    Poly normal_form(const Poly& f) const;
    // One rewrite step at a time, choosing the redex at random.
    Poly normal_form_randomized(const Poly& f, std::mt19937& rng) const;
    Poly multiply(const Poly& a, const Poly& b) const;
    bool is_normal(const Poly& f) const;
    std::string format(const Poly& f) const;

private:
    bool reducible(unsigned dx, unsigned dy) const;
    void check_caps(const Poly& f) const;
    unsigned p_;
    bool requires_x_;
};

struct RewriteWitness {
    unsigned p;
    TateOortRewriter::Poly element;      // y^p - y
    TateOortRewriter::Poly annihilator;  // x
    std::string element_normal_form;
    std::string annihilator_label;
    // Recomputed through the rewrite system on every call.
    bool nonzero() const;
    bool annihilated() const;
    // Same element in the ring with relation y^p = y; its normal form must vanish.
    bool sanity_vanishes() const;
};

RewriteWitness torsion_witness_tate_oort(unsigned p);

}  // namespace hopfkit
