#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopfkit/algebra.hpp"
#include "hopfkit/exactlinalg.hpp"

namespace hopfkit {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Delta e_i has coefficient c on e_j (x) e_k.
struct ComulEntry {
    std::size_t i, j, k;
    Residue c;
    auto operator<=>(const ComulEntry&) const = default;
};

enum class GeneratorKind { additive, multiplicative };

// Generator of a catalog group: Delta g = g(x)1 + 1(x)g or g(x)g, subject to
// the univariate relation sum_e relation[e] * g^e = 0.
struct CatalogGenerator {
    std::string label;
    FpVector element;
    GeneratorKind kind;
    std::vector<Residue> relation;
};

class HopfAlgebra {
public:
    // Checks shapes only; the axioms are checked by verify_hopf_axioms().
    HopfAlgebra(FiniteAlgebra algebra, std::vector<ComulEntry> comul, FpVector counit, FpMatrix antipode,
                std::string name = "");

    const FiniteAlgebra& algebra() const noexcept { return algebra_; }
    unsigned p() const noexcept { return algebra_.p(); }
    std::size_t dim() const noexcept { return algebra_.dim(); }
    const std::string& name() const noexcept { return name_; }
    HopfAlgebra renamed(std::string name) const;

    struct Term {
        std::size_t j, k;
        Residue c;
    };
    const std::vector<Term>& comul_terms(std::size_t i) const { return comul_[i]; }
    std::vector<ComulEntry> comul_entries() const;
    // Result indexed j*dim + k.
    FpVector comultiply(std::span<const Residue> v) const;
    const FpVector& counit() const noexcept { return counit_; }
    Residue counit_of(std::span<const Residue> v) const;
    // Column i is S(e_i).
    const FpMatrix& antipode() const noexcept { return antipode_; }

    const std::vector<CatalogGenerator>& catalog_generators() const noexcept { return catalog_; }
    bool is_catalog() const noexcept { return !catalog_.empty() || dim() == 1; }
    HopfAlgebra with_catalog(std::vector<CatalogGenerator> gens) const;

    // Catalog presentation when available, otherwise derived (and cached).
    const Presentation& presentation() const;

    bool same_structure(const HopfAlgebra& o) const;

private:
    FiniteAlgebra algebra_;
    std::vector<std::vector<Term>> comul_;
    FpVector counit_;
    FpMatrix antipode_;
    std::string name_;
    std::vector<CatalogGenerator> catalog_;
    struct PresentationCache {
        std::once_flag once;
        std::optional<Presentation> value;
    };
    std::shared_ptr<PresentationCache> cache_ = std::make_shared<PresentationCache>();
};

using HopfPtr = std::shared_ptr<const HopfAlgebra>;
inline HopfPtr share(HopfAlgebra h) { return std::make_shared<const HopfAlgebra>(std::move(h)); }

struct AxiomCheck {
    std::string axiom;
    bool pass = true;
    std::string witness;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass() const;
    // First failing check, if any.
    const AxiomCheck* first_failure() const;
};

// Coassociativity, counit, multiplicativity of Delta, multiplicativity of the
// counit, antipode, plus cocommutativity (the groups here are commutative).
AxiomReport verify_hopf_axioms(const HopfAlgebra& h);

// Catalog.
HopfAlgebra alpha_group(unsigned p, unsigned n, std::size_t cap = kDefaultDimensionCap);
HopfAlgebra mu_group(unsigned p);
HopfAlgebra constant_group(unsigned p);
HopfAlgebra trivial_group(unsigned p);
// Product of group schemes: tensor product of Hopf algebras.
HopfAlgebra direct_sum(const HopfAlgebra& g, const HopfAlgebra& h, std::size_t cap = kDefaultDimensionCap);
// ids: alpha:p^n, mu:p, const:Z/p, trivial:p, joined by '+' or '⊕'.
HopfAlgebra catalog_group(const std::string& id, std::size_t cap = kDefaultDimensionCap);

// Dual basis xi_i; structure constants transposed.
HopfAlgebra cartier_dual(const HopfAlgebra& g);

// Twist bookkeeping: over GF(p) the Frobenius twist is the identity functor.
struct TwistMarker {
    unsigned exponent = 0;
    bool operator==(const TwistMarker&) const = default;
};

// G -> H stored as its coordinate map B -> A: a dim(A) x dim(B) matrix whose
// column j is the image of e_j of the target algebra.
class HopfMorphism {
public:
    HopfMorphism(HopfPtr source, HopfPtr target, FpMatrix coordinate_map, TwistMarker source_twist = {},
                 TwistMarker target_twist = {});

    const HopfAlgebra& source() const { return *source_; }
    const HopfAlgebra& target() const { return *target_; }
    const HopfPtr& source_ptr() const noexcept { return source_; }
    const HopfPtr& target_ptr() const noexcept { return target_; }
    const FpMatrix& coordinate_map() const noexcept { return map_; }
    bool is_algebra_map() const noexcept { return algebra_map_; }
    bool is_coalgebra_map() const noexcept { return coalgebra_map_; }
    bool certified() const noexcept { return algebra_map_ && coalgebra_map_; }
    TwistMarker source_twist() const noexcept { return source_twist_; }
    TwistMarker target_twist() const noexcept { return target_twist_; }
    FpVector pullback(std::span<const Residue> b) const { return map_.apply(b); }

    static HopfMorphism identity(const HopfPtr& g);
    // The trivial homomorphism: unit of A composed with the counit of B.
    static HopfMorphism zero(const HopfPtr& g, const HopfPtr& h);

private:
    HopfPtr source_, target_;
    FpMatrix map_;
    TwistMarker source_twist_, target_twist_;
    bool algebra_map_ = false;
    bool coalgebra_map_ = false;
};

// second o first.
HopfMorphism compose(const HopfMorphism& second, const HopfMorphism& first);
bool is_algebra_map(const FiniteAlgebra& source_alg, const FiniteAlgebra& target_alg, const FpMatrix& map);
bool is_coalgebra_map(const HopfAlgebra& source, const HopfAlgebra& target, const FpMatrix& map);

// A closed subgroup given by a Hopf ideal J of the ambient coordinate ring.
struct SubgroupData {
    HopfPtr ambient;
    FpMatrix ideal_basis;
    bool is_hopf_ideal() const;
};

struct QuotientAlgebra {
    HopfAlgebra algebra;
    // dim(A/J) x dim(A): the projection, i.e. the coordinate map of the inclusion.
    FpMatrix projection;
};
QuotientAlgebra quotient_by_hopf_ideal(const SubgroupData& data);

struct SubHopfAlgebra {
    HopfAlgebra algebra;
    // dim(A) x dim(C): the inclusion, i.e. the coordinate map of the quotient map.
    FpMatrix inclusion;
};
// Columns of `span` must span a sub-Hopf-algebra; throws ValidationError otherwise.
SubHopfAlgebra sub_hopf_algebra(const HopfAlgebra& h, const FpMatrix& span);

// Ideal of A generated by a set of elements.
FpMatrix generated_ideal(const FiniteAlgebra& a, const FpMatrix& elements);

HopfAlgebra kernel_subgroup(const HopfMorphism& phi);
HopfMorphism kernel_inclusion(const HopfMorphism& phi);
HopfAlgebra image_subgroup(const HopfMorphism& phi);
HopfAlgebra cokernel_quotient(const HopfMorphism& phi);
HopfMorphism cokernel_projection(const HopfMorphism& phi);

struct ExactnessVerdict {
    bool composable = false;
    bool closed_immersion = false;
    bool quotient_map = false;
    bool kernel_matches = false;
    bool exact() const { return composable && closed_immersion && quotient_map && kernel_matches; }
};
ExactnessVerdict exactness_check(const HopfMorphism& iota, const HopfMorphism& pi);

// Certified bijective G -> H, or nullopt; ResourceError past `cap` candidates.
std::optional<HopfMorphism> hopf_isomorphism_search(const HopfPtr& g, const HopfPtr& h,
                                                   std::size_t cap = kDefaultEnumerationCap);

// Group-like elements of A (x) R, i.e. the R-points of the dual.
std::vector<AlgebraElement> group_like_points(const HopfAlgebra& g, const CoefficientRing& r,
                                              std::size_t node_cap = kDefaultEnumerationCap);

// Primitive elements of A over GF(p), in reduced column echelon form.
FpMatrix primitive_elements(const HopfAlgebra& g);

// JSON exchange format.
std::string hopf_to_json(const HopfAlgebra& h);
// Throws ParseError carrying the first offending field path.
HopfAlgebra hopf_from_json(const std::string& text);
// Parse plus axiom verification; throws ValidationError with the failing witness.
HopfAlgebra import_hopf_json(const std::string& text);

}  // namespace hopfkit
