#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hopfkit/hopf.hpp"

namespace hopfkit {

enum class TargetKind { additive, alpha, multiplicative, finite };

struct TargetSpec {
    TargetKind kind = TargetKind::additive;
    unsigned m = 0;  // alpha level
    HopfPtr group;   // finite targets

    static TargetSpec additive() { return {}; }
    static TargetSpec alpha(unsigned m);
    static TargetSpec multiplicative() { return {TargetKind::multiplicative, 0, nullptr}; }
    static TargetSpec finite(HopfPtr h);
    std::string label() const;
};

// Ga, Gm, alpha:m, or a catalog id.
TargetSpec parse_target(const std::string& text, unsigned p, std::size_t cap = kDefaultDimensionCap);

// Slot-wise operations on vectors of A_1 (x) ... (x) A_r in kron order.
FpVector apply_slot_map(std::span<const Residue> v, const std::vector<std::size_t>& dims, std::size_t slot,
                        const FpMatrix& m);
FpVector apply_slot_maps(std::span<const Residue> v, const std::vector<std::size_t>& dims,
                         const std::vector<const FpMatrix*>& maps);
// Output slot s holds input slot perm[s].
FpVector permute_slots(std::span<const Residue> v, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& perm);
// Product in A_1 (x) ... (x) A_r; with pair_slot < r, the mixed product
// iota1(x) * iota2(y) whose slot pair_slot is doubled.
FpVector tensor_product(const std::vector<HopfPtr>& sources, std::span<const Residue> x, std::span<const Residue> y,
                        std::size_t pair_slot = static_cast<std::size_t>(-1));
FpVector tensor_unit(const std::vector<HopfPtr>& sources);
FpVector tensor_power(const std::vector<HopfPtr>& sources, std::span<const Residue> x, unsigned long long e);
// Multiplies slots i and j; the result drops slot j.
FpVector diagonal_restriction(std::span<const Residue> f, const std::vector<HopfPtr>& sources, std::size_t i,
                              std::size_t j);

// Elements are (B_1 (x) ... (x) B_r) c for the columns c of `coefficients`,
// B_s = slot_bases[s]. The ambient is only materialized on request.
struct MorphismSpace {
    std::vector<HopfPtr> sources;
    TargetSpec target;
    std::vector<std::size_t> ambient_dims;
    std::vector<FpMatrix> slot_bases;
    FpMatrix coefficients;
    std::vector<std::string> constraints_applied;

    std::size_t dim() const { return coefficients.cols(); }
    std::size_t coefficient_size() const { return coefficients.rows(); }
    // Saturates at SIZE_MAX.
    std::size_t ambient_size() const;
    FpVector expand(std::span<const Residue> coeffs, std::size_t cap = kDefaultDimensionCap) const;
    // Reduced column echelon basis of the materialized space.
    FpMatrix basis(std::size_t cap = kDefaultDimensionCap) const;
};

MorphismSpace primitive_space(const HopfPtr& g);
// Multi-primitive solve by iterated currying over the per-slot primitive spaces.
MorphismSpace mult_space_additive(const std::vector<HopfPtr>& sources, std::size_t cap = kDefaultDimensionCap);
// The same space from one stacked linear system on the whole ambient.
MorphismSpace mult_space_direct(const std::vector<HopfPtr>& sources, std::size_t cap = kDefaultDimensionCap);
// Targets alpha(m) and finite catalog atoms (alpha, const, trivial).
MorphismSpace mult_space_into(const std::vector<HopfPtr>& sources, const TargetSpec& target,
                              std::size_t cap = kDefaultDimensionCap);
// Imposes f^(p^m) = 0 on an additive space.
MorphismSpace impose_alpha(const MorphismSpace& space, unsigned m);

// How many coordinates range over alpha_{p^m}(R) and how many over R.
struct Parameterization {
    std::size_t constrained = 0;
    std::size_t free = 0;
    unsigned m = 0;
    // |alpha_{p^m}(R)|^constrained * |R|^free
    std::size_t count(const CoefficientRing& r) const;
};
Parameterization alpha_parameterization(const MorphismSpace& additive, unsigned m);

// |{a in R : a^(p^m) = 0}|
std::size_t alpha_points(const CoefficientRing& r, unsigned m);

struct HomSpace {
    std::optional<Parameterization> parameterization;  // alpha targets
    std::vector<FpVector> points;                       // generator images in A (x) R
    std::size_t predicted_count = 0;
};
// Hom(G_R, H_R) for H = alpha(m) or a catalog atom.
HomSpace hom_space(const HopfPtr& g, const TargetSpec& target, const CoefficientRing& r,
                   std::size_t cap = kDefaultEnumerationCap);

// Truncated exponentials E(c y_1...y_n) for c in R; sources must all be alpha_p.
std::vector<FpVector> exponential_family(const std::vector<HopfPtr>& sources, const CoefficientRing& r);
// Mult(G_1 x ... x G_r, G_m)(R); structured family for alpha_p sources, solver otherwise.
std::vector<FpVector> mult_space_into_gm(const std::vector<HopfPtr>& sources, const CoefficientRing& r,
                                         std::size_t cap = kDefaultEnumerationCap);
// u group-like in slot i and 1 along the counit of that slot.
bool is_grouplike_in_slot(const std::vector<HopfPtr>& sources, const CoefficientRing& r, std::span<const Residue> u,
                          std::size_t slot);
// u group-like in every slot and 1 along each counit.
bool is_multi_grouplike(const std::vector<HopfPtr>& sources, const CoefficientRing& r, std::span<const Residue> u);

MorphismSpace sym_subspace(const MorphismSpace& space);
MorphismSpace alt_subspace(const MorphismSpace& space);
// Alternating only within each block of equal slots, e.g. blocks {0},{1,2}.
MorphismSpace block_alt_subspace(const MorphismSpace& space, const std::vector<std::vector<std::size_t>>& blocks);

struct CurryVerdict {
    std::size_t direct_dim = 0;
    std::size_t curried_dim = 0;
    bool same_span = false;
    bool consistent() const { return same_span && direct_dim == curried_dim; }
};
CurryVerdict curry_consistency(const std::vector<HopfPtr>& sources, std::size_t cap = 4096);

// psi' with psi = psi' o (id x ... x pi x ... x id); iota: G' -> G, pi: G -> G''.
FpVector factor_through_quotient(std::span<const Residue> psi, const std::vector<HopfPtr>& sources, std::size_t slot,
                                 const HopfMorphism& iota, const HopfMorphism& pi);

struct RhoResult {
    FpMatrix matrix;  // coordinates of restricted basis elements in the computed target basis
    std::size_t domain_dim = 0;
    std::size_t rank = 0;
    bool injective = false;
    bool hypothesis_holds = false;  // Lambda^{m''+1} G'' vanishes at the checked level
};
// Restriction Alt(G^m, Ga) -> Alt(G'^{m'} x G^{m''}, Ga) along iota: G' -> G.
RhoResult restriction_rho(const HopfMorphism& iota, const HopfPtr& quotient, unsigned m1, unsigned m2);

struct OmegaResult {
    FpMatrix pullback;  // columns: omega^* of the domain basis, in the G^m ambient
    FpMatrix mu_omega;  // domain_dim x domain_dim
    bool identity = false;
    bool image_alternating = false;
};
// Split sequence 0 -> G' -> G -> G'' -> 0 with section s: G'' -> G and retraction r: G -> G'.
OmegaResult omega_pullback(const HopfMorphism& iota, const HopfMorphism& pi, const HopfMorphism& section,
                           const HopfMorphism& retraction, unsigned m1, unsigned m2);

// Multilinear morphism into a finite catalog target, fixed by the image of its generator.
struct MultilinearMorphism {
    std::vector<HopfPtr> sources;
    HopfPtr target;
    FpVector generator_image;
    // N x dim(target), column j is the image of e_j.
    FpMatrix coordinate_map() const;
    bool certified() const;
};
// Certifies multilinearity of an arbitrary coordinate map Phi: B -> A_1 (x) ... (x) A_r.
bool is_multilinear_map(const std::vector<HopfPtr>& sources, const HopfAlgebra& target, const FpMatrix& phi);

// All multilinear morphisms into a finite catalog atom over GF(p), as generator images.
std::vector<FpVector> multilinear_into_finite(const std::vector<HopfPtr>& sources, const HopfPtr& target,
                                              bool alternating, std::size_t cap = kDefaultEnumerationCap);

}  // namespace hopfkit
