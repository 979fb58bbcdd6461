#pragma once

#include <string>
#include <vector>

#include "hopfkit/morphspaces.hpp"

namespace hopfkit {

// E(s r_1 ... r_n) in A(alpha_{p^k}) (x) A(alpha_p)^{(x) n}; slot 0 is the level slot.
struct UniversalPairing {
    unsigned p = 0, arity = 0, level = 0;
    std::vector<HopfPtr> slots;
    FpVector element;
    std::vector<bool> slot_certified;
    bool certified() const;
};
UniversalPairing universal_pairing(unsigned p, unsigned n, unsigned k, std::size_t cap = kDefaultDimensionCap);

enum class ShadowKind { tensor, sym, alt };

// Finite-level power: a carrier group with a universal multilinear map
// sources -> carrier stored as its coordinate map (N x dim carrier).
struct ShadowPower {
    ShadowKind kind = ShadowKind::tensor;
    unsigned p = 0, arity = 0, level = 0;
    std::vector<HopfPtr> sources;
    HopfPtr carrier;
    FpMatrix universal_map;
    bool carrier_valid = false;  // carrier passes the Hopf axioms
    bool map_certified = false;  // multilinear (and symmetric/alternating as required)
};

ShadowPower tensor_shadow(unsigned p, unsigned n, unsigned k, std::size_t cap = kDefaultDimensionCap);

struct FactorizationReport {
    std::size_t checked = 0;  // basis elements of Mult(sources, alpha(k')) over all k' <= level
    bool all_factor = false;
    bool unique = false;
};
// Every multilinear map into alpha(k'), k' <= level, is h o universal for a unique h: carrier -> alpha(k').
FactorizationReport tensor_universal_property(const ShadowPower& shadow);

// Automorphism of the carrier induced by permuting the source slots (output slot s holds input slot perm[s]).
HopfMorphism induced_carrier_action(const ShadowPower& shadow, const std::vector<std::size_t>& perm);

// W / <g^{-1} gamma(g)>: cokernel of (g_gamma) -> sum_gamma (gamma(g_gamma) - g_gamma).
HopfMorphism largest_quotient_projection(const HopfPtr& w, const std::vector<HopfMorphism>& action);
HopfAlgebra largest_quotient(const HopfPtr& w, const std::vector<HopfMorphism>& action);

// Quotient of the tensor shadow by the induced slot permutations.
ShadowPower sym_shadow(unsigned p, unsigned n, unsigned k, std::size_t cap = kDefaultDimensionCap);
// Largest quotient of the tensor shadow on which the universal map vanishes on every diagonal.
ShadowPower alt_shadow(unsigned p, unsigned n, unsigned k, std::size_t cap = kDefaultDimensionCap);

// sum_sigma sgn(sigma) prod_j y_j^{p^sigma(j)} on alpha_{p^n}^n, into alpha_p.
struct MooreMap {
    MultilinearMorphism morphism;
    bool multilinear = false;
    bool alternating = false;
    bool p_nilpotent = false;
    bool certified() const { return multilinear && alternating && p_nilpotent; }
};
MooreMap moore_alt_map(unsigned p, unsigned n, std::size_t cap = kDefaultDimensionCap);

struct VerschiebungVerdict {
    bool square_commutes = false;  // phi o (V x id ...) = V_H o phi o (id x F ...)
    bool annihilated = false;      // V_H o phi is trivial
};
VerschiebungVerdict verschiebung_annihilation_check(const MultilinearMorphism& phi);

struct PipelineStage {
    std::string name;
    bool pass = false;
    std::string detail;
};
struct Prop12Report {
    unsigned p = 0, n = 0;
    std::vector<PipelineStage> stages;
    bool all_pass() const;
};
// Throws PreconditionError unless p is odd.
Prop12Report prop12_pipeline(unsigned n, unsigned p, std::size_t cap = kDefaultEnumerationCap);

}  // namespace hopfkit
