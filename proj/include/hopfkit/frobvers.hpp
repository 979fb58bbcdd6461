#pragma once

#include "hopfkit/hopf.hpp"

namespace hopfkit {

// F: G -> G^(p), coordinate map a -> a^p. Target carries twist exponent 1.
HopfMorphism frobenius(const HopfPtr& g);
// V: G^(p) -> G, the transpose of the Frobenius of the dual.
HopfMorphism verschiebung(const HopfPtr& g);
// [m] as the m-fold convolution power of the identity; [0] is the trivial map.
HopfMorphism multiplication_by(unsigned m, const HopfPtr& g);

struct VFVerdict {
    bool vf_is_p = false;  // V o F = [p]
    bool fv_is_p = false;  // F o V = [p] on the twist
    bool holds() const { return vf_is_p && fv_is_p; }
};
VFVerdict vf_identity_check(const HopfPtr& g);

HopfAlgebra coker_verschiebung(const HopfPtr& g);

// Convolution f * g of coordinate maps B -> A (both dim(A) x dim(B)).
FpMatrix convolve(const HopfAlgebra& source, const HopfAlgebra& target, const FpMatrix& f, const FpMatrix& g);

}  // namespace hopfkit
