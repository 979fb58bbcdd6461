#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "hopfkit/algebra.hpp"
#include "hopfkit/hopf.hpp"

namespace hopfkit {

// Operation tables for a small coefficient ring; elements are enumeration indices.
class RingTables {
public:
    explicit RingTables(const CoefficientRing& r, std::size_t max_elements = 1024);
    std::size_t size() const noexcept { return n_; }
    std::uint32_t zero() const noexcept { return 0; }
    std::uint32_t one() const noexcept { return one_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * n_ + b]; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * n_ + b]; }
    std::uint32_t scale(Residue c, std::uint32_t a) const { return scale_[c * n_ + a]; }
    std::uint32_t frobenius(std::uint32_t a) const { return frob_[a]; }
    const FpVector& value(std::uint32_t a) const { return values_[a]; }
    unsigned p() const noexcept { return p_; }

private:
    unsigned p_;
    std::size_t n_;
    std::uint32_t one_;
    std::vector<std::uint32_t> add_, mul_, scale_, frob_;
    std::vector<FpVector> values_;
};

// constant + sum a_v x_v + sum b_{vw} x_v x_w = 0, coefficients in GF(p), unknowns in R.
struct QuadraticEquation {
    Residue constant = 0;
    std::vector<std::pair<std::size_t, Residue>> linear;
    std::vector<std::tuple<std::size_t, std::size_t, Residue>> quadratic;
};

struct QuadraticSystem {
    std::size_t num_vars = 0;
    std::vector<QuadraticEquation> equations;
};

using Assignment = std::vector<std::uint32_t>;

// Depth-first search in variable order. Each equation is tested as soon as its
// highest variable is set; a variable that occurs linearly with a unit
// coefficient (and in no product) in such an equation is solved for instead of
// branched on. Throws ResourceError when more than node_cap nodes are visited.
std::vector<Assignment> solve_quadratic_system(const QuadraticSystem& system, const RingTables& ring,
                                               std::size_t node_cap,
                                               const std::function<bool(const Assignment&)>& accept = {});

struct MultiGroupLikeOptions {
    bool alternating = false;   // every diagonal restriction equals 1
    bool p_torsion = false;     // u^p = 1 (target mu_p instead of G_m)
    std::size_t node_cap = kDefaultEnumerationCap;
    std::size_t dim_cap = kDefaultDimensionCap;
};

// Units u of A_1 (x) ... (x) A_r (x) R that are group-like in every slot and
// restrict to 1 along each counit. Returned as coordinate vectors in the kron
// basis with the ring factor last.
std::vector<FpVector> solve_multi_grouplike(const std::vector<HopfPtr>& slots, const CoefficientRing& r,
                                            const MultiGroupLikeOptions& options = {});

// Basis of the augmentation ideal adapted to its power filtration, with degrees.
struct AdaptedBasis {
    std::vector<FpVector> vectors;
    std::vector<unsigned> degrees;
};
AdaptedBasis augmentation_basis(const HopfAlgebra& h);

}  // namespace hopfkit
