#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hopfkit/hopf.hpp"

namespace hopfkit {

// A morphism G_R -> H_R; images[j][a] is the R-coefficient (as an element index
// of the ring) of e_a in the image of the target basis vector e_j.
struct RingHom {
    HopfPtr source, target;
    std::vector<std::vector<std::uint32_t>> images;
    bool operator==(const RingHom& o) const { return images == o.images; }
};

// R-points with the group law read off the comultiplication.
struct PointGroup {
    HopfPtr group;
    std::size_t ring_size = 0;
    // points[q][i] = value of the point on e_i, as a ring element index.
    std::vector<std::vector<std::uint32_t>> points;
    std::vector<std::uint32_t> add_table;
    std::size_t identity = 0;
    std::vector<std::size_t> inverse;
    bool closed = false;
    bool laws_hold = false;  // identity, inverses, associativity, commutativity
    std::size_t size() const { return points.size(); }
    std::size_t add(std::size_t a, std::size_t b) const { return add_table[a * size() + b]; }
};

PointGroup enumerate_points(const HopfPtr& g, const CoefficientRing& r, std::size_t cap = kDefaultEnumerationCap);

// Exhaustive search over generator images in the base extension, each leaf certified.
std::vector<RingHom> enumerate_hopf_homs(const HopfPtr& g, const HopfPtr& h, const CoefficientRing& r,
                                         std::size_t cap = kDefaultEnumerationCap);
// A GF(p)-morphism viewed over R.
RingHom base_change(const HopfMorphism& f, const CoefficientRing& r);
// second o first.
RingHom compose_over(const RingHom& second, const RingHom& first, const CoefficientRing& r);
bool is_trivial(const RingHom& f, const CoefficientRing& r);

// Maps G_1(R) x ... x G_r(R) -> H(R) additive in each slot (no naturality in R).
std::size_t count_point_multilinear(const std::vector<HopfPtr>& sources, const HopfPtr& target,
                                    const CoefficientRing& r, std::size_t cap = kDefaultEnumerationCap);
// Number of distinct point-level maps G_1(R) x ... x G_r(R) -> R induced by the given
// elements of A_1 (x) ... (x) A_r (x) R (ring factor last).
std::size_t induced_point_map_count(const std::vector<HopfPtr>& sources, const CoefficientRing& r,
                                    const std::vector<FpVector>& elements, std::size_t cap = kDefaultEnumerationCap);

// All multi-primitive f over GF(p), optionally with f^(p^m) = 0 (m = alpha_level > 0).
std::vector<FpVector> enumerate_multiprimitive(const std::vector<HopfPtr>& sources, unsigned alpha_level = 0,
                                               std::size_t cap = kDefaultEnumerationCap);
// Every u in A_1 (x) ... (x) A_r over GF(p) tested for multi-group-likeness.
std::vector<FpVector> brute_force_multi_grouplike(const std::vector<HopfPtr>& sources,
                                                  std::size_t cap = kDefaultEnumerationCap);

// Orbit sums of y^{p^i_1} (x) ... (x) y^{p^i_r}, i_1 <= ... <= i_r < n, on alpha_{p^n}^r.
FpMatrix symmetric_multiset_basis(unsigned p, unsigned n, unsigned r);
std::size_t multiset_count(unsigned n, unsigned r);

}  // namespace hopfkit
