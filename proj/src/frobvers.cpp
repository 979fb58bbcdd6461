#include "hopfkit/frobvers.hpp"

namespace hopfkit {

HopfMorphism frobenius(const HopfPtr& g) {
    return HopfMorphism(g, g, g->algebra().frobenius_matrix(), TwistMarker{0}, TwistMarker{1});
}

HopfMorphism verschiebung(const HopfPtr& g) {
    HopfAlgebra dual = cartier_dual(*g);
    FpMatrix m = dual.algebra().frobenius_matrix().transpose();
    return HopfMorphism(g, g, std::move(m), TwistMarker{1}, TwistMarker{0});
}

FpMatrix convolve(const HopfAlgebra& source, const HopfAlgebra& target, const FpMatrix& f, const FpMatrix& g) {
    const unsigned p = source.p();
    const FiniteAlgebra& a = source.algebra();
    FpMatrix out(p, source.dim(), target.dim());
    for (std::size_t j = 0; j < target.dim(); ++j) {
        FpVector acc = a.zero();
        for (const auto& t : target.comul_terms(j)) {
            FpVector prod = a.multiply(f.column(t.j), g.column(t.k));
            for (std::size_t r = 0; r < acc.size(); ++r) acc[r] = fp::add(acc[r], fp::mul(t.c, prod[r], p), p);
        }
        out.set_column(j, acc);
    }
    return out;
}

HopfMorphism multiplication_by(unsigned m, const HopfPtr& g) {
    FpMatrix acc = HopfMorphism::zero(g, g).coordinate_map();
    const FpMatrix id = FpMatrix::identity(g->p(), g->dim());
    for (unsigned i = 0; i < m; ++i) acc = convolve(*g, *g, acc, id);
    return HopfMorphism(g, g, std::move(acc));
}

VFVerdict vf_identity_check(const HopfPtr& g) {
    auto f = frobenius(g);
    auto v = verschiebung(g);
    const FpMatrix p_map = multiplication_by(g->p(), g).coordinate_map();
    VFVerdict out;
    out.vf_is_p = compose(v, f).coordinate_map() == p_map;
    out.fv_is_p = compose(f, v).coordinate_map() == p_map;
    return out;
}

HopfAlgebra coker_verschiebung(const HopfPtr& g) { return cokernel_quotient(verschiebung(g)); }

}  // namespace hopfkit
