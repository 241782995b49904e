#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banachlab/abelian_group.hpp"
#include "banachlab/cocycle.hpp"
#include "banachlab/operator_matrix.hpp"

namespace banachlab {

// Averaging-normalized Fourier transform: rows indexed by the dual group
// (labels c with chi_c = <c, .>), columns by G, entry (c, x) = <c, x> / #G.
inline OperatorMatrix fourier_matrix(const FiniteAbelianGroup& g) {
    std::size_t n = g.order();
    CMatrix m(n, n);
    double inv = 1.0 / double(n);
    for (std::uint32_t c = 0; c < n; ++c)
        for (std::uint32_t x = 0; x < n; ++x) m(c, x) = g.pairing(c, x) * inv;
    return OperatorMatrix(std::move(m), "dual(" + g.to_string() + ")", g.to_string());
}

// The Fourier transform as a cocycle transform: Gbar = the dual labels,
// Z a singleton, kappa(x, c) = <c, x>.
inline CocycleSpec fourier_cocycle(const FiniteAbelianGroup& g) {
    return CocycleSpec::build(g, g, 1, [&](std::uint32_t x, std::uint32_t c) {
        MonomialMatrix mm;
        mm.perm = {0};
        mm.phase = {g.pairing(c, x)};
        return CocycleValue(std::move(mm));
    });
}

// Dual chain of annihilators: Gbar^i = (G_i)^perp, decreasing.
inline DecreasingChain annihilator_chain(const SubgroupChain& chain) {
    std::vector<Subgroup> steps;
    steps.reserve(chain.steps.size());
    for (const Subgroup& h : chain.steps) steps.push_back(annihilator(chain.group, h));
    return DecreasingChain(chain.group, std::move(steps));
}

// Fast Fourier factorization along a subgroup chain. Factor i is block
// diagonal over the level-i coset structure with blocks the transform of
// G_i/G_{i-1} up to column units; the ordered product (factor 0 applied
// first) equals fourier_matrix(G) exactly.
inline std::vector<OperatorMatrix> fft_factorize(const SubgroupChain& chain) {
    CocycleSpec spec = fourier_cocycle(chain.group);
    return variant_factorize(spec, chain, annihilator_chain(chain), /*validated=*/true);
}

// Fourier transform of the quotient G_hi / G_lo, rows indexed through the
// annihilator pairing (exhaustively matched against the quotient dual).
inline OperatorMatrix quotient_fourier_matrix(const FiniteAbelianGroup& g, const Subgroup& lo,
                                              const Subgroup& hi) {
    CosetTable xq = CosetTable::build(g, lo, hi.members);
    Subgroup lo_perp = annihilator(g, lo);
    Subgroup hi_perp = annihilator(g, hi);
    CosetTable yq = CosetTable::build(g, hi_perp, lo_perp.members);
    std::size_t q = xq.count();
    CMatrix m(yq.count(), q);
    double inv = 1.0 / double(q);
    for (std::uint32_t yc = 0; yc < yq.count(); ++yc)
        for (std::uint32_t xc = 0; xc < q; ++xc)
            m(yc, xc) = g.pairing(yq.rep[yc], xq.rep[xc]) * inv;
    return OperatorMatrix(std::move(m), "dual quotient", "quotient");
}

}  // namespace banachlab
