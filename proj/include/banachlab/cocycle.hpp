#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "banachlab/abelian_group.hpp"
#include "banachlab/operator_matrix.hpp"
#include "banachlab/residue.hpp"

namespace banachlab {

// Unitary monomial matrix on l2(Z): (M f)(z) = phase[z] * f(perm[z]).
// Every cocycle in the catalog is of this shape, which keeps validation and
// assembly linear in #Z instead of quadratic.
struct MonomialMatrix {
    std::vector<std::uint32_t> perm;
    std::vector<Complex> phase;

    std::size_t size() const { return perm.size(); }

    static MonomialMatrix identity(std::size_t z) {
        MonomialMatrix m;
        m.perm.resize(z);
        m.phase.assign(z, Complex(1, 0));
        for (std::size_t i = 0; i < z; ++i) m.perm[i] = std::uint32_t(i);
        return m;
    }

    // this applied after other
    MonomialMatrix compose(const MonomialMatrix& other) const {
        MonomialMatrix r;
        r.perm.resize(size());
        r.phase.resize(size());
        for (std::size_t z = 0; z < size(); ++z) {
            r.perm[z] = other.perm[perm[z]];
            r.phase[z] = phase[z] * other.phase[perm[z]];
        }
        return r;
    }

    double max_diff(const MonomialMatrix& o) const {
        double d = 0;
        for (std::size_t z = 0; z < size(); ++z) {
            if (perm[z] != o.perm[z]) return 2.0;
            d = std::max(d, std::abs(phase[z] - o.phase[z]));
        }
        return d;
    }

    bool is_unitary(double tol = 1e-12) const {
        std::vector<std::uint8_t> hit(size(), 0);
        for (std::size_t z = 0; z < size(); ++z) {
            if (perm[z] >= size() || hit[perm[z]]) return false;
            hit[perm[z]] = 1;
            if (std::abs(std::abs(phase[z]) - 1.0) > tol) return false;
        }
        return true;
    }

    // lambda such that M = lambda * Id, if scalar
    std::optional<Complex> as_scalar(double tol = 1e-12) const {
        for (std::size_t z = 0; z < size(); ++z)
            if (perm[z] != z) return std::nullopt;
        for (std::size_t z = 1; z < size(); ++z)
            if (std::abs(phase[z] - phase[0]) > tol) return std::nullopt;
        return phase[0];
    }

    CMatrix dense() const {
        CMatrix m = CMatrix::Zero(size(), size());
        for (std::size_t z = 0; z < size(); ++z) m(z, perm[z]) = phase[z];
        return m;
    }
};

using CocycleValue = std::variant<MonomialMatrix, CMatrix>;

inline CMatrix cocycle_dense(const CocycleValue& v) {
    if (std::holds_alternative<MonomialMatrix>(v)) return std::get<MonomialMatrix>(v).dense();
    return std::get<CMatrix>(v);
}

struct CocycleError : std::runtime_error {
    enum class Kind { not_biadditive, not_unitary, not_commuting, not_normalized };
    Kind kind;
    std::uint32_t x, y;
    CocycleError(Kind k, std::uint32_t x_, std::uint32_t y_, const std::string& what)
        : std::runtime_error(what), kind(k), x(x_), y(y_) {}
};

// kappa : G x Gbar -> unitaries on l2(Z), biadditive, kappa(x,0)=kappa(0,y)=1,
// all values commuting. Values are stored as a full table.
struct CocycleSpec {
    FiniteAbelianGroup g, gbar;
    std::size_t z_size = 1;
    std::vector<CocycleValue> table;  // x * #Gbar + y

    const CocycleValue& value(std::uint32_t x, std::uint32_t y) const {
        return table[std::size_t(x) * gbar.order() + y];
    }

    template <class F>
    static CocycleSpec build(FiniteAbelianGroup g, FiniteAbelianGroup gbar, std::size_t z,
                             F&& kappa) {
        CocycleSpec spec;
        spec.g = std::move(g);
        spec.gbar = std::move(gbar);
        spec.z_size = z;
        spec.table.reserve(spec.g.order() * spec.gbar.order());
        for (std::uint32_t x = 0; x < spec.g.order(); ++x)
            for (std::uint32_t y = 0; y < spec.gbar.order(); ++y) spec.table.push_back(kappa(x, y));
        return spec;
    }

    void validate(double tol = 1e-12) const;
};

namespace detail {

inline double value_diff(const CocycleValue& a, const CocycleValue& b) {
    if (std::holds_alternative<MonomialMatrix>(a) && std::holds_alternative<MonomialMatrix>(b))
        return std::get<MonomialMatrix>(a).max_diff(std::get<MonomialMatrix>(b));
    return max_abs_diff(cocycle_dense(a), cocycle_dense(b));
}

inline CocycleValue value_compose(const CocycleValue& a, const CocycleValue& b) {
    if (std::holds_alternative<MonomialMatrix>(a) && std::holds_alternative<MonomialMatrix>(b))
        return std::get<MonomialMatrix>(a).compose(std::get<MonomialMatrix>(b));
    return CocycleValue(CMatrix(cocycle_dense(a) * cocycle_dense(b)));
}

inline bool value_unitary(const CocycleValue& v, double tol) {
    if (std::holds_alternative<MonomialMatrix>(v))
        return std::get<MonomialMatrix>(v).is_unitary(tol);
    const CMatrix& m = std::get<CMatrix>(v);
    return max_abs_diff(CMatrix(m * m.adjoint()), CMatrix(CMatrix::Identity(m.rows(), m.cols()))) <=
           tol;
}

inline bool value_is_identity(const CocycleValue& v, double tol) {
    CocycleValue id = MonomialMatrix::identity(
        std::holds_alternative<MonomialMatrix>(v) ? std::get<MonomialMatrix>(v).size()
                                                  : std::size_t(std::get<CMatrix>(v).rows()));
    return value_diff(v, id) <= tol;
}

inline std::vector<std::uint32_t> factor_generators(const FiniteAbelianGroup& g) {
    std::vector<std::uint32_t> gens;
    std::uint32_t place = 1;
    for (auto m : g.factors) {
        if (m > 1) gens.push_back(place);
        place *= m;
    }
    return gens;
}

}  // namespace detail

inline void CocycleSpec::validate(double tol) const {
    using K = CocycleError::Kind;
    for (std::uint32_t x = 0; x < g.order(); ++x)
        if (!detail::value_is_identity(value(x, 0), tol))
            throw CocycleError(K::not_normalized, x, 0, "kappa(x, 0) != identity");
    for (std::uint32_t y = 0; y < gbar.order(); ++y)
        if (!detail::value_is_identity(value(0, y), tol))
            throw CocycleError(K::not_normalized, 0, y, "kappa(0, y) != identity");
    for (std::uint32_t x = 0; x < g.order(); ++x)
        for (std::uint32_t y = 0; y < gbar.order(); ++y)
            if (!detail::value_unitary(value(x, y), tol))
                throw CocycleError(K::not_unitary, x, y, "kappa value is not unitary");
    // Biadditivity for all x against generators in each variable implies it
    // everywhere, by induction along generator decompositions.
    auto ggens = detail::factor_generators(g);
    auto bgens = detail::factor_generators(gbar);
    for (std::uint32_t x = 0; x < g.order(); ++x)
        for (std::uint32_t y = 0; y < gbar.order(); ++y) {
            for (auto e : ggens) {
                CocycleValue lhs = value(g.add(x, e), y);
                CocycleValue rhs = detail::value_compose(value(x, y), value(e, y));
                if (detail::value_diff(lhs, rhs) > tol)
                    throw CocycleError(K::not_biadditive, x, y, "kappa not additive in x");
            }
            for (auto e : bgens) {
                CocycleValue lhs = value(x, gbar.add(y, e));
                CocycleValue rhs = detail::value_compose(value(x, y), value(x, e));
                if (detail::value_diff(lhs, rhs) > tol)
                    throw CocycleError(K::not_biadditive, x, y, "kappa not additive in y");
            }
        }
    // Commutation follows from pairwise commutation of generator values.
    for (auto gx : ggens)
        for (auto gy : bgens)
            for (auto gx2 : ggens)
                for (auto gy2 : bgens) {
                    CocycleValue ab =
                        detail::value_compose(value(gx, gy), value(gx2, gy2));
                    CocycleValue ba =
                        detail::value_compose(value(gx2, gy2), value(gx, gy));
                    if (detail::value_diff(ab, ba) > tol)
                        throw CocycleError(K::not_commuting, gx, gy,
                                           "kappa values do not commute");
                }
}

// f |-> [(y, z) |-> E_{x in G} (kappa(x, y) f(x, .))(z)],
// as a matrix from l2(G x Z) to l2(Gbar x Z); index layout x * #Z + z.
inline OperatorMatrix variant_operator(const CocycleSpec& spec, bool validated = false) {
    if (!validated) spec.validate();
    std::size_t zc = spec.z_size;
    CMatrix m = CMatrix::Zero(spec.gbar.order() * zc, spec.g.order() * zc);
    double inv = 1.0 / double(spec.g.order());
    for (std::uint32_t y = 0; y < spec.gbar.order(); ++y)
        for (std::uint32_t x = 0; x < spec.g.order(); ++x) {
            const CocycleValue& v = spec.value(x, y);
            if (std::holds_alternative<MonomialMatrix>(v)) {
                const MonomialMatrix& mm = std::get<MonomialMatrix>(v);
                for (std::size_t z = 0; z < zc; ++z)
                    m(y * zc + z, x * zc + mm.perm[z]) += mm.phase[z] * inv;
            } else {
                m.block(y * zc, x * zc, zc, zc) += std::get<CMatrix>(v) * inv;
            }
        }
    return OperatorMatrix(std::move(m), "Gbar x Z", "G x Z");
}

inline CSparse variant_operator_sparse(const CocycleSpec& spec, bool validated = false) {
    if (!validated) spec.validate();
    std::size_t zc = spec.z_size;
    std::vector<Eigen::Triplet<Complex>> trips;
    double inv = 1.0 / double(spec.g.order());
    for (std::uint32_t y = 0; y < spec.gbar.order(); ++y)
        for (std::uint32_t x = 0; x < spec.g.order(); ++x) {
            const CocycleValue& v = spec.value(x, y);
            if (std::holds_alternative<MonomialMatrix>(v)) {
                const MonomialMatrix& mm = std::get<MonomialMatrix>(v);
                for (std::size_t z = 0; z < zc; ++z)
                    trips.emplace_back(Eigen::Index(y * zc + z),
                                       Eigen::Index(x * zc + mm.perm[z]), mm.phase[z] * inv);
            } else {
                const CMatrix& d = std::get<CMatrix>(v);
                for (std::size_t z = 0; z < zc; ++z)
                    for (std::size_t zp = 0; zp < zc; ++zp)
                        if (std::abs(d(z, zp)) > 0)
                            trips.emplace_back(Eigen::Index(y * zc + z),
                                               Eigen::Index(x * zc + zp), d(z, zp) * inv);
            }
        }
    CSparse s(spec.gbar.order() * zc, spec.g.order() * zc);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

// Decreasing chain Gbar = Gbar^0 > Gbar^1 > ... > Gbar^n = 0.
struct DecreasingChain {
    FiniteAbelianGroup group;
    std::vector<Subgroup> steps;

    DecreasingChain(FiniteAbelianGroup g, std::vector<Subgroup> s)
        : group(std::move(g)), steps(std::move(s)) {
        if (steps.size() < 2) throw std::invalid_argument("chain needs at least two groups");
        if (steps.front().order() != group.order())
            throw std::invalid_argument("decreasing chain must start at the full group");
        if (steps.back().order() != 1)
            throw std::invalid_argument("decreasing chain must end at the trivial subgroup");
        for (std::size_t i = 1; i < steps.size(); ++i)
            if (!steps[i - 1].contains(steps[i]) || steps[i].order() >= steps[i - 1].order())
                throw std::invalid_argument("chain is not strictly nested");
    }

    std::size_t length() const { return steps.size() - 1; }
};

struct ChainCompatibilityError : std::runtime_error {
    std::size_t step;
    ChainCompatibilityError(std::size_t i, const std::string& w)
        : std::runtime_error(w), step(i) {}
};

namespace detail {

struct ChainLevels {
    // per level i = 0..n: coset tables of G_i in G and Gbar^i in Gbar
    std::vector<CosetTable> gcos, bcos;
};

inline ChainLevels chain_levels(const CocycleSpec& spec, const SubgroupChain& cg,
                                const DecreasingChain& cb) {
    if (cg.length() != cb.length())
        throw std::invalid_argument("chains must have equal length");
    ChainLevels lv;
    for (std::size_t i = 0; i < cg.steps.size(); ++i) {
        lv.gcos.push_back(CosetTable::build(spec.g, cg.steps[i]));
        lv.bcos.push_back(CosetTable::build(spec.gbar, cb.steps[i]));
    }
    return lv;
}

inline void check_compatibility(const CocycleSpec& spec, const SubgroupChain& cg,
                                const DecreasingChain& cb, double tol = 1e-12) {
    for (std::size_t i = 0; i < cg.steps.size(); ++i)
        for (auto x : cg.steps[i].members)
            for (auto y : cb.steps[i].members)
                if (!value_is_identity(spec.value(x, y), tol))
                    throw ChainCompatibilityError(
                        i, "kappa(G_i, Gbar^i) != identity at step " + std::to_string(i));
}

}  // namespace detail

// Chain factorization of the variant transform. Requires
// kappa(G_i, Gbar^i) = 1 for every level. Factor i (i = 1..n) maps fields on
// (G/G_{i-1}) x (Gbar/Gbar^{i-1}) x Z to fields on (G/G_i) x (Gbar/Gbar^i) x Z:
// it averages over the new x-fiber and refines the y-coordinate, twisting by
// kappa(rep(x-coset at level i-1) - rep(x-coset at level i), rep(y-coset)).
// The ordered product telescopes exactly to variant_operator(spec).
inline std::vector<OperatorMatrix> variant_factorize(const CocycleSpec& spec,
                                                     const SubgroupChain& chain_g,
                                                     const DecreasingChain& chain_gbar,
                                                     bool validated = false) {
    if (!validated) spec.validate();
    detail::check_compatibility(spec, chain_g, chain_gbar);
    detail::ChainLevels lv = detail::chain_levels(spec, chain_g, chain_gbar);
    std::size_t n = chain_g.length(), zc = spec.z_size;

    std::vector<OperatorMatrix> factors;
    for (std::size_t i = 1; i <= n; ++i) {
        const CosetTable& gprev = lv.gcos[i - 1];
        const CosetTable& gcur = lv.gcos[i];
        const CosetTable& bprev = lv.bcos[i - 1];
        const CosetTable& bcur = lv.bcos[i];
        std::size_t rows = gcur.count() * bcur.count() * zc;
        std::size_t cols = gprev.count() * bprev.count() * zc;
        double inv = double(gcur.count()) / double(gprev.count());  // 1 / fiber size
        CMatrix m = CMatrix::Zero(rows, cols);
        for (std::uint32_t xc = 0; xc < gprev.count(); ++xc) {
            std::uint32_t xrep = gprev.rep[xc];
            std::uint32_t xto = gcur.coset_of[xrep];
            std::uint32_t shift = spec.g.sub(xrep, gcur.rep[xto]);
            for (std::uint32_t yc = 0; yc < bcur.count(); ++yc) {
                std::uint32_t yrep = bcur.rep[yc];
                std::uint32_t yfrom = bprev.coset_of[yrep];
                const CocycleValue& v = spec.value(shift, yrep);
                std::size_t r0 = (std::size_t(xto) * bcur.count() + yc) * zc;
                std::size_t c0 = (std::size_t(xc) * bprev.count() + yfrom) * zc;
                if (std::holds_alternative<MonomialMatrix>(v)) {
                    const MonomialMatrix& mm = std::get<MonomialMatrix>(v);
                    for (std::size_t z = 0; z < zc; ++z)
                        m(r0 + z, c0 + mm.perm[z]) += mm.phase[z] * inv;
                } else {
                    m.block(r0, c0, zc, zc) += std::get<CMatrix>(v) * inv;
                }
            }
        }
        factors.emplace_back(std::move(m), "level " + std::to_string(i),
                             "level " + std::to_string(i - 1));
    }
    return factors;
}

// Step transform T_{G_{i+1}/G_i, Gbar^i/Gbar^{i+1}, Z} built on coset
// representatives (well defined by the compatibility condition).
inline OperatorMatrix step_operator(const CocycleSpec& spec, const SubgroupChain& chain_g,
                                    const DecreasingChain& chain_gbar, std::size_t i) {
    CosetTable xq = CosetTable::build(spec.g, chain_g.steps[i], chain_g.steps[i + 1].members);
    CosetTable yq =
        CosetTable::build(spec.gbar, chain_gbar.steps[i + 1], chain_gbar.steps[i].members);
    std::size_t zc = spec.z_size;
    CMatrix m = CMatrix::Zero(yq.count() * zc, xq.count() * zc);
    double inv = 1.0 / double(xq.count());
    for (std::uint32_t yc = 0; yc < yq.count(); ++yc)
        for (std::uint32_t xc = 0; xc < xq.count(); ++xc) {
            const CocycleValue& v = spec.value(xq.rep[xc], yq.rep[yc]);
            if (std::holds_alternative<MonomialMatrix>(v)) {
                const MonomialMatrix& mm = std::get<MonomialMatrix>(v);
                for (std::size_t z = 0; z < zc; ++z)
                    m(yc * zc + z, xc * zc + mm.perm[z]) += mm.phase[z] * inv;
            } else {
                m.block(yc * zc, xc * zc, zc, zc) += std::get<CMatrix>(v) * inv;
            }
        }
    return OperatorMatrix(std::move(m), "step " + std::to_string(i) + " quotient dual",
                          "step " + std::to_string(i) + " quotient");
}

// Scalar data of a step: lambda_i on (G_{i+1}/G_i) x (Gbar^i/Gbar^{i+1}),
// when every kappa value on the step is a scalar multiple of the identity.
struct ScalarStep {
    std::vector<std::uint32_t> xreps, yreps;
    CMatrix lambda;  // lambda(y, x)
};

inline std::optional<ScalarStep> scalar_step(const CocycleSpec& spec,
                                             const SubgroupChain& chain_g,
                                             const DecreasingChain& chain_gbar, std::size_t i,
                                             double tol = 1e-12) {
    CosetTable xq = CosetTable::build(spec.g, chain_g.steps[i], chain_g.steps[i + 1].members);
    CosetTable yq =
        CosetTable::build(spec.gbar, chain_gbar.steps[i + 1], chain_gbar.steps[i].members);
    ScalarStep st;
    st.xreps.assign(xq.rep.begin(), xq.rep.end());
    st.yreps.assign(yq.rep.begin(), yq.rep.end());
    st.lambda = CMatrix(yq.count(), xq.count());
    for (std::uint32_t yc = 0; yc < yq.count(); ++yc)
        for (std::uint32_t xc = 0; xc < xq.count(); ++xc) {
            const CocycleValue& v = spec.value(xq.rep[xc], yq.rep[yc]);
            std::optional<Complex> lam;
            if (std::holds_alternative<MonomialMatrix>(v))
                lam = std::get<MonomialMatrix>(v).as_scalar(tol);
            else {
                const CMatrix& d = std::get<CMatrix>(v);
                Complex l0 = d(0, 0);
                if (max_abs_diff(d, CMatrix(l0 * CMatrix::Identity(d.rows(), d.cols()))) <= tol)
                    lam = l0;
            }
            if (!lam) return std::nullopt;
            st.lambda(yc, xc) = *lam;
        }
    return st;
}

// lambda_i nondegenerate: lambda(., y) trivial only for y = 0 and
// lambda(x, .) trivial only for x = 0; checked exhaustively.
inline bool scalar_step_nondegenerate(const ScalarStep& st, double tol = 1e-9) {
    for (Eigen::Index y = 1; y < st.lambda.rows(); ++y) {
        bool all_one = true;
        for (Eigen::Index x = 0; x < st.lambda.cols(); ++x)
            if (std::abs(st.lambda(y, x) - Complex(1, 0)) > tol) { all_one = false; break; }
        if (all_one) return false;
    }
    for (Eigen::Index x = 1; x < st.lambda.cols(); ++x) {
        bool all_one = true;
        for (Eigen::Index y = 0; y < st.lambda.rows(); ++y)
            if (std::abs(st.lambda(y, x) - Complex(1, 0)) > tol) { all_one = false; break; }
        if (all_one) return false;
    }
    return true;
}

// The quotient Fourier transform of a scalar step, rows indexed by
// Gbar^i/Gbar^{i+1} through y -> lambda(., y).
inline OperatorMatrix scalar_step_fourier(const ScalarStep& st) {
    return OperatorMatrix(CMatrix(st.lambda / double(st.lambda.cols())), "quotient dual",
                          "quotient");
}

// All steps whose cocycle is scalar, in chain order.
inline std::vector<std::size_t> detect_scalar_steps(const CocycleSpec& spec,
                                                    const SubgroupChain& chain_g,
                                                    const DecreasingChain& chain_gbar) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < chain_g.length(); ++i)
        if (scalar_step(spec, chain_g, chain_gbar, i)) out.push_back(i);
    return out;
}

// ------------------------------------------------------------------------
// Twisted translation transform on l2(R_n x R_n)_chi.
//
// Fields satisfying f(x, t + pi^(n-h) s) = f(x, t) chi(s) are identified with
// fields on R_n x Z by restriction, Z a set of representatives of
// O/pi^(n-h)O inside O/pi^nO. The transform (xi_{x,t}) -> (E_x xi_{x,t+xy})
// then becomes a concrete matrix whose (y,z),(x,z') entry is chi(s)/p^n,
// where z + xy = z' + pi^(n-h) s.

struct TwistedSpace {
    RingSpec ring;           // level n
    RingSpec level_h;        // O/pi^hO of the same kind
    AdditiveCharacter chi;   // nondegenerate on level_h
    std::vector<std::uint32_t> reps;            // Z, size p^(n-h)
    std::vector<std::uint32_t> rep_of_residue;  // residue mod pi^(n-h) -> index in Z

    std::size_t z_count() const { return reps.size(); }

    // w = reps[z'] + pi^(n-h) s; returns (z', chi(s))
    std::pair<std::uint32_t, Complex> decompose(std::uint64_t w) const {
        std::uint64_t pnh = 1;
        for (std::uint32_t i = 0; i < ring.n - level_h.n; ++i) pnh *= ring.p;
        std::uint32_t zi = rep_of_residue[w % pnh];
        std::uint64_t diff = ring_sub(ring, w, reps[zi]);
        std::uint64_t s = ring_shift_down(ring, diff, ring.n - level_h.n);
        return {zi, chi(s)};
    }
};

inline TwistedSpace make_twisted_space(const RingSpec& ring, std::uint32_t h,
                                       std::uint64_t chi_label,
                                       const std::vector<std::uint32_t>& reps) {
    if (ring.n < h) throw std::invalid_argument("twisted space requires n >= h");
    TwistedSpace ts;
    ts.ring = ring;
    ts.level_h = RingSpec{ring.p, h, ring.kind};
    ts.chi = AdditiveCharacter{ts.level_h, chi_label % ts.level_h.size()};
    if (!is_nondegenerate(ts.chi))
        throw std::invalid_argument("twisted space requires a nondegenerate character");
    std::uint64_t pnh = 1;
    for (std::uint32_t i = 0; i < ring.n - h; ++i) pnh *= ring.p;
    if (reps.size() != pnh) throw std::invalid_argument("wrong number of representatives");
    ts.reps = reps;
    ts.rep_of_residue.assign(pnh, std::uint32_t(-1));
    for (std::uint32_t i = 0; i < reps.size(); ++i) {
        std::uint64_t r = reps[i] % pnh;
        if (ts.rep_of_residue[r] != std::uint32_t(-1))
            throw std::invalid_argument("representatives collide modulo pi^(n-h)");
        ts.rep_of_residue[r] = i;
    }
    return ts;
}

// Default representatives: elements whose top h digits vanish.
inline std::vector<std::uint32_t> default_twisted_reps(const RingSpec& ring, std::uint32_t h) {
    std::uint64_t pnh = 1;
    for (std::uint32_t i = 0; i < ring.n - h; ++i) pnh *= ring.p;
    std::vector<std::uint32_t> reps(pnh);
    for (std::uint64_t i = 0; i < pnh; ++i) reps[i] = std::uint32_t(i);
    return reps;
}

// A second, deliberately skewed set for the invariance checks.
inline std::vector<std::uint32_t> skewed_twisted_reps(const RingSpec& ring, std::uint32_t h) {
    std::vector<std::uint32_t> reps = default_twisted_reps(ring, h);
    std::uint64_t pnh = reps.size();
    for (std::uint64_t i = 0; i < pnh; ++i) {
        std::uint64_t bump = ring_mul(ring, ring_pi_pow(ring, ring.n - h), (i * 7 + 3) % ring.size());
        reps[i] = std::uint32_t(ring_add(ring, reps[i], bump));
    }
    return reps;
}

inline OperatorMatrix twisted_operator(const TwistedSpace& ts) {
    std::size_t rn = ts.ring.size(), zc = ts.z_count();
    CMatrix m = CMatrix::Zero(rn * zc, rn * zc);
    double inv = 1.0 / double(rn);
    for (std::uint64_t y = 0; y < rn; ++y)
        for (std::uint64_t x = 0; x < rn; ++x) {
            std::uint64_t xy = ring_mul(ts.ring, x, y);
            for (std::size_t z = 0; z < zc; ++z) {
                auto [zp, unit] = ts.decompose(ring_add(ts.ring, ts.reps[z], xy));
                m(y * zc + z, x * zc + zp) += unit * inv;
            }
        }
    return OperatorMatrix(std::move(m), "(y, z)", "(x, z)");
}

inline CSparse twisted_operator_sparse(const TwistedSpace& ts) {
    std::size_t rn = ts.ring.size(), zc = ts.z_count();
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(rn * rn * zc);
    double inv = 1.0 / double(rn);
    for (std::uint64_t y = 0; y < rn; ++y)
        for (std::uint64_t x = 0; x < rn; ++x) {
            std::uint64_t xy = ring_mul(ts.ring, x, y);
            for (std::size_t z = 0; z < zc; ++z) {
                auto [zp, unit] = ts.decompose(ring_add(ts.ring, ts.reps[z], xy));
                trips.emplace_back(Eigen::Index(y * zc + z), Eigen::Index(x * zc + zp),
                                   unit * inv);
            }
        }
    CSparse s(rn * zc, rn * zc);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

// The same transform as a cocycle: kappa(x, y) = twisted translation by xy.
inline CocycleSpec twisted_cocycle(const TwistedSpace& ts) {
    FiniteAbelianGroup g = additive_group(ts.ring);
    return CocycleSpec::build(g, g, ts.z_count(), [&](std::uint32_t x, std::uint32_t y) {
        std::uint64_t xy = ring_mul(ts.ring, x, y);
        MonomialMatrix mm;
        mm.perm.resize(ts.z_count());
        mm.phase.resize(ts.z_count());
        for (std::size_t z = 0; z < ts.z_count(); ++z) {
            auto [zp, unit] = ts.decompose(ring_add(ts.ring, ts.reps[z], xy));
            mm.perm[z] = zp;
            mm.phase[z] = unit;
        }
        return CocycleValue(std::move(mm));
    });
}

// Chains of pi^h-power subgroups used with the twisted cocycle: increasing
// G_i generated by pi^(n - i h) and decreasing Gbar^i generated by pi^(i h).
inline SubgroupChain twisted_chain_increasing(const RingSpec& ring, std::uint32_t h) {
    return pi_power_chain(ring, h);
}

inline DecreasingChain twisted_chain_decreasing(const RingSpec& ring, std::uint32_t h) {
    FiniteAbelianGroup g = additive_group(ring);
    std::vector<Subgroup> steps{Subgroup::full(g)};
    for (std::uint32_t k = h;; k += h) {
        if (k >= ring.n) break;
        Subgroup next = Subgroup::closure(g, {std::uint32_t(ring_pi_pow(ring, k))});
        if (next.order() < steps.back().order()) steps.push_back(next);
    }
    if (steps.back().order() != 1) steps.push_back(Subgroup::trivial(g));
    return DecreasingChain(g, steps);
}

}  // namespace banachlab
