#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "banachlab/errors.hpp"
#include "banachlab/laurent.hpp"
#include "banachlab/residue.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

// 3x3 matrix over F_p((t)) with finitely supported entries. The columns of a
// nonsingular matrix span an O-lattice in F^3, O = F_p[[t]], pi = t.
struct LaurentMatrix {
    std::uint32_t p = 2;
    std::array<std::array<LaurentPoly, 3>, 3> e;

    explicit LaurentMatrix(std::uint32_t p_ = 2) : p(p_) {
        for (auto& row : e)
            for (auto& x : row) x = LaurentPoly::zero(p_);
    }

    static LaurentMatrix identity(std::uint32_t p) {
        LaurentMatrix m(p);
        for (int i = 0; i < 3; ++i) m.e[i][i] = LaurentPoly::constant(p, 1);
        return m;
    }
    static LaurentMatrix diag(std::uint32_t p, int a, int b, int c) {
        LaurentMatrix m(p);
        m.e[0][0] = LaurentPoly::monomial(p, a);
        m.e[1][1] = LaurentPoly::monomial(p, b);
        m.e[2][2] = LaurentPoly::monomial(p, c);
        return m;
    }

    LaurentPoly& operator()(int r, int c) { return e[std::size_t(r)][std::size_t(c)]; }
    const LaurentPoly& operator()(int r, int c) const {
        return e[std::size_t(r)][std::size_t(c)];
    }

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
        LaurentMatrix r(a.p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.e[i][j] = a.e[i][0] * b.e[0][j] + a.e[i][1] * b.e[1][j] + a.e[i][2] * b.e[2][j];
        return r;
    }
    bool operator==(const LaurentMatrix& o) const { return e == o.e; }

    LaurentPoly det() const {
        LaurentPoly r = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]);
        r = r - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]);
        r = r + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
        return r;
    }

    LaurentMatrix adjugate() const {
        LaurentMatrix a(p);
        auto co = [&](int r0, int r1, int c0, int c1) {
            return e[r0][c0] * e[r1][c1] - e[r0][c1] * e[r1][c0];
        };
        a.e[0][0] = co(1, 2, 1, 2);
        a.e[0][1] = -co(0, 2, 1, 2);
        a.e[0][2] = co(0, 1, 1, 2);
        a.e[1][0] = -co(1, 2, 0, 2);
        a.e[1][1] = co(0, 2, 0, 2);
        a.e[1][2] = -co(0, 1, 0, 2);
        a.e[2][0] = co(1, 2, 0, 1);
        a.e[2][1] = -co(0, 2, 0, 1);
        a.e[2][2] = co(0, 1, 0, 1);
        return a;
    }

    LaurentMatrix shifted(int k) const {  // multiply by t^k
        LaurentMatrix r = *this;
        for (auto& row : r.e)
            for (auto& x : row) x = x.shifted(k);
        return r;
    }

    int min_val() const {
        int v = std::numeric_limits<int>::max();
        for (const auto& row : e)
            for (const auto& x : row)
                if (!x.is_zero()) v = std::min(v, x.val());
        return v;
    }

    std::string to_string() const {
        std::string s;
        for (int i = 0; i < 3; ++i) {
            s += "[ ";
            for (int j = 0; j < 3; ++j) s += e[i][j].to_string() + (j < 2 ? ", " : " ");
            s += "]\n";
        }
        return s;
    }
};

// entries in O (valuation >= 0) and determinant exactly 1
inline bool in_special_integral_group(const LaurentMatrix& m) {
    for (const auto& row : m.e)
        for (const auto& x : row)
            if (!x.is_zero() && x.val() < 0) return false;
    return m.det() == LaurentPoly::constant(m.p, 1);
}

// canonical polynomial lift of a laurent residue
inline LaurentPoly lift_residue(const RingSpec& spec, std::uint64_t repr) {
    LaurentPoly f(spec.p);
    std::uint64_t v = repr;
    for (std::uint32_t k = 0; v; ++k, v /= spec.p)
        if (v % spec.p) f = f + LaurentPoly::monomial(spec.p, int(k), std::uint32_t(v % spec.p));
    return f;
}

// Homothety class of an O-lattice in F^3, stored by the canonical triangular
// basis: lower triangular with pure monomial pivots t^{v_r}, below-pivot
// entries reduced modulo the pivot of their row, dilated so the minimal
// valuation is 0. Column operations only rescale columns by units of O or
// add column multiples, which preserves the lattice exactly.
struct LatticeClass {
    LaurentMatrix canonical;

    bool operator==(const LatticeClass& o) const { return canonical == o.canonical; }
    std::string to_string() const { return canonical.to_string(); }
};

namespace detail {

// Column echelon over O on the three basis columns. Elimination kills row
// entries exactly via cross-multiplied column combinations: with pivot
// a = t^{v_a} alpha and entry b = t^{v_b} beta (v_b >= v_a),
// alpha * col - t^{v_b - v_a} beta * pivot_col has an exact zero in the row.
inline void column_echelon(std::array<std::array<LaurentPoly, 3>, 3>& cols) {
    for (int r = 0; r < 3; ++r) {
        std::size_t piv = std::size_t(r), best = piv;
        int bestv = std::numeric_limits<int>::max();
        for (std::size_t c = piv; c < 3; ++c) {
            int v = cols[c][r].is_zero() ? std::numeric_limits<int>::max() : cols[c][r].val();
            if (v < bestv) {
                bestv = v;
                best = c;
            }
        }
        if (bestv == std::numeric_limits<int>::max())
            throw std::invalid_argument("lattice basis is singular");
        std::swap(cols[piv], cols[best]);
        const LaurentPoly a = cols[piv][r];
        for (std::size_t c = piv + 1; c < 3; ++c) {
            if (cols[c][r].is_zero()) continue;
            const LaurentPoly b = cols[c][r];
            LaurentPoly alpha = a.shifted(-a.val());
            LaurentPoly beta_shift = b.shifted(-a.val());
            for (int rr = 0; rr < 3; ++rr)
                cols[c][rr] = alpha * cols[c][rr] - beta_shift * cols[piv][rr];
        }
    }
}

inline LaurentPoly scaled_mod(const LaurentPoly& entry, const LaurentPoly& inv_unit, int cut) {
    if (entry.is_zero()) return entry;
    return truncate_above(entry * inv_unit, cut);
}

}  // namespace detail

// Canonical representative of the lattice class spanned by the columns.
inline LatticeClass lattice_class(const LaurentMatrix& basis) {
    if (basis.det().is_zero()) throw std::invalid_argument("lattice basis is singular");
    std::uint32_t p = basis.p;
    std::array<std::array<LaurentPoly, 3>, 3> cols;
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) cols[std::size_t(c)][r] = basis.e[r][c];
    detail::column_echelon(cols);
    int v0 = cols[0][0].val(), v1 = cols[1][1].val(), v2 = cols[2][2].val();

    LaurentMatrix out(p);
    out.e[0][0] = LaurentPoly::monomial(p, v0);
    out.e[1][1] = LaurentPoly::monomial(p, v1);
    out.e[2][2] = LaurentPoly::monomial(p, v2);
    {
        // column 1: (0, t^{v1} alpha, b) -> (0, t^{v1}, b alpha^{-1} mod t^{v2})
        LaurentPoly alpha = cols[1][1].shifted(-v1);
        int need = cols[1][2].is_zero() ? 1 : std::max(v2 - cols[1][2].val(), 1);
        LaurentPoly inv = unit_inverse_mod(alpha, need);
        out.e[2][1] = detail::scaled_mod(cols[1][2], inv, v2);
    }
    {
        // column 0: scale by alpha^{-1}; reduce row 1 mod t^{v1} (adjusting
        // row 2 through column 1), then reduce row 2 mod t^{v2}.
        LaurentPoly alpha = cols[0][0].shifted(-v0);
        int low = std::numeric_limits<int>::max();
        if (!cols[0][1].is_zero()) low = std::min(low, cols[0][1].val());
        if (!cols[0][2].is_zero()) low = std::min(low, cols[0][2].val());
        int need = low == std::numeric_limits<int>::max() ? 1
                                                          : std::max(v1 + v2 + 1 - low, 1);
        LaurentPoly inv = unit_inverse_mod(alpha, need);
        LaurentPoly a1 = cols[0][1].is_zero() ? cols[0][1] : cols[0][1] * inv;
        LaurentPoly a2 = cols[0][2].is_zero() ? cols[0][2] : cols[0][2] * inv;
        LaurentPoly a1red = truncate_above(a1, v1);
        LaurentPoly q = (a1 - a1red).shifted(-v1);
        a2 = a2 - q * out.e[2][1];
        out.e[1][0] = a1red;
        out.e[2][0] = truncate_above(a2, v2);
    }
    int mv = out.min_val();
    return LatticeClass{out.shifted(-mv)};
}

struct RelativePosition {
    int i = 0, j = 0;
    bool operator==(const RelativePosition&) const = default;
};

// sigma(x, y) from the elementary divisors of the change of basis: with
// determinantal divisor valuations d1, d2, d3 of adj(X) Y, the sorted
// elementary divisors are e = (d1, d2-d1, d3-d2) and (i, j) =
// (e2-e1, e3-e2); the determinant shift cancels in the differences.
inline RelativePosition relative_position(const LatticeClass& x, const LatticeClass& y) {
    LaurentMatrix m = x.canonical.adjugate() * y.canonical;
    int d1 = std::numeric_limits<int>::max();
    for (const auto& row : m.e)
        for (const auto& q : row)
            if (!q.is_zero()) d1 = std::min(d1, q.val());
    int d2 = std::numeric_limits<int>::max();
    for (int r0 = 0; r0 < 3; ++r0)
        for (int r1 = r0 + 1; r1 < 3; ++r1)
            for (int c0 = 0; c0 < 3; ++c0)
                for (int c1 = c0 + 1; c1 < 3; ++c1) {
                    LaurentPoly minor = m.e[r0][c0] * m.e[r1][c1] - m.e[r0][c1] * m.e[r1][c0];
                    if (!minor.is_zero()) d2 = std::min(d2, minor.val());
                }
    int d3 = m.det().val();
    int e1 = d1, e2 = d2 - d1, e3 = d3 - d2;
    return RelativePosition{e2 - e1, e3 - e2};
}

// determinant exponent mod 3: det(lattice) = pi^{-a} det(O^3)
inline int vertex_type(const LatticeClass& x) {
    int a = -x.canonical.det().val();
    return ((a % 3) + 3) % 3;
}

// M^n_{x,y} = O pi^{-n}(e1 + x e2 - y e3) + O e2 + O e3, with x, y lifted
// from O/pi^nO; the class does not depend on the chosen lifts.
inline LatticeClass m_plus(std::uint32_t n, const RingElem& x, const RingElem& y) {
    if (x.spec.kind != RingKind::laurent || !(x.spec == y.spec) || x.spec.n != n)
        throw std::invalid_argument("m_plus expects laurent residues at level n");
    std::uint32_t p = x.spec.p;
    LaurentMatrix b(p);
    b.e[0][0] = LaurentPoly::monomial(p, -int(n));
    b.e[1][0] = lift_residue(x.spec, x.repr).shifted(-int(n));
    b.e[2][0] = -lift_residue(x.spec, y.repr).shifted(-int(n));
    b.e[1][1] = LaurentPoly::constant(p, 1);
    b.e[2][2] = LaurentPoly::constant(p, 1);
    return lattice_class(b);
}

// M^{-m}_{a,b} = O(e1 - b e3) + O(e2 - a e3) + O pi^m e3
inline LatticeClass m_minus(std::uint32_t m, const RingElem& a, const RingElem& b) {
    if (a.spec.kind != RingKind::laurent || !(a.spec == b.spec) || a.spec.n != m)
        throw std::invalid_argument("m_minus expects laurent residues at level m");
    std::uint32_t p = a.spec.p;
    LaurentMatrix g(p);
    g.e[0][0] = LaurentPoly::constant(p, 1);
    g.e[2][0] = -lift_residue(a.spec, b.repr);
    g.e[1][1] = LaurentPoly::constant(p, 1);
    g.e[2][1] = -lift_residue(a.spec, a.repr);
    g.e[2][2] = LaurentPoly::monomial(p, int(m));
    return lattice_class(g);
}

// The displayed alternative bases for the cases i < min(m,n), i = n, i = m,
// checked by canonical-form equality against the defining bases.
inline bool position_case_bases_hold(std::uint32_t p, std::uint32_t m, std::uint32_t n,
                                     std::uint64_t x, std::uint64_t y, std::uint64_t a,
                                     std::uint64_t b, std::uint32_t i, const LatticeClass& plus,
                                     const LatticeClass& minus) {
    RingSpec rn = ring_make(p, n, RingKind::laurent);
    RingSpec rm = ring_make(p, m, RingKind::laurent);
    LaurentPoly lx = lift_residue(rn, x), ly = lift_residue(rn, y);
    LaurentPoly la = lift_residue(rm, a), lb = lift_residue(rm, b);
    LaurentPoly one = LaurentPoly::constant(p, 1);
    LaurentPoly axb = la * lx + lb;

    using Col = std::array<LaurentPoly, 3>;
    Col line{one, lx, -ly};                             // e1 + x e2 - y e3
    Col line_ab{one, lx, -axb};                         // e1 + x e2 - (ax+b) e3
    Col mid{LaurentPoly::zero(p), one, -la};            // e2 - a e3
    Col ez{LaurentPoly::zero(p), LaurentPoly::zero(p), one};

    auto shift_col = [](Col c, int k) {
        for (auto& q : c) q = q.shifted(k);
        return c;
    };
    auto mat_of = [&](const Col& u, const Col& v, const Col& w) {
        LaurentMatrix mm(p);
        for (int r = 0; r < 3; ++r) {
            mm.e[r][0] = u[std::size_t(r)];
            mm.e[r][1] = v[std::size_t(r)];
            mm.e[r][2] = w[std::size_t(r)];
        }
        return mm;
    };

    bool ok = true;
    std::uint32_t mn = std::min(m, n);
    if (i < mn) {
        ok = ok && lattice_class(mat_of(shift_col(line, -int(n)), mid,
                                        shift_col(line_ab, -int(i)))) == plus;
        ok = ok &&
             lattice_class(mat_of(shift_col(line, int(m - i)), mid, line_ab)) == minus;
    }
    if (i == n && m >= n) {
        ok = ok && lattice_class(mat_of(shift_col(line_ab, -int(n)), mid, ez)) == plus;
        ok = ok && lattice_class(mat_of(line_ab, mid, shift_col(ez, int(m)))) == minus;
    }
    if (i == m && n >= m) {
        ok = ok && lattice_class(mat_of(shift_col(line, -int(n)), mid, ez)) == plus;
        ok = ok && lattice_class(mat_of(line, mid, shift_col(ez, int(m)))) == minus;
    }
    return ok;
}

struct PositionSweepReport {
    std::uint64_t tuples = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t basis_identity_failures = 0;
    bool ok() const { return mismatches == 0 && basis_identity_failures == 0; }
};

// Exhaustive check that sigma(M^{-m}_{a,b}, M^n_{x,y}) = (m+n-2i, i) with
// i the capped valuation of y - (ax + b), against the elementary-divisor
// oracle, plus the displayed basis identities per tuple.
inline PositionSweepReport verify_position_formula(std::uint32_t p, std::uint32_t m,
                                                   std::uint32_t n,
                                                   std::uint64_t budget = 1000000,
                                                   bool check_bases = true) {
    long double cost = 1;
    for (std::uint32_t i = 0; i < 2 * (m + n); ++i) cost *= p;
    if (cost > (long double)budget)
        throw ResourceError("position sweep p^(2(m+n)) exceeds the budget");

    RingSpec rn = ring_make(p, n, RingKind::laurent);
    RingSpec rm = ring_make(p, m, RingKind::laurent);
    std::uint32_t mn = std::min(m, n);
    PositionSweepReport rep;

    for (std::uint64_t x = 0; x < rn.size(); ++x)
        for (std::uint64_t y = 0; y < rn.size(); ++y) {
            LatticeClass plus = m_plus(n, RingElem(rn, x), RingElem(rn, y));
            for (std::uint64_t a = 0; a < rm.size(); ++a)
                for (std::uint64_t b = 0; b < rm.size(); ++b) {
                    LatticeClass minus = m_minus(m, RingElem(rm, a), RingElem(rm, b));
                    LaurentPoly diff =
                        lift_residue(rn, y) -
                        (lift_residue(rm, a) * lift_residue(rn, x) + lift_residue(rm, b));
                    std::uint32_t i = mn;
                    if (!diff.is_zero() && diff.val() < int(mn)) i = std::uint32_t(diff.val());
                    RelativePosition expect{int(m + n - 2 * i), int(i)};
                    RelativePosition got = relative_position(minus, plus);
                    ++rep.tuples;
                    if (!(got == expect)) ++rep.mismatches;
                    if (check_bases &&
                        !position_case_bases_hold(p, m, n, x, y, a, b, i, plus, minus))
                        ++rep.basis_identity_failures;
                }
        }
    return rep;
}

// ------------------------------------------------ diagonal factorizations
//
// A^{x,y}_{a,b} for y = ax + b (shifted = false) or y = ax + b + pi^(n-1)
// (shifted = true) factors exactly as L * diag * R with L, R integral of
// determinant 1 and middle factor diag(pi^-m, pi^-n, 1), respectively
// diag(pi^-(m+1), pi^-(n-1), 1). Checked by exact polynomial equality.

struct FactorizationReport {
    bool product_matches = false;
    bool outer_factors_integral = false;
    LaurentMatrix a, rebuilt;
    explicit FactorizationReport(std::uint32_t p) : a(p), rebuilt(p) {}
    bool ok() const { return product_matches && outer_factors_integral; }
};

inline FactorizationReport verify_diagonal_factorization(std::uint32_t p, std::uint32_t m,
                                                         std::uint32_t n, std::uint64_t x,
                                                         std::uint64_t a, std::uint64_t b,
                                                         bool shifted) {
    if (!(m >= n && n >= 1))
        throw std::invalid_argument("factorization check expects m >= n >= 1");
    RingSpec rn = ring_make(p, n, RingKind::laurent);
    RingSpec rm = ring_make(p, m, RingKind::laurent);
    LaurentPoly lx = lift_residue(rn, x % rn.size());
    LaurentPoly la = lift_residue(rm, a % rm.size());
    LaurentPoly lb = lift_residue(rm, b % rm.size());
    LaurentPoly one = LaurentPoly::constant(p, 1);
    LaurentPoly ly = la * lx + lb;
    if (shifted) ly = ly + LaurentPoly::monomial(p, int(n) - 1);

    FactorizationReport rep(p);
    rep.a.e[0][0] = LaurentPoly::monomial(p, -int(n));
    rep.a.e[1][0] = lx.shifted(-int(n));
    rep.a.e[1][1] = one;
    rep.a.e[2][0] = (la * lx + lb - ly).shifted(-int(m + n));
    rep.a.e[2][1] = la.shifted(-int(m));
    rep.a.e[2][2] = LaurentPoly::monomial(p, -int(m));

    LaurentMatrix l(p);
    l.e[0][0] = -LaurentPoly::monomial(p, int(m - n + 1));
    l.e[0][1] = one;
    l.e[1][0] = -lx.shifted(int(m - n + 1));
    l.e[1][1] = lx;
    l.e[1][2] = one;
    l.e[2][0] = one;

    LaurentMatrix d = shifted ? LaurentMatrix::diag(p, -int(m + 1), -int(n - 1), 0)
                              : LaurentMatrix::diag(p, -int(m), -int(n), 0);

    LaurentMatrix r(p);
    if (!shifted) {
        r.e[0][1] = la;
        r.e[0][2] = one;
        r.e[1][0] = one;
        r.e[1][1] = la.shifted(1);
        r.e[1][2] = LaurentPoly::monomial(p, 1);
        r.e[2][1] = one;
    } else {
        r.e[0][0] = -one;
        r.e[0][1] = la.shifted(1);
        r.e[0][2] = LaurentPoly::monomial(p, 1);
        r.e[1][1] = la;
        r.e[1][2] = one;
        r.e[2][1] = one;
    }

    rep.rebuilt = l * d * r;
    rep.product_matches = rep.rebuilt == rep.a;
    rep.outer_factors_integral = in_special_integral_group(l) && in_special_integral_group(r);
    return rep;
}

struct FactorizationSweepReport {
    std::uint64_t tuples = 0;
    std::uint64_t failures = 0;
    bool ok() const { return failures == 0; }
};

inline FactorizationSweepReport sweep_diagonal_factorizations(std::uint32_t p, std::uint32_t m,
                                                              std::uint32_t n,
                                                              std::uint64_t budget = 10000) {
    long double cost = 1;
    for (std::uint32_t i = 0; i < m + n; ++i) cost *= p;
    if (cost > (long double)budget)
        throw ResourceError("factorization sweep p^(m+n) exceeds the budget");
    RingSpec rn = ring_make(p, n, RingKind::laurent);
    RingSpec rm = ring_make(p, m, RingKind::laurent);
    FactorizationSweepReport rep;
    for (std::uint64_t x = 0; x < rn.size(); ++x)
        for (std::uint64_t a = 0; a < rm.size(); ++a)
            for (std::uint64_t b = 0; b < rm.size(); ++b)
                for (int shifted = 0; shifted < 2; ++shifted) {
                    ++rep.tuples;
                    if (!verify_diagonal_factorization(p, m, n, x, a, b, shifted != 0).ok())
                        ++rep.failures;
                }
    return rep;
}

// random element of SL3(O) as a product of elementary matrices with small
// polynomial entries
inline LaurentMatrix random_integral_unimodular(std::uint32_t p, std::mt19937_64& rng,
                                                int length = 6, int max_deg = 2) {
    LaurentMatrix m = LaurentMatrix::identity(p);
    std::uniform_int_distribution<int> pos(0, 2), coef(0, int(p) - 1), deg(0, max_deg);
    for (int s = 0; s < length; ++s) {
        int r = pos(rng), c = pos(rng);
        if (r == c) continue;
        LaurentMatrix el = LaurentMatrix::identity(p);
        LaurentPoly f(p);
        for (int k = deg(rng); k >= 0; --k) {
            int cf = coef(rng);
            if (cf) f = f + LaurentPoly::monomial(p, k, std::uint32_t(cf));
        }
        el.e[std::size_t(r)][std::size_t(c)] = f;
        m = m * el;
    }
    return m;
}

}  // namespace banachlab
