#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace banachlab {

// Finitely supported Laurent polynomial sum_k c_k t^k over F_p, exact
// arithmetic. Normalized so the coefficient vector has nonzero ends; the
// zero polynomial has an empty vector and valuation +infinity.
struct LaurentPoly {
    std::uint32_t p = 2;
    int lo = 0;
    std::vector<std::uint8_t> c;

    LaurentPoly() = default;
    explicit LaurentPoly(std::uint32_t p_) : p(p_) {}

    static LaurentPoly zero(std::uint32_t p) { return LaurentPoly(p); }
    static LaurentPoly constant(std::uint32_t p, std::uint32_t v) {
        LaurentPoly r(p);
        if (v % p) {
            r.lo = 0;
            r.c = {std::uint8_t(v % p)};
        }
        return r;
    }
    static LaurentPoly monomial(std::uint32_t p, int k, std::uint32_t coef = 1) {
        LaurentPoly r(p);
        if (coef % p) {
            r.lo = k;
            r.c = {std::uint8_t(coef % p)};
        }
        return r;
    }

    bool is_zero() const { return c.empty(); }
    int val() const { return c.empty() ? std::numeric_limits<int>::max() : lo; }
    int deg() const { return c.empty() ? std::numeric_limits<int>::min() : lo + int(c.size()) - 1; }

    void normalize() {
        std::size_t a = 0, b = c.size();
        while (a < b && c[a] == 0) ++a;
        while (b > a && c[b - 1] == 0) --b;
        if (a == b) {
            c.clear();
            lo = 0;
            return;
        }
        if (a > 0 || b < c.size()) {
            std::vector<std::uint8_t> out(c.begin() + a, c.begin() + b);
            c = std::move(out);
            lo += int(a);
        }
    }

    std::uint32_t coeff(int k) const {
        if (c.empty() || k < lo || k > deg()) return 0;
        return c[std::size_t(k - lo)];
    }

    bool operator==(const LaurentPoly& o) const {
        return p == o.p && lo == o.lo && c == o.c;
    }

    LaurentPoly shifted(int k) const {  // multiply by t^k
        LaurentPoly r = *this;
        if (!r.c.empty()) r.lo += k;
        return r;
    }

    std::string to_string() const {
        if (c.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i]) continue;
            if (!s.empty()) s += "+";
            int e = lo + int(i);
            if (c[i] != 1 || e == 0) s += std::to_string(int(c[i]));
            if (e != 0) s += (e == 1 ? "t" : "t^" + std::to_string(e));
        }
        return s;
    }
};

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.p != b.p) throw std::invalid_argument("mixed characteristic");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int lo = std::min(a.lo, b.lo);
    int hi = std::max(a.deg(), b.deg());
    LaurentPoly r(a.p);
    r.lo = lo;
    r.c.assign(std::size_t(hi - lo + 1), 0);
    for (int k = lo; k <= hi; ++k)
        r.c[std::size_t(k - lo)] = std::uint8_t((a.coeff(k) + b.coeff(k)) % a.p);
    r.normalize();
    return r;
}

inline LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly r = a;
    for (auto& x : r.c) x = std::uint8_t((a.p - x) % a.p);
    r.normalize();
    return r;
}

inline LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.p != b.p) throw std::invalid_argument("mixed characteristic");
    if (a.is_zero() || b.is_zero()) return LaurentPoly::zero(a.p);
    LaurentPoly r(a.p);
    r.lo = a.lo + b.lo;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    std::vector<std::uint32_t> acc(r.c.size(), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) acc[i + j] += a.c[i] * b.c[j];
    }
    for (std::size_t i = 0; i < acc.size(); ++i) r.c[i] = std::uint8_t(acc[i] % a.p);
    r.normalize();
    return r;
}

// drop all terms t^k with k >= cut
inline LaurentPoly truncate_above(const LaurentPoly& a, int cut) {
    LaurentPoly r = a;
    while (!r.c.empty() && r.deg() >= cut) r.c.pop_back();
    r.normalize();
    return r;
}

// Inverse of a unit of F_p[[t]] (val 0) modulo t^prec, by iterative digit
// elimination.
inline LaurentPoly unit_inverse_mod(const LaurentPoly& u, int prec) {
    if (u.val() != 0) throw std::invalid_argument("unit_inverse_mod: not a unit");
    std::uint32_t p = u.p;
    // inverse of the constant term in F_p
    std::uint32_t c0 = u.coeff(0), inv0 = 1;
    for (std::uint32_t i = 1; i < p; ++i)
        if ((c0 * i) % p == 1) { inv0 = i; break; }
    LaurentPoly inv = LaurentPoly::constant(p, inv0);
    LaurentPoly one = LaurentPoly::constant(p, 1);
    // Newton-style: residual r = 1 - u*inv has growing valuation
    for (int k = 1; k < prec; ++k) {
        LaurentPoly resid = truncate_above(one - u * inv, prec);
        if (resid.is_zero() || resid.val() >= prec) break;
        int v = resid.val();
        std::uint32_t cv = resid.coeff(v);
        inv = inv + LaurentPoly::monomial(p, v, (cv * inv0) % p);
    }
    return truncate_above(inv, prec);
}

}  // namespace banachlab
