#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace banachlab {

// Valuation of the zero element.
inline constexpr int val_infinity = std::numeric_limits<int>::max();

// exp(2 pi i num / den), with quarter turns returned exactly so that small
// power-of-two transforms compose without rounding
inline std::complex<double> unit_phase(std::uint64_t num, std::uint64_t den) {
    num %= den;
    if ((4 * num) % den == 0) {
        switch ((4 * num) / den) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * double(num) / double(den));
}

enum class RingKind { padic, laurent };

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Residue ring R_n = O / pi^n O where O is either the p-adic integers
// (R_n = Z/p^n, pi = p) or F_p[[t]] (R_n = F_p[t]/t^n, pi = t).
//
// Elements are packed into a single integer in [0, p^n): the value itself
// for the p-adic kind, the base-p digit string of the coefficient vector
// for the laurent kind (digit i = coefficient of t^i). Equality of packed
// representatives is equality in the ring.
struct RingSpec {
    std::uint32_t p = 2;
    std::uint32_t n = 1;
    RingKind kind = RingKind::padic;

    std::uint64_t size() const {
        std::uint64_t s = 1;
        for (std::uint32_t i = 0; i < n; ++i) s *= p;
        return s;
    }
    bool operator==(const RingSpec&) const = default;
};

inline RingSpec ring_make(std::uint32_t p, std::uint32_t n, RingKind kind) {
    if (!is_prime(p)) throw std::invalid_argument("ring_make: p must be prime");
    if (n < 1) throw std::invalid_argument("ring_make: level n must be >= 1");
    RingSpec spec{p, n, kind};
    // Keep p^n small enough that products of representatives fit in 64 bits.
    long double s = 1;
    for (std::uint32_t i = 0; i < n; ++i) s *= p;
    if (s > (1ull << 31))
        throw std::invalid_argument("ring_make: p^n exceeds the supported range");
    return spec;
}

// --- arithmetic on packed representatives -------------------------------

inline std::uint64_t ring_add(const RingSpec& s, std::uint64_t a, std::uint64_t b) {
    if (s.kind == RingKind::padic) return (a + b) % s.size();
    std::uint64_t r = 0, place = 1;
    for (std::uint32_t i = 0; i < s.n; ++i) {
        std::uint64_t da = (a / place) % s.p, db = (b / place) % s.p;
        r += ((da + db) % s.p) * place;
        place *= s.p;
    }
    return r;
}

inline std::uint64_t ring_neg(const RingSpec& s, std::uint64_t a) {
    if (s.kind == RingKind::padic) return a == 0 ? 0 : s.size() - a;
    std::uint64_t r = 0, place = 1;
    for (std::uint32_t i = 0; i < s.n; ++i) {
        std::uint64_t da = (a / place) % s.p;
        r += ((s.p - da) % s.p) * place;
        place *= s.p;
    }
    return r;
}

inline std::uint64_t ring_sub(const RingSpec& s, std::uint64_t a, std::uint64_t b) {
    return ring_add(s, a, ring_neg(s, b));
}

inline std::uint64_t ring_mul(const RingSpec& s, std::uint64_t a, std::uint64_t b) {
    if (s.kind == RingKind::padic) return (a * b) % s.size();
    // truncated polynomial product over F_p
    std::uint32_t n = s.n;
    std::uint64_t digits[64];
    for (std::uint32_t i = 0; i < n; ++i) digits[i] = 0;
    std::uint64_t pa = a;
    std::uint64_t powj[64];
    {
        std::uint64_t place = 1;
        for (std::uint32_t j = 0; j < n; ++j) { powj[j] = place; place *= s.p; }
    }
    for (std::uint32_t i = 0; i < n && pa; ++i) {
        std::uint64_t da = pa % s.p;
        pa /= s.p;
        if (!da) continue;
        std::uint64_t pb = b;
        for (std::uint32_t j = 0; i + j < n && pb; ++j) {
            std::uint64_t db = pb % s.p;
            pb /= s.p;
            if (db) digits[i + j] += da * db;
        }
    }
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n; ++i) r += (digits[i] % s.p) * powj[i];
    return r;
}

// largest i with a in pi^i R_n; val_infinity for a = 0.
inline int ring_valuation(const RingSpec& s, std::uint64_t a) {
    if (a == 0) return val_infinity;
    if (s.kind == RingKind::padic) {
        int v = 0;
        while (a % s.p == 0) { a /= s.p; ++v; }
        return v;
    }
    int v = 0;
    while (a % s.p == 0) { a /= s.p; ++v; }
    return v;
}

// pi^k as a ring element (0 once k >= n).
inline std::uint64_t ring_pi_pow(const RingSpec& s, std::uint32_t k) {
    if (k >= s.n) return 0;
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < k; ++i) r *= s.p;
    return r;
}

// e with valuation >= k divided by pi^k, reinterpreted in O/pi^(n-k)O.
inline std::uint64_t ring_shift_down(const RingSpec& s, std::uint64_t e, std::uint32_t k) {
    std::uint64_t pk = 1;
    for (std::uint32_t i = 0; i < k; ++i) pk *= s.p;
    if (e % pk != 0) throw std::invalid_argument("ring_shift_down: valuation too small");
    return e / pk;  // digit shift works for both kinds
}

struct RingElem {
    RingSpec spec;
    std::uint64_t repr = 0;

    RingElem() = default;
    RingElem(const RingSpec& s, std::uint64_t r) : spec(s), repr(r % s.size()) {}

    friend RingElem operator+(const RingElem& a, const RingElem& b) {
        check(a, b);
        return RingElem(a.spec, ring_add(a.spec, a.repr, b.repr));
    }
    friend RingElem operator-(const RingElem& a, const RingElem& b) {
        check(a, b);
        return RingElem(a.spec, ring_sub(a.spec, a.repr, b.repr));
    }
    friend RingElem operator*(const RingElem& a, const RingElem& b) {
        check(a, b);
        return RingElem(a.spec, ring_mul(a.spec, a.repr, b.repr));
    }
    RingElem operator-() const { return RingElem(spec, ring_neg(spec, repr)); }
    bool operator==(const RingElem& o) const { return spec == o.spec && repr == o.repr; }

    static void check(const RingElem& a, const RingElem& b) {
        if (!(a.spec == b.spec)) throw std::invalid_argument("ring elements from different rings");
    }
};

inline int valuation(const RingElem& e) { return ring_valuation(e.spec, e.repr); }

// --- additive characters -------------------------------------------------
//
// chi_c(x) = exp(2 pi i <c x> / p^n) for the p-adic kind (<.> the canonical
// integer representative of the product) and exp(2 pi i tr(c x) / p) for the
// laurent kind, tr = coefficient of t^(n-1). In both cases c -> chi_c is an
// isomorphism onto the dual group and chi_c is nondegenerate iff c is a unit.
struct AdditiveCharacter {
    RingSpec spec;
    std::uint64_t label = 0;

    std::complex<double> operator()(std::uint64_t x) const {
        std::uint64_t cx = ring_mul(spec, label, x);
        if (spec.kind == RingKind::padic) return unit_phase(cx, spec.size());
        std::uint64_t place = 1;
        for (std::uint32_t i = 0; i + 1 < spec.n; ++i) place *= spec.p;
        std::uint64_t tr = (cx / place) % spec.p;
        return unit_phase(tr, spec.p);
    }
};

inline std::complex<double> char_eval(const AdditiveCharacter& chi, const RingElem& x) {
    if (!(chi.spec == x.spec))
        throw std::invalid_argument("char_eval: character and element from different rings");
    return chi(x.repr);
}

inline bool is_nondegenerate(const AdditiveCharacter& chi) {
    return ring_valuation(chi.spec, chi.label) == 0;
}

// All characters of O/pi^hO that are nontrivial on pi^(h-1)O/pi^hO,
// i.e. the chi_c with c a unit. Requires h to match the spec level.
inline std::vector<AdditiveCharacter> nondegenerate_characters(const RingSpec& spec,
                                                               std::uint32_t h) {
    if (h != spec.n)
        throw std::invalid_argument("nondegenerate_characters: h must equal the ring level");
    std::vector<AdditiveCharacter> out;
    for (std::uint64_t c = 0; c < spec.size(); ++c)
        if (ring_valuation(spec, c) == 0) out.push_back({spec, c});
    return out;
}

inline std::string ring_to_string(const RingSpec& s) {
    std::string k = s.kind == RingKind::padic ? "Z/p^n" : "F_p[t]/t^n";
    return k + " with p=" + std::to_string(s.p) + " n=" + std::to_string(s.n);
}

}  // namespace banachlab
