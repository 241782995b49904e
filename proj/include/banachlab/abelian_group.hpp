#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "banachlab/residue.hpp"

namespace banachlab {

// Finite abelian group G = prod_k Z/m_k. Elements are indexed by the mixed
// radix encoding x = x_0 + m_0 (x_1 + m_1 (...)). The dual group is
// identified with the same factor list through the pairing
//   <c, x> = exp(2 pi i sum_k c_k x_k / m_k),
// evaluated with an exact rational phase so that equal phases give
// bit-identical complex values.
struct FiniteAbelianGroup {
    std::vector<std::uint32_t> factors;

    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<std::uint32_t> f) : factors(std::move(f)) {
        std::uint64_t s = 1;
        for (auto m : factors) {
            if (m < 1) throw std::invalid_argument("group factor must be >= 1");
            s *= m;
            if (s > (1ull << 31)) throw std::invalid_argument("group too large");
        }
        phase_den_ = 1;
        for (auto m : factors) phase_den_ = std::lcm<std::uint64_t>(phase_den_, m);
    }

    std::uint64_t order() const {
        std::uint64_t s = 1;
        for (auto m : factors) s *= m;
        return s;
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t r = 0, place = 1;
        for (auto m : factors) {
            std::uint32_t da = (a / place) % m, db = (b / place) % m;
            r += ((da + db) % m) * place;
            place *= m;
        }
        return r;
    }

    std::uint32_t neg(std::uint32_t a) const {
        std::uint32_t r = 0, place = 1;
        for (auto m : factors) {
            std::uint32_t da = (a / place) % m;
            r += ((m - da) % m) * place;
            place *= m;
        }
        return r;
    }

    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

    // numerator of the pairing phase over the common denominator phase_den_
    std::uint64_t pairing_num(std::uint32_t c, std::uint32_t x) const {
        std::uint64_t num = 0, place = 1;
        for (auto m : factors) {
            std::uint64_t dc = (c / place) % m, dx = (x / place) % m;
            num += ((dc * dx) % m) * (phase_den_ / m);
            place *= m;
        }
        return num % phase_den_;
    }

    std::complex<double> pairing(std::uint32_t c, std::uint32_t x) const {
        return unit_phase(pairing_num(c, x), phase_den_);
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k) s += "x";
            s += "Z/" + std::to_string(factors[k]);
        }
        return s.empty() ? "0" : s;
    }

    bool operator==(const FiniteAbelianGroup& o) const { return factors == o.factors; }

  private:
    std::uint64_t phase_den_ = 1;
};

// Additive group of a residue ring; packed representatives coincide with
// group element indices for both kinds.
inline FiniteAbelianGroup additive_group(const RingSpec& s) {
    if (s.kind == RingKind::padic)
        return FiniteAbelianGroup({std::uint32_t(s.size())});
    return FiniteAbelianGroup(std::vector<std::uint32_t>(s.n, s.p));
}

// Subgroup materialized as a sorted member list plus a membership mask.
struct Subgroup {
    std::vector<std::uint32_t> members;
    std::vector<std::uint8_t> mask;

    std::size_t order() const { return members.size(); }
    bool contains_element(std::uint32_t x) const { return mask[x]; }
    bool contains(const Subgroup& other) const {
        for (auto x : other.members)
            if (!mask[x]) return false;
        return true;
    }
    bool operator==(const Subgroup& o) const { return members == o.members; }

    static Subgroup closure(const FiniteAbelianGroup& g,
                            const std::vector<std::uint32_t>& generators) {
        Subgroup h;
        h.mask.assign(g.order(), 0);
        std::vector<std::uint32_t> queue{0};
        h.mask[0] = 1;
        while (!queue.empty()) {
            std::uint32_t x = queue.back();
            queue.pop_back();
            for (auto gen : generators) {
                std::uint32_t y = g.add(x, gen);
                if (!h.mask[y]) {
                    h.mask[y] = 1;
                    queue.push_back(y);
                }
            }
        }
        for (std::uint32_t x = 0; x < g.order(); ++x)
            if (h.mask[x]) h.members.push_back(x);
        return h;
    }

    static Subgroup trivial(const FiniteAbelianGroup& g) { return closure(g, {}); }
    static Subgroup full(const FiniteAbelianGroup& g) {
        std::vector<std::uint32_t> gens;
        std::uint32_t place = 1;
        for (auto m : g.factors) {
            gens.push_back(place);
            place *= m;
        }
        return closure(g, gens);
    }
};

// Cosets of a subgroup H inside an ambient member set (the whole group by
// default). Representatives are the least element of each coset, which fixes
// the sections used throughout: coset -> least representative.
struct CosetTable {
    std::vector<std::uint32_t> coset_of;  // indexed by group element; -1u if outside ambient
    std::vector<std::uint32_t> rep;       // coset id -> representative element

    std::size_t count() const { return rep.size(); }

    static CosetTable build(const FiniteAbelianGroup& g, const Subgroup& h,
                            const std::vector<std::uint32_t>& ambient) {
        CosetTable t;
        t.coset_of.assign(g.order(), std::uint32_t(-1));
        for (auto x : ambient) {
            if (t.coset_of[x] != std::uint32_t(-1)) continue;
            std::uint32_t id = std::uint32_t(t.rep.size());
            t.rep.push_back(x);
            for (auto hh : h.members) t.coset_of[g.add(x, hh)] = id;
        }
        return t;
    }

    static CosetTable build(const FiniteAbelianGroup& g, const Subgroup& h) {
        std::vector<std::uint32_t> all(g.order());
        std::iota(all.begin(), all.end(), 0);
        return build(g, h, all);
    }
};

// Ascending chain 0 = G_0 < G_1 < ... < G_n = G. Validated on construction.
struct SubgroupChain {
    FiniteAbelianGroup group;
    std::vector<Subgroup> steps;

    SubgroupChain(FiniteAbelianGroup g, std::vector<Subgroup> s)
        : group(std::move(g)), steps(std::move(s)) {
        if (steps.size() < 2) throw std::invalid_argument("chain needs at least two groups");
        if (steps.front().order() != 1)
            throw std::invalid_argument("chain must start at the trivial subgroup");
        if (steps.back().order() != group.order())
            throw std::invalid_argument("chain must end at the full group");
        for (std::size_t i = 1; i < steps.size(); ++i) {
            if (!steps[i].contains(steps[i - 1]) || steps[i].order() <= steps[i - 1].order())
                throw std::invalid_argument("chain is not strictly nested");
        }
    }

    std::size_t length() const { return steps.size() - 1; }
};

// Chain of pi-power subgroups of the additive group of R_n:
// G_i generated by pi^(n - i*h), stepping by h digits; degenerate steps are
// dropped so the chain is strictly increasing.
inline SubgroupChain pi_power_chain(const RingSpec& s, std::uint32_t h = 1) {
    FiniteAbelianGroup g = additive_group(s);
    std::vector<Subgroup> steps{Subgroup::trivial(g)};
    for (std::uint32_t k = (s.n >= h ? s.n - h : 0);; k = (k >= h ? k - h : 0)) {
        std::uint64_t gen = ring_pi_pow(s, k);
        Subgroup next = Subgroup::closure(g, {std::uint32_t(gen)});
        if (next.order() > steps.back().order()) steps.push_back(next);
        if (k == 0) break;
    }
    if (steps.back().order() != g.order()) steps.push_back(Subgroup::full(g));
    return SubgroupChain(g, steps);
}

// Annihilator H^perp = {c : <c, h> = 1 for all h in H}, computed with the
// exact integer phase.
inline Subgroup annihilator(const FiniteAbelianGroup& g, const Subgroup& h) {
    Subgroup perp;
    perp.mask.assign(g.order(), 0);
    for (std::uint32_t c = 0; c < g.order(); ++c) {
        bool ok = true;
        for (auto x : h.members)
            if (g.pairing_num(c, x) != 0) { ok = false; break; }
        if (ok) {
            perp.mask[c] = 1;
            perp.members.push_back(c);
        }
    }
    return perp;
}

// All subgroups, found by closing every known subgroup with every element.
// Catalog groups are tiny, so the quadratic search is fine.
inline std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g) {
    std::vector<Subgroup> found{Subgroup::trivial(g)};
    std::set<std::vector<std::uint32_t>> seen{found[0].members};
    for (std::size_t i = 0; i < found.size(); ++i) {
        Subgroup cur = found[i];
        for (std::uint32_t x = 0; x < g.order(); ++x) {
            if (cur.contains_element(x)) continue;
            std::vector<std::uint32_t> gens = cur.members;
            gens.push_back(x);
            Subgroup next = Subgroup::closure(g, gens);
            if (seen.insert(next.members).second) found.push_back(next);
        }
    }
    return found;
}

// Maximal chains = paths from 0 to G through prime-index covers.
inline std::vector<SubgroupChain> maximal_chains(const FiniteAbelianGroup& g) {
    std::vector<Subgroup> subs = all_subgroups(g);
    std::sort(subs.begin(), subs.end(),
              [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
    std::vector<SubgroupChain> chains;
    std::vector<Subgroup> path{Subgroup::trivial(g)};
    auto is_prime_index = [](std::size_t small, std::size_t big) {
        return big % small == 0 && is_prime(big / small);
    };
    std::function<void()> dfs = [&]() {
        const Subgroup top = path.back();  // copy: path reallocates below
        if (top.order() == g.order()) {
            chains.emplace_back(g, path);
            return;
        }
        for (const Subgroup& cand : subs) {
            if (!is_prime_index(top.order(), cand.order())) continue;
            if (!cand.contains(top)) continue;
            path.push_back(cand);
            dfs();
            path.pop_back();
        }
    };
    dfs();
    return chains;
}

}  // namespace banachlab
