#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "banachlab/cocycle.hpp"
#include "banachlab/coefficient_space.hpp"
#include "banachlab/errors.hpp"
#include "banachlab/fourier.hpp"
#include "banachlab/operator_matrix.hpp"
#include "banachlab/residue.hpp"
#include "banachlab/rng.hpp"
#include "banachlab/tensor_norm.hpp"

namespace banachlab {

// Default margin tolerance for every verified inequality.
inline constexpr double margin_tol = 1e-9;

struct InequalityReport {
    std::string name;
    double lhs_lower = 0.0;
    double rhs_upper = 0.0;
    std::uint64_t trial_count = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> parameters;

    double margin() const { return rhs_upper - lhs_lower; }
    bool satisfied() const { return margin() >= -margin_tol; }
};

// ------------------------------------------------------------------ chain
// ||T_G (x) 1_E|| <= prod_i ||T_{G_i/G_{i-1}} (x) 1_E||: certified lower
// estimate on the left against the product of valid upper bounds.
inline InequalityReport check_fft_norm_bound(const SubgroupChain& chain,
                                             const CoefficientSpace& e, std::uint64_t seed = 1,
                                             int restarts = 8, int iters = 400) {
    InequalityReport rep;
    rep.name = "fft-chain-bound";
    rep.seed = seed;
    rep.parameters["group"] = chain.group.to_string();
    rep.parameters["space"] = e.to_string();
    rep.parameters["chain_length"] = std::to_string(chain.length());
    rep.lhs_lower = tensor_norm_lower(fourier_matrix(chain.group), e, restarts, iters, seed).lower;
    double rhs = 1.0;
    for (std::size_t i = 1; i < chain.steps.size(); ++i)
        rhs *= tensor_norm_upper(
                   quotient_fourier_matrix(chain.group, chain.steps[i - 1], chain.steps[i]), e)
                   .upper;
    rep.rhs_upper = rhs;
    rep.trial_count = std::uint64_t(restarts);
    return rep;
}

// ---------------------------------------------------------------- variant
// Product bound for the cocycle transform. route_scalar = false gives the
// product of step-transform upper bounds; route_scalar = true restricts to
// the scalar steps in I, whose quotient transforms are plain Fourier
// matrices through the lambda pairing.
inline InequalityReport check_variant_norm_bound(
    const CocycleSpec& spec, const SubgroupChain& chain_g, const DecreasingChain& chain_gbar,
    const std::vector<std::size_t>& scalar_steps_wanted, const CoefficientSpace& e,
    bool route_scalar, std::uint64_t seed = 1, int restarts = 8, int iters = 300) {
    spec.validate();
    detail::check_compatibility(spec, chain_g, chain_gbar);
    // hypothesis: ||kappa(x,y) (x) 1_E|| <= 1. Monomial values are exactly 1
    // in every coefficient space; dense values get the analytic upper bound.
    for (std::uint32_t x = 0; x < spec.g.order(); ++x)
        for (std::uint32_t y = 0; y < spec.gbar.order(); ++y) {
            const CocycleValue& v = spec.value(x, y);
            if (std::holds_alternative<MonomialMatrix>(v)) continue;
            double u = tensor_norm_upper(OperatorMatrix(cocycle_dense(v)), e).upper;
            if (u > 1.0 + margin_tol)
                throw HypothesisError("||kappa (x) 1_E|| > 1 at x=" + std::to_string(x) +
                                      " y=" + std::to_string(y));
        }

    InequalityReport rep;
    rep.name = route_scalar ? "variant-chain-bound-scalar" : "variant-chain-bound";
    rep.seed = seed;
    rep.parameters["G"] = spec.g.to_string();
    rep.parameters["Gbar"] = spec.gbar.to_string();
    rep.parameters["Z"] = std::to_string(spec.z_size);
    rep.parameters["space"] = e.to_string();

    CSparse t = variant_operator_sparse(spec, /*validated=*/true);
    rep.lhs_lower = tensor_norm_lower(t, e, restarts, iters, seed).lower;

    double rhs = 1.0;
    if (!route_scalar) {
        for (std::size_t i = 0; i < chain_g.length(); ++i)
            rhs *= tensor_norm_upper(step_operator(spec, chain_g, chain_gbar, i), e).upper;
    } else {
        for (std::size_t i : scalar_steps_wanted) {
            auto st = scalar_step(spec, chain_g, chain_gbar, i);
            if (!st)
                throw std::invalid_argument("step " + std::to_string(i) +
                                            " is not scalar valued");
            if (!scalar_step_nondegenerate(*st))
                throw std::invalid_argument("step " + std::to_string(i) +
                                            " has a degenerate pairing");
            rhs *= tensor_norm_upper(scalar_step_fourier(*st), e).upper;
        }
    }
    rep.rhs_upper = rhs;
    rep.trial_count = std::uint64_t(restarts);
    return rep;
}

// ------------------------------------------------------------------ decay
struct DecayRow {
    std::uint32_t n;
    double lower, upper;
};

struct DecayScan {
    std::vector<DecayRow> rows;
    double alpha = 0.0;   // -log of the measured level-h upper bound
    double beta = 0.0;    // alpha / h
    double c = 1.0;       // e^alpha
    double fitted_beta = 0.0;
    bool bounded = true;       // upper(n) <= C e^{-beta n} (1 + tol) for all n
    bool positive_beta = false;
    std::uint32_t h = 1;
};

inline DecayScan scan_decay(std::uint32_t p, std::uint32_t h,
                            const std::vector<std::uint32_t>& n_range,
                            const CoefficientSpace& e, RingKind kind = RingKind::padic,
                            std::uint64_t seed = 1, int restarts = 6, int iters = 400) {
    if (n_range.empty()) throw std::invalid_argument("decay scan needs a nonempty range");
    DecayScan scan;
    scan.h = h;
    double upper_h =
        tensor_norm_upper(fourier_matrix(additive_group(ring_make(p, h, kind))), e).upper;
    scan.alpha = -std::log(upper_h);
    scan.beta = scan.alpha / double(h);
    scan.c = std::exp(scan.alpha);
    scan.positive_beta = scan.beta > 1e-9;
    for (std::size_t idx = 0; idx < n_range.size(); ++idx) {
        std::uint32_t n = n_range[idx];
        OperatorMatrix t = fourier_matrix(additive_group(ring_make(p, n, kind)));
        DecayRow row;
        row.n = n;
        row.lower = tensor_norm_lower(t, e, restarts, iters, derive_seed(seed, idx)).lower;
        row.upper = tensor_norm_upper(t, e).upper;
        if (row.upper > scan.c * std::exp(-scan.beta * n) * (1.0 + margin_tol))
            scan.bounded = false;
        scan.rows.push_back(row);
    }
    // least squares fit of log(upper) against n
    double sn = 0, sl = 0, snn = 0, snl = 0;
    for (const DecayRow& r : scan.rows) {
        double lg = std::log(std::max(r.upper, 1e-300));
        sn += r.n;
        sl += lg;
        snn += double(r.n) * r.n;
        snl += r.n * lg;
    }
    double m = double(scan.rows.size());
    double denom = m * snn - sn * sn;
    scan.fitted_beta = denom != 0 ? -(m * snl - sn * sl) / denom : 0.0;
    return scan;
}

// ------------------------------------------------------- delta expansion
// delta_0 - delta_1 = E_{d in F*} t_d chi_d on the residue field, with
// C_2 = E_{d in F*} |t_d|^2. Coefficients by exact character expansion.
struct DeltaDecomposition {
    std::uint32_t p = 2;
    std::vector<Complex> t;  // t[d-1] for d = 1..p-1
    double c2 = 0.0;
};

inline DeltaDecomposition delta_decomposition(std::uint32_t p, const AdditiveCharacter& chi) {
    if (chi.spec.n != 1 || chi.spec.p != p)
        throw std::invalid_argument("delta decomposition expects a character of the residue field");
    if (chi.label % p == 0) throw std::invalid_argument("character must be nontrivial");
    DeltaDecomposition dd;
    dd.p = p;
    dd.t.resize(p - 1);
    for (std::uint32_t d = 1; d < p; ++d) {
        // t_d = (p-1) E_x (delta_0 - delta_1)(x) conj(chi_d(x))
        Complex acc = 0;
        for (std::uint32_t x = 0; x < p; ++x) {
            double delta = (x == 0 ? 1.0 : 0.0) - (x == 1 ? 1.0 : 0.0);
            if (delta != 0.0) acc += delta * std::conj(chi(ring_mul(chi.spec, d, x)));
        }
        dd.t[d - 1] = acc * double(p - 1) / double(p);
    }
    double s = 0;
    for (const Complex& td : dd.t) s += std::norm(td);
    dd.c2 = s / double(p - 1);
    return dd;
}

// ------------------------------------------------- affine line operators
//
// Fields live on R_n x R_n (index (x, y) -> x * p^n + y). Two sparse stages:
// the character smoothing in the second coordinate and the averaging along
// the affine lines y = ax + b, composed lazily for cheap repeated applies.

namespace detail {

struct ComposedSparseOp {
    const CSparse& second;
    const CSparse& first;
    Eigen::Index rows() const { return second.rows(); }
    Eigen::Index cols() const { return first.cols(); }
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& f) const { return second * (first * f); }
    Eigen::MatrixXcd apply_adjoint(const Eigen::MatrixXcd& f) const {
        return first.adjoint() * (second.adjoint() * f);
    }
};

}  // namespace detail

// zeta_{x,y} = E_{eps in F} chi(eps) xi_{x, y + pi^(n-1) eps}
inline CSparse smoothing_stage(const RingSpec& ring, const AdditiveCharacter& chi_f) {
    std::uint64_t rn = ring.size();
    std::uint32_t p = ring.p;
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(rn * rn * p);
    double inv = 1.0 / double(p);
    std::uint64_t pin1 = ring_pi_pow(ring, ring.n - 1);
    for (std::uint64_t x = 0; x < rn; ++x)
        for (std::uint64_t y = 0; y < rn; ++y)
            for (std::uint32_t eps = 0; eps < p; ++eps) {
                std::uint64_t yy = ring_add(ring, y, ring_mul(ring, pin1, eps));
                trips.emplace_back(Eigen::Index(x * rn + y), Eigen::Index(x * rn + yy),
                                   chi_f(eps) * inv);
            }
    CSparse s(rn * rn, rn * rn);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

// (a, b) |-> E_{x in S} zeta_{x, a x + b}, with S the x-range (all of R_n or
// the multiples of pi^k). Rows are indexed by (a, b), columns by (u, y) with
// u the position of x in S.
inline CSparse line_average_stage(const RingSpec& ring, std::uint32_t k = 0) {
    std::uint64_t rn = ring.size();
    std::uint64_t sc = 1;
    for (std::uint32_t i = 0; i < ring.n - k; ++i) sc *= ring.p;
    std::uint64_t pik = ring_pi_pow(ring, k);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(rn * rn * sc);
    double inv = 1.0 / double(sc);
    for (std::uint64_t a = 0; a < rn; ++a)
        for (std::uint64_t b = 0; b < rn; ++b)
            for (std::uint64_t u = 0; u < sc; ++u) {
                std::uint64_t x = ring_mul(ring, pik, u);
                std::uint64_t y = ring_add(ring, ring_mul(ring, a, x), b);
                trips.emplace_back(Eigen::Index(a * rn + b), Eigen::Index(u * rn + y), inv);
            }
    CSparse s(rn * rn, sc * rn);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

// difference of two line averages shifted by pi^(n-1)
inline CSparse line_difference_operator(const RingSpec& ring, std::uint32_t k) {
    std::uint64_t rn = ring.size();
    std::uint64_t sc = 1;
    for (std::uint32_t i = 0; i < ring.n - k; ++i) sc *= ring.p;
    std::uint64_t pik = ring_pi_pow(ring, k);
    std::uint64_t pin1 = ring_pi_pow(ring, ring.n - 1);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(rn * rn * sc * 2);
    double inv = 1.0 / double(sc);
    for (std::uint64_t a = 0; a < rn; ++a)
        for (std::uint64_t b = 0; b < rn; ++b)
            for (std::uint64_t u = 0; u < sc; ++u) {
                std::uint64_t x = ring_mul(ring, pik, u);
                std::uint64_t y0 = ring_add(ring, ring_mul(ring, a, x), b);
                std::uint64_t y1 = ring_add(ring, y0, pin1);
                trips.emplace_back(Eigen::Index(a * rn + b), Eigen::Index(u * rn + y0), inv);
                trips.emplace_back(Eigen::Index(a * rn + b), Eigen::Index(u * rn + y1), -inv);
            }
    CSparse s(rn * rn, sc * rn);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

// measured alpha at level h; throws unless the measured bound is < 1
inline double measured_alpha(std::uint32_t p, std::uint32_t h, const CoefficientSpace& e,
                             RingKind kind) {
    double upper_h =
        tensor_norm_upper(fourier_matrix(additive_group(ring_make(p, h, kind))), e).upper;
    if (!(upper_h < 1.0))
        throw HypothesisError("level-" + std::to_string(h) +
                              " transform norm is not < 1 for " + e.to_string() +
                              " (measured " + std::to_string(upper_h) + ")");
    return -std::log(upper_h);
}

namespace detail {

template <class Op>
InequalityReport run_field_trials(const Op& op, const CoefficientSpace& e, double bound_sq,
                                  std::uint64_t trials, std::uint64_t seed, int opt_starts,
                                  int opt_iters, InequalityReport rep) {
    rep.seed = seed;
    double worst_lhs = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng = make_rng(derive_seed(seed, t));
        VectorField xi = random_field(op.cols(), e.dim, rng);
        double nf = field_norm(e, xi);
        if (nf == 0.0) continue;
        VectorField img{op.apply(xi.values / nf)};
        double lhs = field_norm(e, img);
        worst_lhs = std::max(worst_lhs, lhs * lhs);
    }
    if (opt_starts > 0) {
        NormEstimate adv = detail::ascent_lower(op, e, opt_starts, opt_iters,
                                                derive_seed(seed, 0x0adffffful));
        worst_lhs = std::max(worst_lhs, adv.lower * adv.lower);
    }
    rep.lhs_lower = worst_lhs;
    rep.rhs_upper = bound_sq;
    rep.trial_count = trials + std::uint64_t(opt_starts);
    return rep;
}

}  // namespace detail

// E_{a,b} || E_{x,eps} chi(eps) xi_{x, ax+b+pi^(n-1) eps} ||^2
//   <= (p^(h-1))^2 e^{-2(n/h-1) alpha} E_{x,y} ||xi||^2
// on random and ascent-optimized families.
inline InequalityReport check_line_smoothing_bound(std::uint32_t p, std::uint32_t h,
                                                   std::uint32_t n, const CoefficientSpace& e,
                                                   std::uint64_t trials = 1000,
                                                   std::uint64_t seed = 1,
                                                   RingKind kind = RingKind::padic,
                                                   int opt_starts = 20, int opt_iters = 60) {
    if (n < 1) throw std::invalid_argument("level n must be >= 1");
    RingSpec ring = ring_make(p, n, kind);
    AdditiveCharacter chi_f{ring_make(p, 1, kind), 1};
    double alpha = measured_alpha(p, h, e, kind);
    double ph1 = std::pow(double(p), double(h) - 1.0);
    double bound_sq = ph1 * ph1 * std::exp(-2.0 * (double(n) / h - 1.0) * alpha);

    CSparse first = smoothing_stage(ring, chi_f);
    CSparse second = line_average_stage(ring, 0);
    detail::ComposedSparseOp op{second, first};

    InequalityReport rep;
    rep.name = "line-smoothing-bound";
    rep.parameters = {{"p", std::to_string(p)},
                      {"h", std::to_string(h)},
                      {"n", std::to_string(n)},
                      {"space", e.to_string()},
                      {"alpha", std::to_string(alpha)}};
    return detail::run_field_trials(op, e, bound_sq, trials, seed, opt_starts, opt_iters,
                                    std::move(rep));
}

// E_{a,b} || E_{x in pi^k O} xi_{x,ax+b} - E_x xi_{x,ax+b+pi^(n-1)} ||^2
//   <= C_2 p^{2h} e^{-2((n-k)/h-1) alpha} E ||xi||^2
inline InequalityReport check_line_difference_bound(std::uint32_t p, std::uint32_t h,
                                                    std::uint32_t n, std::uint32_t k,
                                                    const CoefficientSpace& e,
                                                    std::uint64_t trials = 1000,
                                                    std::uint64_t seed = 1,
                                                    RingKind kind = RingKind::padic,
                                                    int opt_starts = 20, int opt_iters = 60) {
    if (k > n) throw std::invalid_argument("truncation k must satisfy 0 <= k <= n");
    RingSpec ring = ring_make(p, n, kind);
    AdditiveCharacter chi_f{ring_make(p, 1, kind), 1};
    double alpha = measured_alpha(p, h, e, kind);
    double c2 = delta_decomposition(p, chi_f).c2;
    double ph = std::pow(double(p), double(h));
    double bound_sq = c2 * ph * ph * std::exp(-2.0 * (double(n - k) / h - 1.0) * alpha);

    CSparse op_mat = line_difference_operator(ring, k);
    detail::SparseOp op{op_mat};

    InequalityReport rep;
    rep.name = "line-difference-bound";
    rep.parameters = {{"p", std::to_string(p)},    {"h", std::to_string(h)},
                      {"n", std::to_string(n)},    {"k", std::to_string(k)},
                      {"space", e.to_string()},    {"alpha", std::to_string(alpha)},
                      {"C2", std::to_string(c2)}};
    return detail::run_field_trials(op, e, bound_sq, trials, seed, opt_starts, opt_iters,
                                    std::move(rep));
}

// Generalization hook: an arbitrary zero-mean functional f on the residue
// field replaces delta_0 - delta_1. No bound is asserted; the measured
// supremum ratio is reported as-is.
inline InequalityReport measure_line_functional(std::uint32_t p, std::uint32_t n,
                                                std::uint32_t k,
                                                const std::vector<Complex>& f_weights,
                                                const CoefficientSpace& e,
                                                std::uint64_t trials = 200,
                                                std::uint64_t seed = 1,
                                                RingKind kind = RingKind::padic) {
    if (f_weights.size() != p) throw std::invalid_argument("need one weight per residue");
    Complex mean = 0;
    for (const Complex& w : f_weights) mean += w;
    if (std::abs(mean) > 1e-12 * double(p))
        throw std::invalid_argument("functional must have zero mean");
    RingSpec ring = ring_make(p, n, kind);
    std::uint64_t rn = ring.size();
    std::uint64_t sc = 1;
    for (std::uint32_t i = 0; i < n - k; ++i) sc *= p;
    std::uint64_t pik = ring_pi_pow(ring, k);
    std::uint64_t pin1 = ring_pi_pow(ring, n - 1);
    std::vector<Eigen::Triplet<Complex>> trips;
    double inv = 1.0 / double(sc);
    for (std::uint64_t a = 0; a < rn; ++a)
        for (std::uint64_t b = 0; b < rn; ++b)
            for (std::uint64_t u = 0; u < sc; ++u) {
                std::uint64_t x = ring_mul(ring, pik, u);
                std::uint64_t y0 = ring_add(ring, ring_mul(ring, a, x), b);
                for (std::uint32_t eps = 0; eps < p; ++eps) {
                    if (std::abs(f_weights[eps]) == 0.0) continue;
                    std::uint64_t y = ring_add(ring, y0, ring_mul(ring, pin1, eps));
                    trips.emplace_back(Eigen::Index(a * rn + b), Eigen::Index(u * rn + y),
                                       f_weights[eps] * inv);
                }
            }
    CSparse m(rn * rn, sc * rn);
    m.setFromTriplets(trips.begin(), trips.end());
    detail::SparseOp op{m};

    InequalityReport rep;
    rep.name = "line-functional-measurement";
    rep.parameters = {{"p", std::to_string(p)},
                      {"n", std::to_string(n)},
                      {"k", std::to_string(k)},
                      {"space", e.to_string()},
                      {"measured_only", "true"}};
    rep = detail::run_field_trials(op, e, 0.0, trials, seed, 10, 40, std::move(rep));
    rep.rhs_upper = rep.lhs_lower;  // measured constant, nothing asserted
    return rep;
}

// --------------------------------------------------------- type probing
// Empirical constants M(p) in the Hausdorff-Young-type inequality
//   (E_g || sum_gamma x_gamma gamma(g) ||^2)^(1/2) <= M (sum ||x_gamma||^p)^(1/p),
// measured over optimized finitely supported families. Exploratory only.
struct BourgainProbeRow {
    std::string group;
    double p = 2.0;
    double m = 0.0;
};

inline std::vector<BourgainProbeRow> bourgain_probe(
    const std::vector<FiniteAbelianGroup>& groups, const CoefficientSpace& e,
    const std::vector<double>& p_grid, std::uint64_t seed = 1, int families = 24,
    int climb_steps = 40) {
    std::vector<BourgainProbeRow> rows;
    for (const FiniteAbelianGroup& g : groups) {
        std::size_t n = g.order();
        CMatrix b(n, n);
        for (std::uint32_t gg = 0; gg < n; ++gg)
            for (std::uint32_t gamma = 0; gamma < n; ++gamma)
                b(gg, gamma) = g.pairing(gamma, gg);
        auto ratio = [&](const Eigen::MatrixXcd& x, double p) {
            Eigen::MatrixXcd img = b * x;
            double lhs = field_norm(e, VectorField{img});
            double rhs = 0;
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                rhs += std::pow(e.norm(x.row(i)), p);
            rhs = std::pow(rhs, 1.0 / p);
            return rhs > 0 ? lhs / rhs : 0.0;
        };
        for (double p : p_grid) {
            double best = 0.0;
            {
                Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, e.dim);
                x(0, 0) = 1.0;  // single-character family forces M >= 1
                best = std::max(best, ratio(x, p));
            }
            std::mt19937_64 rng = make_rng(derive_seed(seed, std::uint64_t(p * 1000)));
            for (int f = 0; f < families; ++f) {
                Eigen::MatrixXcd x = random_field(n, e.dim, rng).values;
                double cur = ratio(x, p);
                best = std::max(best, cur);
                double step = 0.5;
                for (int s = 0; s < climb_steps; ++s) {
                    Eigen::MatrixXcd cand = x;
                    for (Eigen::Index i = 0; i < cand.rows(); ++i)
                        for (Eigen::Index kk = 0; kk < cand.cols(); ++kk)
                            cand(i, kk) += step * gaussian_complex(rng);
                    double r = ratio(cand, p);
                    if (r > cur) {
                        cur = r;
                        x = cand;
                        best = std::max(best, r);
                    } else {
                        step *= 0.85;
                    }
                }
            }
            rows.push_back({g.to_string(), p, best});
        }
    }
    return rows;
}

}  // namespace banachlab
