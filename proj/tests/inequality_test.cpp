#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "banachlab/inequality.hpp"

using namespace banachlab;
using Catch::Approx;

TEST_CASE("chain bound: powers of two at q = 2 are tight") {
    // Z/4 with the two-step chain: lhs 1/2, rhs (1/sqrt 2)^2
    CoefficientSpace l21(2.0, 1);
    {
        RingSpec r = ring_make(2, 2, RingKind::padic);
        InequalityReport rep = check_fft_norm_bound(pi_power_chain(r), l21, 5);
        REQUIRE(rep.satisfied());
        REQUIRE(rep.lhs_lower == Approx(0.5).margin(1e-6));
        REQUIRE(rep.rhs_upper == Approx(0.5).margin(1e-9));
    }
    {
        RingSpec r = ring_make(2, 3, RingKind::padic);
        InequalityReport rep = check_fft_norm_bound(pi_power_chain(r), l21, 5);
        REQUIRE(rep.satisfied());
        REQUIRE(rep.lhs_lower == Approx(std::pow(8.0, -0.5)).margin(1e-6));
        REQUIRE(rep.rhs_upper == Approx(std::pow(2.0, -1.5)).margin(1e-9));
    }
    // trivial chain: both sides the same norm
    {
        FiniteAbelianGroup g({5});
        SubgroupChain chain(g, {Subgroup::trivial(g), Subgroup::full(g)});
        InequalityReport rep = check_fft_norm_bound(chain, l21, 5);
        REQUIRE(rep.satisfied());
        REQUIRE(rep.rhs_upper == Approx(rep.lhs_lower).margin(1e-6));
    }
}

TEST_CASE("variant bound on the twisted configuration") {
    // p = 2, h = 1, n = 2: scalar route bound 1/2 at q = 2
    RingSpec ring = ring_make(2, 2, RingKind::padic);
    TwistedSpace ts = make_twisted_space(ring, 1, 1, default_twisted_reps(ring, 1));
    CocycleSpec spec = twisted_cocycle(ts);
    SubgroupChain cg = twisted_chain_increasing(ring, 1);
    DecreasingChain cb = twisted_chain_decreasing(ring, 1);
    CoefficientSpace l21(2.0, 1);

    auto scal = detect_scalar_steps(spec, cg, cb);
    REQUIRE(scal.size() == 2);
    InequalityReport scalar_route =
        check_variant_norm_bound(spec, cg, cb, scal, l21, true, 3);
    REQUIRE(scalar_route.satisfied());
    REQUIRE(scalar_route.rhs_upper == Approx(0.5).margin(1e-9));

    InequalityReport step_route = check_variant_norm_bound(spec, cg, cb, {}, l21, false, 3);
    REQUIRE(step_route.satisfied());
    REQUIRE(step_route.lhs_lower <= std::pow(2.0, -0.5) + 1e-9);

    // requesting a non-scalar step in the scalar route is an error: the
    // h = 2, n = 3 configuration has a coarse step that is not scalar
    RingSpec ring2 = ring_make(2, 3, RingKind::padic);
    TwistedSpace ts2 = make_twisted_space(ring2, 2, 1, default_twisted_reps(ring2, 2));
    CocycleSpec spec2 = twisted_cocycle(ts2);
    SubgroupChain cg2 = twisted_chain_increasing(ring2, 2);
    DecreasingChain cb2 = twisted_chain_decreasing(ring2, 2);
    auto scal2 = detect_scalar_steps(spec2, cg2, cb2);
    REQUIRE(scal2.size() < cg2.length());
    std::vector<std::size_t> all_steps;
    for (std::size_t i = 0; i < cg2.length(); ++i) all_steps.push_back(i);
    REQUIRE_THROWS_AS(check_variant_norm_bound(spec2, cg2, cb2, all_steps, l21, true, 3),
                      std::invalid_argument);
}

TEST_CASE("identity cocycle with trivial dual side gives norm one") {
    FiniteAbelianGroup g({3}), triv({1});
    CocycleSpec spec = CocycleSpec::build(g, triv, 1, [](std::uint32_t, std::uint32_t) {
        return CocycleValue(MonomialMatrix::identity(1));
    });
    SubgroupChain cg(g, {Subgroup::trivial(g), Subgroup::full(g)});
    DecreasingChain cb(triv, {Subgroup::full(triv), Subgroup::full(triv)});
    CoefficientSpace l21(2.0, 1);
    InequalityReport rep = check_variant_norm_bound(spec, cg, cb, {}, l21, false, 3);
    REQUIRE(rep.satisfied());
    REQUIRE(rep.lhs_lower == Approx(1.0).margin(1e-9));
    REQUIRE(rep.rhs_upper == Approx(1.0).margin(1e-9));
}

TEST_CASE("decay scan at q = 2 matches the unitary law") {
    CoefficientSpace l21(2.0, 1);
    DecayScan scan = scan_decay(2, 1, {1, 2, 3, 4, 5, 6}, l21);
    REQUIRE(scan.beta == Approx(0.5 * std::log(2.0)).margin(1e-9));
    REQUIRE(scan.positive_beta);
    REQUIRE(scan.bounded);
    for (const DecayRow& r : scan.rows) {
        REQUIRE(r.upper == Approx(std::pow(2.0, -0.5 * r.n)).margin(1e-9));
        REQUIRE(r.lower == Approx(r.upper).margin(1e-6));
    }
    REQUIRE(scan.fitted_beta == Approx(scan.beta).margin(1e-6));

    DecayScan scan3 = scan_decay(3, 1, {1, 2, 3, 4}, l21);
    REQUIRE(scan3.beta == Approx(0.5 * std::log(3.0)).margin(1e-9));
    for (const DecayRow& r : scan3.rows)
        REQUIRE(r.upper == Approx(std::pow(3.0, -0.5 * r.n)).margin(1e-9));
}

TEST_CASE("decay scan on l1 coefficients shows the obstruction") {
    CoefficientSpace l1(1.0, 4);
    DecayScan scan = scan_decay(2, 1, {1, 2, 3}, l1);
    REQUIRE_FALSE(scan.positive_beta);
    REQUIRE(scan.bounded);  // flat bound e^0 = 1 still holds
    for (const DecayRow& r : scan.rows) REQUIRE(r.upper == Approx(1.0).margin(1e-9));
}

TEST_CASE("delta decomposition: exact coefficients and reconstruction") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        RingSpec f = ring_make(p, 1, RingKind::padic);
        AdditiveCharacter chi{f, 1};
        DeltaDecomposition dd = delta_decomposition(p, chi);
        REQUIRE(dd.c2 == Approx(2.0 * (p - 1.0) / p).margin(1e-12));
        // reconstruction: E_d t_d chi_d = delta_0 - delta_1, exactly
        for (std::uint32_t x = 0; x < p; ++x) {
            Complex acc = 0;
            for (std::uint32_t d = 1; d < p; ++d)
                acc += dd.t[d - 1] * chi(ring_mul(f, d, x));
            acc /= double(p - 1);
            double expect = (x == 0 ? 1.0 : 0.0) - (x == 1 ? 1.0 : 0.0);
            REQUIRE(std::abs(acc - expect) < 1e-12);
        }
        // brute force oracle: solve the linear system for the coefficients
        CMatrix vand(p, p - 1);
        Eigen::VectorXcd rhs(p);
        for (std::uint32_t x = 0; x < p; ++x) {
            for (std::uint32_t d = 1; d < p; ++d)
                vand(x, d - 1) = chi(ring_mul(f, d, x)) / double(p - 1);
            rhs(x) = (x == 0 ? 1.0 : 0.0) - (x == 1 ? 1.0 : 0.0);
        }
        Eigen::VectorXcd sol = vand.colPivHouseholderQr().solve(rhs);
        for (std::uint32_t d = 1; d < p; ++d)
            REQUIRE(std::abs(sol(d - 1) - dd.t[d - 1]) < 1e-10);
        double c2 = 0;
        for (std::uint32_t d = 1; d < p; ++d) c2 += std::norm(sol(d - 1));
        REQUIRE(dd.c2 == Approx(c2 / (p - 1)).margin(1e-10));
    }
    RingSpec f3 = ring_make(3, 1, RingKind::padic);
    REQUIRE_THROWS_AS(delta_decomposition(3, AdditiveCharacter{f3, 0}), std::invalid_argument);
}

TEST_CASE("line smoothing bound holds on stressed trials") {
    CoefficientSpace l21(2.0, 1);
    InequalityReport rep = check_line_smoothing_bound(3, 1, 2, l21, 200, 11);
    REQUIRE(rep.satisfied());
    // rhs = e^{-2 alpha} = 1/3 at q = 2, h = 1, n = 2
    REQUIRE(rep.rhs_upper == Approx(1.0 / 3.0).margin(1e-9));

    CoefficientSpace l154(1.5, 4);
    InequalityReport rep2 = check_line_smoothing_bound(2, 1, 3, l154, 150, 13);
    REQUIRE(rep2.satisfied());

    InequalityReport rep3 =
        check_line_smoothing_bound(2, 1, 3, l21, 100, 17, RingKind::laurent);
    REQUIRE(rep3.satisfied());

    // n < h: factor e^{-2(n/h-1) alpha} >= 1 and the bound is trivial
    InequalityReport rep4 = check_line_smoothing_bound(2, 2, 1, l21, 50, 19);
    REQUIRE(rep4.satisfied());
    REQUIRE(rep4.rhs_upper >= 1.0);

    // l1 coefficients do not satisfy the standing hypothesis
    REQUIRE_THROWS_AS(check_line_smoothing_bound(2, 1, 2, CoefficientSpace(1.0, 2), 10, 1),
                      HypothesisError);
}

TEST_CASE("line smoothing kernel: constant second index gives zero") {
    RingSpec ring = ring_make(3, 2, RingKind::padic);
    AdditiveCharacter chi{ring_make(3, 1, RingKind::padic), 1};
    CSparse first = smoothing_stage(ring, chi);
    CSparse second = line_average_stage(ring, 0);
    std::uint64_t rn = ring.size();
    Eigen::MatrixXcd xi(rn * rn, 1);
    std::mt19937_64 rng = make_rng(3);
    for (std::uint64_t x = 0; x < rn; ++x) {
        Complex v = gaussian_complex(rng);
        for (std::uint64_t y = 0; y < rn; ++y) xi(Eigen::Index(x * rn + y), 0) = v;
    }
    Eigen::MatrixXcd out = second * (first * xi);
    REQUIRE(out.cwiseAbs().maxCoeff() < 1e-14);  // sum_eps chi(eps) = 0
}

TEST_CASE("character-extension expansion of the smoothing average") {
    // E_{x, eps} chi(eps) xi_{x, ax+b+pi^(n-1) eps} equals the sum over the
    // p^(h-1) level-h characters restricting to chi of the coarser averages
    for (auto [p, h] : std::vector<std::array<std::uint32_t, 2>>{{2, 2}, {3, 2}, {2, 3}}) {
        std::uint32_t n = h;
        RingSpec ring = ring_make(p, n, RingKind::padic);
        RingSpec rh = ring_make(p, h, RingKind::padic);
        RingSpec f = ring_make(p, 1, RingKind::padic);
        AdditiveCharacter chi{f, 1};
        std::uint64_t rn = ring.size();
        std::mt19937_64 rng = make_rng(29);
        Eigen::MatrixXcd xi = random_field(Eigen::Index(rn * rn), 1, rng).values;

        std::vector<AdditiveCharacter> exts;
        for (std::uint64_t c = 0; c < rh.size(); ++c) {
            AdditiveCharacter eta{rh, c};
            bool ok = true;
            for (std::uint64_t s = 0; s < p; ++s)
                if (std::abs(eta(ring_mul(rh, ring_pi_pow(rh, h - 1), s)) - chi(s)) > 1e-12)
                    ok = false;
            if (ok) exts.push_back(eta);
        }
        REQUIRE(exts.size() == std::size_t(std::llround(std::pow(double(p), double(h - 1)))));
        for (const AdditiveCharacter& eta : exts) REQUIRE(is_nondegenerate(eta));

        std::uint64_t pin1 = ring_pi_pow(ring, n - 1);
        std::uint64_t pinh = ring_pi_pow(ring, n - h);
        for (std::uint64_t a = 0; a < rn; ++a)
            for (std::uint64_t b = 0; b < rn; ++b) {
                Complex lhs = 0;
                for (std::uint64_t x = 0; x < rn; ++x)
                    for (std::uint64_t eps = 0; eps < p; ++eps) {
                        std::uint64_t y =
                            ring_add(ring, ring_add(ring, ring_mul(ring, a, x), b),
                                     ring_mul(ring, pin1, eps));
                        lhs += chi(eps) * xi(Eigen::Index(x * rn + y), 0);
                    }
                lhs /= double(rn * p);
                Complex rhs = 0;
                for (const AdditiveCharacter& eta : exts) {
                    Complex inner = 0;
                    for (std::uint64_t x = 0; x < rn; ++x)
                        for (std::uint64_t z = 0; z < rh.size(); ++z) {
                            std::uint64_t y =
                                ring_add(ring, ring_add(ring, ring_mul(ring, a, x), b),
                                         ring_mul(ring, pinh, z));
                            inner += eta(z) * xi(Eigen::Index(x * rn + y), 0);
                        }
                    rhs += inner / double(rn * rh.size());
                }
                REQUIRE(std::abs(lhs - rhs) < 1e-12);
            }
    }
}

TEST_CASE("line difference bound with truncation") {
    CoefficientSpace l21(2.0, 1);
    // p = 2, h = 1, n = 2, k = 0: rhs = C2 * 4 * e^{-2 alpha} = 1*4*(1/2) = 2
    InequalityReport rep = check_line_difference_bound(2, 1, 2, 0, l21, 200, 23);
    REQUIRE(rep.satisfied());
    REQUIRE(rep.rhs_upper == Approx(2.0).margin(1e-9));

    // k = n: the x-average collapses to a single class
    InequalityReport repn = check_line_difference_bound(2, 1, 2, 2, l21, 100, 29);
    REQUIRE(repn.satisfied());

    InequalityReport rep15 =
        check_line_difference_bound(3, 1, 2, 1, CoefficientSpace(1.5, 2), 150, 31);
    REQUIRE(rep15.satisfied());

    REQUIRE_THROWS_AS(check_line_difference_bound(2, 1, 2, 3, l21, 10, 1),
                      std::invalid_argument);
}

TEST_CASE("l1 delta field realizes the obstruction value 2") {
    // with xi_{x,y} = delta_{(x,y)} in l1 (sum convention), the difference
    // average has squared norm exactly 2 relative to E ||xi||^2
    std::uint32_t p = 2, n = 2, k = 0;
    RingSpec ring = ring_make(p, n, RingKind::padic);
    std::uint64_t rn = ring.size();
    CSparse op = line_difference_operator(ring, k);
    CoefficientSpace l1(1.0, int(rn * rn));
    Eigen::MatrixXcd xi =
        Eigen::MatrixXcd::Identity(Eigen::Index(rn * rn), Eigen::Index(rn * rn));
    VectorField f{xi};
    double nf = field_norm(l1, f);
    REQUIRE(nf == Approx(1.0).margin(1e-12));  // l2-average of unit l1 norms
    VectorField img{op * xi};
    double lhs = field_norm(l1, img);
    REQUIRE(lhs * lhs == Approx(2.0).margin(1e-9));
}

TEST_CASE("truncation reduces to the base case through sections") {
    // the level-n lhs with truncation k decomposes into level-(n-k) base
    // cases over the residues of b
    std::uint32_t p = 3, n = 2, k = 1;
    RingSpec ring = ring_make(p, n, RingKind::padic);
    RingSpec small = ring_make(p, n - k, RingKind::padic);
    std::uint64_t rn = ring.size(), rs = small.size();
    std::uint64_t pik = ring_pi_pow(ring, k);
    std::mt19937_64 rng = make_rng(41);
    Eigen::MatrixXcd xi = random_field(Eigen::Index(rs * rn), 1, rng).values;

    CSparse op = line_difference_operator(ring, k);
    Eigen::MatrixXcd img = op * xi;
    double lhs = img.squaredNorm() / double(rn * rn);

    CSparse op0 = line_difference_operator(small, 0);
    double acc = 0;
    for (std::uint64_t b0 = 0; b0 < pik; ++b0) {
        Eigen::MatrixXcd sub(Eigen::Index(rs * rs), 1);
        for (std::uint64_t x1 = 0; x1 < rs; ++x1)
            for (std::uint64_t y1 = 0; y1 < rs; ++y1) {
                std::uint64_t y = ring_add(ring, ring_mul(ring, pik, y1), b0);
                sub(Eigen::Index(x1 * rs + y1), 0) = xi(Eigen::Index(x1 * rn + y), 0);
            }
        Eigen::MatrixXcd outs = op0 * sub;
        acc += outs.squaredNorm() / double(rs * rs);
    }
    acc /= double(pik);
    REQUIRE(lhs == Approx(acc).margin(1e-12));
}

TEST_CASE("zero-mean functional measurement") {
    CoefficientSpace l21(2.0, 1);
    std::vector<Complex> f = {Complex(1, 0), Complex(-2, 0), Complex(1, 0)};
    InequalityReport rep = measure_line_functional(3, 2, 0, f, l21, 50, 43);
    REQUIRE(rep.lhs_lower > 0.0);
    REQUIRE(rep.rhs_upper == rep.lhs_lower);  // measured constant, no claim
    std::vector<Complex> bad = {Complex(1, 0), Complex(1, 0), Complex(1, 0)};
    REQUIRE_THROWS_AS(measure_line_functional(3, 2, 0, bad, l21, 10, 1),
                      std::invalid_argument);
}

TEST_CASE("fourier type probe") {
    std::vector<FiniteAbelianGroup> groups{FiniteAbelianGroup({4}), FiniteAbelianGroup({9}),
                                           FiniteAbelianGroup({2, 2})};
    CoefficientSpace l21(2.0, 1);
    auto rows = bourgain_probe(groups, l21, {2.0}, 7, 8, 20);
    for (const auto& r : rows) {
        REQUIRE(r.m >= 1.0 - 1e-9);  // single-character family
        REQUIRE(r.m <= 1.0 + 1e-6);  // exact Hilbert identity
    }
    // for l1 coefficients and p near 1 the empirical constant grows with #G
    CoefficientSpace l1(1.0, 4);
    auto rows1 = bourgain_probe({FiniteAbelianGroup({2}), FiniteAbelianGroup({8})}, l1, {1.1},
                                7, 12, 30);
    REQUIRE(rows1[1].m >= rows1[0].m - 1e-6);
}
