#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "banachlab/fourier.hpp"
#include "banachlab/rng.hpp"

using namespace banachlab;

namespace {

SubgroupChain chain_by_orders(const FiniteAbelianGroup& g,
                              const std::vector<std::size_t>& orders) {
    auto subs = all_subgroups(g);
    std::vector<Subgroup> steps{Subgroup::trivial(g)};
    for (std::size_t want : orders) {
        bool found = false;
        for (const Subgroup& s : subs)
            if (s.order() == want && s.contains(steps.back())) {
                steps.push_back(s);
                found = true;
                break;
            }
        REQUIRE(found);
    }
    steps.push_back(Subgroup::full(g));
    return SubgroupChain(g, steps);
}

}  // namespace

TEST_CASE("group arithmetic and pairing") {
    FiniteAbelianGroup g({4, 9});
    REQUIRE(g.order() == 36);
    // mixed radix: element 7 = (3, 1)
    REQUIRE(g.add(7, 1) == 4);  // (3,1)+(1,0) = (0,1) -> index 4
    REQUIRE(g.neg(7) == g.sub(0, 7));
    // pairing is biadditive and unimodular
    for (std::uint32_t c = 0; c < g.order(); ++c)
        for (std::uint32_t x = 0; x < g.order(); ++x) {
            REQUIRE(std::abs(std::abs(g.pairing(c, x)) - 1.0) < 1e-14);
            REQUIRE(std::abs(g.pairing(c, g.add(x, 5)) -
                             g.pairing(c, x) * g.pairing(c, 5)) < 1e-12);
        }
}

TEST_CASE("fourier matrix, small cases") {
    OperatorMatrix t2 = fourier_matrix(FiniteAbelianGroup({2}));
    CMatrix expect(2, 2);
    expect << 0.5, 0.5, 0.5, -0.5;
    REQUIRE(max_abs_diff(t2.a, expect) < 1e-15);

    OperatorMatrix t1 = fourier_matrix(FiniteAbelianGroup({1}));
    REQUIRE(t1.rows() == 1);
    REQUIRE(std::abs(t1.a(0, 0) - 1.0) < 1e-15);

    OperatorMatrix t3 = fourier_matrix(FiniteAbelianGroup({3}));
    Complex omega = std::polar(1.0, 2 * std::numbers::pi / 3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            REQUIRE(std::abs(t3.a(j, k) - std::pow(omega, j * k) / 3.0) < 1e-12);
}

TEST_CASE("sqrt(#G) T_G is unitary across the catalog") {
    for (auto factors : std::vector<std::vector<std::uint32_t>>{
             {2}, {3}, {4}, {8}, {9}, {2, 2}, {4, 9}, {27}, {5}}) {
        FiniteAbelianGroup g(factors);
        CMatrix u = std::sqrt(double(g.order())) * fourier_matrix(g).a;
        CMatrix prod = u * u.adjoint();
        REQUIRE(max_abs_diff(prod, CMatrix(CMatrix::Identity(g.order(), g.order()))) < 1e-12);
    }
}

TEST_CASE("subgroups and cosets") {
    FiniteAbelianGroup g({8});
    Subgroup h = Subgroup::closure(g, {4});
    REQUIRE(h.members == std::vector<std::uint32_t>{0, 4});
    Subgroup perp = annihilator(g, h);
    REQUIRE(perp.members == std::vector<std::uint32_t>{0, 2, 4, 6});
    CosetTable cos = CosetTable::build(g, h);
    REQUIRE(cos.count() == 4);
    REQUIRE(cos.rep == std::vector<std::uint32_t>{0, 1, 2, 3});  // least representatives

    REQUIRE(all_subgroups(g).size() == 4);  // orders 1, 2, 4, 8
    REQUIRE(maximal_chains(g).size() == 1);
    REQUIRE(maximal_chains(FiniteAbelianGroup({4, 9})).size() == 6);
}

TEST_CASE("invalid chains are rejected") {
    FiniteAbelianGroup g({8});
    Subgroup t = Subgroup::trivial(g), full = Subgroup::full(g);
    Subgroup h2 = Subgroup::closure(g, {4}), h4 = Subgroup::closure(g, {2});
    REQUIRE_NOTHROW(SubgroupChain(g, {t, h2, h4, full}));
    // not nested: {0,4} is not inside {0,2,4,6}? it is; use a genuinely bad one
    FiniteAbelianGroup g2({2, 2});
    Subgroup a = Subgroup::closure(g2, {1});  // {(0,0),(1,0)}
    Subgroup b = Subgroup::closure(g2, {2});  // {(0,0),(0,1)}
    REQUIRE_THROWS_AS(SubgroupChain(g2, {Subgroup::trivial(g2), a, b}), std::invalid_argument);
    REQUIRE_THROWS_AS(SubgroupChain(g, {t, h2}), std::invalid_argument);  // does not reach G
}

TEST_CASE("fft factorization: Z/4 with the index-two chain") {
    FiniteAbelianGroup g({4});
    SubgroupChain chain = chain_by_orders(g, {2});
    auto factors = fft_factorize(chain);
    REQUIRE(factors.size() == 2);
    REQUIRE(factors[0].rows() == 4);
    REQUIRE(factors[0].cols() == 4);
    OperatorMatrix prod = product_in_order(factors);
    REQUIRE(max_abs_diff(prod.a, fourier_matrix(g).a) == 0.0);  // exact
}

TEST_CASE("fft factorization: trivial chain gives the transform itself") {
    FiniteAbelianGroup g({6});
    SubgroupChain chain(g, {Subgroup::trivial(g), Subgroup::full(g)});
    auto factors = fft_factorize(chain);
    REQUIRE(factors.size() == 1);
    REQUIRE(max_abs_diff(factors[0].a, fourier_matrix(g).a) < 1e-15);
}

TEST_CASE("fft factorization: Z/8 maximal chain has 2x2 blocks up to units") {
    FiniteAbelianGroup g({8});
    SubgroupChain chain = chain_by_orders(g, {2, 4});
    auto factors = fft_factorize(chain);
    REQUIRE(factors.size() == 3);
    OperatorMatrix prod = product_in_order(factors);
    REQUIRE(max_abs_diff(prod.a, fourier_matrix(g).a) < 1e-12);
    for (const OperatorMatrix& f : factors) {
        // each factor has two entries of modulus 1/2 per row and nothing else
        REQUIRE(f.nnz(1e-14) == std::size_t(8 * 2));
        for (Eigen::Index r = 0; r < f.rows(); ++r)
            for (Eigen::Index c = 0; c < f.cols(); ++c) {
                double m = std::abs(f.a(r, c));
                REQUIRE((m < 1e-14 || std::abs(m - 0.5) < 1e-12));
            }
        // averaged-space norm of a block-diagonal-up-to-units factor equals
        // the norm of the 2-point transform
        REQUIRE(std::abs(averaged_spectral_norm(f) - 1.0 / std::sqrt(2.0)) < 1e-10);
    }
}

TEST_CASE("fft factorization: every maximal chain of Z/4 x Z/9") {
    FiniteAbelianGroup g({4, 9});
    OperatorMatrix direct = fourier_matrix(g);
    auto chains = maximal_chains(g);
    REQUIRE(chains.size() == 6);
    for (const SubgroupChain& chain : chains) {
        auto factors = fft_factorize(chain);
        REQUIRE(factors.size() == 4);
        REQUIRE(max_abs_diff(product_in_order(factors).a, direct.a) < 1e-12);
    }
}

TEST_CASE("quotient fourier matrix matches the transform of the quotient") {
    FiniteAbelianGroup g({8});
    Subgroup lo = Subgroup::closure(g, {4}), hi = Subgroup::full(g);
    OperatorMatrix q = quotient_fourier_matrix(g, lo, hi);
    REQUIRE(q.rows() == 4);
    // the quotient is cyclic of order 4; same norm data as T_{Z/4}
    REQUIRE(std::abs(averaged_spectral_norm(q) - 0.5) < 1e-12);
    // rows are exactly the characters of the quotient: orthogonality
    CMatrix u = std::sqrt(4.0) * q.a * std::sqrt(4.0);
    REQUIRE(max_abs_diff(CMatrix(u * u.adjoint() / 4.0),
                         CMatrix(CMatrix::Identity(4, 4))) < 1e-12);
}

TEST_CASE("unit row/column scalings do not change averaged norms") {
    FiniteAbelianGroup g({9});
    OperatorMatrix t = fourier_matrix(g);
    std::mt19937_64 rng = make_rng(123);
    std::uniform_real_distribution<double> unif(0.0, 2 * std::numbers::pi);
    OperatorMatrix scaled = t;
    for (Eigen::Index r = 0; r < t.rows(); ++r)
        scaled = scale_row(scaled, r, std::polar(1.0, unif(rng)));
    for (Eigen::Index c = 0; c < t.cols(); ++c)
        scaled = scale_col(scaled, c, std::polar(1.0, unif(rng)));
    REQUIRE(std::abs(averaged_spectral_norm(scaled) - averaged_spectral_norm(t)) < 1e-10);
}
