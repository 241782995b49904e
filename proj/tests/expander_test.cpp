#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "banachlab/expander.hpp"

using namespace banachlab;
using Catch::Approx;

TEST_CASE("congruence quotient orders") {
    CongruenceQuotient q2 = congruence_quotient(2);
    REQUIRE(q2.graph.num_vertices == 168);
    REQUIRE(q2.graph.degree == 12);
    REQUIRE(std::uint64_t(q2.graph.num_vertices) == sl3_prime_order(2));

    CongruenceQuotient q3 = congruence_quotient(3);
    REQUIRE(q3.graph.num_vertices == 5616);
    REQUIRE(std::uint64_t(q3.graph.num_vertices) == sl3_prime_order(3));

    CongruenceQuotient q4 = congruence_quotient(4);
    REQUIRE(q4.graph.num_vertices == 43008);  // 168 * 2^8

    REQUIRE_THROWS_AS(congruence_quotient(7), ResourceError);  // over the budget
}

TEST_CASE("cayley graphs are regular with symmetric adjacency") {
    for (std::uint32_t m : {2u, 3u}) {
        CongruenceQuotient q = congruence_quotient(m);
        REQUIRE(q.graph.adj.size() ==
                std::size_t(q.graph.num_vertices) * std::size_t(q.graph.degree));
        REQUIRE(q.graph.adjacency_symmetric());
    }
    REQUIRE(CayleyGraph::complete(4).adjacency_symmetric());
    REQUIRE(CayleyGraph::cycle(6).adjacency_symmetric());
}

TEST_CASE("spectral gap of the fixtures") {
    REQUIRE(spectral_gap(CayleyGraph::complete(4)) == Approx(4.0 / 3.0).margin(1e-10));
    REQUIRE(spectral_gap(CayleyGraph::cycle(4)) == Approx(1.0).margin(1e-10));

    CongruenceQuotient q2 = congruence_quotient(2);
    double gap = spectral_gap(q2.graph);
    REQUIRE(gap > 0.0);
    REQUIRE(gap < 2.0);

    // the Lanczos path agrees with the dense path
    REQUIRE(detail::lanczos_lambda1(CayleyGraph::complete(4), 5) ==
            Approx(4.0 / 3.0).margin(1e-9));
    REQUIRE(detail::lanczos_lambda1(CayleyGraph::cycle(4), 5) == Approx(1.0).margin(1e-9));
    REQUIRE(detail::lanczos_lambda1(q2.graph, 5) == Approx(gap).margin(1e-8));

    // disconnected graphs are rejected
    CayleyGraph two;
    two.num_vertices = 4;
    two.degree = 1;
    two.adj = {1, 0, 3, 2};
    REQUIRE_THROWS_AS(spectral_gap(two), std::invalid_argument);
}

TEST_CASE("pair average equals twice the variance for hilbert coefficients") {
    std::mt19937_64 rng = make_rng(61);
    for (const CayleyGraph& g : {CayleyGraph::complete(4), CayleyGraph::cycle(5)}) {
        for (int d : {1, 3}) {
            CoefficientSpace e(2.0, d);
            for (int trial = 0; trial < 100; ++trial) {
                Eigen::MatrixXcd f = random_field(g.num_vertices, d, rng).values;
                double pairs = pair_average(e, g, f);
                Eigen::RowVectorXcd mean = f.colwise().mean();
                double var = 0;
                for (int v = 0; v < g.num_vertices; ++v) {
                    double nv = e.norm(Eigen::VectorXcd(f.row(v) - mean));
                    var += nv * nv;
                }
                var /= g.num_vertices;
                REQUIRE(pairs == Approx(2.0 * var).margin(1e-9));
            }
        }
    }
}

TEST_CASE("word moves are controlled by the edge average") {
    // for gamma a word of length k in the generators,
    // ||f - gamma f|| <= k * sum_s ||f - s f||
    CongruenceQuotient q = congruence_quotient(2);
    const CayleyGraph& g = q.graph;
    std::mt19937_64 rng = make_rng(67);
    CoefficientSpace e(2.0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd f = random_field(g.num_vertices, 1, rng).values;
        auto shift_norm = [&](const std::vector<int>& word) {
            // gamma f (x) = f(gamma^{-1} x); walking neighbors applies gens
            std::vector<int> perm(g.num_vertices);
            for (int v = 0; v < g.num_vertices; ++v) {
                int w = v;
                for (int step : word) w = int(g.neighbor(w, step));
                perm[std::size_t(v)] = w;
            }
            double acc = 0;
            for (int v = 0; v < g.num_vertices; ++v) {
                double nv = e.norm(Eigen::VectorXcd(f.row(v) - f.row(perm[std::size_t(v)])));
                acc += nv * nv;
            }
            return std::sqrt(acc / g.num_vertices);
        };
        double gen_sum = 0;
        for (int s = 0; s < g.degree; ++s) gen_sum += shift_norm({s});
        std::vector<int> word;
        int k = 1 + int(rng() % 3);
        for (int i = 0; i < k; ++i) word.push_back(int(rng() % g.degree));
        REQUIRE(shift_norm(word) <= double(k) * gen_sum + 1e-9);
    }
}

TEST_CASE("poincare ratios against the spectral oracle") {
    CoefficientSpace l21(2.0, 1);
    PoincareReport k4 = poincare_ratio(CayleyGraph::complete(4), l21, 6, 3);
    REQUIRE(k4.ratio_oracle.has_value());
    REQUIRE(*k4.ratio_oracle == Approx(0.75).margin(1e-10));
    REQUIRE(k4.ratio_lower == Approx(0.75).margin(1e-4));
    REQUIRE(k4.ratio_lower <= *k4.ratio_oracle + 1e-6);

    PoincareReport c4 = poincare_ratio(CayleyGraph::cycle(4), l21, 6, 3);
    REQUIRE(*c4.ratio_oracle == Approx(1.0).margin(1e-10));
    REQUIRE(c4.ratio_lower == Approx(1.0).margin(1e-4));

    CongruenceQuotient q2 = congruence_quotient(2);
    PoincareReport sl = poincare_ratio(q2.graph, l21, 3, 3);
    REQUIRE(sl.ratio_lower == Approx(*sl.ratio_oracle).margin(1e-4));
    REQUIRE(sl.ratio_lower <= *sl.ratio_oracle + 1e-6);

    // no oracle away from q = 2, but the lower bound is still produced
    PoincareReport k4l = poincare_ratio(CayleyGraph::complete(4), CoefficientSpace(1.5, 2), 4, 3);
    REQUIRE_FALSE(k4l.ratio_oracle.has_value());
    REQUIRE(k4l.ratio_lower > 0.0);
}

TEST_CASE("oracle agreement on the 5616-vertex quotient", "[.][slow]") {
    CongruenceQuotient q3 = congruence_quotient(3);
    CoefficientSpace l21(2.0, 1);
    PoincareReport rep = poincare_ratio(q3.graph, l21, 2, 3, 4000);
    REQUIRE(rep.ratio_oracle.has_value());
    REQUIRE(rep.ratio_lower == Approx(*rep.ratio_oracle).margin(1e-4));
}

TEST_CASE("obstruction scan rows") {
    CoefficientSpace l21(2.0, 1);
    auto rows = embedding_obstruction_scan({2}, l21, 5, 3);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].vertices == 168);
    REQUIRE(rows[0].ratio_oracle.has_value());
    REQUIRE(rows[0].ratio_lower == Approx(1.0 / rows[0].lambda1).margin(1e-3));
}

TEST_CASE("distance profile and the counting diagnostic") {
    CongruenceQuotient q = congruence_quotient(2);
    std::vector<int> dist = distance_profile(q.graph);
    int diam = 0;
    for (int d : dist) {
        REQUIRE(d >= 0);
        diam = std::max(diam, d);
    }
    REQUIRE(diam >= 2);

    // a 1-Lipschitz scalar embedding built from the word distance: the
    // variance stays below ratio * edge-average (edge average <= 1)
    CoefficientSpace l21(2.0, 1);
    Eigen::MatrixXcd f(q.graph.num_vertices, 1);
    for (int v = 0; v < q.graph.num_vertices; ++v) f(v, 0) = double(dist[std::size_t(v)]);
    double edges = edge_average(l21, q.graph, f);
    REQUIRE(edges <= 1.0 + 1e-12);
    double pairs = pair_average(l21, q.graph, f);
    PoincareReport rep = poincare_ratio(q.graph, l21, 2, 3);
    REQUIRE(pairs <= *rep.ratio_oracle * edges * (1 + 1e-9));

    CountingBound cb = counting_bound(
        q.graph, [](int d) { return std::sqrt(double(d)); }, std::sqrt(2.0));
    REQUIRE(cb.lhs >= cb.rhs - 1e-9);
}
