#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "banachlab/coefficient_space.hpp"
#include "banachlab/errors.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

// Finite regular multigraph given by neighbor lists: vertex v's neighbors
// are adj[v * degree + k]. Parallel edges are kept (the generator list is a
// list, not a set), so every vertex has degree exactly #S.
struct CayleyGraph {
    int num_vertices = 0;
    int degree = 0;
    std::vector<std::uint32_t> adj;
    std::string name;

    std::uint32_t neighbor(int v, int k) const {
        return adj[std::size_t(v) * std::size_t(degree) + std::size_t(k)];
    }

    bool adjacency_symmetric() const {
        std::unordered_map<std::uint64_t, int> count;
        for (int v = 0; v < num_vertices; ++v)
            for (int k = 0; k < degree; ++k) {
                std::uint64_t key =
                    (std::uint64_t(v) << 32) | std::uint64_t(neighbor(v, k));
                ++count[key];
            }
        for (const auto& [key, c] : count) {
            std::uint64_t rev = (key << 32) | (key >> 32);
            auto it = count.find(rev);
            if (it == count.end() || it->second != c) return false;
        }
        return true;
    }

    static CayleyGraph complete(int n) {
        CayleyGraph g;
        g.num_vertices = n;
        g.degree = n - 1;
        g.name = "K" + std::to_string(n);
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w)
                if (w != v) g.adj.push_back(std::uint32_t(w));
        return g;
    }

    static CayleyGraph cycle(int n) {
        CayleyGraph g;
        g.num_vertices = n;
        g.degree = 2;
        g.name = "C" + std::to_string(n);
        for (int v = 0; v < n; ++v) {
            g.adj.push_back(std::uint32_t((v + 1) % n));
            g.adj.push_back(std::uint32_t((v + n - 1) % n));
        }
        return g;
    }
};

// ------------------------------------------------------------- SL3(Z/m)

namespace detail {

using Mat3x3 = std::array<std::uint8_t, 9>;

inline Mat3x3 mat_mul(const Mat3x3& a, const Mat3x3& b, std::uint32_t m) {
    Mat3x3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::uint32_t s = 0;
            for (int k = 0; k < 3; ++k) s += std::uint32_t(a[i * 3 + k]) * b[k * 3 + j];
            r[i * 3 + j] = std::uint8_t(s % m);
        }
    return r;
}

inline std::uint64_t mat_key(const Mat3x3& a, std::uint32_t m) {
    std::uint64_t k = 0;
    for (int i = 0; i < 9; ++i) k = k * m + a[i];
    return k;
}

inline Mat3x3 mat_identity() {
    Mat3x3 r{};
    r[0] = r[4] = r[8] = 1;
    return r;
}

}  // namespace detail

// The twelve elementary generators e_rs(+-1), r != s, reduced mod m.
inline std::vector<detail::Mat3x3> elementary_generators(std::uint32_t m) {
    std::vector<detail::Mat3x3> gens;
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) {
            if (r == s) continue;
            for (int sign = 0; sign < 2; ++sign) {
                detail::Mat3x3 g = detail::mat_identity();
                g[r * 3 + s] = std::uint8_t(sign == 0 ? 1 % m : (m - 1) % m);
                gens.push_back(g);
            }
        }
    return gens;
}

struct CongruenceQuotient {
    std::uint32_t modulus = 2;
    std::vector<detail::Mat3x3> elements;  // index -> matrix
    CayleyGraph graph;
};

// Breadth-first closure of SL3(Z/m) from the elementary generators; the
// result is the whole group, so the graph is connected by construction.
// No generator may reduce to the identity (that would create loops).
inline CongruenceQuotient congruence_quotient(std::uint32_t m,
                                              std::size_t vertex_budget = 100000) {
    if (m < 2) throw std::invalid_argument("congruence quotient needs modulus >= 2");
    CongruenceQuotient q;
    q.modulus = m;
    std::vector<detail::Mat3x3> gens = elementary_generators(m);
    detail::Mat3x3 id = detail::mat_identity();
    for (const auto& g : gens)
        if (detail::mat_key(g, m) == detail::mat_key(id, m))
            throw std::invalid_argument("a generator reduces to the identity");

    std::unordered_map<std::uint64_t, std::uint32_t> index;
    index.reserve(vertex_budget * 2);
    std::queue<std::uint32_t> work;
    q.elements.push_back(id);
    index[detail::mat_key(id, m)] = 0;
    work.push(0);
    while (!work.empty()) {
        std::uint32_t v = work.front();
        work.pop();
        detail::Mat3x3 cur = q.elements[v];
        for (const auto& g : gens) {
            detail::Mat3x3 nx = detail::mat_mul(g, cur, m);
            std::uint64_t key = detail::mat_key(nx, m);
            auto it = index.find(key);
            if (it == index.end()) {
                if (q.elements.size() >= vertex_budget)
                    throw ResourceError("congruence quotient exceeds the vertex budget");
                std::uint32_t id2 = std::uint32_t(q.elements.size());
                q.elements.push_back(nx);
                index[key] = id2;
                work.push(id2);
            }
        }
    }
    q.graph.num_vertices = int(q.elements.size());
    q.graph.degree = int(gens.size());
    q.graph.name = "SL3(Z/" + std::to_string(m) + ")";
    q.graph.adj.reserve(q.elements.size() * gens.size());
    for (const auto& el : q.elements)
        for (const auto& g : gens)
            q.graph.adj.push_back(index.at(detail::mat_key(detail::mat_mul(g, el, m), m)));
    return q;
}

// order of SL3(Z/m) for prime m
inline std::uint64_t sl3_prime_order(std::uint64_t m) {
    return m * m * m * (m * m * m - 1) * (m * m - 1);
}

// ------------------------------------------------------------- spectrum

namespace detail {

inline Eigen::VectorXd laplacian_apply(const CayleyGraph& g, const Eigen::VectorXd& f) {
    Eigen::VectorXd out = f;
    double inv = 1.0 / double(g.degree);
    for (int v = 0; v < g.num_vertices; ++v) {
        double acc = 0;
        for (int k = 0; k < g.degree; ++k) acc += f(g.neighbor(v, k));
        out(v) -= inv * acc;
    }
    return out;
}

inline void check_connected(const CayleyGraph& g) {
    std::vector<std::uint8_t> seen(g.num_vertices, 0);
    std::queue<int> work;
    work.push(0);
    seen[0] = 1;
    int count = 1;
    while (!work.empty()) {
        int v = work.front();
        work.pop();
        for (int k = 0; k < g.degree; ++k) {
            int w = int(g.neighbor(v, k));
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                work.push(w);
            }
        }
    }
    if (count != g.num_vertices) throw std::invalid_argument("graph is disconnected");
}

// Lanczos with full reorthogonalization on 2I - L restricted to the
// mean-zero subspace; returns lambda_1 = 2 - (largest Ritz value).
inline double lanczos_lambda1(const CayleyGraph& g, std::uint64_t seed, int max_iters = 400,
                              double tol = 1e-12) {
    int n = g.num_vertices;
    std::mt19937_64 rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto project = [&](Eigen::VectorXd& v) { v.array() -= v.mean(); };
    auto apply = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd out = 2.0 * v - laplacian_apply(g, v);
        project(out);
        return out;
    };
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    project(v);
    v.normalize();
    basis.push_back(v);
    double prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = apply(basis.back());
        double a = basis.back().dot(w);
        alpha.push_back(a);
        for (const Eigen::VectorXd& b : basis) w -= b.dot(w) * b;
        for (const Eigen::VectorXd& b : basis) w -= b.dot(w) * b;  // second pass
        double bnorm = w.norm();
        // Ritz values of the tridiagonal section
        int k = int(alpha.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            tri(i, i) = alpha[std::size_t(i)];
            if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[std::size_t(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri, Eigen::EigenvaluesOnly);
        double top = es.eigenvalues().maxCoeff();
        if (prev >= 0 && std::abs(top - prev) <= tol * std::max(1.0, std::abs(top))) {
            return 2.0 - top;
        }
        prev = top;
        if (bnorm < 1e-14) break;
        beta.push_back(bnorm);
        basis.push_back(w / bnorm);
    }
    return 2.0 - prev;
}

}  // namespace detail

// Smallest nonzero eigenvalue of the normalized Laplacian I - A/deg.
// Dense solve below 6000 vertices, Lanczos with deflation above.
inline double spectral_gap(const CayleyGraph& g, std::uint64_t seed = 7) {
    detail::check_connected(g);
    if (g.num_vertices < 6000) {
        Eigen::MatrixXd l = Eigen::MatrixXd::Identity(g.num_vertices, g.num_vertices);
        double inv = 1.0 / double(g.degree);
        for (int v = 0; v < g.num_vertices; ++v)
            for (int k = 0; k < g.degree; ++k) l(v, int(g.neighbor(v, k))) -= inv;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(1);  // eigenvalue 0 comes from the constants
    }
    return detail::lanczos_lambda1(g, seed);
}

// ------------------------------------------------------------- Poincare

// E_{x,y} ||f(x) - f(y)||^2 over all ordered pairs
inline double pair_average(const CoefficientSpace& e, const CayleyGraph& g,
                           const Eigen::MatrixXcd& f) {
    double acc = 0;
    int n = g.num_vertices;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            double d = e.norm(Eigen::VectorXcd(f.row(x) - f.row(y)));
            acc += d * d;
        }
    return acc / (double(n) * double(n));
}

// E over ordered neighbor pairs (with multiplicity) of ||f(x) - f(y)||^2
inline double edge_average(const CoefficientSpace& e, const CayleyGraph& g,
                           const Eigen::MatrixXcd& f) {
    double acc = 0;
    int n = g.num_vertices;
    for (int x = 0; x < n; ++x)
        for (int k = 0; k < g.degree; ++k) {
            double d = e.norm(Eigen::VectorXcd(f.row(x) - f.row(int(g.neighbor(x, k)))));
            acc += d * d;
        }
    return acc / (double(n) * double(g.degree));
}

struct PoincareReport {
    std::string graph;
    std::string space;
    double ratio_lower = 0.0;
    std::optional<double> ratio_oracle;  // 1 / lambda_1, Hilbert coefficients only
    Eigen::MatrixXcd witness;
};

// Best found value of pair-average / edge-average over nonconstant fields.
// For Hilbert coefficients the exact supremum 1/lambda_1 is reported as the
// oracle: both averages are quadratic forms diagonalized by the Laplacian
// eigenbasis. The optimizer never sees the spectrum; it combines projected
// power iterations (which only use the graph) with gradient refinement.
inline PoincareReport poincare_ratio(const CayleyGraph& g, const CoefficientSpace& e,
                                     int restarts = 6, std::uint64_t seed = 1,
                                     int iters = 2000) {
    PoincareReport rep;
    rep.graph = g.name;
    rep.space = e.to_string();
    int n = g.num_vertices;

    auto ratio = [&](const Eigen::MatrixXcd& f) {
        double den = edge_average(e, g, f);
        if (den <= 0) return 0.0;
        return pair_average(e, g, f) / den;
    };
    auto consider = [&](const Eigen::MatrixXcd& f) {
        double r = ratio(f);
        if (r > rep.ratio_lower) {
            rep.ratio_lower = r;
            rep.witness = f;
        }
    };

    // projected power iteration on 2I - L; converges to the slow mode of the
    // graph and is a strong start for every coefficient space
    {
        std::mt19937_64 rng = make_rng(derive_seed(seed, 0));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
        v.array() -= v.mean();
        v.normalize();
        for (int it = 0; it < iters; ++it) {
            v = 2.0 * v - detail::laplacian_apply(g, v);
            v.array() -= v.mean();
            double nv = v.norm();
            if (nv == 0) break;
            v /= nv;
        }
        Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, e.dim);
        f.col(0) = v.cast<Complex>();
        consider(f);
    }
    // random starts with hill climbing on the ratio
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng = make_rng(derive_seed(seed, std::uint64_t(r) + 1));
        Eigen::MatrixXcd f = random_field(n, e.dim, rng).values;
        // remove the mean; constant fields are excluded
        for (Eigen::Index c = 0; c < f.cols(); ++c) f.col(c).array() -= f.col(c).mean();
        double cur = ratio(f);
        consider(f);
        double step = 0.5;
        int budget = std::max(60, iters / 10);
        for (int s = 0; s < budget; ++s) {
            Eigen::MatrixXcd cand = f;
            for (Eigen::Index i = 0; i < cand.rows(); ++i)
                for (Eigen::Index k = 0; k < cand.cols(); ++k)
                    cand(i, k) += step * gaussian_complex(rng);
            for (Eigen::Index c = 0; c < cand.cols(); ++c)
                cand.col(c).array() -= cand.col(c).mean();
            double rr = ratio(cand);
            if (rr > cur) {
                cur = rr;
                f = cand;
                consider(f);
            } else {
                step *= 0.9;
            }
        }
    }
    if (e.q == 2.0) rep.ratio_oracle = 1.0 / spectral_gap(g);
    return rep;
}

// ------------------------------------------------------------- scanning

struct ObstructionRow {
    std::uint32_t m = 0;
    int vertices = 0;
    int degree = 0;
    double lambda1 = 0.0;
    double ratio_lower = 0.0;
    std::optional<double> ratio_oracle;
};

inline std::vector<ObstructionRow> embedding_obstruction_scan(
    const std::vector<std::uint32_t>& moduli, const CoefficientSpace& e, std::uint64_t seed = 1,
    int restarts = 4, std::size_t vertex_budget = 100000) {
    std::vector<ObstructionRow> rows;
    for (std::size_t idx = 0; idx < moduli.size(); ++idx) {
        CongruenceQuotient q = congruence_quotient(moduli[idx], vertex_budget);
        ObstructionRow row;
        row.m = moduli[idx];
        row.vertices = q.graph.num_vertices;
        row.degree = q.graph.degree;
        row.lambda1 = spectral_gap(q.graph);
        PoincareReport rep = poincare_ratio(q.graph, e, restarts, derive_seed(seed, idx));
        row.ratio_lower = rep.ratio_lower;
        row.ratio_oracle = rep.ratio_oracle;
        rows.push_back(row);
    }
    return rows;
}

// Word distances from the identity vertex (single source suffices: Cayley
// graphs are vertex transitive).
inline std::vector<int> distance_profile(const CayleyGraph& g, int source = 0) {
    std::vector<int> dist(g.num_vertices, -1);
    std::queue<int> work;
    dist[std::size_t(source)] = 0;
    work.push(source);
    while (!work.empty()) {
        int v = work.front();
        work.pop();
        for (int k = 0; k < g.degree; ++k) {
            int w = int(g.neighbor(v, k));
            if (dist[std::size_t(w)] < 0) {
                dist[std::size_t(w)] = dist[std::size_t(v)] + 1;
                work.push(w);
            }
        }
    }
    return dist;
}

// Counting diagnostic: for a proper distortion profile rho, the average of
// rho(d(x,y))^2 dominates N^2 (1 - (#S)^{k_N} / #X) because balls grow at
// most geometrically. Reports both sides for the given rho.
struct CountingBound {
    double lhs = 0.0;  // E_{x,y} rho(d(x,y))^2
    double rhs = 0.0;  // N^2 (1 - (#S)^{k_N} / #X)
    int k_n = 0;
};

template <class Rho>
CountingBound counting_bound(const CayleyGraph& g, Rho&& rho, double big_n) {
    std::vector<int> dist = distance_profile(g);
    CountingBound cb;
    double acc = 0;
    int kn = 0;
    for (int d : dist) {
        double r = rho(d);
        acc += r * r;
        if (r < big_n) kn = std::max(kn, d + 1);  // rho(a) >= N once a >= k_N
    }
    cb.lhs = acc / double(g.num_vertices);
    cb.k_n = kn;
    double ball = std::pow(double(g.degree), double(kn));
    cb.rhs = big_n * big_n * std::max(0.0, 1.0 - ball / double(g.num_vertices));
    return cb;
}

}  // namespace banachlab
