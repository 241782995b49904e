#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "banachlab/coefficient_space.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

// Exact sign average: sqrt( E_{eps in {-1,1}^n} || sum_i eps_i x_i ||^2 ),
// enumerated with a Gray code so each pattern costs one vector update.
inline double rademacher_average(const CoefficientSpace& e, const Eigen::MatrixXcd& x) {
    int n = int(x.rows());
    if (n > 16) throw std::invalid_argument("sign enumeration limited to n <= 16");
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(x.cols());
    for (int i = 0; i < n; ++i) s += x.row(i).transpose();
    std::vector<int> sign(n, 1);
    double acc = 0.0;
    std::uint32_t total = 1u << n;
    std::uint32_t gray_prev = 0;
    for (std::uint32_t k = 0; k < total; ++k) {
        if (k > 0) {
            std::uint32_t gray = k ^ (k >> 1);
            std::uint32_t flipped = gray ^ gray_prev;
            int i = 0;
            while (!((flipped >> i) & 1u)) ++i;
            sign[i] = -sign[i];
            s += (2.0 * sign[i]) * x.row(i).transpose();
            gray_prev = gray;
        }
        double ns = e.norm(s);
        acc += ns * ns;
    }
    return std::sqrt(acc / double(total));
}

// ratio whose supremum over families is the best admissible type constant
inline double type_ratio(const CoefficientSpace& e, double p, const Eigen::MatrixXcd& x) {
    double lhs = rademacher_average(e, x);
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) rhs += std::pow(e.norm(x.row(i)), p);
    rhs = std::pow(rhs, 1.0 / p);
    return rhs > 0 ? lhs / rhs : 0.0;
}

// Certified lower bound on the type-p constant of E: the best ratio over
// basis-vector families, random families, and a coordinate hill climb.
// Any family exceeding a claimed T refutes that type claim at this (p, n).
inline double type_constant_lower(const CoefficientSpace& e, double p, int n,
                                  std::uint64_t seed = 1, int random_families = 24,
                                  int climb_steps = 60) {
    if (n < 1 || n > 16) throw std::invalid_argument("type probe needs 1 <= n <= 16");
    if (!(p >= 1.0)) throw std::invalid_argument("type exponent must be >= 1");
    double best = 0.0;
    auto consider = [&](const Eigen::MatrixXcd& x) {
        double r = type_ratio(e, p, x);
        if (r > best) best = r;
        return r;
    };

    // single vector: lhs = rhs, ratio 1
    {
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, e.dim);
        x(0, 0) = 1.0;
        consider(x);
    }
    // basis family x_i = e_(i mod d); extremal for l1 coefficients
    {
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, e.dim);
        for (int i = 0; i < n; ++i) x(i, i % e.dim) = 1.0;
        consider(x);
    }
    std::mt19937_64 rng = make_rng(seed);
    for (int f = 0; f < random_families; ++f) {
        Eigen::MatrixXcd x = random_field(n, e.dim, rng).values;
        double cur = consider(x);
        double step = 0.5;
        for (int s = 0; s < climb_steps; ++s) {
            Eigen::MatrixXcd cand = x;
            for (Eigen::Index i = 0; i < cand.rows(); ++i)
                for (Eigen::Index k = 0; k < cand.cols(); ++k)
                    cand(i, k) += step * gaussian_complex(rng);
            double r = type_ratio(e, p, cand);
            if (r > cur) {
                cur = r;
                x = cand;
                if (r > best) best = r;
            } else {
                step *= 0.85;
            }
        }
    }
    return best;
}

}  // namespace banachlab
