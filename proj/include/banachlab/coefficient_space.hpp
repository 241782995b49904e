#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "banachlab/operator_matrix.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

enum class NormConvention { sum, averaged };

// Finite-dimensional l_q coefficient space standing in for the Banach space
// the matrices act on diagonally. The sum/averaged distinction matters: the
// delta witness that pins the transform norm at 1 needs the plain-sum l1
// norm, so the convention is explicit rather than defaulted.
struct CoefficientSpace {
    double q = 2.0;
    int dim = 1;
    NormConvention conv = NormConvention::sum;

    CoefficientSpace() = default;
    CoefficientSpace(double q_, int d, NormConvention c = NormConvention::sum)
        : q(q_), dim(d), conv(c) {
        if (!(q >= 1.0)) throw std::invalid_argument("coefficient space needs q >= 1");
        if (d < 1) throw std::invalid_argument("coefficient space needs dim >= 1");
    }

    double weight() const { return conv == NormConvention::sum ? 1.0 : 1.0 / double(dim); }

    template <class Vec>
    double norm(const Vec& v) const {
        if (q == 2.0) return std::sqrt(weight()) * std::sqrt(v.squaredNorm());
        if (q == 1.0) {
            double s = 0;
            for (Eigen::Index k = 0; k < v.size(); ++k) s += std::abs(v(k));
            return weight() * s;
        }
        double s = 0;
        for (Eigen::Index k = 0; k < v.size(); ++k) s += std::pow(std::abs(v(k)), q);
        return std::pow(weight() * s, 1.0 / q);
    }

    std::string to_string() const {
        return "l_" + std::to_string(q) + "^" + std::to_string(dim) +
               (conv == NormConvention::sum ? "(sum)" : "(avg)");
    }
};

// Field over a finite index set with values in C^dim; row i = value at index i.
struct VectorField {
    Eigen::MatrixXcd values;

    Eigen::Index index_size() const { return values.rows(); }
    Eigen::Index dim() const { return values.cols(); }
};

// || f || = sqrt( E_i ||f(i)||_E^2 )
inline double field_norm(const CoefficientSpace& e, const VectorField& f) {
    double s = 0;
    for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
        double ni = e.norm(f.values.row(i));
        s += ni * ni;
    }
    return std::sqrt(s / double(f.values.rows()));
}

inline VectorField random_field(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
    VectorField f;
    f.values.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < d; ++k) f.values(i, k) = gaussian_complex(rng);
    return f;
}

}  // namespace banachlab
