#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace banachlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CSparse = Eigen::SparseMatrix<Complex>;

// A finite matrix acting between averaged l2 spaces: the norm on fields over
// an index set I is sqrt(E_{x in I} |f(x)|^2), so a matrix between index sets
// of different sizes picks up a sqrt(#cols/#rows) factor relative to the
// plain spectral norm.
struct OperatorMatrix {
    CMatrix a;
    std::string row_label, col_label;

    OperatorMatrix() = default;
    explicit OperatorMatrix(CMatrix m, std::string rl = "", std::string cl = "")
        : a(std::move(m)), row_label(std::move(rl)), col_label(std::move(cl)) {}

    Eigen::Index rows() const { return a.rows(); }
    Eigen::Index cols() const { return a.cols(); }

    static OperatorMatrix identity(Eigen::Index n) {
        return OperatorMatrix(CMatrix::Identity(n, n));
    }

    std::size_t nnz(double tol = 0.0) const {
        std::size_t k = 0;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                if (std::abs(a(i, j)) > tol) ++k;
        return k;
    }

    CSparse to_sparse(double tol = 0.0) const {
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(nnz(tol));
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                if (std::abs(a(i, j)) > tol) trips.emplace_back(i, j, a(i, j));
        CSparse s(a.rows(), a.cols());
        s.setFromTriplets(trips.begin(), trips.end());
        return s;
    }
};

inline OperatorMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first) {
    if (second.cols() != first.rows())
        throw std::invalid_argument("compose: index sets do not match");
    return OperatorMatrix(second.a * first.a, second.row_label, first.col_label);
}

inline OperatorMatrix product_in_order(const std::vector<OperatorMatrix>& factors) {
    if (factors.empty()) throw std::invalid_argument("product of no factors");
    CMatrix acc = factors.front().a;
    for (std::size_t i = 1; i < factors.size(); ++i) acc = factors[i].a * acc;
    return OperatorMatrix(std::move(acc), factors.back().row_label, factors.front().col_label);
}

inline double max_abs_diff(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    return (x - y).cwiseAbs().maxCoeff();
}

// Largest singular value. Jacobi for small matrices, bidiagonal
// divide-and-conquer above.
inline double sigma_max(const CMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    if (std::min(m.rows(), m.cols()) <= 256) {
        Eigen::JacobiSVD<CMatrix> svd(m);
        return svd.singularValues()(0);
    }
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

// Operator norm between averaged l2 spaces (scalar coefficients).
inline double averaged_spectral_norm(const OperatorMatrix& m) {
    return sigma_max(m.a) * std::sqrt(double(m.cols()) / double(m.rows()));
}

// Multiply row r (resp. column c) by a complex unit; used by the invariance
// property tests.
inline OperatorMatrix scale_row(OperatorMatrix m, Eigen::Index r, Complex unit) {
    m.a.row(r) *= unit;
    return m;
}
inline OperatorMatrix scale_col(OperatorMatrix m, Eigen::Index c, Complex unit) {
    m.a.col(c) *= unit;
    return m;
}

}  // namespace banachlab
