#pragma once

#include <Eigen/Dense>

#include "mmiq/errors.hpp"

namespace mmiq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// A (+) B = A x I + I x B
inline Matrix kron_sum(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DimensionMismatch("kron_sum: operands must be square and of equal dimension");
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    return kron(a, id) + kron(id, b);
}

// Column-stacking: entries 1..d are column 1, entries d+1..2d column 2, ...
inline Vector vec(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("vec: matrix must be square");
    return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index d) {
    if (v.size() != d * d)
        throw DimensionMismatch("unvec: size is not d^2");
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

}  // namespace mmiq
