#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bosonic {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Sum of absolute eigenvalues of a Hermitian matrix (trace norm).
/// The input is symmetrized first; callers pass Hermitian operators only.
inline double trace_norm_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

/// Largest absolute eigenvalue of a Hermitian matrix (operator norm).
inline double operator_norm_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double min_eigenvalue_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline double min_eigenvalue_symmetric(const RealMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()),
                                                 Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace bosonic
