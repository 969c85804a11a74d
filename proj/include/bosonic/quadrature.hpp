#pragma once

#include <Eigen/Dense>

#include "bosonic/errors.hpp"

namespace bosonic {

/**
 * Gauss-Hermite rule for integrals of the form
 *     integral exp(-x^2) f(x) dx  ~=  sum_j weight[j] * f(node[j]).
 *
 * Nodes and weights come from the Golub-Welsch eigenvalue construction:
 * the symmetric tridiagonal Jacobi matrix with off-diagonals sqrt(k/2)
 * has the nodes as eigenvalues, and weight_j = sqrt(pi) * v0_j^2 for the
 * first component of the normalized eigenvector.
 */
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    static GaussHermiteRule make(int order) {
        if (order < 1)
            throw InvalidParameter("Gauss-Hermite order must be >= 1");
        Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
        for (int k = 1; k < order; ++k) {
            const double b = std::sqrt(0.5 * k);
            jacobi(k - 1, k) = b;
            jacobi(k, k - 1) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
        GaussHermiteRule rule;
        rule.nodes = es.eigenvalues();
        rule.weights.resize(order);
        const double sqrt_pi = std::sqrt(M_PI);
        for (int j = 0; j < order; ++j) {
            const double v0 = es.eigenvectors()(0, j);
            rule.weights[j] = sqrt_pi * v0 * v0;
        }
        return rule;
    }
};

} // namespace bosonic
