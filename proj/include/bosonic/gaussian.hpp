#pragma once

#include <cmath>
#include <vector>

#include "bosonic/channels.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/linalg.hpp"

namespace bosonic {

/**
 * Gaussian state over quadratures (x_1, p_1, ..., x_m, p_m) with the
 * convention x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)).
 * `cov` is the Wigner covariance matrix; vacuum covariance is (1/2) I.
 */
struct GaussianState {
    RealVector mean;
    RealMatrix cov;

    int mode_count() const { return static_cast<int>(mean.size()) / 2; }

    double symmetry_defect() const { return (cov - cov.transpose()).cwiseAbs().maxCoeff(); }

    /// Uncertainty principle: cov + (i/2) Omega >= 0.
    double uncertainty_min_eigenvalue() const {
        const int n = static_cast<int>(cov.rows());
        Matrix h = cov.cast<Complex>();
        const RealMatrix omega = symplectic_form(mode_count());
        h += Complex(0.0, 0.5) * omega.cast<Complex>();
        return min_eigenvalue_hermitian(h);
    }

    bool valid(double sym_tol = 1e-12, double psd_tol = kPsdTol) const {
        return mean.size() == cov.rows() && cov.rows() == cov.cols() &&
               mean.size() % 2 == 0 && symmetry_defect() <= sym_tol &&
               uncertainty_min_eigenvalue() >= -psd_tol;
    }

    static RealMatrix symplectic_form(int modes) {
        RealMatrix omega = RealMatrix::Zero(2 * modes, 2 * modes);
        for (int i = 0; i < modes; ++i) {
            omega(2 * i, 2 * i + 1) = 1.0;
            omega(2 * i + 1, 2 * i) = -1.0;
        }
        return omega;
    }
};

struct ClassicalityCertificate {
    bool is_classical = false;
    /// Minimum eigenvalue of cov - (1/2) I.
    double min_eigenvalue = 0.0;
    /// Classicality margin: how far the minimum eigenvalue sits above zero
    /// (negative when the state is nonclassical).
    double margin = 0.0;
};

inline GaussianState gaussian_vacuum(int modes) {
    return GaussianState{RealVector::Zero(2 * modes),
                         0.5 * RealMatrix::Identity(2 * modes, 2 * modes)};
}

inline GaussianState gaussian_coherent(const std::vector<Complex>& alphas) {
    const int m = static_cast<int>(alphas.size());
    GaussianState g = gaussian_vacuum(m);
    for (int i = 0; i < m; ++i) {
        g.mean[2 * i] = std::sqrt(2.0) * alphas[static_cast<size_t>(i)].real();
        g.mean[2 * i + 1] = std::sqrt(2.0) * alphas[static_cast<size_t>(i)].imag();
    }
    return g;
}

/// Single-mode squeezed vacuum: Var(x) = e^{-2r}/2, Var(p) = e^{2r}/2.
inline GaussianState gaussian_squeezed(double r) {
    GaussianState g = gaussian_vacuum(1);
    g.cov(0, 0) = 0.5 * std::exp(-2.0 * r);
    g.cov(1, 1) = 0.5 * std::exp(2.0 * r);
    return g;
}

inline GaussianState gaussian_thermal(double nbar) {
    if (nbar < 0) throw InvalidParameter("gaussian_thermal: nbar must be >= 0");
    GaussianState g = gaussian_vacuum(1);
    g.cov *= (2.0 * nbar + 1.0);
    return g;
}

/// Two-mode squeezed vacuum with mean signal photons Ns per mode:
/// diagonal blocks (Ns + 1/2) I_2, off-diagonal sqrt(Ns(Ns+1)) diag(1,-1).
inline GaussianState gaussian_qidc(double mean_signal_photons) {
    if (mean_signal_photons < 0)
        throw InvalidParameter("gaussian_qidc: mean signal photons must be >= 0");
    const double ns = mean_signal_photons;
    const double c = std::sqrt(ns * (ns + 1.0));
    GaussianState g = gaussian_vacuum(2);
    g.cov = RealMatrix::Zero(4, 4);
    g.cov(0, 0) = g.cov(1, 1) = g.cov(2, 2) = g.cov(3, 3) = ns + 0.5;
    g.cov(0, 2) = g.cov(2, 0) = c;
    g.cov(1, 3) = g.cov(3, 1) = -c;
    return g;
}

/// Loss on the covariance level: mode blocks scale by sqrt(kappa) and the
/// vacuum fills in (1-kappa)/2 on the diagonal block; means scale by
/// sqrt(kappa).
inline GaussianState gaussian_apply_loss(const GaussianState& g,
                                         const std::vector<double>& kappa_vec) {
    const int m = g.mode_count();
    if (static_cast<int>(kappa_vec.size()) != m)
        throw InvalidParameter("gaussian_apply_loss: transmittance vector length mismatch");
    RealVector scale(2 * m);
    for (int i = 0; i < m; ++i) {
        const double k = kappa_vec[static_cast<size_t>(i)];
        if (k < 0.0 || k > 1.0)
            throw InvalidTransmittance("gaussian_apply_loss: transmittance outside [0,1]");
        scale[2 * i] = scale[2 * i + 1] = std::sqrt(k);
    }
    GaussianState out;
    out.mean = scale.asDiagonal() * g.mean;
    out.cov = scale.asDiagonal() * g.cov * scale.asDiagonal();
    for (int i = 0; i < m; ++i) {
        const double k = kappa_vec[static_cast<size_t>(i)];
        out.cov(2 * i, 2 * i) += 0.5 * (1.0 - k);
        out.cov(2 * i + 1, 2 * i + 1) += 0.5 * (1.0 - k);
    }
    return out;
}

inline GaussianState gaussian_apply_loss(const GaussianState& g, double kappa) {
    return gaussian_apply_loss(g, std::vector<double>(static_cast<size_t>(g.mode_count()), kappa));
}

/// AGN of variance N adds N to each quadrature variance of the mode
/// (E|n|^2 = N, circularly symmetric); means are unchanged.
inline GaussianState gaussian_apply_agn(const GaussianState& g,
                                        const std::vector<double>& noise_vec) {
    const int m = g.mode_count();
    if (static_cast<int>(noise_vec.size()) != m)
        throw InvalidParameter("gaussian_apply_agn: noise vector length mismatch");
    GaussianState out = g;
    for (int i = 0; i < m; ++i) {
        const double n = noise_vec[static_cast<size_t>(i)];
        if (n < 0.0) throw InvalidNoiseVariance("gaussian_apply_agn: negative noise variance");
        out.cov(2 * i, 2 * i) += n;
        out.cov(2 * i + 1, 2 * i + 1) += n;
    }
    return out;
}

inline GaussianState gaussian_apply_agn(const GaussianState& g, double noise) {
    return gaussian_apply_agn(g, std::vector<double>(static_cast<size_t>(g.mode_count()), noise));
}

/// Mean photon number summed over modes: (tr cov - m)/2 + |mean|^2/2.
inline double gaussian_mean_photons(const GaussianState& g) {
    return 0.5 * (g.cov.trace() - g.mode_count()) + 0.5 * g.mean.squaredNorm();
}

/// P-representability test for Gaussian states: cov - (1/2) I >= 0.
/// The minimum eigenvalue of that matrix decides, with the given tolerance.
inline ClassicalityCertificate classicality_certificate(const GaussianState& g,
                                                        double psd_tolerance = kPsdTol) {
    const RealMatrix probe =
        0.5 * (g.cov + g.cov.transpose()) -
        0.5 * RealMatrix::Identity(g.cov.rows(), g.cov.cols());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(probe, Eigen::EigenvaluesOnly);
    ClassicalityCertificate cert;
    cert.min_eigenvalue = es.eigenvalues().minCoeff();
    cert.margin = cert.min_eigenvalue;
    cert.is_classical = cert.min_eigenvalue >= -psd_tolerance;
    return cert;
}

/// Adds AGN of variance 1/2 to every mode and certifies the result.
/// Every valid Gaussian state has a nonnegative Wigner function, so the
/// certificate must report classical for every valid input.
inline ClassicalityCertificate gaussian_lemma2_check(const GaussianState& g,
                                                     double psd_tolerance = kPsdTol) {
    return classicality_certificate(gaussian_apply_agn(g, 0.5), psd_tolerance);
}

/// Symplectic eigenvalues: absolute eigenvalues of i Omega cov (in pairs);
/// returns the m distinct values sorted ascending.
inline std::vector<double> symplectic_eigenvalues(const GaussianState& g) {
    const int m = g.mode_count();
    const Matrix iomega_cov =
        Complex(0.0, 1.0) * GaussianState::symplectic_form(m).cast<Complex>() *
        g.cov.cast<Complex>();
    Eigen::ComplexEigenSolver<Matrix> es(iomega_cov);
    std::vector<double> nus;
    for (int i = 0; i < 2 * m; ++i) nus.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(nus.begin(), nus.end());
    std::vector<double> out;
    for (int i = 0; i < m; ++i) out.push_back(0.5 * (nus[static_cast<size_t>(2 * i)] +
                                                     nus[static_cast<size_t>(2 * i + 1)]));
    return out;
}

// ---------------------------------------------------------------------------
// Fock-basis bridge
// ---------------------------------------------------------------------------

/// Extracts first and second quadrature moments of a truncated-Fock state
/// as a GaussianState. Meaningful as a full description only for Gaussian
/// states; always usable as a moment cross-check.
inline GaussianState moments_from_fock(const DensityMatrix& rho) {
    const int m = rho.mode_count();
    const int total = rho.total_dim();

    std::vector<Matrix> quads;
    quads.reserve(static_cast<size_t>(2 * m));
    for (int i = 0; i < m; ++i) {
        const int d = rho.cutoff.dim(i);
        const Matrix a = annihilation_op(d);
        const Matrix x1 = (a + a.adjoint()) / std::sqrt(2.0);
        const Matrix p1 = (a - a.adjoint()) / Complex(0.0, std::sqrt(2.0));
        // lift to the joint space
        Matrix lift_x = Matrix::Identity(1, 1), lift_p = Matrix::Identity(1, 1);
        for (int j = 0; j < m; ++j) {
            const int dj = rho.cutoff.dim(j);
            const Matrix& fx = (j == i) ? x1 : Matrix(Matrix::Identity(dj, dj));
            const Matrix& fp = (j == i) ? p1 : Matrix(Matrix::Identity(dj, dj));
            lift_x = kron(lift_x, fx);
            lift_p = kron(lift_p, fp);
        }
        quads.push_back(std::move(lift_x));
        quads.push_back(std::move(lift_p));
    }

    GaussianState g;
    g.mean.resize(2 * m);
    g.cov.resize(2 * m, 2 * m);
    for (int i = 0; i < 2 * m; ++i)
        g.mean[i] = (rho.data * quads[static_cast<size_t>(i)]).trace().real();
    for (int i = 0; i < 2 * m; ++i) {
        for (int j = i; j < 2 * m; ++j) {
            const Matrix sym = 0.5 * (quads[static_cast<size_t>(i)] * quads[static_cast<size_t>(j)] +
                                      quads[static_cast<size_t>(j)] * quads[static_cast<size_t>(i)]);
            const double second = (rho.data * sym).trace().real();
            g.cov(i, j) = g.cov(j, i) = second - g.mean[i] * g.mean[j];
        }
    }
    (void)total;
    return g;
}

/// Noise variance at which signal-only AGN on the QI-DC state crosses into
/// classicality, localized by bisection to `tol`.
inline double qidc_classicality_threshold(double mean_signal_photons, double tol = 1e-8) {
    const GaussianState base = gaussian_qidc(mean_signal_photons);
    auto min_eig = [&](double noise) {
        return classicality_certificate(gaussian_apply_agn(base, {noise, 0.0})).min_eigenvalue;
    };
    double lo = 0.0, hi = 2.0;
    while (min_eig(hi) < 0.0) hi *= 2.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (min_eig(mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace bosonic
