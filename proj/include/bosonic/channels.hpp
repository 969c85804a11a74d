#pragma once

#include <cmath>
#include <vector>

#include "bosonic/errors.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/linalg.hpp"
#include "bosonic/quadrature.hpp"

namespace bosonic {

/// Loss / additive-Gaussian-noise channel description: per-mode
/// transmittance kappa in [0,1] and noise variance N >= 0 (photons/mode).
struct ChannelSpec {
    std::vector<double> kappa;
    std::vector<double> noise;

    ChannelSpec(std::vector<double> kappa_, std::vector<double> noise_)
        : kappa(std::move(kappa_)), noise(std::move(noise_)) {
        if (kappa.size() != noise.size())
            throw InvalidParameter("ChannelSpec: kappa and noise lengths differ");
        for (double k : kappa)
            if (k < 0.0 || k > 1.0)
                throw InvalidTransmittance("ChannelSpec: transmittance outside [0,1]");
        for (double n : noise)
            if (n < 0.0) throw InvalidNoiseVariance("ChannelSpec: negative noise variance");
    }

    int mode_count() const { return static_cast<int>(kappa.size()); }
};

struct KrausSet {
    std::vector<Matrix> operators;
    /// max-abs deviation of sum K^dag K from identity, restricted to the
    /// Fock levels below the top 20% guard band.
    double completeness_defect = 0.0;
};

struct ChannelOptions {
    /// Gauss-Hermite points per axis for the AGN quadrature; 0 selects
    /// max(21, dim + 7) rounded up to odd, which resolves the full
    /// polynomial content of the truncated integrand.
    int quadrature_order = 0;
    /// Diagonal-mass threshold defining the occupied Fock range for the
    /// AGN headroom precondition.
    double occupancy_threshold = 1e-12;
};

inline int agn_quadrature_order(int dim, int requested = 0) {
    if (requested > 0) return requested;
    int order = std::max(21, dim + 7);
    return (order % 2 == 0) ? order + 1 : order;
}

// ---------------------------------------------------------------------------
// Photon loss
// ---------------------------------------------------------------------------

/// Standard photon-loss Kraus operators for one mode:
/// <n-k| A_k |n> = sqrt(C(n,k)) kappa^{(n-k)/2} (1-kappa)^{k/2}.
inline KrausSet loss_kraus(double kappa, int dim) {
    if (kappa < 0.0 || kappa > 1.0)
        throw InvalidTransmittance("loss_kraus: transmittance outside [0,1]");
    KrausSet set;
    set.operators.reserve(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        Matrix a = Matrix::Zero(dim, dim);
        bool nonzero = false;
        for (int n = k; n < dim; ++n) {
            // kappa = 0 with n > k, or kappa = 1 with k > 0: term is zero
            if ((kappa == 0.0 && n > k) || (kappa == 1.0 && k > 0)) continue;
            // log-space binomial keeps large n stable
            const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                     std::lgamma(n - k + 1.0);
            double log_term = 0.5 * log_binom;
            if (n > k) log_term += 0.5 * (n - k) * std::log(kappa);
            if (k > 0) log_term += 0.5 * k * std::log(1.0 - kappa);
            a(n - k, n) = std::exp(log_term);
            nonzero = true;
        }
        if (nonzero) set.operators.push_back(std::move(a));
    }
    // completeness on the reliable subspace (binomial theorem makes it exact
    // for all levels here, since A_k only lowers)
    Matrix sum = Matrix::Zero(dim, dim);
    for (const Matrix& a : set.operators) sum += a.adjoint() * a;
    const int reliable = std::max(1, dim - dim / 5);
    set.completeness_defect =
        max_abs(sum.topLeftCorner(reliable, reliable) -
                Matrix::Identity(reliable, reliable));
    return set;
}

namespace detail {

/// Permutation taking joint index (n_0,...,n_{m-1}) to the ordering with
/// `mode` moved to the front.
inline std::vector<int> mode_front_permutation(const FockCutoff& cutoff, int mode) {
    const int total = cutoff.total_dim();
    const std::vector<int> strides = cutoff.strides();
    const int d_mode = cutoff.dim(mode);
    const int rest = total / d_mode;
    std::vector<int> perm(static_cast<size_t>(total));
    for (int flat = 0; flat < total; ++flat) {
        const int level = (flat / strides[static_cast<size_t>(mode)]) % d_mode;
        const int remainder = flat - level * strides[static_cast<size_t>(mode)];
        // compress the remaining modes into a dense index
        int rest_idx = 0, acc = 1;
        for (int i = cutoff.mode_count() - 1; i >= 0; --i) {
            if (i == mode) continue;
            const int ni = (remainder / strides[static_cast<size_t>(i)]) % cutoff.dim(i);
            rest_idx += ni * acc;
            acc *= cutoff.dim(i);
        }
        perm[static_cast<size_t>(flat)] = level * rest + rest_idx;
    }
    return perm;
}

inline Matrix permute_indices(const Matrix& m, const std::vector<int>& perm) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) = m(i, j);
    return out;
}

/// (U (x) I) M with U acting on the leading tensor factor of dimension d0.
inline Matrix lifted_left(const Matrix& u, const Matrix& m, int d0) {
    const int rest = static_cast<int>(m.rows()) / d0;
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int a = 0; a < d0; ++a)
        for (int k = 0; k < d0; ++k) {
            const Complex c = u(a, k);
            if (c == Complex(0.0)) continue;
            out.middleRows(a * rest, rest) += c * m.middleRows(k * rest, rest);
        }
    return out;
}

/// Accumulates weight * (U rho U^dag) on one mode into `out`; rho is given
/// with that mode already permuted to the front.
inline void accumulate_mode_conjugation(const Matrix& u, const Matrix& rho_front,
                                        int d_mode, Complex weight, Matrix& out) {
    const Matrix left = lifted_left(u, rho_front, d_mode);
    const int rest = static_cast<int>(rho_front.rows()) / d_mode;
    for (int b = 0; b < d_mode; ++b)
        for (int l = 0; l < d_mode; ++l) {
            const Complex c = std::conj(u(b, l));
            if (c == Complex(0.0)) continue;
            out.middleCols(b * rest, rest) += (weight * c) * left.middleCols(l * rest, rest);
        }
}

} // namespace detail

/// Applies U rho U^dag with U acting on a single mode of a multimode state.
inline Matrix apply_mode_operator(const Matrix& u, const Matrix& rho,
                                  const FockCutoff& cutoff, int mode) {
    const int d_mode = cutoff.dim(mode);
    if (cutoff.mode_count() == 1) return u * rho * u.adjoint();
    const std::vector<int> perm = detail::mode_front_permutation(cutoff, mode);
    const Matrix rho_front = detail::permute_indices(rho, perm);
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    detail::accumulate_mode_conjugation(u, rho_front, d_mode, 1.0, out);
    // invert the permutation
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
    return detail::permute_indices(out, inv);
}

/// Linear loss map L_kappa applied mode by mode (the map factorizes).
inline DensityMatrix apply_loss(const DensityMatrix& rho,
                                const std::vector<double>& kappa_vec) {
    if (static_cast<int>(kappa_vec.size()) != rho.mode_count())
        throw InvalidParameter("apply_loss: transmittance vector length mismatch");
    for (double k : kappa_vec)
        if (k < 0.0 || k > 1.0)
            throw InvalidTransmittance("apply_loss: transmittance outside [0,1]");

    DensityMatrix out = rho;
    for (int mode = 0; mode < rho.mode_count(); ++mode) {
        const double kappa = kappa_vec[static_cast<size_t>(mode)];
        if (kappa == 1.0) continue;
        const int d = rho.cutoff.dim(mode);
        const KrausSet kraus = loss_kraus(kappa, d);
        if (rho.mode_count() == 1) {
            Matrix acc = Matrix::Zero(d, d);
            for (const Matrix& a : kraus.operators) acc += a * out.data * a.adjoint();
            out.data = std::move(acc);
        } else {
            const std::vector<int> perm = detail::mode_front_permutation(rho.cutoff, mode);
            const Matrix front = detail::permute_indices(out.data, perm);
            Matrix acc = Matrix::Zero(out.data.rows(), out.data.cols());
            for (const Matrix& a : kraus.operators)
                detail::accumulate_mode_conjugation(a, front, d, 1.0, acc);
            std::vector<int> inv(perm.size());
            for (size_t i = 0; i < perm.size(); ++i)
                inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
            out.data = detail::permute_indices(acc, inv);
        }
    }
    return out;
}

inline DensityMatrix apply_loss(const DensityMatrix& rho, double kappa) {
    return apply_loss(rho, std::vector<double>(static_cast<size_t>(rho.mode_count()), kappa));
}

// ---------------------------------------------------------------------------
// Additive Gaussian noise
// ---------------------------------------------------------------------------

/**
 * AGN map G_N: the Gaussian mixture of displacements
 *     rho -> integral (1/(pi N)) exp(-|beta|^2/N) D(beta) rho D(beta)^dag d^2 beta
 * evaluated with a tensor Gauss-Hermite rule (beta = sqrt(N)(u + i v)).
 * Summation order is fixed, so results are bitwise deterministic for a
 * given order. Displacements are exactly unitary on the truncation, so the
 * quadrature preserves trace to the accuracy of the computed weights.
 */
inline DensityMatrix apply_agn(const DensityMatrix& rho,
                               const std::vector<double>& noise_vec,
                               const ChannelOptions& options = {}) {
    if (static_cast<int>(noise_vec.size()) != rho.mode_count())
        throw InvalidParameter("apply_agn: noise vector length mismatch");
    for (double n : noise_vec)
        if (n < 0.0) throw InvalidNoiseVariance("apply_agn: negative noise variance");

    DensityMatrix out = rho;
    for (int mode = 0; mode < rho.mode_count(); ++mode) {
        const double noise = noise_vec[static_cast<size_t>(mode)];
        if (noise == 0.0) continue;
        const int d = rho.cutoff.dim(mode);
        const int needed = static_cast<int>(std::ceil(6.0 * std::sqrt(noise) + 3.0 * noise));
        const int occupied = occupied_level(out, mode, options.occupancy_threshold);
        if (occupied + needed > d - 1)
            throw CutoffHeadroomInsufficient(
                "apply_agn: mode " + std::to_string(mode) + " occupied to level " +
                std::to_string(occupied) + ", needs " + std::to_string(needed) +
                " levels of headroom in dimension " + std::to_string(d));

        const int order = agn_quadrature_order(d, options.quadrature_order);
        const GaussHermiteRule rule = GaussHermiteRule::make(order);
        const Displacer displace(d);
        const double scale = std::sqrt(noise);

        const bool single = rho.mode_count() == 1;
        std::vector<int> perm, inv;
        Matrix front;
        if (!single) {
            perm = detail::mode_front_permutation(rho.cutoff, mode);
            front = detail::permute_indices(out.data, perm);
            inv.resize(perm.size());
            for (size_t i = 0; i < perm.size(); ++i)
                inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
        }

        Matrix acc = Matrix::Zero(out.data.rows(), out.data.cols());
        for (int j = 0; j < order; ++j) {
            for (int k = 0; k < order; ++k) {
                const Complex beta = scale * Complex(rule.nodes[j], rule.nodes[k]);
                const double w = rule.weights[j] * rule.weights[k] / M_PI;
                const Matrix dmat = displace(beta);
                if (single)
                    acc += w * (dmat * out.data * dmat.adjoint());
                else
                    detail::accumulate_mode_conjugation(dmat, front, d, w, acc);
            }
        }
        out.data = single ? std::move(acc) : detail::permute_indices(acc, inv);
    }
    return out;
}

inline DensityMatrix apply_agn(const DensityMatrix& rho, double noise,
                               const ChannelOptions& options = {}) {
    return apply_agn(rho, std::vector<double>(static_cast<size_t>(rho.mode_count()), noise),
                     options);
}

inline DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelSpec& spec,
                                   const ChannelOptions& options = {}) {
    return apply_agn(apply_loss(rho, spec.kappa), spec.noise, options);
}

/// Trace-norm defect of the identity L_kappa G_N = G_{kappa N} L_kappa on a
/// single-mode probe state.
inline double commutation_defect(const DensityMatrix& rho, double kappa, double noise,
                                 const ChannelOptions& options = {}) {
    if (rho.mode_count() != 1)
        throw InvalidParameter("commutation_defect: single-mode probe expected");
    const DensityMatrix lhs = apply_loss(apply_agn(rho, noise, options), kappa);
    const DensityMatrix rhs = apply_agn(apply_loss(rho, kappa), kappa * noise, options);
    return trace_norm_hermitian(lhs.data - rhs.data);
}

} // namespace bosonic
