#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "bosonic/channels.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/linalg.hpp"

namespace bosonic {

inline constexpr double kDefaultGridTolerance = 1e-4;
inline constexpr double kDefaultGridSpacing = 0.1;

enum class GridKind { chi_n, chi_a, chi_w, q, w, p };

inline const char* grid_kind_name(GridKind k) {
    switch (k) {
        case GridKind::chi_n: return "chi_N";
        case GridKind::chi_a: return "chi_A";
        case GridKind::chi_w: return "chi_W";
        case GridKind::q: return "Q";
        case GridKind::w: return "W";
        case GridKind::p: return "P";
    }
    return "?";
}

/**
 * Rectangular midpoint lattice over phase space for one or two modes,
 * carrying sampled function values. For m modes the flat index runs over
 * (re_1, im_1, ..., re_m, im_m) with the last axis fastest; the cell
 * measure is spacing^(2m).
 */
struct PhaseSpaceGrid {
    int modes = 1;
    double spacing = kDefaultGridSpacing;
    double extent = 0.0;
    std::vector<double> axis;
    Vector values;
    GridKind kind = GridKind::q;

    static PhaseSpaceGrid make(int modes, double spacing, double extent, GridKind kind,
                               long long max_points = 8'000'000) {
        if (modes < 1 || modes > 2)
            throw InvalidParameter("PhaseSpaceGrid: only 1 or 2 modes supported");
        if (spacing <= 0.0 || extent <= 0.0)
            throw InvalidParameter("PhaseSpaceGrid: spacing and extent must be positive");
        PhaseSpaceGrid g;
        g.modes = modes;
        g.spacing = spacing;
        g.kind = kind;
        const int n = static_cast<int>(std::ceil(2.0 * extent / spacing));
        g.extent = 0.5 * n * spacing;
        g.axis.resize(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) g.axis[static_cast<size_t>(j)] = -g.extent + (j + 0.5) * spacing;
        long long pts = 1;
        for (int k = 0; k < 2 * modes; ++k) {
            pts *= n;
            if (pts > max_points)
                throw InvalidParameter("PhaseSpaceGrid: point count exceeds limit");
        }
        g.values = Vector::Zero(pts);
        return g;
    }

    int axis_size() const { return static_cast<int>(axis.size()); }
    long long point_count() const { return values.size(); }
    double cell_measure() const { return std::pow(spacing, 2.0 * modes); }

    std::vector<Complex> point(long long flat) const {
        const int n = axis_size();
        std::vector<Complex> alpha(static_cast<size_t>(modes));
        for (int mode = modes - 1; mode >= 0; --mode) {
            const double im = axis[static_cast<size_t>(flat % n)];
            flat /= n;
            const double re = axis[static_cast<size_t>(flat % n)];
            flat /= n;
            alpha[static_cast<size_t>(mode)] = Complex(re, im);
        }
        return alpha;
    }

    /// Riemann-sum mass: sum of values times the cell measure.
    Complex riemann_mass() const { return values.sum() * cell_measure(); }

    double min_real_value() const { return values.real().minCoeff(); }
    double max_abs_imag() const { return values.imag().cwiseAbs().maxCoeff(); }

    /// CSV rows: one re/im column pair per mode, then the sampled value
    /// (re/im split for characteristic-function kinds).
    void to_csv(std::ostream& os) const {
        const bool complex_valued =
            kind == GridKind::chi_n || kind == GridKind::chi_a || kind == GridKind::chi_w;
        for (int m = 0; m < modes; ++m) {
            const std::string suffix = modes == 1 ? "" : std::to_string(m + 1);
            os << "re_alpha" << suffix << ",im_alpha" << suffix << ",";
        }
        os << (complex_valued ? "re_value,im_value" : "value") << "\n";
        char buf[64];
        for (long long j = 0; j < point_count(); ++j) {
            for (const Complex& a : point(j)) {
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,", a.real(), a.imag());
                os << buf;
            }
            if (complex_valued)
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", values[j].real(),
                              values[j].imag());
            else
                std::snprintf(buf, sizeof(buf), "%.12g\n", values[j].real());
            os << buf;
        }
    }
};

/// Support radius estimate for grid sizing: sqrt of the largest per-mode
/// mean photon number.
inline double support_radius_estimate(const DensityMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.mode_count(); ++i)
        s = std::max(s, std::sqrt(mean_photon_number(rho, i)));
    return s;
}

/// Default grid for a state: extent 1 + 4 (1 + support estimate).
inline PhaseSpaceGrid default_grid_for(const DensityMatrix& rho, GridKind kind,
                                       double spacing = kDefaultGridSpacing) {
    const double extent = 1.0 + 4.0 * (1.0 + support_radius_estimate(rho));
    return PhaseSpaceGrid::make(rho.mode_count(), spacing, extent, kind);
}

// ---------------------------------------------------------------------------
// Characteristic functions
// ---------------------------------------------------------------------------

enum class Ordering { normal, antinormal, weyl };

namespace detail {

/// exp(-mu a^dag) on the truncation: lower triangular, exact (nilpotent).
inline Matrix exp_neg_mu_adag(Complex mu, int dim) {
    Matrix e = Matrix::Identity(dim, dim);
    for (int n = 0; n < dim; ++n) {
        Complex term = 1.0;
        for (int m = n + 1; m < dim; ++m) {
            term *= -mu * std::sqrt(static_cast<double>(m)) / static_cast<double>(m - n);
            e(m, n) = term;
        }
    }
    return e;
}

/// exp(mu_conj a) on the truncation: upper triangular, exact.
inline Matrix exp_muconj_a(Complex mu, int dim) {
    const Complex mc = std::conj(mu);
    Matrix e = Matrix::Identity(dim, dim);
    for (int m = 0; m < dim; ++m) {
        Complex term = 1.0;
        for (int n = m + 1; n < dim; ++n) {
            term *= mc * std::sqrt(static_cast<double>(n)) / static_cast<double>(n - m);
            e(m, n) = term;
        }
    }
    return e;
}

} // namespace detail

/// Single-mode characteristic function at mu:
///   chi_N = tr rho e^{-mu a^dag} e^{mu* a}
///   chi_A = tr rho e^{mu* a} e^{-mu a^dag}
///   chi_W = tr rho e^{-mu a^dag + mu* a}
/// built from the truncated operator exponentials. Reliable only for
/// |mu| <= 0.6 sqrt(dim); larger arguments are rejected.
inline Complex char_func(const DensityMatrix& rho, Complex mu, Ordering ordering) {
    if (rho.mode_count() != 1)
        throw InvalidParameter("char_func: single-mode state expected");
    const int d = rho.total_dim();
    if (std::abs(mu) > 0.6 * std::sqrt(static_cast<double>(d)))
        throw ArgumentOutOfReliableRange("char_func: |mu| too large for dimension " +
                                         std::to_string(d));
    switch (ordering) {
        case Ordering::normal:
            return (rho.data * detail::exp_neg_mu_adag(mu, d) * detail::exp_muconj_a(mu, d))
                .trace();
        case Ordering::antinormal:
            return (rho.data * detail::exp_muconj_a(mu, d) * detail::exp_neg_mu_adag(mu, d))
                .trace();
        case Ordering::weyl:
            return (rho.data * displacement_op(-mu, d)).trace();
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Quasi-probability distributions
// ---------------------------------------------------------------------------

namespace detail {

inline Vector product_coherent_amplitudes(const std::vector<Complex>& alpha,
                                          const FockCutoff& cutoff) {
    Vector v = coherent_amplitudes(alpha[0], cutoff.dim(0));
    for (int m = 1; m < cutoff.mode_count(); ++m) {
        const Vector next = coherent_amplitudes(alpha[static_cast<size_t>(m)], cutoff.dim(m));
        Vector joint(v.size() * next.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            joint.segment(i * next.size(), next.size()) = v[i] * next;
        v = std::move(joint);
    }
    return v;
}

} // namespace detail

/// Q(alpha) = <alpha|rho|alpha> / pi^m, exact for states living on the
/// truncation (the coherent vector is projected onto the same levels).
inline double q_function_at(const DensityMatrix& rho, const std::vector<Complex>& alpha) {
    const Vector v = detail::product_coherent_amplitudes(alpha, rho.cutoff);
    const double overlap = (v.adjoint() * rho.data * v)(0, 0).real();
    return overlap / std::pow(M_PI, rho.mode_count());
}

/// Samples the Q function on the grid. The grid must capture the state:
/// the Riemann mass has to land within `grid_tolerance` of 1.
inline PhaseSpaceGrid q_function(const DensityMatrix& rho, PhaseSpaceGrid grid,
                                 double grid_tolerance = kDefaultGridTolerance) {
    if (grid.modes != rho.mode_count())
        throw InvalidParameter("q_function: grid mode count mismatch");
    grid.kind = GridKind::q;
    for (long long j = 0; j < grid.point_count(); ++j)
        grid.values[j] = q_function_at(rho, grid.point(j));
    const double mass = grid.riemann_mass().real();
    if (std::abs(mass - 1.0) > grid_tolerance)
        throw GridTooSmall("q_function: Riemann mass " + std::to_string(mass) +
                           " outside tolerance; enlarge the grid");
    return grid;
}

/// W(alpha) via displaced parity: (2/pi)^m tr[rho prod_i D_i(alpha_i) Pi_i D_i^dag].
inline PhaseSpaceGrid wigner_function(const DensityMatrix& rho, PhaseSpaceGrid grid,
                                      double grid_tolerance = kDefaultGridTolerance) {
    if (grid.modes != rho.mode_count())
        throw InvalidParameter("wigner_function: grid mode count mismatch");
    grid.kind = GridKind::w;
    const int m = rho.mode_count();
    std::vector<Displacer> displacers;
    std::vector<Matrix> parities;
    for (int i = 0; i < m; ++i) {
        displacers.emplace_back(rho.cutoff.dim(i));
        parities.push_back(parity_op(rho.cutoff.dim(i)));
    }
    const double prefactor = std::pow(2.0 / M_PI, m);
    for (long long j = 0; j < grid.point_count(); ++j) {
        const std::vector<Complex> alpha = grid.point(j);
        Matrix kernel = Matrix::Identity(1, 1);
        for (int i = 0; i < m; ++i) {
            const Matrix d = displacers[static_cast<size_t>(i)](alpha[static_cast<size_t>(i)]);
            kernel = kron(kernel, Matrix(d * parities[static_cast<size_t>(i)] * d.adjoint()));
        }
        grid.values[j] = prefactor * (rho.data * kernel).trace().real();
    }
    const double mass = grid.riemann_mass().real();
    if (std::abs(mass - 1.0) > grid_tolerance)
        throw GridTooSmall("wigner_function: Riemann mass " + std::to_string(mass) +
                           " outside tolerance; enlarge the grid");
    return grid;
}

/// Riemann-sum mixture of coherent projectors over a sampled P function.
/// The grid must hold a true probability density: nonnegative values with
/// mass within `grid_tolerance` of 1. The discretization defect is recorded
/// as leakage, never renormalized away.
inline DensityMatrix state_from_p(const PhaseSpaceGrid& p_grid, const FockCutoff& cutoff,
                                  double grid_tolerance = kDefaultGridTolerance) {
    if (p_grid.modes != cutoff.mode_count())
        throw InvalidParameter("state_from_p: cutoff mode count mismatch");
    if (p_grid.max_abs_imag() > 1e-10)
        throw InvalidParameter("state_from_p: P samples must be real");
    if (p_grid.min_real_value() < -1e-12)
        throw NegativePFunction("state_from_p: negative P value " +
                                std::to_string(p_grid.min_real_value()));
    const double mass = p_grid.riemann_mass().real();
    if (std::abs(mass - 1.0) > grid_tolerance)
        throw GridTooSmall("state_from_p: P mass " + std::to_string(mass) +
                           " outside tolerance");

    const int total = cutoff.total_dim();
    Matrix rho = Matrix::Zero(total, total);
    const double measure = p_grid.cell_measure();
    for (long long j = 0; j < p_grid.point_count(); ++j) {
        const double w = p_grid.values[j].real() * measure;
        if (w == 0.0) continue;
        const Vector v = detail::product_coherent_amplitudes(p_grid.point(j), cutoff);
        rho.noalias() += w * (v * v.adjoint());
    }
    const double tr = rho.trace().real();
    return DensityMatrix{std::move(rho), cutoff, std::abs(1.0 - tr)};
}

/// P-function of G_kappa L_kappa rho via the rescaled input Q:
/// P(alpha) = (prod_i 1/kappa_i) Q(alpha_1/sqrt(kappa_1), ...).
/// No deconvolution is involved anywhere.
inline PhaseSpaceGrid theorem1_p_output(const DensityMatrix& rho_in,
                                        const std::vector<double>& kappa_vec,
                                        PhaseSpaceGrid grid) {
    if (static_cast<int>(kappa_vec.size()) != rho_in.mode_count())
        throw InvalidParameter("theorem1_p_output: transmittance vector length mismatch");
    if (grid.modes != rho_in.mode_count())
        throw InvalidParameter("theorem1_p_output: grid mode count mismatch");
    double prefactor = 1.0;
    for (double k : kappa_vec) {
        if (k <= 0.0 || k > 1.0)
            throw InvalidTransmittance("theorem1_p_output: transmittance outside (0,1]");
        prefactor /= k;
    }
    grid.kind = GridKind::p;
    for (long long j = 0; j < grid.point_count(); ++j) {
        std::vector<Complex> alpha = grid.point(j);
        for (size_t i = 0; i < alpha.size(); ++i) alpha[i] /= std::sqrt(kappa_vec[i]);
        grid.values[j] = prefactor * q_function_at(rho_in, alpha);
    }
    return grid;
}

/// The classical counterpart: AGN of variance 1 on every mode. Satisfies
/// P_out = Q_in and raises the mean photon number by exactly one per mode.
inline DensityMatrix classical_counterpart(const DensityMatrix& rho_in,
                                           const ChannelOptions& options = {}) {
    return apply_agn(rho_in, std::vector<double>(static_cast<size_t>(rho_in.mode_count()), 1.0),
                     options);
}

} // namespace bosonic
