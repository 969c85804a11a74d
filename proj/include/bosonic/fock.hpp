#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "bosonic/errors.hpp"
#include "bosonic/linalg.hpp"

namespace bosonic {

/// Trace mass a state constructor may silently lose to truncation.
inline constexpr double kDefaultLeakageBudget = 1e-8;

/// Upper bound on the total Hilbert-space dimension of any state.
inline constexpr int kDefaultMaxTotalDim = 4096;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// ---------------------------------------------------------------------------
// FockCutoff
// ---------------------------------------------------------------------------

/// Per-mode truncation of the bosonic Fock space: mode i keeps levels
/// 0 .. dim(i)-1. Joint indices are row-major with mode 0 slowest.
class FockCutoff {
  public:
    explicit FockCutoff(std::vector<int> per_mode_dims,
                        int max_total_dim = kDefaultMaxTotalDim)
        : dims_(std::move(per_mode_dims)) {
        if (dims_.empty())
            throw InvalidParameter("FockCutoff: need at least one mode");
        long long total = 1;
        for (int d : dims_) {
            if (d < 2)
                throw InvalidParameter("FockCutoff: every per-mode dimension must be >= 2");
            total *= d;
            if (total > max_total_dim)
                throw DimensionOverflow("FockCutoff: total dimension " +
                                        std::to_string(total) + " exceeds limit " +
                                        std::to_string(max_total_dim));
        }
    }

    static FockCutoff single(int dim, int max_total_dim = kDefaultMaxTotalDim) {
        return FockCutoff(std::vector<int>{dim}, max_total_dim);
    }

    int mode_count() const { return static_cast<int>(dims_.size()); }
    int dim(int mode) const { return dims_.at(static_cast<size_t>(mode)); }
    const std::vector<int>& dims() const { return dims_; }

    int total_dim() const {
        return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
    }

    /// Row-major strides: flat index = sum_i n_i * stride(i).
    std::vector<int> strides() const {
        std::vector<int> s(dims_.size());
        int acc = 1;
        for (int i = mode_count() - 1; i >= 0; --i) {
            s[static_cast<size_t>(i)] = acc;
            acc *= dims_[static_cast<size_t>(i)];
        }
        return s;
    }

    friend bool operator==(const FockCutoff& a, const FockCutoff& b) {
        return a.dims_ == b.dims_;
    }
    friend bool operator!=(const FockCutoff& a, const FockCutoff& b) { return !(a == b); }

  private:
    std::vector<int> dims_;
};

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

/// Multimode state in a truncated Fock basis. `leakage` records the trace
/// mass lost to truncation or grid discretization; nothing is renormalized.
struct DensityMatrix {
    Matrix data;
    FockCutoff cutoff;
    double leakage = 0.0;

    int total_dim() const { return cutoff.total_dim(); }
    int mode_count() const { return cutoff.mode_count(); }

    double trace() const { return data.trace().real(); }
    double purity() const { return (data * data).trace().real(); }

    double hermiticity_defect() const { return max_abs(data - data.adjoint()); }

    /// Checks Hermiticity, positivity and trace against the given budget.
    /// Returns an explanation of the first violated invariant, empty if valid.
    std::string invariant_violation(double trace_budget = kDefaultLeakageBudget) const {
        if (data.rows() != data.cols() || data.rows() != total_dim())
            return "matrix dimension does not match cutoff";
        if (hermiticity_defect() > kHermitianTol)
            return "not Hermitian to 1e-12";
        if (min_eigenvalue_hermitian(data) < -kPsdTol)
            return "negative eigenvalue below -1e-10";
        const double tr = trace();
        if (tr < 1.0 - trace_budget || tr > 1.0 + trace_budget)
            return "trace " + std::to_string(tr) + " outside budget " +
                   std::to_string(trace_budget);
        return {};
    }

    bool valid(double trace_budget = kDefaultLeakageBudget) const {
        return invariant_violation(trace_budget).empty();
    }
};

// ---------------------------------------------------------------------------
// Mode operators
// ---------------------------------------------------------------------------

/// Annihilation operator on a single truncated mode: a|n> = sqrt(n)|n-1>.
inline Matrix annihilation_op(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Matrix creation_op(int dim) { return annihilation_op(dim).adjoint(); }

inline Matrix number_op(int dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

inline Matrix parity_op(int dim) {
    Matrix p = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return p;
}

/**
 * Builds truncated displacement operators D(beta) = exp(beta a^dag - beta* a)
 * for one mode dimension. The generator is anti-Hermitian, so the truncated
 * exponential is exactly unitary; displacement channels built from it are
 * trace preserving on the truncation.
 *
 * Uses the phase identity D(r e^{i theta}) = Theta exp(r (a^dag - a)) Theta^dag
 * with Theta = diag(e^{i n theta}), so a single eigendecomposition of
 * K = -i (a^dag - a) serves all amplitudes for a given dimension.
 */
class Displacer {
  public:
    explicit Displacer(int dim) : dim_(dim) {
        Matrix k = Matrix::Zero(dim, dim);
        for (int n = 1; n < dim; ++n) {
            const double s = std::sqrt(static_cast<double>(n));
            k(n, n - 1) = Complex(0.0, -s);
            k(n - 1, n) = Complex(0.0, s);
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(k);
        eigvals_ = es.eigenvalues();
        eigvecs_ = es.eigenvectors();
    }

    int dim() const { return dim_; }

    Matrix operator()(Complex beta) const {
        const double r = std::abs(beta);
        if (r == 0.0) return Matrix::Identity(dim_, dim_);
        const double theta = std::arg(beta);
        Vector phase(dim_);
        for (int n = 0; n < dim_; ++n)
            phase[n] = std::exp(Complex(0.0, theta * static_cast<double>(n)));
        Vector expo(dim_);
        for (int n = 0; n < dim_; ++n)
            expo[n] = std::exp(Complex(0.0, r * eigvals_[n]));
        Matrix core = (eigvecs_ * expo.asDiagonal()) * eigvecs_.adjoint();
        return phase.asDiagonal() * core * phase.conjugate().asDiagonal();
    }

  private:
    int dim_;
    RealVector eigvals_;
    Matrix eigvecs_;
};

/// Truncated single-mode displacement operator, cached per dimension.
inline Matrix displacement_op(Complex beta, int dim) {
    static std::mutex mu;
    static std::map<int, Displacer> cache;
    const Displacer* d = nullptr;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(dim);
        if (it == cache.end()) it = cache.emplace(dim, Displacer(dim)).first;
        d = &it->second;
    }
    return (*d)(beta);
}

// ---------------------------------------------------------------------------
// State constructors
// ---------------------------------------------------------------------------

/// Fock amplitudes of the coherent state |alpha> projected onto levels 0..dim-1:
/// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!). Not renormalized.
inline Vector coherent_amplitudes(Complex alpha, int dim) {
    Vector c(dim);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return c;
}

inline DensityMatrix coherent_state(Complex alpha, const FockCutoff& cutoff,
                                    double leakage_budget = kDefaultLeakageBudget) {
    if (cutoff.mode_count() != 1)
        throw InvalidParameter("coherent_state: single-mode cutoff expected");
    const int d = cutoff.dim(0);
    Vector c = coherent_amplitudes(alpha, d);
    const double captured = c.squaredNorm();
    const double leak = 1.0 - captured;
    if (leak > leakage_budget)
        throw CutoffTooSmall("coherent_state: Poisson tail " + std::to_string(leak) +
                             " exceeds leakage budget");
    return DensityMatrix{c * c.adjoint(), cutoff, std::max(leak, 0.0)};
}

inline DensityMatrix number_state(int n, const FockCutoff& cutoff) {
    if (cutoff.mode_count() != 1)
        throw InvalidParameter("number_state: single-mode cutoff expected");
    if (n < 0) throw InvalidParameter("number_state: n must be nonnegative");
    const int d = cutoff.dim(0);
    if (n >= d)
        throw CutoffTooSmall("number_state: level " + std::to_string(n) +
                             " not below dimension " + std::to_string(d));
    Matrix rho = Matrix::Zero(d, d);
    rho(n, n) = 1.0;
    return DensityMatrix{std::move(rho), cutoff, 0.0};
}

/// Squeezed vacuum with even-level amplitudes
/// c_{2k} = sech(r)^{1/2} (-tanh r)^k sqrt((2k)!)/(2^k k!).
inline DensityMatrix squeezed_vacuum(double r, const FockCutoff& cutoff,
                                     double leakage_budget = kDefaultLeakageBudget) {
    if (cutoff.mode_count() != 1)
        throw InvalidParameter("squeezed_vacuum: single-mode cutoff expected");
    const int d = cutoff.dim(0);
    Vector c = Vector::Zero(d);
    c[0] = 1.0 / std::sqrt(std::cosh(r));
    const double t = -std::tanh(r);
    for (int k = 1; 2 * k < d; ++k) {
        const double m = 2.0 * k;
        c[2 * k] = c[2 * k - 2] * t * std::sqrt(m * (m - 1.0)) / m;
    }
    const double leak = 1.0 - c.squaredNorm();
    if (leak > leakage_budget)
        throw CutoffTooSmall("squeezed_vacuum: even-photon tail " + std::to_string(leak) +
                             " exceeds leakage budget");
    return DensityMatrix{c * c.adjoint(), cutoff, std::max(leak, 0.0)};
}

/// Thermal state with mean photon number nbar (diagonal geometric mixture).
inline DensityMatrix thermal_state(double nbar, const FockCutoff& cutoff,
                                   double leakage_budget = kDefaultLeakageBudget) {
    if (cutoff.mode_count() != 1)
        throw InvalidParameter("thermal_state: single-mode cutoff expected");
    if (nbar < 0) throw InvalidParameter("thermal_state: nbar must be >= 0");
    const int d = cutoff.dim(0);
    Matrix rho = Matrix::Zero(d, d);
    const double ratio = nbar / (nbar + 1.0);
    double p = 1.0 / (nbar + 1.0);
    double captured = 0.0;
    for (int n = 0; n < d; ++n) {
        rho(n, n) = p;
        captured += p;
        p *= ratio;
    }
    const double leak = 1.0 - captured;
    if (leak > leakage_budget)
        throw CutoffTooSmall("thermal_state: geometric tail exceeds leakage budget");
    return DensityMatrix{std::move(rho), cutoff, std::max(leak, 0.0)};
}

/// Two-mode squeezed vacuum |psi> = sqrt(1-lambda^2) sum_n lambda^n |n,n>
/// with lambda = sqrt(Ns/(Ns+1)); each marginal is thermal with mean Ns.
inline DensityMatrix qidc_state(double mean_signal_photons, const FockCutoff& cutoff,
                                double leakage_budget = kDefaultLeakageBudget) {
    if (cutoff.mode_count() != 2)
        throw InvalidParameter("qidc_state: two-mode cutoff expected");
    if (mean_signal_photons < 0)
        throw InvalidParameter("qidc_state: mean signal photons must be >= 0");
    const double lambda = std::sqrt(mean_signal_photons / (mean_signal_photons + 1.0));
    const int d0 = cutoff.dim(0), d1 = cutoff.dim(1);
    const int schmidt_terms = std::min(d0, d1);
    Vector psi = Vector::Zero(d0 * d1);
    const double norm0 = std::sqrt(1.0 - lambda * lambda);
    double amp = norm0;
    for (int n = 0; n < schmidt_terms; ++n) {
        psi[n * d1 + n] = amp;
        amp *= lambda;
    }
    const double leak = 1.0 - psi.squaredNorm();
    if (leak > leakage_budget)
        throw CutoffTooSmall("qidc_state: geometric tail " + std::to_string(leak) +
                             " exceeds leakage budget");
    return DensityMatrix{psi * psi.adjoint(), cutoff, std::max(leak, 0.0)};
}

// ---------------------------------------------------------------------------
// Composition and reduction
// ---------------------------------------------------------------------------

inline DensityMatrix tensor(const DensityMatrix& rho1, const DensityMatrix& rho2,
                            int max_total_dim = kDefaultMaxTotalDim) {
    const long long total =
        static_cast<long long>(rho1.total_dim()) * rho2.total_dim();
    if (total > max_total_dim)
        throw DimensionOverflow("tensor: combined dimension " + std::to_string(total) +
                                " exceeds limit " + std::to_string(max_total_dim));
    std::vector<int> dims = rho1.cutoff.dims();
    dims.insert(dims.end(), rho2.cutoff.dims().begin(), rho2.cutoff.dims().end());
    const double leak = 1.0 - (1.0 - rho1.leakage) * (1.0 - rho2.leakage);
    return DensityMatrix{kron(rho1.data, rho2.data), FockCutoff(dims, max_total_dim),
                         leak};
}

/// Reduced state on the given modes (order preserved as listed).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int m = rho.mode_count();
    if (keep.empty()) throw InvalidModeIndex("partial_trace: keep list is empty");
    std::vector<bool> kept(static_cast<size_t>(m), false);
    for (int k : keep) {
        if (k < 0 || k >= m)
            throw InvalidModeIndex("partial_trace: mode " + std::to_string(k) +
                                   " out of range");
        if (kept[static_cast<size_t>(k)])
            throw InvalidModeIndex("partial_trace: duplicate mode in keep list");
        kept[static_cast<size_t>(k)] = true;
    }

    std::vector<int> traced;
    for (int i = 0; i < m; ++i)
        if (!kept[static_cast<size_t>(i)]) traced.push_back(i);

    const std::vector<int> strides = rho.cutoff.strides();
    std::vector<int> keep_dims;
    keep_dims.reserve(keep.size());
    for (int k : keep) keep_dims.push_back(rho.cutoff.dim(k));

    int keep_total = 1;
    for (int d : keep_dims) keep_total *= d;
    int traced_total = 1;
    for (int t : traced) traced_total *= rho.cutoff.dim(t);

    // flat offsets of every traced-mode configuration
    std::vector<int> traced_offsets(static_cast<size_t>(traced_total), 0);
    {
        std::vector<int> idx(traced.size(), 0);
        for (int c = 0; c < traced_total; ++c) {
            int off = 0;
            for (size_t j = 0; j < traced.size(); ++j)
                off += idx[j] * strides[static_cast<size_t>(traced[j])];
            traced_offsets[static_cast<size_t>(c)] = off;
            for (int j = static_cast<int>(traced.size()) - 1; j >= 0; --j) {
                if (++idx[static_cast<size_t>(j)] < rho.cutoff.dim(traced[static_cast<size_t>(j)]))
                    break;
                idx[static_cast<size_t>(j)] = 0;
            }
        }
    }

    auto keep_offset = [&](int flat) {
        int off = 0;
        for (int j = static_cast<int>(keep.size()) - 1; j >= 0; --j) {
            const int d = keep_dims[static_cast<size_t>(j)];
            off += (flat % d) * strides[static_cast<size_t>(keep[static_cast<size_t>(j)])];
            flat /= d;
        }
        return off;
    };

    Matrix out = Matrix::Zero(keep_total, keep_total);
    for (int i = 0; i < keep_total; ++i) {
        const int ri = keep_offset(i);
        for (int j = 0; j < keep_total; ++j) {
            const int cj = keep_offset(j);
            Complex acc = 0.0;
            for (int off : traced_offsets) acc += rho.data(ri + off, cj + off);
            out(i, j) = acc;
        }
    }
    return DensityMatrix{std::move(out), FockCutoff(keep_dims), rho.leakage};
}

/// tr(rho a_i^dag a_i): the number operator is diagonal in the Fock basis,
/// so this is a weighted diagonal sum.
inline double mean_photon_number(const DensityMatrix& rho, int mode) {
    const int m = rho.mode_count();
    if (mode < 0 || mode >= m)
        throw InvalidModeIndex("mean_photon_number: mode out of range");
    const std::vector<int> strides = rho.cutoff.strides();
    const int stride = strides[static_cast<size_t>(mode)];
    const int dim = rho.cutoff.dim(mode);
    double acc = 0.0;
    for (int flat = 0; flat < rho.total_dim(); ++flat) {
        const int level = (flat / stride) % dim;
        acc += level * rho.data(flat, flat).real();
    }
    return acc;
}

inline double total_mean_photon_number(const DensityMatrix& rho) {
    double acc = 0.0;
    for (int i = 0; i < rho.mode_count(); ++i) acc += mean_photon_number(rho, i);
    return acc;
}

/// Highest Fock level of `mode` carrying diagonal mass above the threshold.
inline int occupied_level(const DensityMatrix& rho, int mode, double threshold = 1e-12) {
    const std::vector<int> strides = rho.cutoff.strides();
    const int stride = strides[static_cast<size_t>(mode)];
    const int dim = rho.cutoff.dim(mode);
    std::vector<double> mass(static_cast<size_t>(dim), 0.0);
    for (int flat = 0; flat < rho.total_dim(); ++flat)
        mass[static_cast<size_t>((flat / stride) % dim)] += rho.data(flat, flat).real();
    for (int n = dim - 1; n >= 0; --n)
        if (mass[static_cast<size_t>(n)] > threshold) return n;
    return 0;
}

/// Default per-mode dimension heuristic: mean + 6 sigma + 10 + expected
/// added noise photons. Keeps constructor leakage below 1e-8 for the
/// parameter ranges the verification suites use.
inline int suggest_cutoff(double mean_photons, double photon_variance,
                          double added_noise_photons = 0.0) {
    return static_cast<int>(std::ceil(mean_photons + 6.0 * std::sqrt(photon_variance) +
                                      10.0 + added_noise_photons));
}

} // namespace bosonic
