#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bosonic/channels.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/linalg.hpp"
#include "bosonic/phase_space.hpp"

namespace bosonic {

inline constexpr double kDominanceSlack = 1e-9;
inline constexpr double kMinDenominator = 1e-6;

/// Pairs a bound formula value with an exactly computed trace distance.
struct BoundReport {
    std::string bound_name;
    std::vector<std::pair<std::string, double>> params;
    double bound_value = 0.0;
    std::optional<double> measured_value;
    double margin = 0.0; // bound - measured (bound itself when nothing measured)
    bool satisfied = true;

    static BoundReport make(std::string name,
                            std::vector<std::pair<std::string, double>> params,
                            double bound, std::optional<double> measured) {
        BoundReport r;
        r.bound_name = std::move(name);
        r.params = std::move(params);
        r.bound_value = bound;
        r.measured_value = measured;
        r.margin = measured ? bound - *measured : bound;
        r.satisfied = !measured || *measured <= bound + kDominanceSlack;
        return r;
    }
};

// ---------------------------------------------------------------------------
// Trace distance
// ---------------------------------------------------------------------------

/// ||rho1 - rho2||_1 without the 1/2 factor: sum of absolute eigenvalues of
/// the difference, in [0, 2].
inline double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.cutoff != rho2.cutoff)
        throw CutoffMismatch("trace_distance: cutoffs differ");
    return trace_norm_hermitian(rho1.data - rho2.data);
}

// ---------------------------------------------------------------------------
// Bound formulas (kept separate from any eigendecomposition path so that
// dominance tests compare genuinely independent computations)
// ---------------------------------------------------------------------------

/// Fidelity-based bound 2 [1 - <alpha|rho'|alpha>]^{1/2} on the trace
/// distance between |alpha><alpha| and rho'.
inline double uhlmann_bound(Complex alpha, const DensityMatrix& rho_prime) {
    if (rho_prime.mode_count() != 1)
        throw InvalidParameter("uhlmann_bound: single-mode state expected");
    const Vector v = coherent_amplitudes(alpha, rho_prime.total_dim());
    double overlap = (v.adjoint() * rho_prime.data * v)(0, 0).real();
    overlap = std::min(std::max(overlap, 0.0), 1.0);
    return 2.0 * std::sqrt(1.0 - overlap);
}

/// ||rho - G_N rho||_1 <= 2 sqrt(N/(N+1)) for single-mode classical rho.
inline double bound_theorem2(double noise) {
    if (noise < 0.0) throw InvalidNoiseVariance("bound_theorem2: negative noise variance");
    return 2.0 * std::sqrt(noise / (noise + 1.0));
}

/// ||(G_N1 - G_N2) rho||_1 <= 2 (N1 - N2)/N2 for classical rho, N1 >= N2.
inline double bound_theorem3(double n1, double n2) {
    if (n1 < n2) throw InvalidOrdering("bound_theorem3: requires N1 >= N2");
    if (n2 < kMinDenominator)
        throw DegenerateDenominator("bound_theorem3: N2 below " +
                                    std::to_string(kMinDenominator));
    return 2.0 * (n1 - n2) / n2;
}

enum class Theorem4Reading { printed, permode };

/**
 * Two-mode bound on ||(G_Na - G_Nb) rho||_1 for classical rho with
 * Na >= Nb componentwise. The printed index pattern mixes mode and vector
 * labels, so both readings are available:
 *   printed: 2 [ (Na1-Na2)/Na2 + (Nb1-Nb2)/Nb2 + 2 (Na1-Na2)(Nb1-Nb2)/(Na2 Nb2) ]
 *   permode: 2 [ (Na1-Nb1)/Nb1 + (Na2-Nb2)/Nb2 + 2 (Na1-Nb1)(Na2-Nb2)/(Nb1 Nb2) ]
 * Under the permode reading a mode with Na_i == Nb_i contributes zero even
 * at Nb_i = 0 (the maps agree on that mode).
 */
inline double bound_theorem4(const std::array<double, 2>& na,
                             const std::array<double, 2>& nb, Theorem4Reading reading) {
    for (int i = 0; i < 2; ++i) {
        if (na[static_cast<size_t>(i)] < 0.0 || nb[static_cast<size_t>(i)] < 0.0)
            throw InvalidNoiseVariance("bound_theorem4: negative noise variance");
        if (na[static_cast<size_t>(i)] < nb[static_cast<size_t>(i)])
            throw InvalidOrdering("bound_theorem4: requires Na >= Nb componentwise");
    }
    if (reading == Theorem4Reading::printed) {
        if (na[1] < kMinDenominator || nb[1] < kMinDenominator)
            throw DegenerateDenominator("bound_theorem4: printed reading needs Na2, Nb2 > 0");
        const double ta = (na[0] - na[1]) / na[1];
        const double tb = (nb[0] - nb[1]) / nb[1];
        return 2.0 * (ta + tb + 2.0 * ta * tb);
    }
    double terms[2];
    for (int i = 0; i < 2; ++i) {
        const double diff = na[static_cast<size_t>(i)] - nb[static_cast<size_t>(i)];
        if (diff == 0.0) {
            terms[i] = 0.0;
        } else {
            if (nb[static_cast<size_t>(i)] < kMinDenominator)
                throw DegenerateDenominator("bound_theorem4: Nb" + std::to_string(i + 1) +
                                            " below " + std::to_string(kMinDenominator));
            terms[i] = diff / nb[static_cast<size_t>(i)];
        }
    }
    return 2.0 * (terms[0] + terms[1] + 2.0 * terms[0] * terms[1]);
}

struct Theorem5Bound {
    double value = 0.0;
    /// The bound caps nothing once it exceeds the trace-distance maximum 2.
    bool vacuous = false;
};

/// ||rho - G_N rho||_1 <= 2 sum_i sqrt(N_i/(N_i+1)) for m-mode classical rho.
inline Theorem5Bound bound_theorem5(const std::vector<double>& noise_vec) {
    double sum = 0.0;
    for (double n : noise_vec) {
        if (n < 0.0) throw InvalidNoiseVariance("bound_theorem5: negative noise variance");
        sum += std::sqrt(n / (n + 1.0));
    }
    Theorem5Bound b;
    b.value = 2.0 * sum;
    b.vacuous = b.value > 2.0;
    return b;
}

// ---------------------------------------------------------------------------
// Lemma checks
// ---------------------------------------------------------------------------

/// |tr rho1 X - tr rho2 X| <= ||rho1 - rho2||_1 for any POVM element X.
inline BoundReport lemma3_probability_gap(const DensityMatrix& rho1,
                                          const DensityMatrix& rho2,
                                          const Matrix& povm_element) {
    if (rho1.cutoff != rho2.cutoff)
        throw CutoffMismatch("lemma3_probability_gap: cutoffs differ");
    if (povm_element.rows() != rho1.data.rows() ||
        povm_element.cols() != rho1.data.cols())
        throw InvalidPovmElement("lemma3_probability_gap: POVM element dimension mismatch");
    if (max_abs(povm_element - povm_element.adjoint()) > 1e-10)
        throw InvalidPovmElement("lemma3_probability_gap: POVM element not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(povm_element), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 || es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
        throw InvalidPovmElement("lemma3_probability_gap: POVM element outside [0, I]");

    const double gap = std::abs((rho1.data * povm_element).trace().real() -
                                (rho2.data * povm_element).trace().real());
    const double dist = trace_distance(rho1, rho2);
    return BoundReport::make("lemma3", {{"gap", gap}}, dist, gap);
}

/// ||A (x) B - C (x) D||_1 <= ||B|| ||A - C||_1 + ||C|| ||B - D||_1,
/// both sides computed exactly on the truncation.
inline BoundReport lemma4_tensor_bound(const DensityMatrix& a, const DensityMatrix& b,
                                       const DensityMatrix& c, const DensityMatrix& d) {
    if (a.cutoff != c.cutoff)
        throw CutoffMismatch("lemma4_tensor_bound: A and C cutoffs differ");
    if (b.cutoff != d.cutoff)
        throw CutoffMismatch("lemma4_tensor_bound: B and D cutoffs differ");
    const double lhs = trace_norm_hermitian(kron(a.data, b.data) - kron(c.data, d.data));
    const double rhs = operator_norm_hermitian(b.data) * trace_norm_hermitian(a.data - c.data) +
                       operator_norm_hermitian(c.data) * trace_norm_hermitian(b.data - d.data);
    return BoundReport::make("lemma4", {{"lhs", lhs}}, rhs, lhs);
}

// ---------------------------------------------------------------------------
// Classical fixtures and dominance sweeps
// ---------------------------------------------------------------------------

/// A state whose classicality is established by construction provenance;
/// dominance sweeps only accept these (deciding classicality of an
/// arbitrary truncated matrix is out of scope).
struct ClassicalFixture {
    DensityMatrix state;
    std::string provenance;
};

inline ClassicalFixture classical_coherent(Complex alpha, const FockCutoff& cutoff) {
    return {coherent_state(alpha, cutoff), "coherent"};
}

inline ClassicalFixture classical_thermal(double nbar, const FockCutoff& cutoff) {
    return {thermal_state(nbar, cutoff), "thermal"};
}

/// Finite mixture of coherent states (weights normalized by the caller).
inline ClassicalFixture classical_p_mixture(const std::vector<Complex>& alphas,
                                            const std::vector<double>& weights,
                                            const FockCutoff& cutoff) {
    if (alphas.size() != weights.size() || alphas.empty())
        throw InvalidParameter("classical_p_mixture: need matching nonempty lists");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InvalidParameter("classical_p_mixture: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw InvalidParameter("classical_p_mixture: weights must sum to 1");
    Matrix rho = Matrix::Zero(cutoff.total_dim(), cutoff.total_dim());
    double leak = 0.0;
    for (size_t i = 0; i < alphas.size(); ++i) {
        const DensityMatrix c = coherent_state(alphas[i], cutoff);
        rho += weights[i] * c.data;
        leak += weights[i] * c.leakage;
    }
    return {DensityMatrix{std::move(rho), cutoff, leak}, "p_mixture"};
}

inline ClassicalFixture classical_from_p(const PhaseSpaceGrid& p_grid,
                                         const FockCutoff& cutoff,
                                         double grid_tolerance = kDefaultGridTolerance) {
    return {state_from_p(p_grid, cutoff, grid_tolerance), "state_from_p"};
}

inline ClassicalFixture classical_tensor(const ClassicalFixture& f1,
                                         const ClassicalFixture& f2) {
    return {tensor(f1.state, f2.state), f1.provenance + "*" + f2.provenance};
}

enum class BoundName { theorem2, theorem3, theorem4_printed, theorem4_permode, theorem5 };

inline const char* bound_name_string(BoundName b) {
    switch (b) {
        case BoundName::theorem2: return "theorem2";
        case BoundName::theorem3: return "theorem3";
        case BoundName::theorem4_printed: return "theorem4_printed";
        case BoundName::theorem4_permode: return "theorem4_permode";
        case BoundName::theorem5: return "theorem5";
    }
    return "?";
}

/**
 * Runs a dominance check per parameter point: the exact trace distance is
 * computed by eigendecomposition and compared against the bound formula.
 * Point layouts:
 *   theorem2: {N}
 *   theorem3: {N1, N2}                (measured: ||G_N1 rho - G_N2 rho||_1)
 *   theorem5: {N_1, ..., N_m}         (measured: ||rho - G_N rho||_1)
 *   theorem4_*: {Na1, Na2, Nb1, Nb2}  (two-mode fixture required)
 */
inline std::vector<BoundReport> dominance_sweep(const ClassicalFixture& fixture,
                                                BoundName bound,
                                                const std::vector<std::vector<double>>& points,
                                                const ChannelOptions& options = {}) {
    std::vector<BoundReport> reports;
    reports.reserve(points.size());
    const DensityMatrix& rho = fixture.state;
    for (const std::vector<double>& pt : points) {
        switch (bound) {
            case BoundName::theorem2: {
                if (pt.size() != 1)
                    throw InvalidParameter("dominance_sweep: theorem2 point is {N}");
                const double n = pt[0];
                const double measured = trace_distance(rho, apply_agn(rho, n, options));
                reports.push_back(BoundReport::make("theorem2", {{"N", n}},
                                                    bound_theorem2(n), measured));
                break;
            }
            case BoundName::theorem3: {
                if (pt.size() != 2)
                    throw InvalidParameter("dominance_sweep: theorem3 point is {N1,N2}");
                const double measured = trace_distance(apply_agn(rho, pt[0], options),
                                                       apply_agn(rho, pt[1], options));
                reports.push_back(BoundReport::make("theorem3",
                                                    {{"N1", pt[0]}, {"N2", pt[1]}},
                                                    bound_theorem3(pt[0], pt[1]), measured));
                break;
            }
            case BoundName::theorem5: {
                if (pt.size() != static_cast<size_t>(rho.mode_count()))
                    throw InvalidParameter("dominance_sweep: theorem5 point is per-mode N");
                const double measured = trace_distance(rho, apply_agn(rho, pt, options));
                std::vector<std::pair<std::string, double>> params;
                for (size_t i = 0; i < pt.size(); ++i)
                    params.emplace_back("N" + std::to_string(i + 1), pt[i]);
                const Theorem5Bound b = bound_theorem5(pt);
                BoundReport r = BoundReport::make("theorem5", std::move(params), b.value, measured);
                if (b.vacuous) r.bound_name = "theorem5_vacuous";
                reports.push_back(std::move(r));
                break;
            }
            case BoundName::theorem4_printed:
            case BoundName::theorem4_permode: {
                if (pt.size() != 4 || rho.mode_count() != 2)
                    throw InvalidParameter(
                        "dominance_sweep: theorem4 needs a two-mode fixture and {Na1,Na2,Nb1,Nb2}");
                const std::array<double, 2> na{pt[0], pt[1]}, nb{pt[2], pt[3]};
                const double measured =
                    trace_distance(apply_agn(rho, {na[0], na[1]}, options),
                                   apply_agn(rho, {nb[0], nb[1]}, options));
                const Theorem4Reading reading = bound == BoundName::theorem4_printed
                                                    ? Theorem4Reading::printed
                                                    : Theorem4Reading::permode;
                reports.push_back(BoundReport::make(
                    bound_name_string(bound),
                    {{"Na1", na[0]}, {"Na2", na[1]}, {"Nb1", nb[0]}, {"Nb2", nb[1]}},
                    bound_theorem4(na, nb, reading), measured));
                break;
            }
        }
    }
    return reports;
}

} // namespace bosonic
