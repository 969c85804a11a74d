#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "bosonic/metrics.hpp"
#include "bosonic/phase_space.hpp"

using namespace bosonic;

namespace {

std::vector<Complex> mu_disc(double radius, double step) {
    std::vector<Complex> pts;
    for (double re = -radius; re <= radius + 1e-12; re += step)
        for (double im = -radius; im <= radius + 1e-12; im += step)
            if (std::hypot(re, im) <= radius) pts.emplace_back(re, im);
    return pts;
}

} // namespace

TEST_CASE("char_func basics") {
    const DensityMatrix sq = squeezed_vacuum(0.3, FockCutoff::single(40));
    SECTION("mu = 0 gives the trace for every ordering") {
        for (Ordering o : {Ordering::normal, Ordering::antinormal, Ordering::weyl})
            REQUIRE(std::abs(char_func(sq, 0.0, o) - Complex(1.0)) < 1e-12);
    }
    SECTION("vacuum Weyl characteristic function is exp(-|mu|^2/2)") {
        const DensityMatrix vac = number_state(0, FockCutoff::single(30));
        const Complex mu(0.6, 0.8); // |mu| = 1
        REQUIRE(std::abs(char_func(vac, mu, Ordering::weyl) - std::exp(-0.5)) < 1e-8);
    }
    SECTION("out-of-range arguments are rejected") {
        REQUIRE_THROWS_AS(char_func(sq, Complex(4.5, 0.0), Ordering::weyl),
                          ArgumentOutOfReliableRange);
    }
}

TEST_CASE("ordering relations chi_N = e^{|mu|^2/2} chi_W = e^{|mu|^2} chi_A") {
    const DensityMatrix sq = squeezed_vacuum(0.3, FockCutoff::single(40));
    for (const Complex& mu : mu_disc(2.0, 0.5)) {
        const Complex n = char_func(sq, mu, Ordering::normal);
        const Complex w = char_func(sq, mu, Ordering::weyl);
        const Complex a = char_func(sq, mu, Ordering::antinormal);
        const double m2 = std::norm(mu);
        REQUIRE(std::abs(n - std::exp(0.5 * m2) * w) < 1e-7);
        REQUIRE(std::abs(n - std::exp(m2) * a) < 1e-7);
    }
}

TEST_CASE("loss transforms chi_A as chi_A(sqrt(kappa) mu) exp(-(1-kappa)|mu|^2)") {
    const FockCutoff cut = FockCutoff::single(40);
    const std::vector<DensityMatrix> fixtures = {number_state(1, cut),
                                                 squeezed_vacuum(0.5, cut)};
    for (const DensityMatrix& rho : fixtures) {
        for (double kappa : {0.3, 0.7}) {
            const DensityMatrix lossy = apply_loss(rho, kappa);
            for (const Complex& mu : mu_disc(2.0, 0.5)) {
                const Complex lhs = char_func(lossy, mu, Ordering::antinormal);
                const Complex rhs =
                    char_func(rho, std::sqrt(kappa) * mu, Ordering::antinormal) *
                    std::exp(-(1.0 - kappa) * std::norm(mu));
                REQUIRE(std::abs(lhs - rhs) < 1e-6);
            }
        }
    }
}

TEST_CASE("q_function") {
    SECTION("vacuum closed form") {
        const DensityMatrix vac = number_state(0, FockCutoff::single(20));
        for (const Complex& a : mu_disc(2.0, 0.8)) {
            const double expected = std::exp(-std::norm(a)) / M_PI;
            REQUIRE(std::abs(q_function_at(vac, {a}) - expected) < 1e-10);
        }
    }
    SECTION("|1><1| closed form") {
        const DensityMatrix one = number_state(1, FockCutoff::single(20));
        for (const Complex& a : mu_disc(2.0, 0.8)) {
            const double expected = std::norm(a) * std::exp(-std::norm(a)) / M_PI;
            REQUIRE(std::abs(q_function_at(one, {a}) - expected) < 1e-10);
        }
    }
    SECTION("normalization on the spec grid") {
        const DensityMatrix coh = coherent_state(1.0, FockCutoff::single(30));
        const PhaseSpaceGrid grid = q_function(
            coh, PhaseSpaceGrid::make(1, 0.1, 6.0, GridKind::q));
        REQUIRE(std::abs(grid.riemann_mass().real() - 1.0) < 1e-4);
        REQUIRE(grid.min_real_value() > -1e-12);
    }
    SECTION("undersized grids are rejected") {
        const DensityMatrix coh = coherent_state(2.0, FockCutoff::single(30));
        REQUIRE_THROWS_AS(
            q_function(coh, PhaseSpaceGrid::make(1, 0.1, 1.0, GridKind::q)),
            GridTooSmall);
    }
}

TEST_CASE("wigner_function") {
    SECTION("vacuum closed form") {
        const DensityMatrix vac = number_state(0, FockCutoff::single(24));
        PhaseSpaceGrid grid = wigner_function(
            vac, PhaseSpaceGrid::make(1, 0.2, 5.0, GridKind::w));
        for (long long j = 0; j < grid.point_count(); j += 97) {
            const Complex a = grid.point(j)[0];
            const double expected = (2.0 / M_PI) * std::exp(-2.0 * std::norm(a));
            REQUIRE(std::abs(grid.values[j].real() - expected) < 1e-8);
        }
    }
    SECTION("one photon is negative at the origin") {
        const DensityMatrix one = number_state(1, FockCutoff::single(24));
        PhaseSpaceGrid grid = wigner_function(
            one, PhaseSpaceGrid::make(1, 0.5, 6.0, GridKind::w));
        // the grid is midpoint-centered, so probe the near-origin cell
        double min_w = grid.min_real_value();
        REQUIRE(min_w < -0.5);           // clearly negative region
        REQUIRE(min_w > -2.0 / M_PI - 1e-6); // bounded by the parity value at 0
    }
    SECTION("squeezed vacuum has a nonnegative Wigner function") {
        const DensityMatrix sq = squeezed_vacuum(0.5, FockCutoff::single(40));
        const PhaseSpaceGrid grid = wigner_function(sq, default_grid_for(sq, GridKind::w));
        REQUIRE(grid.min_real_value() >= -1e-9);
    }
}

TEST_CASE("fourier transform of sampled chi_W reproduces sampled W") {
    const DensityMatrix one = number_state(1, FockCutoff::single(80));
    const double extent = 5.0, dmu = 0.25;
    const int n = static_cast<int>(std::round(2 * extent / dmu));
    std::vector<double> axis(n);
    for (int j = 0; j < n; ++j) axis[j] = -extent + (j + 0.5) * dmu;

    std::vector<Complex> chi(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            chi[static_cast<size_t>(i) * n + j] =
                char_func(one, Complex(axis[i], axis[j]), Ordering::weyl);

    const Displacer displace(80);
    const Matrix parity = parity_op(80);
    double worst = 0.0;
    for (double x = -1.5; x <= 1.5; x += 0.5) {
        for (double y = -1.5; y <= 1.5; y += 0.5) {
            Complex acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    acc += chi[static_cast<size_t>(i) * n + j] *
                           std::exp(Complex(0.0, -2.0 * (axis[i] * y - axis[j] * x)));
            const double w_ft = acc.real() * dmu * dmu / (M_PI * M_PI);
            const Matrix d = displace(Complex(x, y));
            const double w_direct =
                (2.0 / M_PI) *
                (one.data * d * parity * d.adjoint()).trace().real();
            worst = std::max(worst, std::abs(w_ft - w_direct));
        }
    }
    REQUIRE(worst < 2e-3);
}

TEST_CASE("state_from_p") {
    SECTION("narrow Gaussian P approximates a coherent state") {
        const Complex alpha0(1.0, 0.0);
        const double var = 0.01;
        PhaseSpaceGrid grid = PhaseSpaceGrid::make(1, 0.05, 6.0, GridKind::p);
        for (long long j = 0; j < grid.point_count(); ++j) {
            const Complex a = grid.point(j)[0];
            grid.values[j] = std::exp(-std::norm(a - alpha0) / var) / (M_PI * var);
        }
        const FockCutoff cut = FockCutoff::single(30);
        const DensityMatrix rec = state_from_p(grid, cut);
        REQUIRE(trace_distance(rec, coherent_state(alpha0, cut)) < 0.05);
    }
    SECTION("thermal Gaussian P reproduces the thermal state") {
        PhaseSpaceGrid grid = PhaseSpaceGrid::make(1, 0.1, 9.0, GridKind::p);
        for (long long j = 0; j < grid.point_count(); ++j)
            grid.values[j] = std::exp(-std::norm(grid.point(j)[0])) / M_PI; // N = 1
        const FockCutoff cut = FockCutoff::single(40);
        const DensityMatrix rec = state_from_p(grid, cut);
        REQUIRE(trace_distance(rec, thermal_state(1.0, cut)) < 1e-3);
    }
    SECTION("negative P values are rejected") {
        PhaseSpaceGrid grid = PhaseSpaceGrid::make(1, 0.2, 3.0, GridKind::p);
        for (long long j = 0; j < grid.point_count(); ++j)
            grid.values[j] = std::exp(-std::norm(grid.point(j)[0])) / M_PI;
        grid.values[0] = -0.01;
        REQUIRE_THROWS_AS(state_from_p(grid, FockCutoff::single(20)), NegativePFunction);
    }
    SECTION("badly normalized grids are rejected") {
        PhaseSpaceGrid grid = PhaseSpaceGrid::make(1, 0.2, 3.0, GridKind::p);
        grid.values.setConstant(0.001);
        REQUIRE_THROWS_AS(state_from_p(grid, FockCutoff::single(20)), GridTooSmall);
    }
}

TEST_CASE("theorem1_p_output") {
    const FockCutoff cut = FockCutoff::single(40);
    const DensityMatrix one = number_state(1, cut);
    SECTION("kappa = 1 gives P = Q") {
        const PhaseSpaceGrid p =
            theorem1_p_output(one, {1.0}, PhaseSpaceGrid::make(1, 0.2, 6.0, GridKind::p));
        for (long long j = 0; j < p.point_count(); j += 31)
            REQUIRE(std::abs(p.values[j].real() - q_function_at(one, p.point(j))) < 1e-12);
    }
    SECTION("kappa = 0.25 on |1><1|: P(alpha) = 4 |2 alpha|^2 e^{-|2 alpha|^2} / pi") {
        const PhaseSpaceGrid p = theorem1_p_output(
            one, {0.25}, PhaseSpaceGrid::make(1, 0.1, 5.0, GridKind::p));
        for (long long j = 0; j < p.point_count(); j += 41) {
            const Complex a2 = 2.0 * p.point(j)[0];
            const double expected = 4.0 * std::norm(a2) * std::exp(-std::norm(a2)) / M_PI;
            REQUIRE(std::abs(p.values[j].real() - expected) < 1e-10);
        }
    }
    SECTION("mass is preserved by the change of variables") {
        const PhaseSpaceGrid p = theorem1_p_output(
            one, {0.5}, PhaseSpaceGrid::make(1, 0.1, 8.0, GridKind::p));
        REQUIRE(std::abs(p.riemann_mass().real() - 1.0) < 1e-4);
    }
    SECTION("kappa = 0 is rejected") {
        REQUIRE_THROWS_AS(
            theorem1_p_output(one, {0.0}, PhaseSpaceGrid::make(1, 0.2, 4.0, GridKind::p)),
            InvalidTransmittance);
    }
}

TEST_CASE("theorem 1 end to end: reconstruction matches the channel output") {
    const FockCutoff cut = FockCutoff::single(40);
    const std::vector<DensityMatrix> fixtures = {number_state(1, cut),
                                                 squeezed_vacuum(0.5, cut)};
    for (const DensityMatrix& rho : fixtures) {
        for (double kappa : {0.25, 0.5}) {
            const DensityMatrix direct = apply_agn(apply_loss(rho, kappa), kappa);
            const PhaseSpaceGrid p =
                theorem1_p_output(rho, {kappa}, default_grid_for(rho, GridKind::p));
            const DensityMatrix rec = state_from_p(p, cut);
            REQUIRE(trace_distance(rec, direct) < 5e-3);
        }
    }
}

TEST_CASE("theorem 1 vector form on a two-mode product state") {
    const DensityMatrix rho = tensor(number_state(1, FockCutoff::single(10)),
                                     number_state(0, FockCutoff::single(8)));
    const std::vector<double> kappa = {0.25, 0.5};
    const DensityMatrix direct = apply_agn(apply_loss(rho, kappa), kappa);
    const PhaseSpaceGrid p =
        theorem1_p_output(rho, kappa, PhaseSpaceGrid::make(2, 0.4, 4.2, GridKind::p));
    const DensityMatrix rec = state_from_p(p, rho.cutoff);
    REQUIRE(trace_distance(rec, direct) < 5e-3);
}

TEST_CASE("classical_counterpart") {
    SECTION("vacuum maps to the mean-1 thermal state") {
        const DensityMatrix out =
            classical_counterpart(number_state(0, FockCutoff::single(40)));
        for (int n = 0; n < 10; ++n)
            REQUIRE(std::abs(out.data(n, n).real() - 0.5 * std::pow(0.5, n)) < 1e-6);
    }
    SECTION("raises the mean photon number by exactly one") {
        const DensityMatrix in = coherent_state(1.0, FockCutoff::single(40));
        const DensityMatrix out = classical_counterpart(in);
        REQUIRE(std::abs(mean_photon_number(out, 0) - mean_photon_number(in, 0) - 1.0) <
                1e-6);
    }
    SECTION("output equals the P = Q reconstruction (Lemma 1 route)") {
        const FockCutoff cut = FockCutoff::single(40);
        for (const DensityMatrix& rho :
             {number_state(1, cut), squeezed_vacuum(0.5, cut)}) {
            const DensityMatrix counterpart = classical_counterpart(rho);
            PhaseSpaceGrid q = q_function(rho, default_grid_for(rho, GridKind::q, 0.05));
            q.kind = GridKind::p; // Lemma 1: the output P equals the input Q
            const DensityMatrix rec = state_from_p(q, cut);
            REQUIRE(trace_distance(rec, counterpart) < 1e-5);
        }
    }
}

TEST_CASE("lemma 2 route: P = W for nonnegative-Wigner states, noise 1/2") {
    const FockCutoff cut = FockCutoff::single(40);
    const DensityMatrix sq = squeezed_vacuum(0.5, cut);
    const DensityMatrix direct = apply_agn(sq, 0.5);
    PhaseSpaceGrid w = wigner_function(sq, default_grid_for(sq, GridKind::w));
    w.kind = GridKind::p;
    // clamp the tiny negative tails from finite-precision parity sums
    for (long long j = 0; j < w.point_count(); ++j)
        if (w.values[j].real() < 0.0 && w.values[j].real() > -1e-12) w.values[j] = 0.0;
    const DensityMatrix rec = state_from_p(w, cut);
    REQUIRE(trace_distance(rec, direct) < 1e-5);
}

TEST_CASE("grid CSV export") {
    const DensityMatrix vac = number_state(0, FockCutoff::single(10));
    const PhaseSpaceGrid grid =
        q_function(vac, PhaseSpaceGrid::make(1, 0.5, 4.0, GridKind::q));
    std::ostringstream os;
    grid.to_csv(os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    REQUIRE(header == "re_alpha,im_alpha,value");
    long long rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    REQUIRE(rows == grid.point_count());
}
