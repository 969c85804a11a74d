#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bosonic/channels.hpp"
#include "bosonic/metrics.hpp"
#include "support/agn_oracle.hpp"
#include "support/test_helpers.hpp"

using namespace bosonic;

TEST_CASE("ChannelSpec validation") {
    REQUIRE_THROWS_AS(ChannelSpec({1.2}, {0.0}), InvalidTransmittance);
    REQUIRE_THROWS_AS(ChannelSpec({0.5}, {-0.1}), InvalidNoiseVariance);
    REQUIRE_THROWS_AS(ChannelSpec({0.5, 0.5}, {0.1}), InvalidParameter);
    REQUIRE(ChannelSpec({0.5, 1.0}, {0.1, 0.0}).mode_count() == 2);
}

TEST_CASE("loss_kraus") {
    SECTION("kappa = 1 is the single identity operator") {
        const KrausSet set = loss_kraus(1.0, 8);
        REQUIRE(set.operators.size() == 1);
        REQUIRE(max_abs(set.operators[0] - Matrix::Identity(8, 8)) < 1e-15);
    }
    SECTION("kappa = 0 maps |2><2| to vacuum") {
        const DensityMatrix two = number_state(2, FockCutoff::single(8));
        const DensityMatrix out = apply_loss(two, 0.0);
        REQUIRE(std::abs(out.data(0, 0) - Complex(1.0)) < 1e-12);
    }
    SECTION("kappa = 0.5 on |1><1| gives diag(0.5, 0.5)") {
        // explicit 2-level oracle: A_0|1> = sqrt(k)|1>, A_1|1> = sqrt(1-k)|0>
        const DensityMatrix one = number_state(1, FockCutoff::single(8));
        const DensityMatrix out = apply_loss(one, 0.5);
        REQUIRE(std::abs(out.data(0, 0).real() - 0.5) < 1e-12);
        REQUIRE(std::abs(out.data(1, 1).real() - 0.5) < 1e-12);
    }
    SECTION("completeness defect on the reliable subspace") {
        for (double k : {0.1, 0.5, 0.9})
            REQUIRE(loss_kraus(k, 30).completeness_defect < 1e-8);
    }
    REQUIRE_THROWS_AS(loss_kraus(-0.1, 8), InvalidTransmittance);
    REQUIRE_THROWS_AS(loss_kraus(1.1, 8), InvalidTransmittance);
}

TEST_CASE("apply_loss") {
    SECTION("kappa = 1 is the identity map") {
        std::mt19937_64 rng(3);
        const DensityMatrix rho = bosonic::testing::random_state(rng, 12, 8);
        REQUIRE(max_abs(apply_loss(rho, 1.0).data - rho.data) < 1e-12);
    }
    SECTION("coherent states stay coherent: alpha -> sqrt(kappa) alpha") {
        const FockCutoff cut = FockCutoff::single(30);
        const DensityMatrix in = coherent_state(1.5, cut);
        const DensityMatrix out = apply_loss(in, 0.6);
        const DensityMatrix target = coherent_state(std::sqrt(0.6) * 1.5, cut);
        REQUIRE(trace_distance(out, target) < 1e-8);
    }
    SECTION("mean photons scale by kappa") {
        std::mt19937_64 rng(5);
        for (double kappa : {0.3, 0.7}) {
            const DensityMatrix rho = bosonic::testing::random_state(rng, 24, 12);
            const double before = mean_photon_number(rho, 0);
            const double after = mean_photon_number(apply_loss(rho, kappa), 0);
            REQUIRE(std::abs(after - kappa * before) < 1e-8);
        }
    }
    SECTION("matches the beamsplitter-with-vacuum-ancilla construction") {
        const DensityMatrix in = number_state(2, FockCutoff::single(16));
        const DensityMatrix direct = apply_loss(in, 0.4);
        // vacuum ancilla = thermal with nbar -> 0
        const Matrix u = bosonic::testing::beamsplitter_unitary(0.4, 16, 16);
        Matrix anc = Matrix::Zero(16, 16);
        anc(0, 0) = 1.0;
        const Matrix joint = u * kron(in.data, anc) * u.adjoint();
        const DensityMatrix reduced =
            partial_trace(DensityMatrix{joint, FockCutoff({16, 16}), 0.0}, {0});
        REQUIRE(max_abs(direct.data - reduced.data) < 1e-10);
    }
    SECTION("acts per mode on multimode states") {
        const DensityMatrix joint = tensor(coherent_state(1.0, FockCutoff::single(18)),
                                           coherent_state(0.5, FockCutoff::single(12)));
        const DensityMatrix out = apply_loss(joint, {0.25, 1.0});
        REQUIRE(std::abs(mean_photon_number(out, 0) - 0.25) < 1e-8);
        REQUIRE(std::abs(mean_photon_number(out, 1) - 0.25) < 1e-8);
    }
    REQUIRE_THROWS_AS(
        apply_loss(number_state(0, FockCutoff::single(4)), std::vector<double>{0.5, 0.5}),
        InvalidParameter);
}

TEST_CASE("apply_agn") {
    SECTION("N = 0 is the identity map") {
        std::mt19937_64 rng(9);
        const DensityMatrix rho = bosonic::testing::random_state(rng, 10, 6);
        REQUIRE(max_abs(apply_agn(rho, 0.0).data - rho.data) < 1e-15);
    }
    SECTION("vacuum plus N = 1 noise is the mean-1 thermal state") {
        const DensityMatrix out = apply_agn(number_state(0, FockCutoff::single(40)), 1.0);
        // geometric diagonal oracle (1/2)(1/2)^n
        for (int n = 0; n < 20; ++n)
            REQUIRE(std::abs(out.data(n, n).real() - 0.5 * std::pow(0.5, n)) < 1e-6);
        REQUIRE(max_abs(out.data - Matrix(out.data.diagonal().asDiagonal())) < 1e-9);
    }
    SECTION("mean photons increase by exactly N") {
        const DensityMatrix in = coherent_state(1.0, FockCutoff::single(30));
        const DensityMatrix out = apply_agn(in, 0.5);
        REQUIRE(std::abs(mean_photon_number(out, 0) - mean_photon_number(in, 0) - 0.5) <
                1e-6);
    }
    SECTION("trace is preserved") {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 3; ++trial) {
            const DensityMatrix rho = bosonic::testing::random_state(rng, 30, 10);
            REQUIRE(std::abs(apply_agn(rho, 0.8).trace() - rho.trace()) < 1e-8);
        }
    }
    SECTION("complete positivity probe") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 3; ++trial) {
            const DensityMatrix rho = bosonic::testing::random_state(rng, 28, 9);
            REQUIRE(min_eigenvalue_hermitian(apply_agn(rho, 0.6).data) > -1e-9);
        }
    }
    SECTION("purity never increases under noise") {
        std::mt19937_64 rng(19);
        for (int trial = 0; trial < 3; ++trial) {
            const DensityMatrix rho = bosonic::testing::random_state(rng, 26, 8);
            REQUIRE(apply_agn(rho, 0.4).purity() <= rho.purity() + 1e-9);
        }
    }
    SECTION("matches the beamsplitter-with-thermal-ancilla oracle") {
        const DensityMatrix in = number_state(1, FockCutoff::single(30));
        const DensityMatrix direct = apply_agn(apply_loss(in, 0.5), 0.8);
        const DensityMatrix oracle =
            bosonic::testing::agn_after_loss_via_beamsplitter(in, 0.5, 0.8, 40);
        REQUIRE(trace_norm_hermitian(direct.data - oracle.data) < 1e-5);
    }
    SECTION("insufficient headroom is rejected") {
        const DensityMatrix top = number_state(8, FockCutoff::single(10));
        REQUIRE_THROWS_AS(apply_agn(top, 1.0), CutoffHeadroomInsufficient);
    }
    REQUIRE_THROWS_AS(apply_agn(number_state(0, FockCutoff::single(30)), -0.5),
                      InvalidNoiseVariance);
}

TEST_CASE("commutation identity L_kappa G_N = G_{kappa N} L_kappa") {
    const DensityMatrix one = number_state(1, FockCutoff::single(40));
    SECTION("identity loss gives zero defect") {
        REQUIRE(commutation_defect(one, 1.0, 0.7) < 1e-10);
    }
    SECTION("zero noise gives zero defect") {
        REQUIRE(commutation_defect(one, 0.5, 0.0) < 1e-10);
    }
    SECTION("spec probe at cutoff 60") {
        const DensityMatrix probe = number_state(1, FockCutoff::single(60));
        REQUIRE(commutation_defect(probe, 0.5, 0.8) < 1e-6);
    }
    SECTION("holds across the (kappa, N) grid") {
        ChannelOptions fast;
        fast.quadrature_order = 21; // the defect is insensitive to the order
        for (double kappa : {0.1, 0.5, 0.9})
            for (double noise : {0.1, 1.0, 2.0})
                REQUIRE(commutation_defect(one, kappa, noise, fast) < 1e-6);
    }
}
