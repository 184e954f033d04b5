#include "jch/jacobi.hpp"
#include "jch/model.hpp"
#include "jch/spectral.hpp"

#include "oracles/frozen_values.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace jch;

TEST(FreeFieldModes, BandCentreOfFortyOneSites) {
    const auto t = free_field_modes(ModelParams{41});
    EXPECT_NEAR(t.mode(21).freq, 0.0, 1e-15);
    EXPECT_NEAR(t.v(21, 21) * t.v(21, 21), 1.0 / 21.0, 1e-15);
    EXPECT_EQ(t.v(2, 21), 0.0); // node of an even mode at the centre
}

TEST(FreeFieldModes, OrthonormalAndComplete) {
    for (int n : {2, 3, 16, 41, 64}) {
        const auto t = free_field_modes(ModelParams{n});
        const RealMatrix id = RealMatrix::Identity(n, n);
        EXPECT_LT((t.profile.transpose() * t.profile - id).cwiseAbs().maxCoeff(), 1e-12) << n;
        EXPECT_LT((t.profile * t.profile.transpose() - id).cwiseAbs().maxCoeff(), 1e-12) << n;
    }
}

TEST(FreeFieldModes, StrictlyIncreasingFrequencies) {
    for (int n : {2, 7, 100, 201}) {
        const auto t = free_field_modes(ModelParams{n, 1.0, 0.0, 0.3});
        for (int m = 2; m <= n; ++m) EXPECT_LT(t.mode(m - 1).freq, t.mode(m).freq);
    }
}

TEST(DressedSpectrum, ResonantModeIsEvenlySplit) {
    const ModelParams p{41, 1.0, 0.2};
    const auto& m = mode_table(p).mode(21); // omega_k = omega_a = 0
    EXPECT_NEAR(m.a_plus, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.a_minus, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.b_plus, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.b_minus, -1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.eps_plus, 0.2, 1e-15);
    EXPECT_NEAR(m.eps_minus, -0.2, 1e-15);
}

TEST(DressedSpectrum, VanishingCouplingGivesBareAtom) {
    // Delta > 0: the upper branch becomes the bare atom
    const auto& m = mode_table(ModelParams{5, 1.0, 1e-9, 0.0, 3.0}).mode(2);
    EXPECT_GT(m.detuning, 0.0);
    EXPECT_NEAR(m.a_plus, 0.0, 1e-9);
    EXPECT_NEAR(m.b_plus, 1.0, 1e-15);
    const auto& m0 = mode_table(ModelParams{5, 1.0, 0.0, 0.0, 3.0}).mode(2);
    EXPECT_EQ(m0.a_plus, 0.0);
    EXPECT_EQ(m0.b_plus, 1.0);
    EXPECT_EQ(m0.a_minus, 1.0);
}

TEST(DressedSpectrum, AmplitudeAndEnergyIdentities) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> wa(-3.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelParams p{3 + trial, 1.0, testing_util::log_uniform(rng, 1e-3, 1e3), 0.0, wa(rng)};
        for (const auto& m : mode_table(p).modes) {
            EXPECT_NEAR(m.a_plus * m.a_plus + m.b_plus * m.b_plus, 1.0, 1e-12);
            EXPECT_NEAR(m.a_minus * m.a_minus + m.b_minus * m.b_minus, 1.0, 1e-12);
            EXPECT_NEAR(m.eps_plus + m.eps_minus, p.atom_freq + m.freq, 1e-12 * std::max(1.0, p.coupling));
            EXPECT_NEAR(m.eps_plus - m.eps_minus, m.rabi, 1e-12 * std::max(1.0, p.coupling));
        }
    }
}

TEST(DressedSpectrum, SmallChainMatchesFrozenSpectrum) {
    const auto e02 = dressed_energies(mode_table(ModelParams{3, 1.0, 0.2}));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(e02[i], oracle::kSpectrumN3g02[i], 1e-10);
    const auto e1e3 = dressed_energies(mode_table(ModelParams{3, 1.0, 1e3}));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(e1e3[i], oracle::kSpectrumN3g1e3[i], 1e-10);
    const auto e16 = dressed_energies(mode_table(ModelParams{16, 1.0, 1.0}));
    for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(e16[i], oracle::kSpectrumN16g1[i], 1e-10);
}

TEST(DressedSpectrum, MatchesJacobiEigenvalues) {
    for (int n : {3, 16, 41, 64}) {
        for (double g : {1e-3, 0.2, 1.0, 1e3}) {
            const ModelParams p{n, 1.0, g, 0.0, 0.1};
            const auto ev = jacobi_eigenvalues(build_hamiltonian(p).matrix);
            const auto eps = dressed_energies(mode_table(p));
            for (int i = 0; i < 2 * n; ++i) {
                EXPECT_NEAR(ev(i), eps[static_cast<std::size_t>(i)], 1e-10) << "n=" << n << " g=" << g;
            }
        }
    }
}

TEST(EigenstateVector, ResidualAndOrthogonality) {
    std::mt19937_64 rng(9);
    for (double g : {1e-3, 1.0, 1e3}) {
        const ModelParams p{9, 1.0, g, 0.0, 0.37};
        const auto modes = mode_table(p);
        const auto h = build_hamiltonian(p);
        const double hmax = h.matrix.cwiseAbs().maxCoeff();
        std::vector<PureState> states;
        for (int m = 1; m <= 9; ++m) {
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                const auto psi = eigenstate_vector(m, b, modes);
                EXPECT_NEAR(norm(psi), 1.0, 1e-14);
                const ComplexVector r = h.apply(psi.amplitudes()) - modes.mode(m).energy(b) * psi.amplitudes();
                EXPECT_LE(r.norm(), 1e-10 * hmax) << "g=" << g << " m=" << m;
                states.push_back(psi);
            }
        }
        for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t j = i + 1; j < states.size(); ++j)
                EXPECT_LT(std::abs(states[i].amplitudes().dot(states[j].amplitudes())), 1e-12);
    }
}

TEST(EigenstateVector, ResonantModeSplitsWeightEqually) {
    const auto modes = mode_table(ModelParams{41, 1.0, 0.01});
    const auto psi = eigenstate_vector(21, Branch::Minus, modes);
    EXPECT_NEAR(psi.photon_block().norm(), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(psi.atom_block().norm(), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_THROW(eigenstate_vector(42, Branch::Plus, modes), std::out_of_range);
    EXPECT_THROW(eigenstate_vector(1, Branch::Plus, free_field_modes(ModelParams{4})), std::logic_error);
}
