#include <cmath>
#include <complex>
#include <numbers>

#include "gtest/gtest.h"

#include "fpsearch/fpsearch.hpp"
#include "test_support.hpp"

using namespace fpsearch;
using test_support::max_amplitude_deviation;
using test_support::random_state;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Layout, BitPositionsAndParts) {
    const auto lay = RegisterLayout::make(3, true, 2);
    EXPECT_EQ(lay.total_qubits(), 6);
    EXPECT_EQ(lay.dimension(), 64u);
    EXPECT_EQ(lay.ancilla1_bit(), 5);
    EXPECT_EQ(lay.register_bit(0), 2);
    EXPECT_EQ(lay.ancilla2_bit(1), 1);
    const std::size_t idx = lay.index_of(1, 0b101, 0b10);
    EXPECT_EQ(lay.ancilla1_part(idx), 1);
    EXPECT_EQ(lay.register_part(idx), 0b101u);
    EXPECT_EQ(lay.ancilla2_part(idx), 0b10u);
}

TEST(Layout, RejectsOverCap) {
    EXPECT_THROW(RegisterLayout::make(23, false, 0), std::invalid_argument);
    EXPECT_THROW(RegisterLayout::make(12, true, 12), std::invalid_argument);
    EXPECT_NO_THROW(RegisterLayout::make(22, false, 0));
}

TEST(TargetSetOps, ValidationAndContains) {
    TargetSet t({2, 0, 2}, 2);  // duplicates collapse
    EXPECT_EQ(t.size(), 2u);
    EXPECT_TRUE(t.contains(0));
    EXPECT_FALSE(t.contains(1));
    EXPECT_DOUBLE_EQ(t.fraction(2), 0.5);
    EXPECT_THROW(TargetSet({4}, 2), std::invalid_argument);
    EXPECT_TRUE(TargetSet().empty());
}

TEST(SelectivePhase, ZeroPhaseIsIdentity) {
    const auto lay = RegisterLayout::register_only(3);
    const PureState s = random_state(lay, 11);
    const PureState out = apply_selective_phase(s, TargetSet({1, 5}, 3), 0.0);
    EXPECT_LT(max_amplitude_deviation(out, s), 1e-15);
}

TEST(SelectivePhase, PiNegatesMarkedAmplitude) {
    const auto lay = RegisterLayout::register_only(2);
    const PureState s = random_state(lay, 12);
    const PureState out = apply_selective_phase(s, TargetSet({2}, 2), kPi);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        const Cplx expect = (i == 2) ? -s[i] : s[i];
        EXPECT_LT(std::abs(out[i] - expect), 1e-12);
    }
}

// One full O(pi/3, pi/3) pass: R_t, U†, R_s, U applied to U|s> yields
// non-target probability eps^3. Checked against the direct expression and the
// independent two-level model.
TEST(SelectivePhase, PiOverThreeContraction) {
    const int n = 3;
    const TargetSet target({1, 4, 6}, n);
    for (double eps : {0.1, 0.25, 0.6, 0.9}) {
        const auto u = UnitarySpec::with_target_overlap(n, target, eps, 77);
        const auto lay = RegisterLayout::register_only(n);
        const PureState source = PureState::basis_state(lay, 0);
        PureState state = apply_unitary(source, u);
        apply_selective_phase_in_place(state, target, kPi / 3.0);
        apply_unitary_in_place(state, u, Subspace::Register, true);
        apply_selective_phase_in_place(state, source, kPi / 3.0);
        apply_unitary_in_place(state, u, Subspace::Register, false);
        const double err = 1.0 - target_probability(state, target);
        EXPECT_NEAR(err, eps * eps * eps, 1e-12);
        EXPECT_NEAR(err, test_support::eq5_error(eps), 1e-12);
        EXPECT_NEAR(err, test_support::two_level_o_error(kPi / 3.0, kPi / 3.0, eps), 1e-12);
    }
}

TEST(SelectivePhase, EmptySelectionStrictThrows) {
    const auto lay = RegisterLayout::register_only(2);
    const PureState s = random_state(lay, 13);
    EXPECT_THROW(apply_selective_phase(s, TargetSet(), 1.0), DegenerateSelectionError);
    EXPECT_NO_THROW(apply_selective_phase(s, TargetSet(), 1.0, /*allow_empty=*/true));
}

TEST(ApplyUnitary, WalshOnZeroGivesUniform) {
    const int n = 4;
    const auto lay = RegisterLayout::register_only(n);
    PureState s = PureState::basis_state(lay, 0);
    apply_unitary_in_place(s, UnitarySpec::walsh_hadamard(n));
    const double expect = 1.0 / std::sqrt(16.0);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        EXPECT_LT(std::abs(s[i] - Cplx(expect, 0.0)), 1e-14);
    }
}

TEST(ApplyUnitary, WalshMarkedFraction) {
    // n = 2, one marked state: |U_ts|^2 = 1/4
    const auto lay = RegisterLayout::register_only(2);
    PureState s = PureState::basis_state(lay, 0);
    apply_unitary_in_place(s, UnitarySpec::walsh_hadamard(2));
    EXPECT_NEAR(target_probability(s, TargetSet({3}, 2)), 0.25, 1e-14);
}

TEST(ApplyUnitary, AdjointRoundTrip) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto lay = RegisterLayout::register_only(3);
        const auto u = UnitarySpec::random_haar(3, seed);
        const PureState s = random_state(lay, 100 + seed);
        PureState t = apply_unitary(s, u);
        apply_unitary_in_place(t, u, Subspace::Register, true);
        EXPECT_LT(max_amplitude_deviation(t, s), 1e-12);
    }
}

TEST(ApplyUnitary, DenseOnRegisterLeavesAncillasAlone) {
    // A register unitary must act identically on every ancilla block.
    const auto lay = RegisterLayout::make(2, true, 1);
    const auto u = UnitarySpec::random_haar(2, 9);
    const PureState s = random_state(lay, 14);
    const PureState out = apply_unitary(s, u);
    // compare each (a1, a2) slice against a register-only application
    const auto reg_lay = RegisterLayout::register_only(2);
    for (int a1 = 0; a1 < 2; ++a1) {
        for (std::size_t a2 = 0; a2 < 2; ++a2) {
            std::vector<Cplx> slice(4);
            double norm2 = 0.0;
            for (std::size_t r = 0; r < 4; ++r) {
                slice[r] = s[lay.index_of(a1, r, a2)];
                norm2 += std::norm(slice[r]);
            }
            if (norm2 < 1e-12) continue;
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& a : slice) a *= inv;
            PureState block(reg_lay, slice);
            apply_unitary_in_place(block, u);
            for (std::size_t r = 0; r < 4; ++r) {
                EXPECT_LT(std::abs(block[r] / inv - out[lay.index_of(a1, r, a2)]), 1e-12);
            }
        }
    }
}

TEST(ApplyUnitary, DimensionMismatchThrows) {
    const auto lay = RegisterLayout::register_only(3);
    const PureState s = PureState::basis_state(lay, 0);
    EXPECT_THROW(apply_unitary(s, UnitarySpec::walsh_hadamard(2)), std::invalid_argument);
    EXPECT_THROW(apply_unitary(s, UnitarySpec::random_haar(2, 1), Subspace::Joint), std::invalid_argument);
}

TEST(UnitarySpec, RejectsNonUnitaryMatrix) {
    std::vector<Cplx> bad{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}};
    EXPECT_THROW(UnitarySpec::dense(1, bad), std::invalid_argument);
    EXPECT_THROW(UnitarySpec::dense(1, std::vector<Cplx>(3)), std::invalid_argument);
}

TEST(UnitarySpec, TargetOverlapIsExact) {
    const TargetSet target({0, 3, 5}, 3);
    for (double eps : {0.0, 0.3, 0.5, 1.0}) {
        const auto u = UnitarySpec::with_target_overlap(3, target, eps, 5);
        const auto lay = RegisterLayout::register_only(3);
        const PureState s = apply_unitary(PureState::basis_state(lay, 0), u);
        EXPECT_NEAR(target_probability(s, target), 1.0 - eps, 1e-13);
    }
    EXPECT_THROW(UnitarySpec::with_target_overlap(2, TargetSet(), 0.5, 1), std::invalid_argument);
    EXPECT_THROW(UnitarySpec::with_target_overlap(1, TargetSet({0, 1}, 1), 0.5, 1), std::invalid_argument);
}

TEST(UnitarySpec, WalshEntryMatchesApplication) {
    const auto u = UnitarySpec::walsh_hadamard(2);
    EXPECT_NEAR(u.entry(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(u.entry(3, 3).real(), 0.5, 1e-15);
    EXPECT_NEAR(u.entry(3, 1).real(), -0.5, 1e-15);
}

TEST(Overlap, SelfOverlapIsOne) {
    const auto lay = RegisterLayout::register_only(3);
    const PureState s = random_state(lay, 21);
    const Cplx o = overlap(s, s);
    EXPECT_NEAR(o.real(), 1.0, 1e-13);
    EXPECT_NEAR(o.imag(), 0.0, 1e-13);
}

TEST(Overlap, LayoutMismatchThrows) {
    const PureState a = PureState::basis_state(RegisterLayout::register_only(2), 0);
    const PureState b = PureState::basis_state(RegisterLayout::register_only(3), 0);
    EXPECT_THROW(overlap(a, b), std::invalid_argument);
}

TEST(TargetProbability, UniformTwoQubits) {
    PureState s = PureState::basis_state(RegisterLayout::register_only(2), 0);
    apply_unitary_in_place(s, UnitarySpec::walsh_hadamard(2));
    EXPECT_NEAR(target_probability(s, TargetSet({1}, 2)), 0.25, 1e-14);
}

TEST(TargetProbability, AfterPiOverThreeIteration) {
    // eps = 0.25: target probability after O(pi/3, pi/3) is 1 - 0.015625
    const TargetSet target({2}, 2);
    const auto u = UnitarySpec::with_target_overlap(2, target, 0.25, 3);
    const auto lay = RegisterLayout::register_only(2);
    const PureState source = PureState::basis_state(lay, 0);
    PureState state = apply_unitary(source, u);
    apply_selective_phase_in_place(state, target, kPi / 3.0);
    apply_unitary_in_place(state, u, Subspace::Register, true);
    apply_selective_phase_in_place(state, source, kPi / 3.0);
    apply_unitary_in_place(state, u, Subspace::Register, false);
    EXPECT_NEAR(target_probability(state, target), 1.0 - 0.015625, 1e-12);
}

TEST(Measurement, DeterministicQubitLeavesStateUnchanged) {
    // ancilla-2 is |0>: outcome 0 with probability 1
    const auto lay = RegisterLayout::make(2, false, 1);
    PureState s = PureState::basis_state(lay, lay.index_of(0, 2, 0));
    apply_unitary_in_place(s, UnitarySpec::walsh_hadamard(2));
    const auto branches = measure_qubit_branches(s, lay.ancilla2_bit(0));
    EXPECT_NEAR(branches[0].probability, 1.0, 1e-14);
    ASSERT_TRUE(branches[0].state.has_value());
    EXPECT_FALSE(branches[1].state.has_value());
    EXPECT_LT(max_amplitude_deviation(*branches[0].state, s), 1e-13);
}

TEST(Measurement, EqualSuperpositionBranches) {
    const auto lay = RegisterLayout::register_only(1);
    PureState s = PureState::basis_state(lay, 0);
    apply_hadamard_bit_in_place(s, 0);
    const auto branches = measure_qubit_branches(s, 0);
    EXPECT_NEAR(branches[0].probability, 0.5, 1e-14);
    EXPECT_NEAR(branches[1].probability, 0.5, 1e-14);
    ASSERT_TRUE(branches[0].state.has_value());
    ASSERT_TRUE(branches[1].state.has_value());
}

TEST(Measurement, BranchProbabilitiesSumToOne) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto lay = RegisterLayout::make(2, true, 1);
        const PureState s = random_state(lay, 300 + seed);
        for (int bit = 0; bit < lay.total_qubits(); ++bit) {
            const auto branches = measure_qubit_branches(s, bit);
            EXPECT_NEAR(branches[0].probability + branches[1].probability, 1.0, 1e-12);
        }
    }
}

TEST(Measurement, SampledNeverPicksNullBranch) {
    const auto lay = RegisterLayout::make(1, false, 1);
    const PureState s = PureState::basis_state(lay, lay.index_of(0, 1, 0));  // ancilla |0>
    Prng rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto m = measure_qubit_sampled(s, lay.ancilla2_bit(0), rng);
        EXPECT_EQ(m.outcome, 0);
    }
}

TEST(Measurement, RenormalizingNullVectorThrows) {
    const auto lay = RegisterLayout::register_only(1);
    PureState s = PureState::basis_state(lay, 0);
    s[0] = Cplx(0.0, 0.0);
    EXPECT_THROW(s.renormalize(), ZeroBranchError);
}

// Property: norm is preserved within 1e-12 by any random sequence of
// selective phases and unitaries.
TEST(Properties, NormPreservationUnderRandomSequences) {
    Prng rng(987);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        const auto lay = RegisterLayout::register_only(n);
        PureState s = random_state(lay, 1000 + trial);
        const auto u = UnitarySpec::random_haar(n, 2000 + trial);
        const auto w = UnitarySpec::walsh_hadamard(n);
        const PureState sel_state = random_state(lay, 3000 + trial);
        for (int step = 0; step < 30; ++step) {
            switch (rng.next_u64() % 4) {
                case 0:
                    apply_unitary_in_place(s, u, Subspace::Register, rng.next_u64() % 2 == 0);
                    break;
                case 1:
                    apply_unitary_in_place(s, w);
                    break;
                case 2:
                    apply_selective_phase_in_place(
                        s, TargetSet({rng.next_u64() % lay.register_dimension()}, n),
                        rng.uniform() * 2.0 * kPi - kPi);
                    break;
                case 3:
                    apply_selective_phase_in_place(s, sel_state, rng.uniform() * 2.0 * kPi - kPi);
                    break;
            }
        }
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

// Property: R^phi followed by R^-phi is the identity, for both selector kinds.
TEST(Properties, PhaseInverseRoundTrip) {
    Prng rng(555);
    for (int trial = 0; trial < 10; ++trial) {
        const auto lay = RegisterLayout::register_only(3);
        const PureState s = random_state(lay, 4000 + trial);
        const double phi = rng.uniform() * 2.0 * kPi - kPi;
        const TargetSet sel({rng.next_u64() % 8, rng.next_u64() % 8}, 3);
        PureState t = apply_selective_phase(s, sel, phi);
        apply_selective_phase_in_place(t, sel, -phi);
        EXPECT_LT(max_amplitude_deviation(t, s), 1e-12);

        const PureState sel_state = random_state(lay, 5000 + trial);
        PureState t2 = apply_selective_phase(s, sel_state, phi);
        apply_selective_phase_in_place(t2, sel_state, -phi);
        EXPECT_LT(max_amplitude_deviation(t2, s), 1e-12);
    }
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
    Prng a = Prng::stream(42, 0);
    Prng b = Prng::stream(42, 0);
    Prng c = Prng::stream(42, 1);
    bool any_diff = false;
    for (int i = 0; i < 16; ++i) {
        const auto va = a.next_u64();
        EXPECT_EQ(va, b.next_u64());
        if (va != c.next_u64()) any_diff = true;
    }
    EXPECT_TRUE(any_diff);
}
