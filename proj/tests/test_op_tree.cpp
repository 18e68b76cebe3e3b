#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "fpsearch/fpsearch.hpp"
#include "test_support.hpp"

using namespace fpsearch;
using test_support::max_amplitude_deviation;
using test_support::random_state;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
    int n;
    UnitarySpec u;
    TargetSet target;
    PureState source;

    static Fixture engineered(int n, double eps, std::uint64_t seed) {
        TargetSet t({1, (std::size_t{1} << n) - 1}, n);
        UnitarySpec u = UnitarySpec::with_target_overlap(n, t, eps, seed);
        PureState s = PureState::basis_state(RegisterLayout::register_only(n), 0);
        return Fixture{n, std::move(u), std::move(t), std::move(s)};
    }

    static Fixture haar(int n, std::uint64_t seed) {
        TargetSet t({0, 2}, n);
        UnitarySpec u = UnitarySpec::random_haar(n, seed);
        PureState s = PureState::basis_state(RegisterLayout::register_only(n), 0);
        return Fixture{n, std::move(u), std::move(t), std::move(s)};
    }

    double initial_eps() const {
        return 1.0 - target_probability(apply_unitary(source, u), target);
    }
};

}  // namespace

TEST(OpTree, LevelZeroIsLeafU) {
    const auto tree = build_phase_search(0);
    EXPECT_EQ(tree->kind(), OpTree::Kind::LeafU);
    EXPECT_EQ(flatten_to_string(tree), "U");
}

TEST(OpTree, LevelOneFlattensToGoldenSequence) {
    const auto tree = build_phase_search(1);
    const std::string golden = test_support::read_text_file(std::string(FPSEARCH_GOLDEN_DIR) +
                                                            "/phase_search_level1.txt");
    EXPECT_EQ(flatten_to_string(tree) + "\n", golden);
}

TEST(OpTree, LevelTwoFlattensToGoldenSequence) {
    const auto tree = build_phase_search(2);
    const std::string golden = test_support::read_text_file(std::string(FPSEARCH_GOLDEN_DIR) +
                                                            "/phase_search_level2.txt");
    EXPECT_EQ(flatten_to_string(tree) + "\n", golden);
    EXPECT_EQ(flatten(tree).size(), 17u);  // 9 U leaves + 8 phase leaves
}

TEST(OpTree, AdjointNegatesPhaseLeaf) {
    const auto leaf = OpTree::phase_target(kPi / 3.0);
    const auto adj = adjoint(leaf);
    EXPECT_EQ(adj->kind(), OpTree::Kind::LeafPhaseTarget);
    EXPECT_DOUBLE_EQ(adj->phase(), -kPi / 3.0);
}

TEST(OpTree, AdjointReversesSequences) {
    const auto a = OpTree::phase_source(0.5);
    const auto b = OpTree::phase_target(0.25);
    const auto adj = adjoint(OpTree::seq({a, b}));
    ASSERT_EQ(adj->kind(), OpTree::Kind::Seq);
    ASSERT_EQ(adj->children().size(), 2u);
    EXPECT_EQ(adj->children()[0]->kind(), OpTree::Kind::LeafPhaseTarget);
    EXPECT_DOUBLE_EQ(adj->children()[0]->phase(), -0.25);
    EXPECT_EQ(adj->children()[1]->kind(), OpTree::Kind::LeafPhaseSource);
    EXPECT_DOUBLE_EQ(adj->children()[1]->phase(), -0.5);
}

TEST(OpTree, DoubleAdjointCollapsesStructurally) {
    const auto u1 = build_phase_search(1);
    const auto twice = adjoint(adjoint(u1));
    EXPECT_EQ(flatten_to_string(twice), flatten_to_string(u1));
    // Adjoint(Adjoint(LeafU)) -> LeafU exactly
    const auto u = OpTree::leaf_u();
    EXPECT_EQ(adjoint(adjoint(u)).get(), u.get());
}

TEST(OpTree, AdjointOfLevelOneMatchesPrintedForm) {
    // middle line of the level-2 expansion: U† Rt† U Rs† U†
    const auto adj = adjoint(build_phase_search(1));
    EXPECT_EQ(flatten_to_string(adj), "U† Rt† U Rs† U†");
}

TEST(OpTree, AdjointUndoesApplication) {
    const auto fx = Fixture::haar(3, 17);
    const auto tree = build_phase_search(1);
    const auto adj = adjoint(tree);
    const PureState start = random_state(RegisterLayout::register_only(3), 90);
    const auto [mid, q1] = apply_tree(tree, fx.u, fx.source, fx.target, start);
    const auto [back, q2] = apply_tree(adj, fx.u, fx.source, fx.target, mid);
    EXPECT_LT(max_amplitude_deviation(back, start), 1e-12);
    EXPECT_EQ(q1.queries + q2.queries, 2);
}

TEST(CountQueries, ClosedForm) {
    EXPECT_EQ(count_queries(0).queries, 0);
    EXPECT_EQ(count_queries(1).queries, 1);
    EXPECT_EQ(count_queries(2).queries, 4);
    EXPECT_EQ(count_queries(3).queries, 13);
    // recursion q_{i+1} = 3 q_i + 1
    for (int i = 0; i < 12; ++i) {
        EXPECT_EQ(count_queries(i + 1).queries, 3 * count_queries(i).queries + 1);
    }
}

TEST(ApplyTree, ErrorContractsAsEpsToPowerOfThree) {
    for (int level = 1; level <= 3; ++level) {
        for (double eps : {0.2, 0.5, 0.85}) {
            const auto fx = Fixture::engineered(3, eps, 40 + level);
            const double measured_eps = fx.initial_eps();
            const auto [state, count] = apply_tree(build_phase_search(level), fx.u, fx.source, fx.target, fx.source);
            const double err = 1.0 - target_probability(state, fx.target);
            EXPECT_NEAR(err, std::pow(measured_eps, std::pow(3.0, level)), 1e-10);
            EXPECT_EQ(count.queries, count_queries(level).queries);
        }
    }
}

TEST(ApplyTree, HoldsForComplexHaarDeviations) {
    // "any kind of deviation": Haar-random U with complex U_ts
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const auto fx = Fixture::haar(2, seed);
        const double eps = fx.initial_eps();
        for (int level = 1; level <= 3; ++level) {
            const auto [state, count] = apply_tree(build_phase_search(level), fx.u, fx.source, fx.target, fx.source);
            const double err = 1.0 - target_probability(state, fx.target);
            EXPECT_NEAR(err, std::pow(eps, std::pow(3.0, level)), 1e-10);
        }
    }
}

TEST(ApplyTree, LevelThreeUsesThirteenQueries) {
    const auto fx = Fixture::engineered(2, 0.5, 8);
    const auto [state, count] = apply_tree(build_phase_search(3), fx.u, fx.source, fx.target, fx.source);
    EXPECT_EQ(count.queries, 13);
}

TEST(ApplyTree, PiPhasesGiveAmplitudeAmplificationStep) {
    // theta = phi = pi at level 1 equals the explicit U I_s U† I_t U sequence
    const auto fx = Fixture::haar(3, 23);
    const auto [from_tree, count] =
        apply_tree(build_phase_search(1, kPi, kPi), fx.u, fx.source, fx.target, fx.source);
    EXPECT_EQ(count.queries, 1);

    PureState manual = fx.source;
    apply_unitary_in_place(manual, fx.u);
    apply_selective_phase_in_place(manual, fx.target, kPi);
    apply_unitary_in_place(manual, fx.u, Subspace::Register, true);
    apply_selective_phase_in_place(manual, fx.source, kPi);
    apply_unitary_in_place(manual, fx.u);
    EXPECT_LT(max_amplitude_deviation(from_tree, manual), 1e-12);

    const auto [from_aa, aa_count] =
        apply_tree(build_amplitude_amplification(1), fx.u, fx.source, fx.target, fx.source);
    EXPECT_EQ(aa_count.queries, 1);
    EXPECT_LT(max_amplitude_deviation(from_tree, from_aa), 1e-12);
}

TEST(ApplyTree, GroverSequenceMatchesRotationFormula) {
    // Walsh-Hadamard U, one marked state out of 16: success sin^2((2 eta + 1) alpha)
    const int n = 4;
    const TargetSet target({11}, n);
    const auto u = UnitarySpec::walsh_hadamard(n);
    const PureState source = PureState::basis_state(RegisterLayout::register_only(n), 0);
    for (int eta = 0; eta <= 5; ++eta) {
        const auto [state, count] = apply_tree(build_amplitude_amplification(eta), u, source, target, source);
        EXPECT_EQ(count.queries, eta);
        EXPECT_NEAR(target_probability(state, target), laws::grover_success(1.0 / 16.0, eta), 1e-12);
    }
}

TEST(ApplyTree, FlattenedSequenceAgreesWithRecursiveEvaluation) {
    for (int level = 1; level <= 3; ++level) {
        const auto fx = Fixture::haar(2, 60 + level);
        const auto tree = build_phase_search(level);
        const PureState start = random_state(RegisterLayout::register_only(2), 70 + level);
        const auto [rec_state, rec_q] = apply_tree(tree, fx.u, fx.source, fx.target, start);
        const auto [flat_state, flat_q] = apply_flat(flatten(tree), fx.u, fx.source, fx.target, start);
        EXPECT_LT(max_amplitude_deviation(rec_state, flat_state), 1e-12);
        EXPECT_EQ(rec_q.queries, flat_q.queries);
        EXPECT_EQ(rec_q.queries, count_queries(level).queries);
    }
}

TEST(BuildPhaseSearch, RejectsLevelOverCap) {
    EXPECT_THROW(build_phase_search(13), std::invalid_argument);
    EXPECT_THROW(build_phase_search(-1), std::invalid_argument);
    EXPECT_NO_THROW(build_phase_search(12));
}

TEST(ApplyTree, GeneralPhasesMatchScaleFactorLaw) {
    // error after O(theta, phi) = (1 - p) * scale_factor^2, any phases
    const auto fx = Fixture::engineered(2, 0.4, 99);
    const double p = 1.0 - fx.initial_eps();
    Prng rng(1234);
    for (int trial = 0; trial < 8; ++trial) {
        const double theta = rng.uniform() * 2.0 * kPi;
        const double phi = rng.uniform() * 2.0 * kPi;
        const auto [state, count] =
            apply_tree(build_phase_search(1, theta, phi), fx.u, fx.source, fx.target, fx.source);
        const double err = 1.0 - target_probability(state, fx.target);
        const double factor = laws::scale_factor(theta, phi, p);
        EXPECT_NEAR(err, (1.0 - p) * factor * factor, 1e-12);
        EXPECT_NEAR(err, test_support::two_level_o_error(theta, phi, 1.0 - p), 1e-12);
    }
}
