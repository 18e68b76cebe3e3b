#pragma once

// Two-ancilla measurement-based fixed-point search.
//
// Joint search space: ancilla-1 (x) register, with |1>|t> the sole target.
// Each iteration applies a controlled oracle (flip the current ancilla-2
// qubit when ancilla-1 is |1> and the register is marked), measures
// ancilla-2, and on outcome 0 applies the joint diffusion
// (H (x) U) I_{0s} (H (x) U)†. Outcome 1 certifies the register is in the
// target subspace and stops the loop. Modes:
//   - branch_exact: exact probability tree over measurement records,
//   - interactive_mc: sampled trajectories with per-trajectory RNG streams,
//   - deferred_unitary: all-unitary variant with one fresh ancilla-2 per
//     iteration, controls on earlier ancillas replacing the measurements,
//     everything measured at the end.
// avoid_mode flips the oracle condition to |1>|t_perp>, making eps = 1 the
// fixed point; the register then lands in the target with probability
// (1-eps)^(2q+1).

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpsearch/layout.hpp"
#include "fpsearch/rng.hpp"
#include "fpsearch/state.hpp"
#include "fpsearch/target_set.hpp"
#include "fpsearch/tolerances.hpp"
#include "fpsearch/unitary.hpp"

namespace fpsearch {

struct JointState {
    PureState state;
    TargetSet marked;          // t_j = |1>|t>
    std::size_t source_index;  // s_j = |0>|s>
    long long queries = 0;
};

// (H (x) U (x) I) |0>|s>|0...0>
inline JointState prepare_initial(const UnitarySpec& u, std::size_t source_index, const TargetSet& target,
                                  int ancilla2_count = 1) {
    if (ancilla2_count < 1) throw std::invalid_argument("prepare_initial: need at least one ancilla-2 qubit");
    const RegisterLayout layout = RegisterLayout::make(u.qubits(), true, ancilla2_count);
    PureState state = PureState::basis_state(layout, layout.index_of(0, source_index, 0));
    apply_hadamard_bit_in_place(state, layout.ancilla1_bit());
    apply_unitary_in_place(state, u, Subspace::Register);
    return JointState{std::move(state), target, source_index, 0};
}

namespace detail {

// Flip ancilla-2 qubit `a2_qubit` where ancilla-1 is |1>, the register is in
// the (avoid-flipped) marked set, and ancilla-2 qubits [0, controls) are |0>.
inline void oracle_in_place(JointState& js, int a2_qubit, bool avoid, int controls) {
    const RegisterLayout& lay = js.state.layout();
    auto& amps = js.state.amps();
    const std::size_t flip_mask = std::size_t{1} << lay.ancilla2_bit(a2_qubit);
    const std::size_t ctrl_mask = (std::size_t{1} << controls) - 1;
    const std::size_t a1_mask = std::size_t{1} << lay.ancilla1_bit();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & flip_mask) continue;  // visit each pair once
        if (!(i & a1_mask)) continue;
        if (i & ctrl_mask) continue;
        const bool in_target = js.marked.contains(lay.register_part(i));
        if (in_target == avoid) continue;
        std::swap(amps[i], amps[i | flip_mask]);
    }
    ++js.queries;
}

// (H (x) U) I_{0s} (H (x) U)† on (ancilla-1, register), applied only where
// ancilla-2 qubits [0, controls) are |0>.
inline void diffusion_in_place(JointState& js, const UnitarySpec& u, int controls) {
    const RegisterLayout& lay = js.state.layout();
    auto& amps = js.state.amps();
    const std::size_t ctrl_mask = (std::size_t{1} << controls) - 1;
    const std::size_t a1_mask = std::size_t{1} << lay.ancilla1_bit();
    const std::size_t reg_dim = lay.register_dimension();
    const std::size_t a2_dim = std::size_t{1} << lay.ancilla2_count;

    auto controlled_hadamard_a1 = [&] {
        const double inv_sqrt2 = 0.70710678118654752440084436210485;
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (i & a1_mask) continue;
            if (i & ctrl_mask) continue;
            const std::size_t j = i | a1_mask;
            const Cplx a = amps[i], b = amps[j];
            amps[i] = (a + b) * inv_sqrt2;
            amps[j] = (a - b) * inv_sqrt2;
        }
    };
    auto controlled_register_u = [&](bool adjoint) {
        if (u.is_walsh_hadamard()) {
            const double inv_sqrt2 = 0.70710678118654752440084436210485;
            for (int q = 0; q < lay.register_qubits; ++q) {
                const std::size_t mask = std::size_t{1} << lay.register_bit(q);
                for (std::size_t i = 0; i < amps.size(); ++i) {
                    if (i & mask) continue;
                    if (i & ctrl_mask) continue;
                    const std::size_t j = i | mask;
                    const Cplx a = amps[i], b = amps[j];
                    amps[i] = (a + b) * inv_sqrt2;
                    amps[j] = (a - b) * inv_sqrt2;
                }
            }
            return;
        }
        const auto& m = u.matrix();
        std::vector<Cplx> slice(reg_dim), result(reg_dim);
        for (int a1 = 0; a1 < 2; ++a1) {
            for (std::size_t a2 = 0; a2 < a2_dim; ++a2) {
                if (a2 & ctrl_mask) continue;
                const std::size_t base = lay.index_of(a1, 0, a2);
                for (std::size_t r = 0; r < reg_dim; ++r) slice[r] = amps[base + (r << lay.ancilla2_count)];
                for (std::size_t r = 0; r < reg_dim; ++r) {
                    Cplx acc(0.0, 0.0);
                    if (adjoint) {
                        for (std::size_t c = 0; c < reg_dim; ++c) acc += std::conj(m[c * reg_dim + r]) * slice[c];
                    } else {
                        for (std::size_t c = 0; c < reg_dim; ++c) acc += m[r * reg_dim + c] * slice[c];
                    }
                    result[r] = acc;
                }
                for (std::size_t r = 0; r < reg_dim; ++r) amps[base + (r << lay.ancilla2_count)] = result[r];
            }
        }
    };

    // rightmost factor first: (H (x) U)†, then I_{0s}, then (H (x) U)
    controlled_hadamard_a1();
    controlled_register_u(true);
    for (std::size_t a2 = 0; a2 < a2_dim; ++a2) {
        if (a2 & ctrl_mask) continue;
        const std::size_t idx = lay.index_of(0, js.source_index, a2);
        amps[idx] = -amps[idx];
    }
    controlled_register_u(false);
    controlled_hadamard_a1();
}

}  // namespace detail

// One oracle query on the current (first) ancilla-2 qubit.
inline JointState controlled_oracle(const JointState& js, bool avoid = false) {
    JointState out = js;
    detail::oracle_in_place(out, 0, avoid, 0);
    return out;
}

// Joint diffusion on the ancilla-1 (x) register factor.
inline JointState joint_diffusion(const JointState& js, const UnitarySpec& u) {
    JointState out = js;
    detail::diffusion_in_place(out, u, 0);
    return out;
}

// --- run modes ----------------------------------------------------------------

struct BranchOutcome {
    std::optional<int> exit_iteration;          // 1-based; nullopt = ran all q iterations
    double probability = 0.0;                   // weight of this measurement record
    std::vector<double> register_distribution;  // conditional over register basis states
};

struct BranchDistribution {
    int max_iterations = 0;
    std::vector<BranchOutcome> branches;
    double expected_queries = 0.0;

    double total_probability() const {
        double acc = 0.0;
        for (const auto& b : branches) acc += b.probability;
        return acc;
    }

    double target_probability(const TargetSet& t) const {
        double acc = 0.0;
        for (const auto& b : branches) {
            double in_target = 0.0;
            for (std::size_t m : t.indices()) in_target += b.register_distribution[m];
            acc += b.probability * in_target;
        }
        return acc;
    }

    double error_probability(const TargetSet& t) const { return 1.0 - target_probability(t); }
};

enum class RunMode { InteractiveMc, BranchExact, DeferredUnitary };

struct RunConfig {
    int max_iterations = 1;  // q
    RunMode mode = RunMode::BranchExact;
    std::optional<std::uint64_t> seed;  // required (and only allowed) for Monte-Carlo
    bool avoid_mode = false;
    long long trajectory_count = 100000;

    void validate() const {
        if (max_iterations < 1) throw std::invalid_argument("run config: q must be >= 1");
        if (mode == RunMode::InteractiveMc && !seed) {
            throw std::invalid_argument("run config: Monte-Carlo mode requires a seed");
        }
        if (mode != RunMode::InteractiveMc && seed) {
            throw std::invalid_argument("run config: seed is only meaningful in Monte-Carlo mode");
        }
        if (mode == RunMode::InteractiveMc && trajectory_count < 1) {
            throw std::invalid_argument("run config: trajectory count must be positive");
        }
    }
};

namespace detail {

inline void check_exit_state(const PureState& state, const TargetSet& marked, bool avoid) {
    // Outcome 1 must certify the register subspace; this is an algorithm
    // invariant, not an assumption.
    const double p = target_probability(state, marked);
    const double expect = avoid ? 0.0 : 1.0;
    if (std::abs(p - expect) > 1e-9) throw std::logic_error("measured: exit state not confined to its subspace");
}

}  // namespace detail

inline BranchDistribution run_branch_exact(const UnitarySpec& u, std::size_t source_index, const TargetSet& target,
                                           int q, bool avoid = false) {
    if (q < 1) throw std::invalid_argument("run: q must be >= 1");
    JointState js = prepare_initial(u, source_index, target, 1);
    const int a2_bit = js.state.layout().ancilla2_bit(0);

    BranchDistribution dist;
    dist.max_iterations = q;
    double weight = 1.0;  // probability of the all-zeros record so far
    for (int k = 1; k <= q; ++k) {
        detail::oracle_in_place(js, 0, avoid, 0);
        auto branches = measure_qubit_branches(js.state, a2_bit);
        const double p_exit = branches[1].probability;
        if (branches[1].state && weight * p_exit >= tol::kZeroBranch) {
            detail::check_exit_state(*branches[1].state, target, avoid);
            dist.branches.push_back(
                BranchOutcome{k, weight * p_exit, register_distribution(*branches[1].state)});
        }
        if (!branches[0].state || weight * branches[0].probability < tol::kZeroBranch) {
            weight = 0.0;
            break;
        }
        weight *= branches[0].probability;
        js.state = std::move(*branches[0].state);
        detail::diffusion_in_place(js, u, 0);
    }
    if (weight >= tol::kZeroBranch) {
        dist.branches.push_back(BranchOutcome{std::nullopt, weight, register_distribution(js.state)});
    }
    for (const auto& b : dist.branches) {
        dist.expected_queries += b.probability * static_cast<double>(b.exit_iteration.value_or(q));
    }
    return dist;
}

// All-unitary variant: ancilla-2 qubit k-1 serves iteration k. The oracle of
// iteration k is controlled on ancilla-2 qubits of iterations 1..k-1 being
// |0>, the diffusion of iteration k additionally on its own ancilla (which
// replaces the interactive measurement). The measurement record maps to an
// exit iteration via first-1-wins in iteration order.
inline BranchDistribution run_deferred(const UnitarySpec& u, std::size_t source_index, const TargetSet& target,
                                       int q, bool avoid = false) {
    if (q < 1) throw std::invalid_argument("run: q must be >= 1");
    const int total = u.qubits() + 1 + q;
    if (total > kMaxTotalQubits) {
        throw std::invalid_argument("run: deferred mode needs " + std::to_string(total) +
                                    " qubits, over the cap of " + std::to_string(kMaxTotalQubits));
    }
    JointState js = prepare_initial(u, source_index, target, q);
    for (int k = 1; k <= q; ++k) {
        detail::oracle_in_place(js, k - 1, avoid, k - 1);
        detail::diffusion_in_place(js, u, k);
    }

    const RegisterLayout& lay = js.state.layout();
    const std::size_t reg_dim = lay.register_dimension();
    // branch index 0..q-1 = exit at iteration k = index+1, index q = completed
    std::vector<std::vector<double>> joint(q + 1, std::vector<double>(reg_dim, 0.0));
    for (std::size_t i = 0; i < js.state.dimension(); ++i) {
        const double p = std::norm(js.state[i]);
        if (p == 0.0) continue;
        const std::size_t record = lay.ancilla2_part(i);
        int slot = q;
        for (int j = 0; j < q; ++j) {
            if (record & (std::size_t{1} << j)) {
                slot = j;
                break;
            }
        }
        joint[slot][lay.register_part(i)] += p;
    }

    BranchDistribution dist;
    dist.max_iterations = q;
    for (int slot = 0; slot <= q; ++slot) {
        double p = 0.0;
        for (double v : joint[slot]) p += v;
        if (p < tol::kZeroBranch) continue;
        BranchOutcome out;
        out.exit_iteration = (slot < q) ? std::optional<int>(slot + 1) : std::nullopt;
        out.probability = p;
        out.register_distribution.resize(reg_dim);
        for (std::size_t r = 0; r < reg_dim; ++r) out.register_distribution[r] = joint[slot][r] / p;
        dist.branches.push_back(std::move(out));
    }
    for (const auto& b : dist.branches) {
        dist.expected_queries += b.probability * static_cast<double>(b.exit_iteration.value_or(q));
    }
    return dist;
}

// --- Monte-Carlo trajectories ---------------------------------------------------

struct TrajectoryStep {
    int iter = 0;
    int outcome = 0;
    long long queries_so_far = 0;
};

struct Trajectory {
    std::optional<int> exit_iteration;
    long long queries = 0;
    std::size_t register_outcome = 0;
    std::vector<TrajectoryStep> log;
};

// Stable log format: one line per iteration, "iter,outcome,queries_so_far".
inline std::string format_trajectory_log(const Trajectory& t) {
    std::string out;
    for (const auto& s : t.log) {
        out += std::to_string(s.iter) + ',' + std::to_string(s.outcome) + ',' + std::to_string(s.queries_so_far) +
               '\n';
    }
    return out;
}

inline std::size_t sample_register_outcome(const PureState& state, Prng& rng) {
    const std::vector<double> dist = register_distribution(state);
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t r = 0; r < dist.size(); ++r) {
        acc += dist[r];
        if (u < acc) return r;
    }
    return dist.size() - 1;
}

inline Trajectory run_trajectory(const UnitarySpec& u, std::size_t source_index, const TargetSet& target, int q,
                                 bool avoid, Prng& rng) {
    JointState js = prepare_initial(u, source_index, target, 1);
    const int a2_bit = js.state.layout().ancilla2_bit(0);
    Trajectory traj;
    for (int k = 1; k <= q; ++k) {
        detail::oracle_in_place(js, 0, avoid, 0);
        auto m = measure_qubit_sampled(js.state, a2_bit, rng);
        traj.log.push_back(TrajectoryStep{k, m.outcome, js.queries});
        js.state = std::move(m.state);
        if (m.outcome == 1) {
            traj.exit_iteration = k;
            break;
        }
        detail::diffusion_in_place(js, u, 0);
    }
    traj.queries = js.queries;
    traj.register_outcome = sample_register_outcome(js.state, rng);
    return traj;
}

struct McResult {
    long long trajectory_count = 0;
    std::uint64_t seed = 0;
    int max_iterations = 0;
    std::vector<long long> exit_counts;      // index k-1 = exit at iteration k; index q = completed
    std::vector<long long> register_counts;  // final register outcomes
    double mean_queries = 0.0;
    long long target_hits = 0;
};

// Trajectory i uses the independent stream hash(seed, i), so results do not
// depend on evaluation order.
inline McResult run_monte_carlo(const UnitarySpec& u, std::size_t source_index, const TargetSet& target, int q,
                                bool avoid, std::uint64_t seed, long long count) {
    McResult res;
    res.trajectory_count = count;
    res.seed = seed;
    res.max_iterations = q;
    res.exit_counts.assign(q + 1, 0);
    res.register_counts.assign(std::size_t{1} << u.qubits(), 0);
    long long total_queries = 0;
    for (long long i = 0; i < count; ++i) {
        Prng rng = Prng::stream(seed, static_cast<std::uint64_t>(i));
        Trajectory t = run_trajectory(u, source_index, target, q, avoid, rng);
        res.exit_counts[t.exit_iteration ? *t.exit_iteration - 1 : q] += 1;
        res.register_counts[t.register_outcome] += 1;
        if (target.contains(t.register_outcome)) ++res.target_hits;
        total_queries += t.queries;
    }
    res.mean_queries = static_cast<double>(total_queries) / static_cast<double>(count);
    return res;
}

using RunResult = std::variant<BranchDistribution, McResult>;

inline RunResult run(const RunConfig& config, const UnitarySpec& u, std::size_t source_index,
                     const TargetSet& target) {
    config.validate();
    switch (config.mode) {
        case RunMode::BranchExact:
            return run_branch_exact(u, source_index, target, config.max_iterations, config.avoid_mode);
        case RunMode::DeferredUnitary:
            return run_deferred(u, source_index, target, config.max_iterations, config.avoid_mode);
        case RunMode::InteractiveMc:
            return run_monte_carlo(u, source_index, target, config.max_iterations, config.avoid_mode, *config.seed,
                                   config.trajectory_count);
    }
    throw std::logic_error("run: unknown mode");
}

// Mean oracle queries of the exact branch tree: exit at iteration 1 with
// probability (1-eps)/2, afterwards each completed iteration continues with
// probability eps^2. Strictly below q for eps < 1, q >= 2.
inline double expected_queries(double eps, int q) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eps outside [0,1]");
    if (q < 1) throw std::domain_error("q must be >= 1");
    double mean = 1.0 * (1.0 - eps) / 2.0;
    double weight = (1.0 + eps) / 2.0;  // continuing probability
    for (int k = 2; k <= q; ++k) {
        mean += static_cast<double>(k) * weight * (1.0 - eps * eps);
        weight *= eps * eps;
    }
    mean += static_cast<double>(q) * weight;
    return mean;
}

// --- one-ancilla preliminary variant --------------------------------------------
// Oracle flips the single ancilla whenever the register is marked (no
// ancilla-1 control); diffusion is U I_s U† on the register alone. Error after
// n iterations: eps (2 eps - 1)^(2n) -- a fixed-point search only for
// eps > 1/3 territory.
inline BranchDistribution run_one_ancilla(const UnitarySpec& u, std::size_t source_index, const TargetSet& target,
                                          int n_iterations) {
    if (n_iterations < 1) throw std::invalid_argument("run: iteration count must be >= 1");
    const RegisterLayout layout = RegisterLayout::make(u.qubits(), false, 1);
    PureState state = PureState::basis_state(layout, layout.index_of(0, source_index, 0));
    apply_unitary_in_place(state, u, Subspace::Register);
    const int a2_bit = layout.ancilla2_bit(0);
    const std::size_t flip_mask = std::size_t{1} << a2_bit;

    BranchDistribution dist;
    dist.max_iterations = n_iterations;
    double weight = 1.0;
    for (int k = 1; k <= n_iterations; ++k) {
        {
            auto& amps = state.amps();
            for (std::size_t i = 0; i < amps.size(); ++i) {
                if (i & flip_mask) continue;
                if (!target.contains(layout.register_part(i))) continue;
                std::swap(amps[i], amps[i | flip_mask]);
            }
        }
        auto branches = measure_qubit_branches(state, a2_bit);
        if (branches[1].state && weight * branches[1].probability >= tol::kZeroBranch) {
            detail::check_exit_state(*branches[1].state, target, false);
            dist.branches.push_back(
                BranchOutcome{k, weight * branches[1].probability, register_distribution(*branches[1].state)});
        }
        if (!branches[0].state || weight * branches[0].probability < tol::kZeroBranch) {
            weight = 0.0;
            break;
        }
        weight *= branches[0].probability;
        state = std::move(*branches[0].state);
        // diffusion U I_s U† on the register
        apply_unitary_in_place(state, u, Subspace::Register, true);
        {
            auto& amps = state.amps();
            for (std::size_t a2 = 0; a2 < 2; ++a2) {
                const std::size_t idx = layout.index_of(0, source_index, a2);
                amps[idx] = -amps[idx];
            }
        }
        apply_unitary_in_place(state, u, Subspace::Register, false);
    }
    if (weight >= tol::kZeroBranch) {
        dist.branches.push_back(BranchOutcome{std::nullopt, weight, register_distribution(state)});
    }
    for (const auto& b : dist.branches) {
        dist.expected_queries += b.probability * static_cast<double>(b.exit_iteration.value_or(n_iterations));
    }
    return dist;
}

}  // namespace fpsearch
