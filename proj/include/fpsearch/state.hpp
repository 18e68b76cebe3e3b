#pragma once

// Dense complex state vectors over a RegisterLayout, plus the elementary
// unitary and projective operations every algorithm here is built from.
// Operations are value semantic: the public functions return new states,
// the *_in_place kernels mutate a caller-owned state.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fpsearch/errors.hpp"
#include "fpsearch/layout.hpp"
#include "fpsearch/rng.hpp"
#include "fpsearch/target_set.hpp"
#include "fpsearch/tolerances.hpp"
#include "fpsearch/unitary.hpp"

namespace fpsearch {

class PureState {
  public:
    PureState(RegisterLayout layout, std::vector<Cplx> amps) : layout_(layout), amps_(std::move(amps)) {
        if (amps_.size() != layout_.dimension()) throw std::invalid_argument("state: amplitude count != dimension");
    }

    static PureState basis_state(const RegisterLayout& layout, std::size_t basis_index) {
        if (basis_index >= layout.dimension()) throw std::invalid_argument("state: basis index out of range");
        std::vector<Cplx> amps(layout.dimension(), Cplx(0.0, 0.0));
        amps[basis_index] = Cplx(1.0, 0.0);
        return PureState(layout, std::move(amps));
    }

    // Accepts analytically built amplitudes; rejects grossly unnormalized
    // input and snaps the rest to unit norm.
    static PureState from_amplitudes(const RegisterLayout& layout, std::vector<Cplx> amps) {
        PureState s(layout, std::move(amps));
        const double n = s.norm();
        if (std::abs(n - 1.0) > 1e-8) throw std::invalid_argument("state: amplitudes far from unit norm");
        s.renormalize();
        return s;
    }

    const RegisterLayout& layout() const { return layout_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<Cplx>& amps() const { return amps_; }
    std::vector<Cplx>& amps() { return amps_; }
    const Cplx& operator[](std::size_t i) const { return amps_[i]; }
    Cplx& operator[](std::size_t i) { return amps_[i]; }

    double norm_squared() const {
        double acc = 0.0;
        for (const auto& a : amps_) acc += std::norm(a);
        return acc;
    }
    double norm() const { return std::sqrt(norm_squared()); }

    void renormalize() {
        const double n = norm();
        if (n < tol::kZeroBranch) throw ZeroBranchError("state: cannot renormalize a null vector");
        const double inv = 1.0 / n;
        for (auto& a : amps_) a *= inv;
    }

  private:
    RegisterLayout layout_;
    std::vector<Cplx> amps_;
};

// --- in-place kernels -------------------------------------------------------

// Single-qubit Hadamard at an absolute bit position of the layout.
inline void apply_hadamard_bit_in_place(PureState& state, int bit) {
    auto& amps = state.amps();
    const std::size_t dim = amps.size();
    const std::size_t mask = std::size_t{1} << bit;
    const double inv_sqrt2 = 0.70710678118654752440084436210485;
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        const Cplx a = amps[i], b = amps[j];
        amps[i] = (a + b) * inv_sqrt2;
        amps[j] = (a - b) * inv_sqrt2;
    }
}

namespace detail {

// Dense matrix (or its adjoint) on the register qubits; ancilla bits ride
// along untouched. The register block is contiguous above the ancilla-2 bits,
// so each (ancilla-1, ancilla-2) pair indexes a strided slice.
inline void apply_dense_register(PureState& state, const UnitarySpec& u, bool adjoint) {
    const RegisterLayout& lay = state.layout();
    const std::size_t reg_dim = lay.register_dimension();
    const std::size_t stride = std::size_t{1} << lay.ancilla2_count;
    const std::size_t blocks = state.dimension() / (reg_dim * stride);
    const auto& m = u.matrix();
    std::vector<Cplx> slice(reg_dim), result(reg_dim);
    auto& amps = state.amps();
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        for (std::size_t a2 = 0; a2 < stride; ++a2) {
            const std::size_t base = blk * reg_dim * stride + a2;
            for (std::size_t r = 0; r < reg_dim; ++r) slice[r] = amps[base + r * stride];
            for (std::size_t r = 0; r < reg_dim; ++r) {
                Cplx acc(0.0, 0.0);
                if (adjoint) {
                    for (std::size_t c = 0; c < reg_dim; ++c) acc += std::conj(m[c * reg_dim + r]) * slice[c];
                } else {
                    for (std::size_t c = 0; c < reg_dim; ++c) acc += m[r * reg_dim + c] * slice[c];
                }
                result[r] = acc;
            }
            for (std::size_t r = 0; r < reg_dim; ++r) amps[base + r * stride] = result[r];
        }
    }
}

}  // namespace detail

enum class Subspace { Register, Joint };

inline void apply_unitary_in_place(PureState& state, const UnitarySpec& u, Subspace subspace = Subspace::Register,
                                   bool adjoint = false) {
    const RegisterLayout& lay = state.layout();
    if (subspace == Subspace::Register) {
        if (u.qubits() != lay.register_qubits) throw std::invalid_argument("apply_unitary: register dimension mismatch");
        if (u.is_walsh_hadamard()) {
            // self-adjoint, tensor structured
            for (int q = 0; q < lay.register_qubits; ++q) apply_hadamard_bit_in_place(state, lay.register_bit(q));
        } else {
            detail::apply_dense_register(state, u, adjoint);
        }
    } else {
        if (u.qubits() != lay.total_qubits()) throw std::invalid_argument("apply_unitary: joint dimension mismatch");
        if (u.is_walsh_hadamard()) {
            for (int b = 0; b < lay.total_qubits(); ++b) apply_hadamard_bit_in_place(state, b);
        } else {
            // full-dimension dense apply
            const std::size_t dim = state.dimension();
            const auto& m = u.matrix();
            std::vector<Cplx> result(dim, Cplx(0.0, 0.0));
            const auto& amps = state.amps();
            for (std::size_t r = 0; r < dim; ++r) {
                Cplx acc(0.0, 0.0);
                if (adjoint) {
                    for (std::size_t c = 0; c < dim; ++c) acc += std::conj(m[c * dim + r]) * amps[c];
                } else {
                    for (std::size_t c = 0; c < dim; ++c) acc += m[r * dim + c] * amps[c];
                }
                result[r] = acc;
            }
            state.amps() = std::move(result);
        }
    }
}

inline PureState apply_unitary(const PureState& state, const UnitarySpec& u, Subspace subspace = Subspace::Register,
                               bool adjoint = false) {
    PureState out = state;
    apply_unitary_in_place(out, u, subspace, adjoint);
    return out;
}

// R_t^phi = I + (e^{i phi} - 1) P_t: marked register basis states pick up
// e^{i phi} across all ancilla values. phi = pi is the selective inversion I_t.
inline void apply_selective_phase_in_place(PureState& state, const TargetSet& sel, double phi,
                                           bool allow_empty = false) {
    if (!std::isfinite(phi)) throw std::invalid_argument("selective phase: phi must be finite");
    if (sel.empty()) {
        if (!allow_empty) throw DegenerateSelectionError("selective phase: empty selection");
        return;
    }
    const Cplx phase = std::polar(1.0, phi);
    const RegisterLayout& lay = state.layout();
    auto& amps = state.amps();
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (sel.contains(lay.register_part(i))) amps[i] *= phase;
    }
}

inline PureState apply_selective_phase(const PureState& state, const TargetSet& sel, double phi,
                                       bool allow_empty = false) {
    PureState out = state;
    apply_selective_phase_in_place(out, sel, phi, allow_empty);
    return out;
}

// R_x^phi = I + (e^{i phi} - 1)|x><x| for a general pure state selector.
inline void apply_selective_phase_in_place(PureState& state, const PureState& selector, double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("selective phase: phi must be finite");
    if (!(selector.layout() == state.layout())) throw std::invalid_argument("selective phase: layout mismatch");
    Cplx dot(0.0, 0.0);
    const auto& sel = selector.amps();
    auto& amps = state.amps();
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) dot += std::conj(sel[i]) * amps[i];
    const Cplx coef = (std::polar(1.0, phi) - 1.0) * dot;
    for (std::size_t i = 0; i < dim; ++i) amps[i] += coef * sel[i];
}

inline PureState apply_selective_phase(const PureState& state, const PureState& selector, double phi) {
    PureState out = state;
    apply_selective_phase_in_place(out, selector, phi);
    return out;
}

// <other|state>
inline Cplx overlap(const PureState& state, const PureState& other) {
    if (!(state.layout() == other.layout())) throw std::invalid_argument("overlap: layout mismatch");
    Cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < state.dimension(); ++i) acc += std::conj(other[i]) * state[i];
    return acc;
}

// Probability of finding the register in the marked subspace, marginalized
// over all ancilla qubits.
inline double target_probability(const PureState& state, const TargetSet& t) {
    const RegisterLayout& lay = state.layout();
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        if (t.contains(lay.register_part(i))) acc += std::norm(state[i]);
    }
    return acc;
}

// Probability distribution over register outcomes, marginalized over ancillas.
inline std::vector<double> register_distribution(const PureState& state) {
    const RegisterLayout& lay = state.layout();
    std::vector<double> probs(lay.register_dimension(), 0.0);
    for (std::size_t i = 0; i < state.dimension(); ++i) probs[lay.register_part(i)] += std::norm(state[i]);
    return probs;
}

// --- projective measurement of one qubit ------------------------------------

struct MeasurementBranch {
    double probability = 0.0;
    std::optional<PureState> state;  // nullopt when probability < tol::kZeroBranch
};

// Both Born branches of measuring the qubit at an absolute bit position;
// no randomness involved. Branch states are renormalized.
inline std::array<MeasurementBranch, 2> measure_qubit_branches(const PureState& state, int bit) {
    const std::size_t mask = std::size_t{1} << bit;
    double p1 = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        if (i & mask) p1 += std::norm(state[i]);
    }
    const double p0 = 1.0 - p1;
    std::array<MeasurementBranch, 2> branches;
    branches[0].probability = p0;
    branches[1].probability = p1;
    for (int outcome = 0; outcome < 2; ++outcome) {
        const double p = branches[outcome].probability;
        if (p < tol::kZeroBranch) continue;
        PureState post = state;
        auto& amps = post.amps();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const bool one = (i & mask) != 0;
            if (one != (outcome == 1)) amps[i] = Cplx(0.0, 0.0);
        }
        post.renormalize();
        branches[outcome].state = std::move(post);
    }
    return branches;
}

struct SampledMeasurement {
    int outcome = 0;
    double probability = 0.0;
    PureState state;
};

// Born-rule sample of one qubit; branches below tol::kZeroBranch are never
// selected so null vectors are never renormalized.
inline SampledMeasurement measure_qubit_sampled(const PureState& state, int bit, Prng& rng) {
    auto branches = measure_qubit_branches(state, bit);
    int outcome;
    if (!branches[1].state) {
        outcome = 0;
    } else if (!branches[0].state) {
        outcome = 1;
    } else {
        outcome = rng.uniform() < branches[1].probability ? 1 : 0;
    }
    if (!branches[outcome].state) throw ZeroBranchError("measure: both branches are null");
    return SampledMeasurement{outcome, branches[outcome].probability, std::move(*branches[outcome].state)};
}

}  // namespace fpsearch
