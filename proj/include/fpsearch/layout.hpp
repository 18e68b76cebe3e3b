#pragma once

// Register layout for joint ancilla/register state vectors.
//
// Basis index bit order (fixed):
//   ancilla-1            -> most significant bit (when present)
//   register qubit i     -> bit (ancilla2_count + i)
//   ancilla-2 qubit j    -> bit j (least significant block, j = 0 first)

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpsearch {

inline constexpr int kMaxTotalQubits = 22;  // dimension cap 2^22

struct RegisterLayout {
    int register_qubits = 1;
    bool ancilla1_present = false;
    int ancilla2_count = 0;

    static RegisterLayout register_only(int n) { return make(n, false, 0); }

    static RegisterLayout make(int n, bool ancilla1, int ancilla2) {
        if (n < 1) throw std::invalid_argument("layout: need at least one register qubit");
        if (ancilla2 < 0) throw std::invalid_argument("layout: negative ancilla-2 count");
        int total = n + (ancilla1 ? 1 : 0) + ancilla2;
        if (total > kMaxTotalQubits) {
            throw std::invalid_argument("layout: " + std::to_string(total) + " qubits exceeds cap of " +
                                        std::to_string(kMaxTotalQubits));
        }
        return RegisterLayout{n, ancilla1, ancilla2};
    }

    int total_qubits() const { return register_qubits + (ancilla1_present ? 1 : 0) + ancilla2_count; }
    std::size_t dimension() const { return std::size_t{1} << total_qubits(); }
    std::size_t register_dimension() const { return std::size_t{1} << register_qubits; }

    int register_bit(int i) const { return ancilla2_count + i; }
    int ancilla1_bit() const {
        if (!ancilla1_present) throw std::logic_error("layout: no ancilla-1");
        return ancilla2_count + register_qubits;
    }
    int ancilla2_bit(int j) const {
        if (j < 0 || j >= ancilla2_count) throw std::logic_error("layout: ancilla-2 index out of range");
        return j;
    }

    std::size_t register_part(std::size_t basis_index) const {
        return (basis_index >> ancilla2_count) & (register_dimension() - 1);
    }
    int ancilla1_part(std::size_t basis_index) const {
        return ancilla1_present ? static_cast<int>((basis_index >> ancilla1_bit()) & 1) : 0;
    }
    std::size_t ancilla2_part(std::size_t basis_index) const {
        return basis_index & ((std::size_t{1} << ancilla2_count) - 1);
    }

    std::size_t index_of(int a1, std::size_t reg, std::size_t a2) const {
        std::size_t idx = a2;
        idx |= reg << ancilla2_count;
        if (ancilla1_present && a1) idx |= std::size_t{1} << ancilla1_bit();
        return idx;
    }

    bool operator==(const RegisterLayout&) const = default;
};

}  // namespace fpsearch
