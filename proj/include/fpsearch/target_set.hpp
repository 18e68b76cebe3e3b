#pragma once

// Marked subspace of the register: a sorted set of basis indices.
// The projector P_t sums |m><m| over the set; the marked fraction is
// f = |marked| / 2^n.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fpsearch {

class TargetSet {
  public:
    TargetSet() = default;  // empty: the f = 0 degenerate case

    TargetSet(std::vector<std::size_t> marked, int register_qubits) {
        std::sort(marked.begin(), marked.end());
        marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
        const std::size_t dim = std::size_t{1} << register_qubits;
        for (std::size_t m : marked) {
            if (m >= dim) throw std::invalid_argument("target set: index out of register range");
        }
        indices_ = std::move(marked);
        mask_.assign(dim, false);
        for (std::size_t m : indices_) mask_[m] = true;
    }

    bool empty() const { return indices_.empty(); }
    std::size_t size() const { return indices_.size(); }
    const std::vector<std::size_t>& indices() const { return indices_; }

    bool contains(std::size_t register_index) const {
        return register_index < mask_.size() && mask_[register_index];
    }

    double fraction(int register_qubits) const {
        return static_cast<double>(indices_.size()) / static_cast<double>(std::size_t{1} << register_qubits);
    }

    TargetSet complement(int register_qubits) const {
        std::vector<std::size_t> rest;
        const std::size_t dim = std::size_t{1} << register_qubits;
        for (std::size_t i = 0; i < dim; ++i) {
            if (!contains(i)) rest.push_back(i);
        }
        return TargetSet(std::move(rest), register_qubits);
    }

  private:
    std::vector<std::size_t> indices_;
    std::vector<bool> mask_;
};

}  // namespace fpsearch
