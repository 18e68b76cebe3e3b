#pragma once

// Register-space unitaries: the Walsh-Hadamard transform (tensor structured),
// explicit dense matrices, and seeded Haar-random samples. Dense and random
// matrices are verified against U†U = I on construction.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fpsearch/rng.hpp"
#include "fpsearch/target_set.hpp"
#include "fpsearch/tolerances.hpp"

namespace fpsearch {

using Cplx = std::complex<double>;

class UnitarySpec {
  public:
    enum class Kind { WalshHadamard, Dense, RandomHaar };

    static UnitarySpec walsh_hadamard(int qubits) {
        UnitarySpec u;
        u.kind_ = Kind::WalshHadamard;
        u.qubits_ = qubits;
        return u;
    }

    static UnitarySpec dense(int qubits, std::vector<Cplx> matrix) {
        UnitarySpec u;
        u.kind_ = Kind::Dense;
        u.qubits_ = qubits;
        u.matrix_ = std::move(matrix);
        const std::size_t dim = u.dimension();
        if (u.matrix_.size() != dim * dim) throw std::invalid_argument("unitary: matrix size != 2^n x 2^n");
        u.check_unitarity();
        return u;
    }

    static UnitarySpec random_haar(int qubits, std::uint64_t seed) {
        UnitarySpec u;
        u.kind_ = Kind::RandomHaar;
        u.qubits_ = qubits;
        u.seed_ = seed;
        const std::size_t dim = u.dimension();
        Prng rng(seed);
        // QR of a complex Ginibre matrix; Gram-Schmidt keeps the R diagonal
        // real positive, which is exactly the Haar-correct convention.
        std::vector<Cplx> cols(dim * dim);
        for (auto& z : cols) z = Cplx(rng.gaussian(), rng.gaussian());
        u.matrix_.assign(dim * dim, Cplx(0.0, 0.0));
        orthonormalize_columns(cols, u.matrix_, dim);
        u.check_unitarity();
        return u;
    }

    // Dense unitary whose column `source_index` has overlap sqrt(1-eps) with
    // the normalized marked superposition, i.e. |U_ts|^2 = 1 - eps exactly.
    // Remaining columns are a seeded random orthonormal completion.
    static UnitarySpec with_target_overlap(int qubits, const TargetSet& target, double eps,
                                           std::uint64_t seed, std::size_t source_index = 0) {
        if (eps < 0.0 || eps > 1.0) throw std::domain_error("unitary: eps outside [0,1]");
        const std::size_t dim = std::size_t{1} << qubits;
        if (source_index >= dim) throw std::invalid_argument("unitary: source index out of range");
        const std::size_t marked = target.size();
        if (eps < 1.0 && marked == 0) throw std::invalid_argument("unitary: eps<1 needs a non-empty target set");
        if (eps > 0.0 && marked == dim) throw std::invalid_argument("unitary: eps>0 needs a non-target state");

        std::vector<Cplx> source_column(dim, Cplx(0.0, 0.0));
        if (marked > 0) {
            const double amp = std::sqrt((1.0 - eps) / static_cast<double>(marked));
            for (std::size_t m : target.indices()) source_column[m] = Cplx(amp, 0.0);
        }
        if (marked < dim) {
            const double amp = std::sqrt(eps / static_cast<double>(dim - marked));
            for (std::size_t i = 0; i < dim; ++i) {
                if (!target.contains(i)) source_column[i] = Cplx(amp, 0.0);
            }
        }

        Prng rng(seed);
        std::vector<Cplx> cols(dim * dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                cols[r * dim + c] = (c == source_index) ? source_column[r] : Cplx(rng.gaussian(), rng.gaussian());
            }
        }
        UnitarySpec u;
        u.kind_ = Kind::Dense;
        u.qubits_ = qubits;
        u.seed_ = seed;
        u.matrix_.assign(dim * dim, Cplx(0.0, 0.0));
        orthonormalize_columns(cols, u.matrix_, dim, source_index);
        u.check_unitarity();
        return u;
    }

    Kind kind() const { return kind_; }
    int qubits() const { return qubits_; }
    std::size_t dimension() const { return std::size_t{1} << qubits_; }
    std::optional<std::uint64_t> seed() const { return seed_; }

    bool is_walsh_hadamard() const { return kind_ == Kind::WalshHadamard; }

    // Row-major matrix; only available for dense kinds.
    const std::vector<Cplx>& matrix() const {
        if (kind_ == Kind::WalshHadamard) throw std::logic_error("unitary: Walsh-Hadamard has no stored matrix");
        return matrix_;
    }

    Cplx entry(std::size_t row, std::size_t col) const {
        if (kind_ == Kind::WalshHadamard) {
            // H^{(x)n}: entry = 2^{-n/2} (-1)^{popcount(row & col)}
            const double scale = 1.0 / std::sqrt(static_cast<double>(dimension()));
            return (__builtin_popcountll(row & col) & 1) ? Cplx(-scale, 0.0) : Cplx(scale, 0.0);
        }
        return matrix_[row * dimension() + col];
    }

  private:
    UnitarySpec() = default;

    void check_unitarity() const {
        const std::size_t dim = dimension();
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i; j < dim; ++j) {
                Cplx dot(0.0, 0.0);
                for (std::size_t r = 0; r < dim; ++r) {
                    dot += std::conj(matrix_[r * dim + i]) * matrix_[r * dim + j];
                }
                const double expect = (i == j) ? 1.0 : 0.0;
                if (std::abs(dot - expect) > tol::kUnitarity) {
                    throw std::invalid_argument("unitary: U†U deviates from identity beyond tolerance");
                }
            }
        }
    }

    // Modified Gram-Schmidt with one re-orthogonalization pass. The column at
    // `first` (already unit norm when prescribed) is processed first so it is
    // preserved exactly.
    static void orthonormalize_columns(const std::vector<Cplx>& in, std::vector<Cplx>& out, std::size_t dim,
                                       std::size_t first = 0) {
        std::vector<std::size_t> order;
        order.reserve(dim);
        order.push_back(first);
        for (std::size_t c = 0; c < dim; ++c) {
            if (c != first) order.push_back(c);
        }
        std::vector<Cplx> v(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const std::size_t c = order[k];
            for (std::size_t r = 0; r < dim; ++r) v[r] = in[r * dim + c];
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t p = 0; p < k; ++p) {
                    const std::size_t pc = order[p];
                    Cplx dot(0.0, 0.0);
                    for (std::size_t r = 0; r < dim; ++r) dot += std::conj(out[r * dim + pc]) * v[r];
                    for (std::size_t r = 0; r < dim; ++r) v[r] -= dot * out[r * dim + pc];
                }
            }
            double norm2 = 0.0;
            for (std::size_t r = 0; r < dim; ++r) norm2 += std::norm(v[r]);
            if (norm2 < 1e-24) throw std::runtime_error("unitary: rank-deficient column set");
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t r = 0; r < dim; ++r) out[r * dim + c] = v[r] * inv;
        }
    }

    Kind kind_ = Kind::WalshHadamard;
    int qubits_ = 1;
    std::vector<Cplx> matrix_;
    std::optional<std::uint64_t> seed_;
};

}  // namespace fpsearch
