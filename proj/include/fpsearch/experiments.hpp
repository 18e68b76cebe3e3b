#pragma once

// Scenario layer: closed-form success/error curves over marked-fraction
// grids, expectations over fraction distributions, state-vector demo runs,
// and deterministic CSV emission.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpsearch/errors.hpp"
#include "fpsearch/laws.hpp"
#include "fpsearch/measured.hpp"
#include "fpsearch/op_tree.hpp"
#include "fpsearch/quadrature.hpp"
#include "fpsearch/state.hpp"
#include "fpsearch/unitary.hpp"

namespace fpsearch {

enum class Algorithm { Classical, Younes, Pi3, Measured, Grover, OneAncilla };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Classical: return "classical";
        case Algorithm::Younes: return "younes";
        case Algorithm::Pi3: return "pi3";
        case Algorithm::Measured: return "measured";
        case Algorithm::Grover: return "grover";
        case Algorithm::OneAncilla: return "one_ancilla";
    }
    throw std::logic_error("unknown algorithm");
}

inline std::optional<Algorithm> parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::Classical, Algorithm::Younes, Algorithm::Pi3, Algorithm::Measured,
                        Algorithm::Grover, Algorithm::OneAncilla}) {
        if (name == algorithm_name(a)) return a;
    }
    return std::nullopt;
}

// Recursion level i with (3^i - 1)/2 == q, if q is an admissible pi3 query count.
inline std::optional<int> pi3_level_for_queries(long long q) {
    long long power = 1;  // 3^i
    for (int i = 0; i <= kMaxRecursionLevel; ++i) {
        if ((power - 1) / 2 == q) return i;
        power *= 3;
    }
    return std::nullopt;
}

inline void require_valid_queries(Algorithm algo, int q) {
    if (q < 0) throw std::invalid_argument("q must be non-negative");
    if (algo == Algorithm::Pi3 && !pi3_level_for_queries(q)) {
        throw std::invalid_argument(
            "pi3 admits only q = (3^i - 1)/2, i.e. 0, 1, 4, 13, 40, ...; "
            "got q = " + std::to_string(q) + " (the measured algorithm supports any q >= 1)");
    }
}

// Error probability at marked fraction f, for the given algorithm and query
// budget. pi3: q queries realize recursion level i with q = (3^i - 1)/2, so
// the error is eps^(2q+1) = eps^(3^i).
inline double error_law(Algorithm algo, int q, double f) {
    const double eps = 1.0 - f;
    switch (algo) {
        case Algorithm::Classical: return laws::classical_error(eps, q);
        case Algorithm::Younes: return 1.0 - laws::younes_success(f, q);
        case Algorithm::Pi3: return laws::measured_error(eps, q);
        case Algorithm::Measured: return laws::measured_error(eps, q);
        case Algorithm::Grover: return 1.0 - laws::grover_success(f, q);
        case Algorithm::OneAncilla: return laws::one_ancilla_error(eps, q);
    }
    throw std::logic_error("unknown algorithm");
}

inline double success_law(Algorithm algo, int q, double f) { return 1.0 - error_law(algo, q, f); }

// --- fraction distributions -------------------------------------------------

struct FractionDistribution {
    enum class Kind { Point, Uniform };
    Kind kind = Kind::Point;
    double f = 1.0;    // point mass
    double lo = 0.0;   // uniform bounds
    double hi = 1.0;

    static FractionDistribution point(double f) {
        if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("fraction outside [0,1]");
        FractionDistribution d;
        d.kind = Kind::Point;
        d.f = f;
        return d;
    }

    static FractionDistribution uniform(double lo, double hi) {
        if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw std::domain_error("need 0 <= lo <= hi <= 1");
        FractionDistribution d;
        d.kind = Kind::Uniform;
        d.lo = lo;
        d.hi = hi;
        return d;
    }
};

// E[error] over the fraction distribution, by 64-node Gauss-Legendre;
// recomputed at 128 nodes as a convergence guard.
inline double overall_error(Algorithm algo, int q, const FractionDistribution& dist) {
    require_valid_queries(algo, q);
    if (dist.kind == FractionDistribution::Kind::Point || dist.lo == dist.hi) {
        return error_law(algo, q, dist.kind == FractionDistribution::Kind::Point ? dist.f : dist.lo);
    }
    auto law = [&](double f) { return error_law(algo, q, f); };
    const double width = dist.hi - dist.lo;
    const double v64 = integrate(law, dist.lo, dist.hi, 64) / width;
    const double v128 = integrate(law, dist.lo, dist.hi, 128) / width;
    if (std::abs(v64 - v128) > 1e-10) {
        throw QuadratureError("overall_error: 64- and 128-node results disagree beyond 1e-10");
    }
    return v64;
}

// --- comparison curves --------------------------------------------------------

struct ComparisonRow {
    double f = 0.0;
    std::vector<double> success;  // one entry per algorithm, in input order
};

// Success probabilities on an evenly spaced f grid over [0, 1], ascending.
inline std::vector<ComparisonRow> sweep_curves(const std::vector<Algorithm>& algorithms, int q, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("sweep: grid resolution must be >= 2");
    for (Algorithm a : algorithms) require_valid_queries(a, q);
    std::vector<ComparisonRow> rows;
    rows.reserve(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        ComparisonRow row;
        row.f = static_cast<double>(i) / static_cast<double>(grid_points - 1);
        for (Algorithm a : algorithms) row.success.push_back(success_law(a, q, row.f));
        rows.push_back(std::move(row));
    }
    return rows;
}

// pi3 success >= younes success on every grid point inside [lo, hi].
inline bool dominance_holds(const std::vector<ComparisonRow>& rows, std::size_t lhs_col, std::size_t rhs_col,
                            double lo, double hi) {
    for (const auto& row : rows) {
        if (row.f < lo || row.f > hi) continue;
        if (row.success[lhs_col] < row.success[rhs_col] - 1e-12) return false;
    }
    return true;
}

// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// Schema: header "f,<algo>_success,...", 17 significant digits, LF endings.
inline std::string curves_to_csv(const std::vector<Algorithm>& algorithms, const std::vector<ComparisonRow>& rows) {
    std::string out = "f";
    for (Algorithm a : algorithms) {
        out += ',';
        out += algorithm_name(a);
        out += "_success";
    }
    out += '\n';
    for (const auto& row : rows) {
        out += format_double(row.f);
        for (double s : row.success) {
            out += ',';
            out += format_double(s);
        }
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << contents;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

// --- scenarios -----------------------------------------------------------------

struct ScenarioConfig {
    std::string name;
    std::vector<Algorithm> algorithms;
    int queries = 1;
    FractionDistribution distribution = FractionDistribution::uniform(0.0, 1.0);
    int grid_resolution = 101;
    std::uint64_t seed = 0;
    std::string output_path;

    void validate() const {
        if (algorithms.empty()) throw std::invalid_argument("scenario: no algorithms selected");
        if (grid_resolution < 2) throw std::invalid_argument("scenario: grid resolution must be >= 2");
        for (Algorithm a : algorithms) require_valid_queries(a, queries);
    }
};

struct ScenarioResult {
    std::vector<ComparisonRow> rows;
    std::string csv;
};

inline ScenarioResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    ScenarioResult res;
    res.rows = sweep_curves(config.algorithms, config.queries, config.grid_resolution);
    res.csv = curves_to_csv(config.algorithms, res.rows);
    if (!config.output_path.empty()) write_file(config.output_path, res.csv);
    return res;
}

// --- state-vector demos ----------------------------------------------------------

struct DemoReport {
    Algorithm algorithm = Algorithm::Pi3;
    int qubits = 0;
    double f = 0.0;
    int queries = 0;
    double analytic_success = 0.0;
    double simulated_success = 0.0;
    long long simulated_query_count = 0;
    // Monte-Carlo section (measured algorithm only)
    bool has_monte_carlo = false;
    long long trajectory_count = 0;
    double empirical_frequency = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double expected_queries_analytic = 0.0;
    double mean_queries_mc = 0.0;
};

// Runs the chosen algorithm on the actual state vector (Walsh-Hadamard U,
// source |0...0>) and reports analytic vs simulated success.
inline DemoReport demo_database(int n_qubits, const std::vector<std::size_t>& marked, Algorithm algo, int q,
                                std::uint64_t seed, long long mc_trajectories = 100000) {
    if (n_qubits < 1 || n_qubits > 12) throw std::invalid_argument("demo: qubits must be in 1..12");
    if (marked.empty()) throw std::invalid_argument("demo: marked set is empty");
    const TargetSet target(marked, n_qubits);
    const UnitarySpec u = UnitarySpec::walsh_hadamard(n_qubits);
    const RegisterLayout layout = RegisterLayout::register_only(n_qubits);
    const PureState source = PureState::basis_state(layout, 0);

    DemoReport rep;
    rep.algorithm = algo;
    rep.qubits = n_qubits;
    rep.queries = q;
    rep.f = target.fraction(n_qubits);
    rep.analytic_success = success_law(algo, q, rep.f);

    switch (algo) {
        case Algorithm::Pi3: {
            const auto level = pi3_level_for_queries(q);
            require_valid_queries(algo, q);
            const auto [state, count] = apply_tree(build_phase_search(*level), u, source, target, source);
            rep.simulated_success = target_probability(state, target);
            rep.simulated_query_count = count.queries;
            break;
        }
        case Algorithm::Grover: {
            const auto [state, count] = apply_tree(build_amplitude_amplification(q), u, source, target, source);
            rep.simulated_success = target_probability(state, target);
            rep.simulated_query_count = count.queries;
            break;
        }
        case Algorithm::OneAncilla: {
            if (q < 1) throw std::invalid_argument("demo: one_ancilla needs q >= 1");
            const BranchDistribution dist = run_one_ancilla(u, 0, target, q);
            rep.simulated_success = dist.target_probability(target);
            rep.simulated_query_count = q;
            break;
        }
        case Algorithm::Measured: {
            if (q < 1) throw std::invalid_argument("demo: measured needs q >= 1");
            const BranchDistribution dist = run_branch_exact(u, 0, target, q);
            rep.simulated_success = dist.target_probability(target);
            rep.simulated_query_count = q;
            rep.expected_queries_analytic = dist.expected_queries;
            const McResult mc = run_monte_carlo(u, 0, target, q, false, seed, mc_trajectories);
            rep.has_monte_carlo = true;
            rep.trajectory_count = mc.trajectory_count;
            rep.empirical_frequency =
                static_cast<double>(mc.target_hits) / static_cast<double>(mc.trajectory_count);
            const double p = rep.empirical_frequency;
            const double half = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(mc.trajectory_count));
            rep.ci_low = p - half;
            rep.ci_high = p + half;
            rep.mean_queries_mc = mc.mean_queries;
            break;
        }
        case Algorithm::Classical:
        case Algorithm::Younes:
            throw std::invalid_argument(std::string("demo: ") + algorithm_name(algo) +
                                        " has no state-vector realization; pick pi3, grover, measured or "
                                        "one_ancilla");
    }
    return rep;
}

}  // namespace fpsearch
