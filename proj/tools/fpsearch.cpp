// Command-line front end: identity checks, the Section-IV style comparison
// numbers, comparison-curve CSVs, state-vector demos and expected-query
// statistics. Results go to stdout, diagnostics to stderr. Exit codes:
// 0 success, 2 configuration error, 3 tolerance failure in check modes.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpsearch/fpsearch.hpp"

namespace {

using fpsearch::Algorithm;
using fpsearch::format_double;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw std::invalid_argument("empty index list: '" + text + "'");
    return out;
}

std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
    std::vector<Algorithm> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto a = fpsearch::parse_algorithm(item);
        if (!a) {
            throw std::invalid_argument("unknown algorithm '" + item +
                                        "' (expected classical, younes, pi3, measured, grover or one_ancilla)");
        }
        out.push_back(*a);
    }
    if (out.empty()) throw std::invalid_argument("no algorithms given");
    return out;
}

int run_identity_check(double eps, int level, const std::optional<std::uint64_t>& random_u_seed, int qubits,
                       const std::string& marked_text, std::uint64_t completion_seed, double tolerance) {
    const std::vector<std::size_t> marked = parse_index_list(marked_text);
    const fpsearch::TargetSet target(marked, qubits);
    fpsearch::UnitarySpec u = random_u_seed
                                  ? fpsearch::UnitarySpec::random_haar(qubits, *random_u_seed)
                                  : fpsearch::UnitarySpec::with_target_overlap(qubits, target, eps, completion_seed);

    std::cout << "config.command=identity-check\n";
    std::cout << "config.level=" << level << "\n";
    std::cout << "config.tolerance=" << format_double(tolerance) << "\n";
    std::cout << "config.qubits=" << qubits << "\n";
    std::cout << "config.marked=" << marked_text << "\n";
    if (random_u_seed) {
        std::cout << "config.unitary=random_haar\n";
        std::cout << "config.seed=" << *random_u_seed << "\n";
    } else {
        std::cout << "config.unitary=target_overlap\n";
        std::cout << "config.eps=" << format_double(eps) << "\n";
        std::cout << "config.seed=" << completion_seed << "\n";
    }

    const fpsearch::RegisterLayout layout = fpsearch::RegisterLayout::register_only(qubits);
    const fpsearch::PureState source = fpsearch::PureState::basis_state(layout, 0);
    const fpsearch::PureState initial = fpsearch::apply_unitary(source, u);
    const double measured_eps = 1.0 - fpsearch::target_probability(initial, target);

    const auto [state, count] = fpsearch::apply_tree(fpsearch::build_phase_search(level), u, source, target, source);
    const double simulated = 1.0 - fpsearch::target_probability(state, target);
    const double analytic = fpsearch::laws::recursion_error(measured_eps, level);
    const double deviation = std::abs(simulated - analytic);
    const long long expected_queries = fpsearch::count_queries(level).queries;

    std::cout << "eps=" << format_double(measured_eps) << "\n";
    std::cout << "queries=" << count.queries << "\n";
    std::cout << "error_simulated=" << format_double(simulated) << "\n";
    std::cout << "error_analytic=" << format_double(analytic) << "\n";
    std::cout << "deviation=" << format_double(deviation) << "\n";

    const bool pass = deviation <= tolerance && count.queries == expected_queries;
    std::cout << "result=" << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitTolerance;
}

int run_section4() {
    std::cout << "config.command=section4\n";
    std::cout << "config.distribution=uniform(0.75,1)\n";
    std::cout << "config.queries=1\n";
    const auto dist = fpsearch::FractionDistribution::uniform(0.75, 1.0);
    std::cout << "overall_error_classical=" << format_double(fpsearch::overall_error(Algorithm::Classical, 1, dist))
              << "\n";
    std::cout << "overall_error_younes=" << format_double(fpsearch::overall_error(Algorithm::Younes, 1, dist))
              << "\n";
    std::cout << "overall_error_pi3=" << format_double(fpsearch::overall_error(Algorithm::Pi3, 1, dist)) << "\n";
    return kExitOk;
}

int run_fig4(int queries, int grid, const std::string& out_path) {
    std::cout << "config.command=fig4\n";
    std::cout << "config.queries=" << queries << "\n";
    std::cout << "config.grid=" << grid << "\n";
    std::cout << "config.out=" << out_path << "\n";
    const std::vector<Algorithm> algos{Algorithm::Pi3, Algorithm::Younes};
    const auto rows = fpsearch::sweep_curves(algos, queries, grid);
    fpsearch::write_file(out_path, fpsearch::curves_to_csv(algos, rows));
    std::cout << "rows=" << rows.size() << "\n";
    const bool dominance = fpsearch::dominance_holds(rows, 0, 1, 0.75, 1.0);
    std::cout << "dominance=" << (dominance ? "PASS" : "FAIL") << "\n";
    return dominance ? kExitOk : kExitTolerance;
}

int run_sweep(const std::string& algorithms_text, int queries, int grid, const std::string& out_path) {
    std::cout << "config.command=sweep\n";
    std::cout << "config.algorithms=" << algorithms_text << "\n";
    std::cout << "config.queries=" << queries << "\n";
    std::cout << "config.grid=" << grid << "\n";
    std::cout << "config.out=" << out_path << "\n";
    const std::vector<Algorithm> algos = parse_algorithm_list(algorithms_text);
    const auto rows = fpsearch::sweep_curves(algos, queries, grid);
    fpsearch::write_file(out_path, fpsearch::curves_to_csv(algos, rows));
    std::cout << "rows=" << rows.size() << "\n";
    return kExitOk;
}

int run_demo(int qubits, const std::string& marked_text, const std::string& algorithm_text, int queries,
             std::uint64_t seed, long long trajectories) {
    std::cout << "config.command=demo\n";
    std::cout << "config.qubits=" << qubits << "\n";
    std::cout << "config.marked=" << marked_text << "\n";
    std::cout << "config.algorithm=" << algorithm_text << "\n";
    std::cout << "config.q=" << queries << "\n";
    std::cout << "config.seed=" << seed << "\n";

    const auto algo = fpsearch::parse_algorithm(algorithm_text);
    if (!algo) throw std::invalid_argument("unknown algorithm '" + algorithm_text + "'");
    const auto rep =
        fpsearch::demo_database(qubits, parse_index_list(marked_text), *algo, queries, seed, trajectories);

    std::cout << "f=" << format_double(rep.f) << "\n";
    std::cout << "success_analytic=" << format_double(rep.analytic_success) << "\n";
    std::cout << "success_simulated=" << format_double(rep.simulated_success) << "\n";
    std::cout << "queries_used=" << rep.simulated_query_count << "\n";
    if (rep.has_monte_carlo) {
        std::cout << "mc_trajectories=" << rep.trajectory_count << "\n";
        std::cout << "mc_frequency=" << format_double(rep.empirical_frequency) << "\n";
        std::cout << "mc_ci95_low=" << format_double(rep.ci_low) << "\n";
        std::cout << "mc_ci95_high=" << format_double(rep.ci_high) << "\n";
        std::cout << "expected_queries=" << format_double(rep.expected_queries_analytic) << "\n";
        std::cout << "mc_mean_queries=" << format_double(rep.mean_queries_mc) << "\n";
    }
    return kExitOk;
}

int run_expected_queries(double eps, int queries) {
    std::cout << "config.command=expected-queries\n";
    std::cout << "config.eps=" << format_double(eps) << "\n";
    std::cout << "config.q=" << queries << "\n";
    std::cout << "expected_queries=" << format_double(fpsearch::expected_queries(eps, queries)) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point quantum search simulator and experiment runner"};
    app.require_subcommand(1);

    // identity-check
    auto* identity = app.add_subcommand("identity-check", "verify the eps -> eps^(3^level) contraction");
    double ic_eps = 0.25;
    int ic_level = 1;
    int ic_qubits = 3;
    std::string ic_marked = "1";
    std::uint64_t ic_completion_seed = 1;
    double ic_tolerance = 1e-10;
    std::optional<std::uint64_t> ic_random_seed;
    std::uint64_t ic_random_seed_raw = 0;
    identity->add_option("--eps", ic_eps, "initial error probability (exact-construction mode)")
        ->check(CLI::Range(0.0, 1.0));
    identity->add_option("--level", ic_level, "recursion level")->check(CLI::Range(0, 12));
    identity->add_option("--qubits", ic_qubits, "register qubits")->check(CLI::Range(1, 12));
    identity->add_option("--marked", ic_marked, "comma-separated marked basis indices");
    identity->add_option("--seed", ic_completion_seed, "seed for the unitary completion");
    identity->add_option("--tolerance", ic_tolerance, "maximum allowed |simulated - analytic|")
        ->check(CLI::PositiveNumber);
    auto* ic_random_opt =
        identity->add_option("--random-u", ic_random_seed_raw, "use a Haar-random unitary with this seed");

    // section4
    app.add_subcommand("section4", "overall error of classical/younes/pi3 for f uniform on [0.75,1]");

    // fig4
    auto* fig4 = app.add_subcommand("fig4", "pi3 vs younes success curves as CSV");
    int f4_queries = 1;
    int f4_grid = 101;
    std::string f4_out;
    fig4->add_option("--queries", f4_queries, "query count (1 or 13)")->check(CLI::IsMember({1, 13}));
    fig4->add_option("--grid", f4_grid, "grid points over f in [0,1]")->check(CLI::Range(2, 1000000));
    fig4->add_option("--out", f4_out, "output CSV path")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "success curves for a chosen algorithm set as CSV");
    std::string sw_algos = "pi3,younes,classical";
    int sw_queries = 1;
    int sw_grid = 101;
    std::string sw_out;
    sweep->add_option("--algorithms", sw_algos, "comma-separated algorithm names");
    sweep->add_option("--q", sw_queries, "query count")->check(CLI::Range(0, 1000));
    sweep->add_option("--grid", sw_grid, "grid points over f in [0,1]")->check(CLI::Range(2, 1000000));
    sweep->add_option("--out", sw_out, "output CSV path")->required();

    // demo
    auto* demo = app.add_subcommand("demo", "run an algorithm on the actual state vector");
    int dm_qubits = 2;
    std::string dm_marked = "0";
    std::string dm_algorithm = "pi3";
    int dm_queries = 1;
    std::uint64_t dm_seed = 0;
    long long dm_trajectories = 100000;
    demo->add_option("--qubits", dm_qubits, "register qubits")->check(CLI::Range(1, 12));
    demo->add_option("--marked", dm_marked, "comma-separated marked basis indices")->required();
    demo->add_option("--algorithm", dm_algorithm, "pi3, grover, measured or one_ancilla")->required();
    demo->add_option("--q", dm_queries, "query budget")->required();
    demo->add_option("--seed", dm_seed, "Monte-Carlo seed (measured algorithm)")->required();
    demo->add_option("--trajectories", dm_trajectories, "Monte-Carlo trajectory count")
        ->check(CLI::Range(1LL, 100000000LL));

    // expected-queries
    auto* expq = app.add_subcommand("expected-queries", "mean oracle queries of the measured search");
    double eq_eps = 0.5;
    int eq_queries = 2;
    expq->add_option("--eps", eq_eps, "initial error probability")->check(CLI::Range(0.0, 1.0));
    expq->add_option("--q", eq_queries, "maximum iterations")->check(CLI::Range(1, 1000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (ic_random_opt->count() > 0) ic_random_seed = ic_random_seed_raw;

    try {
        if (identity->parsed()) {
            return run_identity_check(ic_eps, ic_level, ic_random_seed, ic_qubits, ic_marked, ic_completion_seed,
                                      ic_tolerance);
        }
        if (app.get_subcommand("section4")->parsed()) return run_section4();
        if (fig4->parsed()) return run_fig4(f4_queries, f4_grid, f4_out);
        if (sweep->parsed()) return run_sweep(sw_algos, sw_queries, sw_grid, sw_out);
        if (demo->parsed()) return run_demo(dm_qubits, dm_marked, dm_algorithm, dm_queries, dm_seed, dm_trajectories);
        if (expq->parsed()) return run_expected_queries(eq_eps, eq_queries);
    } catch (const fpsearch::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTolerance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::cerr << "error: no subcommand selected\n";
    return kExitConfig;
}
