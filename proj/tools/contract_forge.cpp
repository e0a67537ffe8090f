// contract_forge: solve, sweep, verify and simulate financing-contract menus.

#include <iostream>

#include <CLI11.hpp>

#include "contract_forge/cli.hpp"

int main(int argc, char** argv) {
    using namespace cforge::cli;

    CLI::App app{"Financing-contract design for spectrum trading"};
    app.require_subcommand(1);

    CommandOptions opts;
    opts.workers = default_workers();
    std::string out;
    std::string regime;
    std::uint64_t seed = 0;
    std::string grid;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "Scenario config (JSON)")->required();
        sub->add_option("--out", out, "Output file (default: stdout)");
        sub->add_option("--regime", regime, "joint | as | mh | all");
    };

    auto* solve = app.add_subcommand("solve", "Closed-form contract menus as JSON");
    add_common(solve);
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep as CSV");
    add_common(sweep);
    auto* verify = app.add_subcommand("verify", "Brute-force audit of the closed-form menu (n <= 3)");
    add_common(verify);
    verify->add_option("--grid", grid, "r_steps,t_steps,refine_rounds");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of a menu");
    add_common(simulate);
    auto* seed_opt = simulate->add_option("--seed", seed, "RNG seed (overrides sim.seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    if (!out.empty()) opts.out = out;
    if (!regime.empty()) opts.regime = regime;
    if (seed_opt->count() > 0) opts.seed = seed;
    if (!grid.empty()) opts.grid = grid;

    if (*solve) return cmd_solve(opts, std::cout, std::cerr);
    if (*sweep) return cmd_sweep(opts, std::cout, std::cerr);
    if (*verify) return cmd_verify(opts, std::cout, std::cerr);
    return cmd_simulate(opts, std::cout, std::cerr);
}
