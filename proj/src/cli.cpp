#include "contract_forge/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "contract_forge/config.hpp"
#include "contract_forge/contracts.hpp"
#include "contract_forge/continuous.hpp"
#include "contract_forge/market_sim.hpp"
#include "contract_forge/oracle.hpp"
#include "contract_forge/report_io.hpp"
#include "contract_forge/sweep.hpp"

namespace cforge::cli {

namespace {

using nlohmann::json;

int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const json::exception& e) {
        err << "error: config: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
}

void emit(const CommandOptions& opts, std::ostream& out, const std::string& text) {
    if (!opts.out) {
        out << text;
        return;
    }
    std::ofstream file(*opts.out, std::ios::binary);
    if (!file) throw ValidationError("--out", "cannot open " + opts.out->string() + " for writing");
    file << text;
}

ScenarioConfig load(const CommandOptions& opts) {
    auto cfg = load_config(opts.config);
    if (opts.regime) {
        if (*opts.regime == "all") {
            cfg.regimes.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
        } else {
            try {
                cfg.regimes = {parse_scenario(*opts.regime)};
            } catch (const ValidationError&) {
                throw ValidationError("--regime", "expected joint, as, mh or all");
            }
        }
        cfg.sim.regime = cfg.regimes.front();
    }
    if (opts.seed) cfg.sim.seed = *opts.seed;
    cfg.sim.workers = opts.workers;
    cfg.grid.workers = opts.workers;
    return cfg;
}

int parse_int(std::string_view text, const std::string& field) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ValidationError(field, "expected an integer, got '" + std::string(text) + "'");
    return value;
}

void apply_grid_flag(GridSpec& grid, const std::string& flag) {
    std::vector<std::string_view> parts;
    std::string_view rest = flag;
    while (true) {
        const auto comma = rest.find(',');
        parts.push_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (parts.size() != 3) throw ValidationError("--grid", "expected r_steps,t_steps,refine");
    grid.r_steps = parse_int(parts[0], "--grid");
    grid.t_steps = parse_int(parts[1], "--grid");
    grid.refine_rounds = parse_int(parts[2], "--grid");
    grid.validate();
}

json document_header(const ScenarioConfig& cfg) {
    json doc{{"profile", to_json(cfg.profile)}, {"params", to_json(cfg.params)}};
    if (cfg.distribution) {
        const auto& d = *cfg.distribution;
        json knots = json::array();
        for (const auto& [x, f] : d.distribution.knots()) knots.push_back({x, f});
        doc["distribution"] = {
            {"kind", d.distribution.kind() == TypeDistribution::Kind::Uniform ? "uniform" : "piecewise_linear"},
            {"knots", knots},
            {"n", d.n},
            {"placement", d.placement == ThetaPlacement::BinMean ? "bin_mean" : "span_grid"}};
    }
    return doc;
}

}  // namespace

unsigned default_workers() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CONTRACT_FORGE_THREADS")) {
        unsigned cap = 0;
        const std::string_view text(env);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
        if (ec == std::errc() && ptr == text.data() + text.size() && cap > 0) return std::min(hw, cap);
    }
    return hw;
}

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load(opts);
        json doc = document_header(cfg);
        json reports = json::array();
        for (auto regime : cfg.regimes) {
            const auto report = cfg.distribution ? solve_continuous(cfg.distribution->distribution, cfg.params,
                                                                    cfg.distribution->n, regime,
                                                                    cfg.distribution->placement)
                                                 : solve(cfg.profile, cfg.params, regime);
            auto j = to_json(report, cfg.profile, cfg.params);
            if (!j["negative_down_payment_types"].empty())
                err << "note: " << to_string(regime)
                    << " menu has negative down payments (the PU pays the SU at signing)\n";
            reports.push_back(std::move(j));
        }
        doc["reports"] = std::move(reports);
        emit(opts, out, doc.dump(2) + "\n");
    });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load(opts);
        if (!cfg.sweep) throw ValidationError("sweep", "missing required field");
        const auto rows = run_sweep(cfg.profile, cfg.params, *cfg.sweep, opts.workers);
        std::ostringstream csv;
        write_sweep_csv(csv, cfg.sweep->variable, cfg.profile.size(), rows);
        emit(opts, out, csv.str());
    });
}

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load(opts);
        if (opts.grid) apply_grid_flag(cfg.grid, *opts.grid);
        if (cfg.profile.size() > kOracleMaxTypes)
            throw ValidationError("profile.thetas", "verify searches the full contract grid and supports at most " +
                                                        std::to_string(kOracleMaxTypes) + " types; got " +
                                                        std::to_string(cfg.profile.size()));
        json doc = document_header(cfg);
        doc["grid"] = {{"r_steps", cfg.grid.r_steps},
                       {"t_steps", cfg.grid.t_steps},
                       {"refine_rounds", cfg.grid.refine_rounds}};
        json verdicts = json::array();
        for (auto regime : cfg.regimes) {
            const auto verdict = grid_search(cfg.profile, cfg.params, cfg.grid, regime);
            auto j = to_json(verdict);
            j["regime"] = to_string(regime);
            const auto closed = solve(cfg.profile, cfg.params, regime);
            j["closed_form_menu"] = to_json(closed.menu);
            if (regime == ScenarioKind::Joint)
                j["binding_pattern"] = to_json(verify_binding_pattern(closed, cfg.profile, cfg.params));
            verdicts.push_back(std::move(j));
        }
        doc["verdicts"] = std::move(verdicts);
        emit(opts, out, doc.dump(2) + "\n");
    });
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load(opts);
        if (cfg.regimes.size() != 1)
            throw ValidationError("regime", "simulate needs exactly one regime");
        const auto regime = cfg.regimes.front();
        const ContractMenu menu = cfg.menu ? *cfg.menu : solve(cfg.profile, cfg.params, regime).menu;
        const auto stats = run_simulation(menu, cfg.profile, cfg.params, cfg.sim);
        for (const auto& w : stats.warnings) err << "warning: " << w << '\n';

        std::vector<double> efforts(cfg.profile.size());
        for (std::size_t i = 0; i < efforts.size(); ++i)
            efforts[i] = regime == ScenarioKind::MoralHazardOnly
                             ? cfg.params.resolved_fixed_effort(cfg.profile)
                             : best_effort(cfg.profile.theta(i), menu[i].installment, cfg.params);

        json doc = document_header(cfg);
        doc["regime"] = to_string(regime);
        doc["seed"] = cfg.sim.seed;
        doc["clamp_probability"] = cfg.sim.clamp_probability;
        doc["menu"] = to_json(menu);
        doc["analytic_pu_payoff"] = pu_expected_payoff(menu, cfg.profile, efforts);
        doc.update(to_json(stats));
        emit(opts, out, doc.dump(2) + "\n");
    });
}

}  // namespace cforge::cli
