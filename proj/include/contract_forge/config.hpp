#pragma once

// JSON scenario configuration shared by every CLI subcommand.
//
//   {
//     "profile":  {"thetas": [1, 2], "betas": [0.5, 0.5]},
//     "distribution": {"kind": "uniform", "lower": 1, "upper": 10, "n": 10,
//                      "placement": "bin_mean" | "span_grid"},   // instead of profile
//     "params":   {"revenue_R": 1, "cost_c": 5, "fixed_effort": 0.2},
//     "regime":   "joint" | "as" | "mh" | "all" | ["joint", "mh"],
//     "menu":     [{"t": 0.1, "r": 0.0}],                          // simulate only
//     "sim":      {"trials": 100000, "seed": 7, "clamp_probability": true},
//     "grid":     {"r_steps": 200, "t_steps": 200, "refine_rounds": 3, "t_max": 1.5},
//     "sweep":    {"variable": "cost_c", "from": 1, "to": 10, "steps": 19,
//                  "scenarios": ["joint", "as", "mh"]}
//   }
//
// Every validation failure is reported as a ValidationError naming the field.

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "contract_forge/continuous.hpp"
#include "contract_forge/market_sim.hpp"
#include "contract_forge/model.hpp"
#include "contract_forge/oracle.hpp"
#include "contract_forge/sweep.hpp"

namespace cforge {

struct DistributionConfig {
    TypeDistribution distribution;
    std::size_t n = 10;
    ThetaPlacement placement = ThetaPlacement::BinMean;
};

struct ScenarioConfig {
    TypeProfile profile;
    std::optional<DistributionConfig> distribution;
    MarketParams params;
    std::vector<ScenarioKind> regimes;
    std::optional<ContractMenu> menu;
    SimConfig sim;
    GridSpec grid;
    std::optional<SweepSpec> sweep;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a config file; unreadable files and malformed JSON raise
/// ValidationError.
ScenarioConfig load_config(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace cforge
