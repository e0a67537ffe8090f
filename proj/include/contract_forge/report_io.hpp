#pragma once

// JSON documents written by the CLI, and the loader that re-audits a solve
// document.

#include <vector>

#include <json.hpp>

#include "contract_forge/contracts.hpp"
#include "contract_forge/market_sim.hpp"
#include "contract_forge/model.hpp"
#include "contract_forge/oracle.hpp"

namespace cforge {

nlohmann::json to_json(const TypeProfile& profile);
nlohmann::json to_json(const MarketParams& params);
nlohmann::json to_json(const ContractMenu& menu);
nlohmann::json to_json(const ConstraintReport& report);

/// One regime's solution. Types are numbered from 1. Types asked for a negative
/// down payment are listed under "negative_down_payment_types".
nlohmann::json to_json(const SolveReport& report, const TypeProfile& profile, const MarketParams& params);

nlohmann::json to_json(const OracleVerdict& verdict);
nlohmann::json to_json(const BindingAudit& audit);
/// Standard errors that are undefined (fewer than two samples) are written as null.
nlohmann::json to_json(const SimStats& stats);

/// A solve document read back from disk, with every menu re-audited.
struct LoadedSolve {
    TypeProfile profile;
    MarketParams params;
    std::vector<ScenarioKind> regimes;
    std::vector<ContractMenu> menus;
    std::vector<ConstraintReport> audits;
};

LoadedSolve load_solve_document(const nlohmann::json& doc);

}  // namespace cforge
