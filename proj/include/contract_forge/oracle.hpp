#pragma once

// Brute-force audit of closed-form menus.
//
// grid_search enumerates per-type (r, t) grids, keeps menus that satisfy the
// regime's IR/IC constraints at a loose tolerance, and returns the one with the
// highest expected PU payoff. It never consults the closed-form solvers except
// to report the payoff gap.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contract_forge/contracts.hpp"
#include "contract_forge/model.hpp"

namespace cforge {

struct GridSpec {
    int r_steps = 200;
    int t_steps = 200;
    // Down payments are searched in [-t_max, t_max]. Defaults to
    // 1.5 * max_i theta_i^2 R^2 / (2c), or 1 when that is zero.
    std::optional<double> t_max;
    int refine_rounds = 3;
    unsigned workers = 1;

    void validate() const;
};

inline constexpr double kOracleTolerance = 1e-6;
inline constexpr std::size_t kOracleMaxTypes = 3;

struct OracleVerdict {
    ContractMenu best_menu;
    double best_payoff = 0.0;
    double closed_form_payoff = 0.0;
    double gap = 0.0;  // best_payoff - closed_form_payoff
    bool feasible = false;
    double t_max = 0.0;
    std::uint64_t menus_evaluated = 0;
};

/// Default down-payment search half-width for a profile.
double default_t_max(const TypeProfile& profile, const MarketParams& params);

/// Requires n <= 3. R = 0 is accepted (degenerate market). The result is
/// deterministic and independent of `spec.workers`; payoff ties are broken by
/// the lexicographically smallest (r_1..r_n, t_1..t_n).
OracleVerdict grid_search(const TypeProfile& profile, const MarketParams& params, const GridSpec& spec,
                          ScenarioKind regime = ScenarioKind::Joint);

struct SlackEntry {
    enum class Kind { IR, IC };
    Kind kind = Kind::IR;
    std::size_t type = 0;
    std::size_t mimics = 0;  // IC only
    double slack = 0.0;
    bool expected_binding = false;
    bool ok = false;
};

struct BindingAudit {
    bool holds = false;
    std::vector<SlackEntry> table;
};

/// Checks that exactly IR_1 and the local downward IC constraints bind
/// (|slack| < 1e-9) and every other constraint holds strictly (slack > 1e-12).
BindingAudit verify_binding_pattern(const SolveReport& report, const TypeProfile& profile,
                                    const MarketParams& params);

}  // namespace cforge
