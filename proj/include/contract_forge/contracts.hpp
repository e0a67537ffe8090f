#pragma once

// Closed-form contract menus for the three information regimes, plus an audit
// of every participation (IR) and incentive (IC) constraint of a menu.

#include <cstddef>
#include <vector>

#include "contract_forge/model.hpp"

namespace cforge {

/// Tail masses mu_i = beta_i + mu_{i+1}, mu_n = beta_n. These are the
/// multipliers of the binding local downward IC constraints.
struct MultiplierLadder {
    std::vector<double> mus;

    static MultiplierLadder from(const TypeProfile& profile);
};

struct IcViolation {
    std::size_t type;      // the SU doing the comparing
    std::size_t mimics;    // the contract it would rather take
    double magnitude;      // how much it gains by mimicking (> 0)

    friend bool operator==(const IcViolation&, const IcViolation&) = default;
};

struct ConstraintReport {
    ScenarioKind regime = ScenarioKind::Joint;
    std::vector<double> ir_slack;                // per type
    std::vector<double> ldic_slack;              // per adjacent pair (k+1 vs k)
    std::vector<std::vector<double>> ic_slack;   // [i][j]: U_i(own) - U_i(contract j); diagonal 0
    std::vector<IcViolation> global_ic_violations;  // ascending (type, mimics)
    // The adverse-selection-only program has no IC constraints; violations are
    // still reported for that regime but do not affect feasibility.
    bool ic_enforced = true;

    bool feasible(double tol = kTolerance) const;
};

/// Menu when both the SU's type and its effort are hidden. Installments follow
/// the multiplier ladder; down payments make IR_1 and every local downward IC
/// bind.
SolveReport solve_joint(const TypeProfile& profile, const MarketParams& params);

/// Effort observable, type hidden: cash only, t_i = theta_i^2 R^2 / (2c), r_i = 0.
SolveReport solve_adverse_only(const TypeProfile& profile, const MarketParams& params);

/// Type observable, effort hidden and fixed at e_hat: t_i = -(c/2) e_hat^2, r_i = R.
SolveReport solve_moral_only(const TypeProfile& profile, const MarketParams& params);

SolveReport solve(const TypeProfile& profile, const MarketParams& params, ScenarioKind regime);

/// Payoff of a type-`theta` SU that signs `contract`, under the effort rule of
/// `regime` (best response, or the fixed effort for MoralHazardOnly).
double regime_su_payoff(double theta, const Contract& contract, const MarketParams& params,
                        ScenarioKind regime, double fixed_effort);

ConstraintReport check_constraints(const ContractMenu& menu, const TypeProfile& profile,
                                   const MarketParams& params, ScenarioKind regime,
                                   double tol = kTolerance);

}  // namespace cforge
