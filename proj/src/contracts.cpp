#include "contract_forge/contracts.hpp"

#include <cmath>

namespace cforge {

namespace {

void require_finite(const SolveReport& report) {
    auto finite = [](double x) { return std::isfinite(x); };
    for (const auto& c : report.menu.contracts)
        if (!finite(c.down_payment) || !finite(c.installment))
            throw SolverError("non-finite contract term in solution");
    if (!finite(report.pu_payoff) || !finite(report.welfare))
        throw SolverError("non-finite payoff in solution");
}

BindingSlacks binding_of(const ConstraintReport& report) { return {report.ir_slack, report.ldic_slack}; }

// Fills efforts, payoffs and binding slacks for a menu whose contracts are set.
SolveReport finish(ScenarioKind regime, ContractMenu menu, const TypeProfile& profile,
                   const MarketParams& params, std::optional<double> fixed_effort) {
    SolveReport report;
    report.regime = regime;
    report.menu = std::move(menu);
    report.fixed_effort = fixed_effort;
    if (fixed_effort) {
        report.efforts.assign(profile.size(), *fixed_effort);
    } else {
        report.efforts = best_efforts(report.menu, profile, params);
    }
    report.su_payoffs.resize(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
        report.su_payoffs[i] = su_payoff(profile.theta(i), report.efforts[i], report.menu[i], params);
    report.pu_payoff = pu_expected_payoff(report.menu, profile, report.efforts);
    report.welfare = social_welfare(profile, params, report.efforts);
    report.binding = binding_of(check_constraints(report.menu, profile, params, regime));
    require_finite(report);
    return report;
}

}  // namespace

MultiplierLadder MultiplierLadder::from(const TypeProfile& profile) {
    MultiplierLadder ladder;
    ladder.mus.resize(profile.size());
    double tail = 0.0;
    for (std::size_t k = profile.size(); k-- > 0;) {
        tail += profile.beta(k);
        ladder.mus[k] = tail;
    }
    return ladder;
}

SolveReport solve_joint(const TypeProfile& profile, const MarketParams& params) {
    params.validate();
    const std::size_t n = profile.size();
    const double R = params.revenue;
    const double c = params.cost;
    const auto ladder = MultiplierLadder::from(profile);

    ContractMenu menu;
    menu.contracts.resize(n);
    // r_n = 0: the top type is never distorted.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double th = profile.theta(i);
        const double gap = profile.theta(i + 1) * profile.theta(i + 1) - th * th;
        const double weighted = ladder.mus[i + 1] * gap;
        const double denom = weighted + profile.beta(i) * th * th;
        // denom == 0 only when no mass sits at or above type i; nothing to distort.
        menu[i].installment = denom > 0.0 ? weighted * R / denom : 0.0;
    }

    auto half_sq = [c](double x) { return x * x / (2.0 * c); };
    menu[0].down_payment = half_sq(profile.theta(0) * (R - menu[0].installment));
    for (std::size_t i = 1; i < n; ++i) {
        const double th = profile.theta(i);
        menu[i].down_payment = half_sq(th * (R - menu[i].installment)) -
                               half_sq(th * (R - menu[i - 1].installment)) + menu[i - 1].down_payment;
    }
    return finish(ScenarioKind::Joint, std::move(menu), profile, params, std::nullopt);
}

SolveReport solve_adverse_only(const TypeProfile& profile, const MarketParams& params) {
    params.validate();
    ContractMenu menu;
    menu.contracts.resize(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double th = profile.theta(i);
        menu[i] = {th * th * params.revenue * params.revenue / (2.0 * params.cost), 0.0};
    }
    return finish(ScenarioKind::AdverseSelectionOnly, std::move(menu), profile, params, std::nullopt);
}

SolveReport solve_moral_only(const TypeProfile& profile, const MarketParams& params) {
    params.validate();
    const double e_hat = params.resolved_fixed_effort(profile);
    ContractMenu menu;
    menu.contracts.assign(profile.size(), Contract{-effort_cost(e_hat, params.cost), params.revenue});
    return finish(ScenarioKind::MoralHazardOnly, std::move(menu), profile, params, e_hat);
}

SolveReport solve(const TypeProfile& profile, const MarketParams& params, ScenarioKind regime) {
    switch (regime) {
        case ScenarioKind::Joint: return solve_joint(profile, params);
        case ScenarioKind::AdverseSelectionOnly: return solve_adverse_only(profile, params);
        case ScenarioKind::MoralHazardOnly: return solve_moral_only(profile, params);
    }
    throw ValidationError("regime", "unknown regime");
}

double regime_su_payoff(double theta, const Contract& contract, const MarketParams& params,
                        ScenarioKind regime, double fixed_effort) {
    if (regime == ScenarioKind::MoralHazardOnly) return su_payoff(theta, fixed_effort, contract, params);
    return reduced_su_payoff(theta, contract, params);
}

bool ConstraintReport::feasible(double tol) const {
    for (double s : ir_slack)
        if (s < -tol) return false;
    if (!ic_enforced) return true;
    for (double s : ldic_slack)
        if (s < -tol) return false;
    return global_ic_violations.empty();
}

ConstraintReport check_constraints(const ContractMenu& menu, const TypeProfile& profile,
                                   const MarketParams& params, ScenarioKind regime, double tol) {
    validate_menu(menu, profile, params);
    const std::size_t n = profile.size();
    const double e_hat =
        regime == ScenarioKind::MoralHazardOnly ? params.resolved_fixed_effort(profile) : 0.0;

    ConstraintReport report;
    report.regime = regime;
    report.ic_enforced = regime != ScenarioKind::AdverseSelectionOnly;
    report.ir_slack.resize(n);
    report.ic_slack.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double th = profile.theta(i);
        const double own = regime_su_payoff(th, menu[i], params, regime, e_hat);
        report.ir_slack[i] = own;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double slack = own - regime_su_payoff(th, menu[j], params, regime, e_hat);
            report.ic_slack[i][j] = slack;
            if (slack < -tol) report.global_ic_violations.push_back({i, j, -slack});
        }
    }
    for (std::size_t k = 0; k + 1 < n; ++k) report.ldic_slack.push_back(report.ic_slack[k + 1][k]);
    return report;
}

}  // namespace cforge
