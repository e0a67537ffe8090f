#include "contract_forge/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cforge {

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Joint: return "joint";
        case ScenarioKind::AdverseSelectionOnly: return "as";
        case ScenarioKind::MoralHazardOnly: return "mh";
    }
    return "joint";
}

ScenarioKind parse_scenario(std::string_view name) {
    if (name == "joint") return ScenarioKind::Joint;
    if (name == "as" || name == "adverse_selection_only") return ScenarioKind::AdverseSelectionOnly;
    if (name == "mh" || name == "moral_hazard_only") return ScenarioKind::MoralHazardOnly;
    throw ValidationError("regime", "unknown regime '" + std::string(name) + "' (expected joint, as or mh)");
}

TypeProfile::TypeProfile(std::vector<double> thetas, std::vector<double> betas)
    : thetas_(std::move(thetas)), betas_(std::move(betas)) {
    if (thetas_.empty()) throw ValidationError("profile.thetas", "at least one type is required");
    if (thetas_.size() != betas_.size())
        throw ValidationError("profile.betas", "length " + std::to_string(betas_.size()) +
                                                   " differs from thetas length " +
                                                   std::to_string(thetas_.size()));
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
        const auto path = "profile.thetas[" + std::to_string(i) + "]";
        if (!std::isfinite(thetas_[i]) || thetas_[i] <= 0.0)
            throw ValidationError(path, "must be finite and positive");
        if (i > 0 && !(thetas_[i - 1] < thetas_[i]))
            throw ValidationError(path, "thetas must be strictly increasing");
    }
    for (std::size_t i = 0; i < betas_.size(); ++i) {
        if (!std::isfinite(betas_[i]) || betas_[i] < 0.0 || betas_[i] > 1.0)
            throw ValidationError("profile.betas[" + std::to_string(i) + "]", "must lie in [0, 1]");
    }
    const double total = std::accumulate(betas_.begin(), betas_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("profile.betas", "must sum to 1 (got " + std::to_string(total) + ")");
}

void MarketParams::validate() const {
    if (!std::isfinite(revenue) || revenue <= 0.0)
        throw ValidationError("params.revenue_R", "must be finite and positive");
    if (!std::isfinite(cost) || cost <= 0.0)
        throw ValidationError("params.cost_c", "must be finite and positive");
    if (fixed_effort && (!std::isfinite(*fixed_effort) || *fixed_effort < 0.0))
        throw ValidationError("params.fixed_effort", "must be finite and nonnegative");
}

double MarketParams::resolved_fixed_effort(const TypeProfile& profile) const {
    return fixed_effort.value_or(profile.theta(0) * revenue / cost);
}

void validate_menu(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params) {
    if (menu.size() != profile.size())
        throw ValidationError("menu", "has " + std::to_string(menu.size()) + " contracts for " +
                                          std::to_string(profile.size()) + " types");
    for (std::size_t i = 0; i < menu.size(); ++i) {
        const auto& c = menu[i];
        const auto path = "menu[" + std::to_string(i) + "]";
        if (!std::isfinite(c.down_payment)) throw ValidationError(path + ".t", "must be finite");
        if (!std::isfinite(c.installment) || c.installment < 0.0 || c.installment > params.revenue)
            throw ValidationError(path + ".r", "installment must lie in [0, R]");
    }
}

double best_effort(double theta, double installment, const MarketParams& params) {
    if (!(theta > 0.0)) throw std::domain_error("best_effort: theta must be positive");
    if (installment < 0.0 || installment > params.revenue)
        throw std::domain_error("best_effort: installment outside [0, R]");
    return theta * (params.revenue - installment) / params.cost;
}

double su_payoff(double theta, double effort, const Contract& contract, const MarketParams& params) {
    return theta * effort * (params.revenue - contract.installment) - contract.down_payment -
           effort_cost(effort, params.cost);
}

double reduced_su_payoff(double theta, const Contract& contract, const MarketParams& params) {
    const double margin = theta * (params.revenue - contract.installment);
    return margin * margin / (2.0 * params.cost) - contract.down_payment;
}

std::vector<double> best_efforts(const ContractMenu& menu, const TypeProfile& profile,
                                 const MarketParams& params) {
    validate_menu(menu, profile, params);
    std::vector<double> efforts(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
        efforts[i] = best_effort(profile.theta(i), menu[i].installment, params);
    return efforts;
}

double pu_expected_payoff(const ContractMenu& menu, const TypeProfile& profile,
                          std::span<const double> efforts) {
    if (menu.size() != profile.size() || efforts.size() != profile.size())
        throw ValidationError("menu", "length mismatch between menu, profile and efforts");
    double total = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto& c = menu[i];
        total += profile.beta(i) * (c.down_payment + profile.theta(i) * efforts[i] * c.installment);
    }
    return total;
}

double pu_expected_payoff(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params) {
    const auto efforts = best_efforts(menu, profile, params);
    return pu_expected_payoff(menu, profile, efforts);
}

double social_welfare(const TypeProfile& profile, const MarketParams& params,
                      std::span<const double> efforts) {
    if (efforts.size() != profile.size())
        throw ValidationError("efforts", "length mismatch with profile");
    double total = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double e = efforts[i];
        total += profile.beta(i) * (profile.theta(i) * e * params.revenue - effort_cost(e, params.cost));
    }
    return total;
}

double social_welfare(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params) {
    const auto efforts = best_efforts(menu, profile, params);
    return social_welfare(profile, params, efforts);
}

double success_probability(double theta, double effort, bool clamp) {
    const double p = theta * effort;
    return clamp ? std::clamp(p, 0.0, 1.0) : p;
}

}  // namespace cforge
