#include "contract_forge/report_io.hpp"

#include <cmath>

#include "contract_forge/config.hpp"

namespace cforge {

using nlohmann::json;

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json optional_number(const std::optional<double>& x) { return x ? number_or_null(*x) : json(nullptr); }

}  // namespace

json to_json(const TypeProfile& profile) {
    return {{"thetas", std::vector<double>(profile.thetas().begin(), profile.thetas().end())},
            {"betas", std::vector<double>(profile.betas().begin(), profile.betas().end())}};
}

json to_json(const MarketParams& params) {
    json j{{"revenue_R", params.revenue}, {"cost_c", params.cost}};
    if (params.fixed_effort) j["fixed_effort"] = *params.fixed_effort;
    return j;
}

json to_json(const ContractMenu& menu) {
    json arr = json::array();
    for (std::size_t i = 0; i < menu.size(); ++i)
        arr.push_back({{"type", i + 1}, {"t", menu[i].down_payment}, {"r", menu[i].installment}});
    return arr;
}

json to_json(const ConstraintReport& report) {
    json violations = json::array();
    for (const auto& v : report.global_ic_violations)
        violations.push_back({{"type", v.type + 1}, {"mimics", v.mimics + 1}, {"magnitude", v.magnitude}});
    return {{"regime", to_string(report.regime)},
            {"feasible", report.feasible()},
            {"ic_enforced", report.ic_enforced},
            {"ir_slack", report.ir_slack},
            {"ldic_slack", report.ldic_slack},
            {"ic_violations", violations}};
}

json to_json(const SolveReport& report, const TypeProfile& profile, const MarketParams& params) {
    json menu = json::array();
    json negative = json::array();
    for (std::size_t i = 0; i < report.menu.size(); ++i) {
        const auto& c = report.menu[i];
        menu.push_back({{"type", i + 1},
                        {"theta", profile.theta(i)},
                        {"t", c.down_payment},
                        {"r", c.installment},
                        {"effort", report.efforts[i]},
                        {"su_payoff", report.su_payoffs[i]}});
        if (c.down_payment < 0.0) negative.push_back(i + 1);
    }
    const auto audit = check_constraints(report.menu, profile, params, report.regime);
    json j{{"regime", to_string(report.regime)},
           {"menu", menu},
           {"pu_payoff", report.pu_payoff},
           {"welfare", report.welfare},
           {"binding", {{"ir_slack", report.binding.ir}, {"ldic_slack", report.binding.ldic}}},
           {"constraints", to_json(audit)},
           {"negative_down_payment_types", negative}};
    if (report.fixed_effort) j["fixed_effort"] = *report.fixed_effort;
    if (!report.bin_edges.empty()) j["bin_edges"] = report.bin_edges;
    return j;
}

json to_json(const OracleVerdict& verdict) {
    return {{"best_menu", to_json(verdict.best_menu)},
            {"best_payoff", number_or_null(verdict.best_payoff)},
            {"closed_form_payoff", number_or_null(verdict.closed_form_payoff)},
            {"gap", number_or_null(verdict.gap)},
            {"feasible", verdict.feasible},
            {"t_max", verdict.t_max},
            {"menus_evaluated", verdict.menus_evaluated}};
}

json to_json(const BindingAudit& audit) {
    json rows = json::array();
    for (const auto& e : audit.table) {
        json row{{"kind", e.kind == SlackEntry::Kind::IR ? "IR" : "IC"},
                 {"type", e.type + 1},
                 {"slack", e.slack},
                 {"expected_binding", e.expected_binding},
                 {"ok", e.ok}};
        if (e.kind == SlackEntry::Kind::IC) row["mimics"] = e.mimics + 1;
        rows.push_back(std::move(row));
    }
    return {{"holds", audit.holds}, {"slacks", rows}};
}

json to_json(const SimStats& stats) {
    json types = json::array();
    for (std::size_t i = 0; i < stats.by_type.size(); ++i) {
        const auto& t = stats.by_type[i];
        types.push_back({{"type", i + 1},
                         {"draws", t.draws},
                         {"chosen_contract", t.chosen_contract + 1},
                         {"success_probability", t.success_probability},
                         {"mean_su_payoff", optional_number(t.mean_su_payoff)},
                         {"stderr_su_payoff", optional_number(t.stderr_su_payoff)},
                         {"success_rate", optional_number(t.success_rate)},
                         {"stderr_success_rate", optional_number(t.stderr_success_rate)}});
    }
    return {{"trials", stats.trials},
            {"mean_pu_payoff", stats.mean_pu_payoff},
            {"stderr_pu_payoff", optional_number(stats.stderr_pu_payoff)},
            {"mean_su_payoff", stats.mean_su_payoff},
            {"stderr_su_payoff", optional_number(stats.stderr_su_payoff)},
            {"by_type", types},
            {"clamp_events", stats.clamp_events},
            {"warnings", stats.warnings}};
}

LoadedSolve load_solve_document(const json& doc) {
    if (!doc.is_object() || !doc.contains("reports") || !doc["reports"].is_array())
        throw ValidationError("reports", "solve document must contain a reports array");
    const auto cfg = parse_config(json{{"profile", doc.value("profile", json())}, {"params", doc.value("params", json())}});
    LoadedSolve loaded{cfg.profile, cfg.params, {}, {}, {}};
    const auto& reports = doc["reports"];
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& rep = reports[k];
        const auto path = "reports[" + std::to_string(k) + "]";
        if (!rep.is_object() || !rep.contains("regime") || !rep.contains("menu") || !rep["menu"].is_array())
            throw ValidationError(path, "must contain regime and menu");
        const auto regime = parse_scenario(rep["regime"].get<std::string>());
        ContractMenu menu;
        for (const auto& c : rep["menu"]) {
            if (!c.contains("t") || !c.contains("r") || !c["t"].is_number() || !c["r"].is_number())
                throw ValidationError(path + ".menu", "entries need numeric t and r");
            menu.contracts.push_back({c["t"].get<double>(), c["r"].get<double>()});
        }
        MarketParams params = loaded.params;
        if (rep.contains("fixed_effort") && rep["fixed_effort"].is_number())
            params.fixed_effort = rep["fixed_effort"].get<double>();
        loaded.audits.push_back(check_constraints(menu, loaded.profile, params, regime));
        loaded.regimes.push_back(regime);
        loaded.menus.push_back(std::move(menu));
    }
    return loaded;
}

}  // namespace cforge
