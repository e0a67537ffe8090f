#include "contract_forge/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "contract_forge/contracts.hpp"

namespace cforge {

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::CostC: return "cost_c";
        case SweepVariable::RevenueR: return "revenue_R";
        case SweepVariable::HighTypeBeta: return "high_type_beta";
    }
    return "cost_c";
}

SweepVariable parse_sweep_variable(std::string_view name) {
    if (name == "cost_c" || name == "c") return SweepVariable::CostC;
    if (name == "revenue_R" || name == "R") return SweepVariable::RevenueR;
    if (name == "high_type_beta" || name == "beta") return SweepVariable::HighTypeBeta;
    throw ValidationError("sweep.variable", "unknown sweep variable '" + std::string(name) +
                                                "' (expected cost_c, revenue_R or high_type_beta)");
}

SweepSpec SweepSpec::defaults(SweepVariable variable) {
    SweepSpec spec;
    spec.variable = variable;
    switch (variable) {
        case SweepVariable::CostC: spec.from = 1.0, spec.to = 10.0; break;
        case SweepVariable::RevenueR: spec.from = 0.1, spec.to = 1.0; break;
        case SweepVariable::HighTypeBeta: spec.from = 0.05, spec.to = 0.95; break;
    }
    return spec;
}

void SweepSpec::validate(const TypeProfile& profile) const {
    if (!std::isfinite(from) || !std::isfinite(to) || !(from < to))
        throw ValidationError("sweep.from", "range must satisfy from < to");
    if (steps < 2) throw ValidationError("sweep.steps", "must be at least 2");
    if (scenarios.empty()) throw ValidationError("sweep.scenarios", "must name at least one regime");
    for (std::size_t i = 0; i < scenarios.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (scenarios[i] == scenarios[j]) throw ValidationError("sweep.scenarios", "regimes must not repeat");
    switch (variable) {
        case SweepVariable::CostC:
        case SweepVariable::RevenueR:
            if (from <= 0.0) throw ValidationError("sweep.from", "must be positive for " + std::string(to_string(variable)));
            break;
        case SweepVariable::HighTypeBeta:
            if (profile.size() != 2)
                throw ValidationError("sweep.variable", "high_type_beta sweeps require exactly 2 types, got " +
                                                            std::to_string(profile.size()));
            if (from < 0.0 || to > 1.0) throw ValidationError("sweep.from", "beta range must lie in [0, 1]");
            break;
    }
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> xs(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) xs[k] = from + (to - from) * k / (steps - 1);
    xs.back() = to;
    return xs;
}

std::vector<SweepRow> run_sweep(const TypeProfile& profile, const MarketParams& params, const SweepSpec& spec,
                                unsigned workers) {
    spec.validate(profile);
    params.validate();
    const auto values = spec.values();
    const std::size_t n = profile.size();
    const std::size_t mid = (n + 1) / 2 - 1;
    const std::size_t per_scenario = values.size();
    std::vector<SweepRow> rows(spec.scenarios.size() * per_scenario);

    auto solve_point = [&](std::size_t idx) {
        const auto scenario = spec.scenarios[idx / per_scenario];
        const double v = values[idx % per_scenario];
        MarketParams p = params;
        std::vector<double> betas(profile.betas().begin(), profile.betas().end());
        switch (spec.variable) {
            case SweepVariable::CostC: p.cost = v; break;
            case SweepVariable::RevenueR: p.revenue = v; break;
            case SweepVariable::HighTypeBeta: betas = {1.0 - v, v}; break;
        }
        const TypeProfile point_profile(std::vector<double>(profile.thetas().begin(), profile.thetas().end()),
                                        std::move(betas));
        const auto report = solve(point_profile, p, scenario);
        SweepRow row;
        row.scenario = scenario;
        row.value = v;
        row.pu_payoff = report.pu_payoff;
        row.welfare = report.welfare;
        row.low = report.menu[0];
        row.mid = report.menu[mid];
        row.high = report.menu[n - 1];
        row.su_payoffs = report.su_payoffs;
        rows[idx] = std::move(row);
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) solve_point(i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < rows.size(); i += workers) solve_point(i);
            });
    }

    // Scenario order is joint, as, mh regardless of how they were listed.
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.scenario != b.scenario) return static_cast<int>(a.scenario) < static_cast<int>(b.scenario);
        return a.value < b.value;
    });
    return rows;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string sweep_csv_header(SweepVariable, std::size_t n) {
    std::string header = "scenario,variable,value,pu_payoff,welfare,t_low,r_low,t_mid,r_mid,t_high,r_high";
    for (std::size_t i = 1; i <= n; ++i) header += ",su_payoff_" + std::to_string(i);
    return header;
}

void write_sweep_csv(std::ostream& out, SweepVariable variable, std::size_t n, const std::vector<SweepRow>& rows) {
    out << sweep_csv_header(variable, n) << '\n';
    for (const auto& row : rows) {
        out << to_string(row.scenario) << ',' << to_string(variable) << ',' << format_number(row.value) << ','
            << format_number(row.pu_payoff) << ',' << format_number(row.welfare);
        for (const auto& c : {row.low, row.mid, row.high})
            out << ',' << format_number(c.down_payment) << ',' << format_number(c.installment);
        for (double su : row.su_payoffs) out << ',' << format_number(su);
        out << '\n';
    }
}

}  // namespace cforge
