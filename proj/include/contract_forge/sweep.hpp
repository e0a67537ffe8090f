#pragma once

// Parameter sweeps over c, R or the high-type prior, producing plot-ready rows.
//
// CSV layout (column order is fixed):
//   scenario,variable,value,pu_payoff,welfare,t_low,r_low,t_mid,r_mid,t_high,r_high,
//   su_payoff_1,...,su_payoff_n
// "low", "mid" and "high" are types 1, ceil(n/2) and n. Rows are sorted by
// scenario (joint, as, mh) and then by value.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "contract_forge/model.hpp"

namespace cforge {

enum class SweepVariable { CostC, RevenueR, HighTypeBeta };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

struct SweepSpec {
    SweepVariable variable = SweepVariable::CostC;
    double from = 1.0;
    double to = 10.0;
    int steps = 19;
    std::vector<ScenarioKind> scenarios{std::begin(kAllScenarios), std::end(kAllScenarios)};

    /// Default range for a variable: c in [1,10], R in [0.1,1], beta in [0.05,0.95].
    static SweepSpec defaults(SweepVariable variable);
    /// from < to, steps >= 2, scenarios nonempty; high-type-beta sweeps need n = 2.
    void validate(const TypeProfile& profile) const;
    std::vector<double> values() const;
};

struct SweepRow {
    ScenarioKind scenario = ScenarioKind::Joint;
    double value = 0.0;
    double pu_payoff = 0.0;
    double welfare = 0.0;
    Contract low, mid, high;
    std::vector<double> su_payoffs;
};

/// Grid points are independent and may be solved on `workers` threads; the
/// returned order never depends on it.
std::vector<SweepRow> run_sweep(const TypeProfile& profile, const MarketParams& params, const SweepSpec& spec,
                                unsigned workers = 1);

std::string sweep_csv_header(SweepVariable variable, std::size_t n);
void write_sweep_csv(std::ostream& out, SweepVariable variable, std::size_t n, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double x);

}  // namespace cforge
