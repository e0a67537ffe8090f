// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance                 run every criterion
//   acceptance --write-golden  re-measure the two-type oracle gap and freeze it

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "contract_forge/cli.hpp"
#include "contract_forge/continuous.hpp"
#include "contract_forge/contracts.hpp"
#include "contract_forge/market_sim.hpp"
#include "contract_forge/oracle.hpp"
#include "contract_forge/sweep.hpp"
#include "test_support.hpp"

using namespace cforge;
using namespace cforge::testing;
using nlohmann::json;

namespace {

const std::filesystem::path kGolden = std::filesystem::path(CFORGE_GOLDEN_DIR) / "oracle_n2_gap.json";

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects failure messages; the first few are echoed in the summary line.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++failures_;
            if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
        }
    }
    int failures() const { return failures_; }
    Outcome outcome(std::string detail) const {
        if (failures_ > 0) detail += (detail.empty() ? "" : "; ") + std::to_string(failures_) + " failed: " + messages_;
        return {failures_ == 0, detail};
    }

private:
    int failures_ = 0;
    std::string messages_;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<RandomCase> random_suite(std::uint64_t seed, int count = 100) {
    std::mt19937_64 gen(seed);
    std::vector<RandomCase> cases;
    for (int k = 0; k < count; ++k) cases.push_back(random_case(gen));
    return cases;
}

std::string num(double x) { return format_number(x); }

GridSpec oracle_grid() {
    GridSpec spec;
    spec.r_steps = 200;
    spec.t_steps = 200;
    spec.refine_rounds = 3;
    spec.workers = workers();
    return spec;
}

// ---------------------------------------------------------------------------

Outcome adverse_only_exact() {
    Checker check;
    for (const auto& [profile, params] : random_suite(101)) {
        const auto report = solve_adverse_only(profile, params);
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const double th = profile.theta(i);
            const double expected = th * th * params.revenue * params.revenue / (2.0 * params.cost);
            check.expect(std::abs(report.menu[i].down_payment - expected) <= 4 * DBL_EPSILON * expected,
                         "t mismatch");
            check.expect(report.menu[i].installment == 0.0, "r != 0");
            check.expect(std::abs(report.su_payoffs[i]) < 1e-12, "SU payoff != 0");
        }
    }
    return check.outcome("100 draws");
}

Outcome moral_only_exact() {
    Checker check;
    for (const auto& [profile, params] : random_suite(202)) {
        const auto report = solve_moral_only(profile, params);
        const double e = params.resolved_fixed_effort(profile);
        const double expected = -params.cost * e * e / 2.0;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            check.expect(std::abs(report.menu[i].down_payment - expected) <= 4 * DBL_EPSILON * std::abs(expected),
                         "t mismatch");
            check.expect(report.menu[i].down_payment < 0.0, "t >= 0");
            check.expect(report.menu[i].installment == params.revenue, "r != R");
            check.expect(std::abs(report.su_payoffs[i]) < 1e-12, "SU payoff != 0");
        }
    }
    return check.outcome("100 draws, default effort theta_1 R / c");
}

Outcome joint_structure() {
    Checker check;
    const auto report = solve_joint(ten_type_profile(), ten_type_params());
    std::vector<double> r, t;
    for (const auto& c : report.menu.contracts) r.push_back(c.installment), t.push_back(c.down_payment);
    check.expect(r.back() == 0.0, "r_n != 0");
    check.expect(nonincreasing(r), "r not nonincreasing");
    check.expect(std::is_sorted(t.begin(), t.end()), "t not nondecreasing");
    return check.outcome("r_1 = " + num(r.front()) + ", t_n = " + num(t.back()));
}

Outcome binding_pattern(std::string& info) {
    Checker check;
    int regular = 0, regular_ok = 0;
    for (const auto& [profile, params] : random_suite(404)) {
        const auto report = solve_joint(profile, params);
        const bool holds = verify_binding_pattern(report, profile, params).holds;
        std::vector<double> r;
        for (const auto& c : report.menu.contracts) r.push_back(c.installment);
        if (nonincreasing(r)) {
            ++regular;
            regular_ok += holds;
        }
        check.expect(holds, "n=" + std::to_string(profile.size()));
    }
    info = "profiles with nonincreasing r: " + std::to_string(regular_ok) + "/" + std::to_string(regular) +
           " show the pattern";
    return check.outcome(std::to_string(100 - check.failures()) + "/100 hold");
}

Outcome c_invariance() {
    Checker check;
    auto cases = random_suite(505);
    cases.push_back({ten_type_profile(), ten_type_params()});
    for (const auto& [profile, params] : cases) {
        MarketParams scaled = params;
        scaled.cost *= 10.0;
        const auto a = solve_joint(profile, params);
        const auto b = solve_joint(profile, scaled);
        for (std::size_t i = 0; i < profile.size(); ++i)
            check.expect(std::memcmp(&a.menu[i].installment, &b.menu[i].installment, sizeof(double)) == 0,
                         "r differs");
    }
    return check.outcome("101 profiles, bitwise");
}

Outcome bound_ordering() {
    Checker check;
    for (const auto& [profile, base] : {RandomCase{two_type_profile(), two_type_params()},
                                        RandomCase{ten_type_profile(), ten_type_params()}}) {
        for (auto variable : {SweepVariable::CostC, SweepVariable::RevenueR}) {
            const auto rows = run_sweep(profile, base, SweepSpec::defaults(variable), workers());
            const std::size_t per = rows.size() / 3;
            for (std::size_t k = 0; k < per; ++k) {
                const double joint = rows[k].pu_payoff, as = rows[per + k].pu_payoff, mh = rows[2 * per + k].pu_payoff;
                check.expect(as >= joint && joint >= mh,
                             std::string(to_string(variable)) + "=" + num(rows[k].value) + " out of order");
            }
        }
    }
    const auto profile = two_type_profile();
    const auto params = two_type_params();
    const double as = solve_adverse_only(profile, params).pu_payoff;
    const double joint = solve_joint(profile, params).pu_payoff;
    const double mh = solve_moral_only(profile, params).pu_payoff;
    check.expect(std::abs(as - 0.25) < 1e-9, "AS " + num(as));
    check.expect(std::abs(joint - 0.2125) < 1e-9, "joint " + num(joint));
    check.expect(std::abs(mh - 0.2) < 1e-9, "MH " + num(mh));
    return check.outcome("fixture AS/joint/MH = " + num(as) + "/" + num(joint) + "/" + num(mh));
}

Outcome oracle_audit(bool write_golden) {
    using clock = std::chrono::steady_clock;
    Checker check;

    auto t0 = clock::now();
    const TypeProfile one({1.0}, {1.0});
    const auto single = grid_search(one, two_type_params(), oracle_grid());
    const double s1 = std::chrono::duration<double>(clock::now() - t0).count();
    check.expect(s1 < 60.0, "n=1 took " + num(s1) + " s");
    check.expect(single.feasible && std::abs(single.gap) < 1e-3, "n=1 gap " + num(single.gap));

    t0 = clock::now();
    const auto pair = grid_search(two_type_profile(), two_type_params(), oracle_grid());
    const double s2 = std::chrono::duration<double>(clock::now() - t0).count();
    check.expect(s2 < 60.0, "n=2 took " + num(s2) + " s");
    check.expect(pair.feasible, "n=2 infeasible");

    if (write_golden) {
        json doc{{"profile", {{"thetas", {1, 2}}, {"betas", {0.5, 0.5}}}},
                 {"params", {{"revenue_R", 1}, {"cost_c", 5}}},
                 {"grid", {{"r_steps", 200}, {"t_steps", 200}, {"refine_rounds", 3}}},
                 {"closed_form_payoff", pair.closed_form_payoff},
                 {"best_payoff", pair.best_payoff},
                 {"gap", pair.gap}};
        std::ofstream(kGolden) << doc.dump(2) << '\n';
    }
    std::ifstream in(kGolden);
    if (!in) {
        check.expect(false, "missing " + kGolden.string());
    } else {
        const double frozen = json::parse(in).at("gap").get<double>();
        check.expect(std::abs(pair.gap - frozen) <= 1e-4, "gap " + num(pair.gap) + " vs frozen " + num(frozen));
    }
    return check.outcome("n=2 gap " + num(pair.gap) + " (" + num(s1) + " s, " + num(s2) + " s)");
}

Outcome monotonic_trends() {
    Checker check;
    const auto profile = ten_type_profile();
    const auto params = ten_type_params();
    for (auto variable : {SweepVariable::CostC, SweepVariable::RevenueR}) {
        const auto rows = run_sweep(profile, params, SweepSpec::defaults(variable), workers());
        for (std::size_t k = 1; k < rows.size(); ++k) {
            if (rows[k].scenario != rows[k - 1].scenario) continue;
            const bool ok = variable == SweepVariable::CostC ? rows[k].pu_payoff < rows[k - 1].pu_payoff
                                                             : rows[k].pu_payoff > rows[k - 1].pu_payoff;
            check.expect(ok, std::string(to_string(rows[k].scenario)) + " not strictly monotone in " +
                                 std::string(to_string(variable)));
        }
        for (const auto& row : rows) {
            if (row.scenario == ScenarioKind::Joint) continue;
            for (double u : row.su_payoffs)
                check.expect(std::abs(u) < 1e-12, std::string(to_string(row.scenario)) + " SU payoff " + num(u));
        }
    }
    return check.outcome("default sweeps of c and R, ten-type profile");
}

Outcome monte_carlo() {
    Checker check;
    // theta = 1, R = 1, c = 5, effort 0.2: theta e = 0.2 and the PU earns -0.1 + 0.2 on average.
    const TypeProfile profile({1.0}, {1.0});
    const MarketParams params{1.0, 5.0, 0.2};
    const auto report = solve_moral_only(profile, params);
    SimConfig cfg;
    cfg.trials = 100000;
    cfg.seed = 2024;
    cfg.regime = ScenarioKind::MoralHazardOnly;
    cfg.workers = workers();
    const auto stats = run_simulation(report.menu, profile, params, cfg);
    const double se = stats.stderr_pu_payoff.value_or(NAN);
    check.expect(std::abs(stats.mean_pu_payoff - report.pu_payoff) < 3.0 * se,
                 "mean " + num(stats.mean_pu_payoff) + " vs " + num(report.pu_payoff));

    // Byte-identical CLI output across reruns and worker counts.
    const auto path = std::filesystem::temp_directory_path() / "cforge_acceptance_sim.json";
    std::ofstream(path) << json{{"profile", {{"thetas", {1}}, {"betas", {1}}}},
                                {"params", {{"revenue_R", 1}, {"cost_c", 5}, {"fixed_effort", 0.2}}},
                                {"regime", "mh"},
                                {"sim", {{"trials", 100000}, {"seed", 2024}}}}
                               .dump();
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
        cli::CommandOptions opts;
        opts.config = path;
        opts.workers = k == 0 ? 1 : workers();
        std::ostringstream out, err;
        check.expect(cli::cmd_simulate(opts, out, err) == cli::kExitOk, "simulate failed: " + err.str());
        outputs[k] = out.str();
    }
    std::filesystem::remove(path);
    check.expect(!outputs[0].empty() && outputs[0] == outputs[1], "reruns differ");
    return check.outcome("mean " + num(stats.mean_pu_payoff) + " +- " + num(se) + ", expected " +
                         num(report.pu_payoff));
}

Outcome self_selection(std::string& info) {
    Checker check;
    int regular = 0, regular_ok = 0, profiles_ok = 0;
    for (const auto& [profile, params] : random_suite(1010)) {
        const auto report = solve_joint(profile, params);
        bool all = true;
        for (std::size_t i = 0; i < profile.size(); ++i)
            all = all && select_contract(profile.theta(i), report.menu, params, i) == i;
        std::vector<double> r;
        for (const auto& c : report.menu.contracts) r.push_back(c.installment);
        if (nonincreasing(r)) {
            ++regular;
            regular_ok += all;
        }
        profiles_ok += all;
        check.expect(all, "n=" + std::to_string(profile.size()));
    }
    info = "profiles with nonincreasing r: " + std::to_string(regular_ok) + "/" + std::to_string(regular) +
           " self-select";
    return check.outcome(std::to_string(profiles_ok) + "/100 self-select");
}

Outcome continuous_convergence() {
    Checker check;
    const auto dist = TypeDistribution::uniform(1.0, 10.0);
    const double p40 = solve_continuous(dist, ten_type_params(), 40, ScenarioKind::Joint).pu_payoff;
    const double p80 = solve_continuous(dist, ten_type_params(), 80, ScenarioKind::Joint).pu_payoff;
    const double rel = std::abs(p80 - p40) / std::abs(p40);
    check.expect(rel < 0.01, "relative difference " + num(rel));
    return check.outcome("PU n=40 " + num(p40) + ", n=80 " + num(p80) + ", rel " + num(rel));
}

}  // namespace

int main(int argc, char** argv) {
    const bool write_golden = argc > 1 && std::strcmp(argv[1], "--write-golden") == 0;

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome(std::string&)> run;
    };
    auto plain = [](Outcome (*f)()) { return [f](std::string&) { return f(); }; };
    const std::vector<Criterion> criteria{
        {1, "adverse-selection-only closed form", 1, plain(adverse_only_exact)},
        {2, "moral-hazard-only closed form", 1, plain(moral_only_exact)},
        {3, "joint menu structure, ten-type profile", 1, plain(joint_structure)},
        {4, "binding pattern on random profiles", 5, binding_pattern},
        {5, "installments invariant to c", 1, plain(c_invariance)},
        {6, "bound ordering AS >= joint >= MH", 5, plain(bound_ordering)},
        {7, "brute-force oracle audit", 120, [&](std::string&) { return oracle_audit(write_golden); }},
        {8, "monotonic sweep trends", 5, plain(monotonic_trends)},
        {9, "Monte Carlo consistency and reproducibility", 10, plain(monte_carlo)},
        {10, "self-selection on random profiles", 5, self_selection},
        {11, "continuous-model convergence", 5, plain(continuous_convergence)},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        std::string info;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run(info);
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            outcome.pass = false;
            outcome.detail += "; over time budget of " + num(c.budget_s) + " s";
        }
        failed += !outcome.pass;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3f s", secs);
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " [" << timing << "] - "
                  << outcome.detail << '\n';
        if (!info.empty()) std::cout << "      info: " << info << '\n';
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
