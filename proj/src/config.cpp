#include "contract_forge/config.hpp"

#include <fstream>
#include <sstream>

namespace cforge {

namespace {

using nlohmann::json;

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

const json& require(const json& obj, const std::string& parent, const std::string& key) {
    if (!obj.is_object()) throw ValidationError(parent, "must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(join(parent, key), "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "must be a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError(path, "must be an integer");
    return v.get<std::int64_t>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError(path, "must be a string");
    return v.get<std::string>();
}

std::optional<double> optional_number(const json& obj, const std::string& parent, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return as_number(*it, join(parent, key));
}

ScenarioKind scenario_at(const json& v, const std::string& path) {
    const auto name = as_string(v, path);
    try {
        return parse_scenario(name);
    } catch (const ValidationError&) {
        throw ValidationError(path, "unknown regime '" + name + "' (expected joint, as, mh or all)");
    }
}

std::vector<ScenarioKind> parse_regimes(const json& v, const std::string& path) {
    if (v.is_string() && v.get<std::string>() == "all")
        return {std::begin(kAllScenarios), std::end(kAllScenarios)};
    if (v.is_string()) return {scenario_at(v, path)};
    if (!v.is_array() || v.empty()) throw ValidationError(path, "must be a regime name or a nonempty array");
    std::vector<ScenarioKind> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(scenario_at(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

DistributionConfig parse_distribution(const json& d) {
    const std::string base = "distribution";
    const auto kind = as_string(require(d, base, "kind"), base + ".kind");
    std::optional<TypeDistribution> dist;
    if (kind == "uniform") {
        dist = TypeDistribution::uniform(as_number(require(d, base, "lower"), base + ".lower"),
                                         as_number(require(d, base, "upper"), base + ".upper"));
    } else if (kind == "piecewise_linear") {
        const auto& knots = require(d, base, "knots");
        if (!knots.is_array()) throw ValidationError(base + ".knots", "must be an array of [theta, F] pairs");
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t k = 0; k < knots.size(); ++k) {
            const auto path = base + ".knots[" + std::to_string(k) + "]";
            const auto xs = as_numbers(knots[k], path);
            if (xs.size() != 2) throw ValidationError(path, "must be a [theta, F] pair");
            pairs.emplace_back(xs[0], xs[1]);
        }
        dist = TypeDistribution::piecewise_linear(std::move(pairs));
    } else {
        throw ValidationError(base + ".kind", "expected uniform or piecewise_linear");
    }
    DistributionConfig cfg{*dist};
    const auto n = as_integer(require(d, base, "n"), base + ".n");
    if (n < 1) throw ValidationError(base + ".n", "must be at least 1");
    cfg.n = static_cast<std::size_t>(n);
    if (auto it = d.find("placement"); it != d.end()) {
        const auto placement = as_string(*it, base + ".placement");
        if (placement == "bin_mean") {
            cfg.placement = ThetaPlacement::BinMean;
        } else if (placement == "span_grid") {
            cfg.placement = ThetaPlacement::SpanGrid;
        } else {
            throw ValidationError(base + ".placement", "expected bin_mean or span_grid");
        }
    }
    return cfg;
}

TypeProfile parse_profile(const json& p) {
    const auto thetas = as_numbers(require(p, "profile", "thetas"), "profile.thetas");
    const auto betas = as_numbers(require(p, "profile", "betas"), "profile.betas");
    return TypeProfile(thetas, betas);
}

MarketParams parse_params(const json& p) {
    MarketParams params;
    params.revenue = as_number(require(p, "params", "revenue_R"), "params.revenue_R");
    params.cost = as_number(require(p, "params", "cost_c"), "params.cost_c");
    params.fixed_effort = optional_number(p, "params", "fixed_effort");
    params.validate();
    return params;
}

ContractMenu parse_menu(const json& m) {
    if (!m.is_array()) throw ValidationError("menu", "must be an array of {t, r} objects");
    ContractMenu menu;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto path = "menu[" + std::to_string(i) + "]";
        menu.contracts.push_back(
            {as_number(require(m[i], path, "t"), path + ".t"), as_number(require(m[i], path, "r"), path + ".r")});
    }
    return menu;
}

SimConfig parse_sim(const json& s) {
    SimConfig sim;
    if (auto it = s.find("trials"); it != s.end()) {
        const auto trials = as_integer(*it, "sim.trials");
        if (trials < 1) throw ValidationError("sim.trials", "must be at least 1");
        sim.trials = static_cast<std::uint64_t>(trials);
    }
    if (auto it = s.find("seed"); it != s.end()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0))
            throw ValidationError("sim.seed", "must be a nonnegative integer");
        sim.seed = it->get<std::uint64_t>();
    }
    if (auto it = s.find("clamp_probability"); it != s.end()) {
        if (!it->is_boolean()) throw ValidationError("sim.clamp_probability", "must be a boolean");
        sim.clamp_probability = it->get<bool>();
    }
    return sim;
}

GridSpec parse_grid(const json& g) {
    GridSpec grid;
    auto int_field = [&](const char* key, int& out) {
        if (auto it = g.find(key); it != g.end())
            out = static_cast<int>(as_integer(*it, std::string("grid.") + key));
    };
    int_field("r_steps", grid.r_steps);
    int_field("t_steps", grid.t_steps);
    int_field("refine_rounds", grid.refine_rounds);
    grid.t_max = optional_number(g, "grid", "t_max");
    grid.validate();
    return grid;
}

SweepSpec parse_sweep(const json& s, const TypeProfile& profile) {
    const auto variable = parse_sweep_variable(as_string(require(s, "sweep", "variable"), "sweep.variable"));
    auto spec = SweepSpec::defaults(variable);
    if (auto v = optional_number(s, "sweep", "from")) spec.from = *v;
    if (auto v = optional_number(s, "sweep", "to")) spec.to = *v;
    if (auto it = s.find("steps"); it != s.end()) spec.steps = static_cast<int>(as_integer(*it, "sweep.steps"));
    if (auto it = s.find("scenarios"); it != s.end()) spec.scenarios = parse_regimes(*it, "sweep.scenarios");
    spec.validate(profile);
    return spec;
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config", "top level must be a JSON object");

    std::optional<DistributionConfig> distribution;
    std::optional<TypeProfile> profile;
    if (auto it = doc.find("distribution"); it != doc.end()) {
        if (doc.contains("profile"))
            throw ValidationError("distribution", "give either profile or distribution, not both");
        distribution = parse_distribution(*it);
        profile = discretize(distribution->distribution, distribution->n, distribution->placement);
    } else {
        profile = parse_profile(require(doc, "", "profile"));
    }

    ScenarioConfig cfg{*profile, distribution, parse_params(require(doc, "", "params")),
                       {ScenarioKind::Joint}, std::nullopt, SimConfig{}, GridSpec{}, std::nullopt};
    if (auto it = doc.find("regime"); it != doc.end()) cfg.regimes = parse_regimes(*it, "regime");
    if (auto it = doc.find("menu"); it != doc.end()) {
        cfg.menu = parse_menu(*it);
        validate_menu(*cfg.menu, cfg.profile, cfg.params);
    }
    if (auto it = doc.find("sim"); it != doc.end()) cfg.sim = parse_sim(*it);
    cfg.sim.regime = cfg.regimes.front();
    if (auto it = doc.find("grid"); it != doc.end()) cfg.grid = parse_grid(*it);
    if (auto it = doc.find("sweep"); it != doc.end()) cfg.sweep = parse_sweep(*it, cfg.profile);
    return cfg;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
}

ScenarioConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

}  // namespace cforge
