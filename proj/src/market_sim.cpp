#include "contract_forge/market_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "contract_forge/contracts.hpp"

namespace cforge {

namespace {

constexpr std::uint64_t kBlockSize = 4096;

// Running mean and sum of squared deviations; blocks are merged with Chan's
// update so the result depends only on the block order.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }

    std::optional<double> stderr_of_mean() const {
        if (n < 2) return std::nullopt;
        const double var = m2 / static_cast<double>(n - 1);
        return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
};

struct Block {
    Moments pu;
    Moments su;
    std::vector<Moments> su_by_type;
    std::vector<Moments> success_by_type;
    std::uint64_t clamp_events = 0;
};

struct TypePlan {
    std::size_t contract = 0;
    double probability = 0.0;
    bool clamped = false;
};

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

void LinkParams::validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(bandwidth)) throw ValidationError("link.bandwidth", "must be positive");
    if (!positive(power)) throw ValidationError("link.power", "must be positive");
    if (!positive(channel_gain)) throw ValidationError("link.channel_gain", "must be positive");
    if (!std::isfinite(gain_exponent) || gain_exponent < 0.0)
        throw ValidationError("link.gain_exponent", "must be nonnegative");
    if (!positive(distance)) throw ValidationError("link.distance", "must be positive");
    if (!positive(noise)) throw ValidationError("link.noise", "must be positive");
}

double data_rate(const LinkParams& link) {
    link.validate();
    const double snr = link.power * std::pow(link.channel_gain, link.gain_exponent) / (link.distance * link.noise);
    const double rate = link.bandwidth * std::log2(1.0 + snr);
    if (!std::isfinite(rate)) throw SolverError("data_rate: non-finite result");
    return rate;
}

std::size_t select_contract(double theta, const ContractMenu& menu, const MarketParams& params,
                            std::optional<std::size_t> own_index) {
    if (menu.size() == 0) throw ValidationError("menu", "must not be empty");
    std::vector<double> values(menu.size());
    for (std::size_t j = 0; j < menu.size(); ++j) values[j] = reduced_su_payoff(theta, menu[j], params);
    const double best_value = *std::max_element(values.begin(), values.end());
    // A binding IC constraint makes a type exactly indifferent between two
    // contracts; rounding must not decide which one it takes.
    const double cutoff = best_value - kTolerance * std::max(1.0, std::abs(best_value));
    if (own_index && *own_index < menu.size() && values[*own_index] >= cutoff) return *own_index;
    std::size_t j = 0;
    while (values[j] < cutoff) ++j;
    return j;
}

void SimConfig::validate() const {
    if (trials < 1) throw ValidationError("sim.trials", "must be at least 1");
}

SimStats run_simulation(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params,
                        const SimConfig& config) {
    config.validate();
    params.validate();
    validate_menu(menu, profile, params);
    const std::size_t n = profile.size();
    const double e_hat =
        config.regime == ScenarioKind::MoralHazardOnly ? params.resolved_fixed_effort(profile) : 0.0;

    SimStats stats;
    stats.trials = config.trials;

    if (!check_constraints(menu, profile, params, config.regime).feasible())
        stats.warnings.push_back("menu fails the " + std::string(to_string(config.regime)) +
                                 " constraint audit; SUs may not self-select");

    std::vector<TypePlan> plan(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = profile.theta(i);
        auto& p = plan[i];
        p.contract = select_contract(th, menu, params, i);
        const double effort = config.regime == ScenarioKind::MoralHazardOnly
                                  ? e_hat
                                  : best_effort(th, menu[p.contract].installment, params);
        const double raw = success_probability(th, effort, false);
        if (raw > 1.0 || raw < 0.0) {
            if (!config.clamp_probability && profile.beta(i) > 0.0) {
                std::ostringstream msg;
                msg << "success probability " << raw << " for type " << i + 1
                    << " is outside [0, 1] and clamping is disabled";
                throw ValidationError("sim.clamp", msg.str());
            }
            p.clamped = true;
            std::ostringstream msg;
            msg << "type " << i + 1 << ": theta*e = " << raw << " exceeds 1; clamped";
            stats.warnings.push_back(msg.str());
        }
        p.probability = success_probability(th, effort, config.clamp_probability);
    }

    std::vector<double> cumulative(n);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += profile.beta(i);
        cumulative[i] = acc;
        if (profile.beta(i) > 0.0) last_positive = i;
    }

    const std::uint64_t blocks = (config.trials + kBlockSize - 1) / kBlockSize;
    std::vector<Block> partial(blocks);

    auto run_block = [&](std::uint64_t b) {
        Block blk;
        blk.su_by_type.resize(n);
        blk.success_by_type.resize(n);
        const std::uint64_t begin = b * kBlockSize;
        const std::uint64_t end = std::min(config.trials, begin + kBlockSize);
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            std::mt19937_64 gen(config.seed ^ trial);
            const double u_type = uniform01(gen);
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u_type);
            std::size_t i = it == cumulative.end() ? last_positive : static_cast<std::size_t>(it - cumulative.begin());
            const auto& p = plan[i];
            const auto& c = menu[p.contract];
            const bool success = uniform01(gen) < p.probability;
            const double effort = config.regime == ScenarioKind::MoralHazardOnly
                                      ? e_hat
                                      : best_effort(profile.theta(i), c.installment, params);
            // The installment is owed only when the transmission succeeds.
            const double pu = c.down_payment + (success ? c.installment : 0.0);
            const double su = (success ? params.revenue - c.installment : 0.0) - c.down_payment -
                              effort_cost(effort, params.cost);
            blk.pu.add(pu);
            blk.su.add(su);
            blk.su_by_type[i].add(su);
            blk.success_by_type[i].add(success ? 1.0 : 0.0);
            if (p.clamped) ++blk.clamp_events;
        }
        partial[b] = std::move(blk);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(blocks)));
    if (workers == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
            });
    }

    Block total;
    total.su_by_type.resize(n);
    total.success_by_type.resize(n);
    for (const auto& blk : partial) {
        total.pu.merge(blk.pu);
        total.su.merge(blk.su);
        for (std::size_t i = 0; i < n; ++i) {
            total.su_by_type[i].merge(blk.su_by_type[i]);
            total.success_by_type[i].merge(blk.success_by_type[i]);
        }
        total.clamp_events += blk.clamp_events;
    }

    stats.mean_pu_payoff = total.pu.mean;
    stats.stderr_pu_payoff = total.pu.stderr_of_mean();
    stats.mean_su_payoff = total.su.mean;
    stats.stderr_su_payoff = total.su.stderr_of_mean();
    stats.clamp_events = total.clamp_events;
    stats.by_type.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& ts = stats.by_type[i];
        ts.draws = total.su_by_type[i].n;
        ts.chosen_contract = plan[i].contract;
        ts.success_probability = plan[i].probability;
        if (ts.draws > 0) {
            ts.mean_su_payoff = total.su_by_type[i].mean;
            ts.success_rate = total.success_by_type[i].mean;
        }
        ts.stderr_su_payoff = total.su_by_type[i].stderr_of_mean();
        ts.stderr_success_rate = total.success_by_type[i].stderr_of_mean();
    }
    return stats;
}

}  // namespace cforge
