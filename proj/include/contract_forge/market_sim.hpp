#pragma once

// Monte Carlo execution of a contract menu: draw a type, let the SU pick its
// preferred contract, exert effort, realize a Bernoulli transmission outcome and
// settle payments. Also the Shannon-rate mapping used to derive scenario
// parameters.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contract_forge/model.hpp"

namespace cforge {

struct LinkParams {
    double bandwidth = 1.0;      // W, Hz
    double power = 1.0;          // p, W
    double channel_gain = 1.0;   // |h|
    double gain_exponent = 2.0;  // exponent applied to |h|
    double distance = 1.0;       // d, m
    double noise = 1.0;          // N0, W

    void validate() const;
};

/// W log2(1 + p |h|^k / (d N0)), in bits per second.
double data_rate(const LinkParams& link);

/// Index of the contract maximizing [theta (R - r_j)]^2 / (2c) - t_j. Ties,
/// meaning values within kTolerance (relative, floor 1) of the maximum, go to
/// `own_index` when it is among them, otherwise to the lowest such index.
std::size_t select_contract(double theta, const ContractMenu& menu, const MarketParams& params,
                            std::optional<std::size_t> own_index = std::nullopt);

struct SimConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    bool clamp_probability = true;
    ScenarioKind regime = ScenarioKind::Joint;
    unsigned workers = 1;

    void validate() const;
};

struct TypeStats {
    std::uint64_t draws = 0;
    std::optional<double> mean_su_payoff;
    std::optional<double> stderr_su_payoff;
    std::optional<double> success_rate;
    std::optional<double> stderr_success_rate;
    std::size_t chosen_contract = 0;
    double success_probability = 0.0;  // after clamping, if enabled
};

struct SimStats {
    std::uint64_t trials = 0;
    double mean_pu_payoff = 0.0;
    std::optional<double> stderr_pu_payoff;  // absent when trials < 2
    double mean_su_payoff = 0.0;
    std::optional<double> stderr_su_payoff;
    std::vector<TypeStats> by_type;
    std::uint64_t clamp_events = 0;  // trials whose success probability was clamped
    std::vector<std::string> warnings;
};

/// Results depend only on the inputs and `config.seed`, never on
/// `config.workers`: trial k draws from its own stream seeded with seed ^ k, and
/// partial sums are merged in a fixed block order.
SimStats run_simulation(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params,
                        const SimConfig& config);

}  // namespace cforge
