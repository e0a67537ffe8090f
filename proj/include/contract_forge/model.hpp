#pragma once

// Domain types and primitive payoff formulas for the financing-contract model.
//
// A primary user (PU) sells spectrum to a secondary user (SU) of unknown
// capability theta. A contract is a pair (t, r): a down payment t paid at
// signing and an installment r paid out of the revenue R, only when the
// transmission succeeds. Success happens with probability theta * e, where e is
// the SU's effort, which costs (c/2) e^2.
//
// Indices are zero-based throughout the C++ API; type k here is "type k+1" in
// the usual one-based notation.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cforge {

/// Thrown when an input violates a documented invariant. `field` names the
/// offending input using a dotted path (e.g. "profile.betas").
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Numerical failure inside a solver (non-finite intermediate, empty search).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Joint, AdverseSelectionOnly, MoralHazardOnly };

/// Short names used on the command line and in files: "joint", "as", "mh".
std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view name);

inline constexpr ScenarioKind kAllScenarios[] = {
    ScenarioKind::Joint, ScenarioKind::AdverseSelectionOnly, ScenarioKind::MoralHazardOnly};

/// Absolute tolerance for equality invariants on O(1) quantities.
inline constexpr double kTolerance = 1e-9;

/// Discrete type ladder theta_1 < ... < theta_n with prior masses beta_i.
class TypeProfile {
public:
    /// Throws ValidationError unless the lists have equal length n >= 1, thetas
    /// are positive and strictly increasing, and betas lie in [0,1] summing to 1
    /// within 1e-12.
    TypeProfile(std::vector<double> thetas, std::vector<double> betas);

    std::size_t size() const noexcept { return thetas_.size(); }
    std::span<const double> thetas() const noexcept { return thetas_; }
    std::span<const double> betas() const noexcept { return betas_; }
    double theta(std::size_t i) const { return thetas_.at(i); }
    double beta(std::size_t i) const { return betas_.at(i); }

    friend bool operator==(const TypeProfile&, const TypeProfile&) = default;

private:
    std::vector<double> thetas_;
    std::vector<double> betas_;
};

struct MarketParams {
    double revenue = 1.0;  // R, paid to the SU on success
    double cost = 1.0;     // c, effort cost coefficient
    // Effort fixed by the PU under the moral-hazard-only regime. When unset the
    // lowest type's first-best effort theta_1 R / c is used.
    std::optional<double> fixed_effort;

    /// Throws ValidationError unless R > 0, c > 0, fixed effort >= 0 (all finite).
    void validate() const;

    double resolved_fixed_effort(const TypeProfile& profile) const;
};

struct Contract {
    double down_payment = 0.0;  // t; negative means the PU pays the SU upfront
    double installment = 0.0;   // r, in [0, R]

    friend bool operator==(const Contract&, const Contract&) = default;
};

struct ContractMenu {
    std::vector<Contract> contracts;

    std::size_t size() const noexcept { return contracts.size(); }
    const Contract& operator[](std::size_t i) const { return contracts[i]; }
    Contract& operator[](std::size_t i) { return contracts[i]; }

    friend bool operator==(const ContractMenu&, const ContractMenu&) = default;
};

/// Throws ValidationError if the menu length differs from the profile or any
/// installment lies outside [0, R].
void validate_menu(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params);

/// Slack of the participation constraint per type and of the local downward
/// incentive constraint per adjacent pair: ldic[k] is type k+1's margin for
/// preferring its own contract over type k's.
struct BindingSlacks {
    std::vector<double> ir;
    std::vector<double> ldic;
};

struct SolveReport {
    ScenarioKind regime = ScenarioKind::Joint;
    ContractMenu menu;
    std::vector<double> efforts;
    double pu_payoff = 0.0;
    std::vector<double> su_payoffs;
    double welfare = 0.0;
    BindingSlacks binding;
    std::optional<double> fixed_effort;  // set for MoralHazardOnly
    std::vector<double> bin_edges;       // set when solved from a continuous distribution
};

// ---------------------------------------------------------------------------
// Primitive formulas. All are pure.

/// SU's best-response effort theta (R - r) / c. Throws std::domain_error when
/// r is outside [0, R] or theta is not positive.
double best_effort(double theta, double installment, const MarketParams& params);

/// (c/2) e^2
inline double effort_cost(double effort, double cost) { return 0.5 * cost * effort * effort; }

/// theta e (R - r) - t - (c/2) e^2, with no clamping of theta e.
double su_payoff(double theta, double effort, const Contract& contract, const MarketParams& params);

/// SU payoff once the best-response effort is substituted:
/// [theta (R - r)]^2 / (2c) - t.
double reduced_su_payoff(double theta, const Contract& contract, const MarketParams& params);

/// Sum_i beta_i (t_i + theta_i e_i r_i) with e_i the best response.
double pu_expected_payoff(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params);
/// Same with caller-supplied efforts (e.g. a fixed effort level).
double pu_expected_payoff(const ContractMenu& menu, const TypeProfile& profile,
                          std::span<const double> efforts);

/// Sum_i beta_i (theta_i e_i R - (c/2) e_i^2) with e_i the best response.
double social_welfare(const ContractMenu& menu, const TypeProfile& profile, const MarketParams& params);
double social_welfare(const TypeProfile& profile, const MarketParams& params,
                      std::span<const double> efforts);

/// theta e, or theta e clamped to [0, 1] when `clamp` is set.
double success_probability(double theta, double effort, bool clamp);

/// Best-response efforts for every type under its own contract.
std::vector<double> best_efforts(const ContractMenu& menu, const TypeProfile& profile,
                                 const MarketParams& params);

}  // namespace cforge
