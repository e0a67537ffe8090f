#pragma once

// Continuous capability distributions, reduced to the discrete solvers by
// splitting the support into equal-probability bins.

#include <cstddef>
#include <utility>
#include <vector>

#include "contract_forge/model.hpp"

namespace cforge {

/// Distribution of theta on [lower, upper] with a piecewise-linear CDF (the
/// density is piecewise constant). A uniform distribution is the two-knot case.
class TypeDistribution {
public:
    enum class Kind { Uniform, PiecewiseLinearCdf };

    static TypeDistribution uniform(double lower, double upper);
    /// Knots are (theta, F(theta)) pairs. Throws ValidationError unless
    /// 0 < first theta, thetas and F strictly increase, F starts at 0 and ends at 1.
    static TypeDistribution piecewise_linear(std::vector<std::pair<double, double>> knots);

    Kind kind() const noexcept { return kind_; }
    double lower() const noexcept { return knots_.front().first; }
    double upper() const noexcept { return knots_.back().first; }
    const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

    double cdf(double theta) const;
    /// Inverse CDF for p in [0, 1].
    double quantile(double p) const;
    /// E[theta | a <= theta <= b] for lower <= a < b <= upper.
    double conditional_mean(double a, double b) const;

private:
    TypeDistribution(Kind kind, std::vector<std::pair<double, double>> knots);

    Kind kind_;
    std::vector<std::pair<double, double>> knots_;
};

enum class ThetaPlacement {
    BinMean,   // conditional mean of each equal-mass bin
    SpanGrid,  // theta_i = F^-1((i-1)/(n-1)); on Uniform[1,n] this is theta_i = i
};

/// n equal-mass bins, beta_i = 1/n.
TypeProfile discretize(const TypeDistribution& dist, std::size_t n,
                       ThetaPlacement placement = ThetaPlacement::BinMean);

/// Bin boundaries F^-1(k/n), k = 0..n.
std::vector<double> bin_edges(const TypeDistribution& dist, std::size_t n);

/// Solves the discretized profile; the report carries the bin edges so t(theta)
/// and r(theta) can be drawn as step functions.
SolveReport solve_continuous(const TypeDistribution& dist, const MarketParams& params, std::size_t n,
                             ScenarioKind regime, ThetaPlacement placement = ThetaPlacement::BinMean);

}  // namespace cforge
