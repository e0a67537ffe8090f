#include "contract_forge/continuous.hpp"

#include <algorithm>
#include <cmath>

#include "contract_forge/contracts.hpp"

namespace cforge {

TypeDistribution::TypeDistribution(Kind kind, std::vector<std::pair<double, double>> knots)
    : kind_(kind), knots_(std::move(knots)) {
    if (knots_.size() < 2) throw ValidationError("distribution.knots", "need at least two knots");
    if (!std::isfinite(knots_.front().first) || knots_.front().first <= 0.0)
        throw ValidationError("distribution.lower", "must be finite and positive");
    if (knots_.front().second != 0.0) throw ValidationError("distribution.knots", "CDF must start at 0");
    if (knots_.back().second != 1.0) throw ValidationError("distribution.knots", "CDF must end at 1");
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        const auto& [x0, f0] = knots_[k - 1];
        const auto& [x1, f1] = knots_[k];
        if (!std::isfinite(x1) || !(x0 < x1))
            throw ValidationError("distribution.knots[" + std::to_string(k) + "]",
                                  "theta must be finite and strictly increasing");
        if (!(f0 < f1))
            throw ValidationError("distribution.knots[" + std::to_string(k) + "]",
                                  "CDF must be strictly increasing");
    }
}

TypeDistribution TypeDistribution::uniform(double lower, double upper) {
    if (!(lower < upper)) throw ValidationError("distribution.upper", "must exceed lower");
    return TypeDistribution(Kind::Uniform, {{lower, 0.0}, {upper, 1.0}});
}

TypeDistribution TypeDistribution::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    return TypeDistribution(Kind::PiecewiseLinearCdf, std::move(knots));
}

double TypeDistribution::cdf(double theta) const {
    if (theta <= lower()) return 0.0;
    if (theta >= upper()) return 1.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), theta,
                               [](double x, const auto& knot) { return x < knot.first; });
    const auto& [x1, f1] = *it;
    const auto& [x0, f0] = *(it - 1);
    return f0 + (f1 - f0) * (theta - x0) / (x1 - x0);
}

double TypeDistribution::quantile(double p) const {
    if (p <= 0.0) return lower();
    if (p >= 1.0) return upper();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), p,
                               [](double q, const auto& knot) { return q < knot.second; });
    const auto& [x1, f1] = *it;
    const auto& [x0, f0] = *(it - 1);
    return x0 + (x1 - x0) * (p - f0) / (f1 - f0);
}

double TypeDistribution::conditional_mean(double a, double b) const {
    // Density is constant on each knot segment, so integrate x f(x) piecewise.
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        const auto& [x0, f0] = knots_[k - 1];
        const auto& [x1, f1] = knots_[k];
        const double lo = std::max(a, x0);
        const double hi = std::min(b, x1);
        if (!(lo < hi)) continue;
        const double density = (f1 - f0) / (x1 - x0);
        mass += density * (hi - lo);
        moment += density * (hi - lo) * 0.5 * (lo + hi);
    }
    return mass > 0.0 ? moment / mass : 0.5 * (a + b);
}

std::vector<double> bin_edges(const TypeDistribution& dist, std::size_t n) {
    if (n == 0) throw ValidationError("n", "must be at least 1");
    std::vector<double> edges(n + 1);
    for (std::size_t k = 0; k <= n; ++k) edges[k] = dist.quantile(static_cast<double>(k) / n);
    edges.front() = dist.lower();
    edges.back() = dist.upper();
    return edges;
}

TypeProfile discretize(const TypeDistribution& dist, std::size_t n, ThetaPlacement placement) {
    const auto edges = bin_edges(dist, n);
    std::vector<double> thetas(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (placement == ThetaPlacement::SpanGrid && n > 1) {
            thetas[i] = dist.quantile(static_cast<double>(i) / (n - 1));
        } else if (dist.kind() == TypeDistribution::Kind::Uniform) {
            thetas[i] = 0.5 * (edges[i] + edges[i + 1]);
        } else {
            thetas[i] = dist.conditional_mean(edges[i], edges[i + 1]);
        }
    }
    return TypeProfile(std::move(thetas), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SolveReport solve_continuous(const TypeDistribution& dist, const MarketParams& params, std::size_t n,
                             ScenarioKind regime, ThetaPlacement placement) {
    const auto profile = discretize(dist, n, placement);
    auto report = solve(profile, params, regime);
    report.bin_edges = bin_edges(dist, n);
    return report;
}

}  // namespace cforge
