#include "contract_forge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace cforge {

namespace {

std::vector<double> linspace(double lo, double hi, int steps) {
    std::vector<double> xs(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) xs[k] = lo + (hi - lo) * k / (steps - 1);
    xs.back() = hi;
    return xs;
}

void sort_unique(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

struct Candidate {
    bool found = false;
    double payoff = -std::numeric_limits<double>::infinity();
    std::vector<double> r;
    std::vector<double> t;

    // Total order: higher payoff first, then lexicographically smaller (r, t).
    bool better_than(const Candidate& other) const {
        if (!found) return false;
        if (!other.found) return true;
        if (payoff != other.payoff) return payoff > other.payoff;
        if (r != other.r) return r < other.r;
        return t < other.t;
    }
};

struct Axes {
    std::vector<std::vector<double>> r;  // per type
    std::vector<std::vector<double>> t;  // per type
};

// Exhaustive search over one set of per-type axes. The last type's down payment
// is not scanned point by point: its feasible set on the t axis is an interval,
// and the objective is monotone in it, so the best grid point is located by
// bisection and then confirmed against the constraints.
class Searcher {
public:
    Searcher(const TypeProfile& profile, const MarketParams& params, ScenarioKind regime, const Axes& axes)
        : profile_(profile), params_(params), regime_(regime), axes_(axes), n_(profile.size()) {
        ic_enforced_ = regime != ScenarioKind::AdverseSelectionOnly;
        e_hat_ = regime == ScenarioKind::MoralHazardOnly ? params.resolved_fixed_effort(profile) : 0.0;
    }

    // Value to type i of a contract with installment r, before the down payment.
    double gross(std::size_t i, double r) const {
        const double th = profile_.theta(i);
        if (regime_ == ScenarioKind::MoralHazardOnly)
            return th * e_hat_ * (params_.revenue - r) - effort_cost(e_hat_, params_.cost);
        const double m = th * (params_.revenue - r);
        return m * m / (2.0 * params_.cost);
    }

    double pu_term(std::size_t i, double r, double t) const {
        const double th = profile_.theta(i);
        const double e = regime_ == ScenarioKind::MoralHazardOnly ? e_hat_
                                                                  : th * (params_.revenue - r) / params_.cost;
        return profile_.beta(i) * (t + th * e * r);
    }

    // Searches with type 0's installment restricted to indices [begin, end).
    Candidate run(std::size_t begin, std::size_t end, std::uint64_t& evaluated) {
        best_ = Candidate{};
        evaluated_ = 0;
        r_.assign(n_, 0.0);
        t_.assign(n_, 0.0);
        u_.assign(n_, 0.0);
        if (n_ == 1) {
            last_type(0.0, begin, end);
        } else {
            for (std::size_t a = begin; a < end; ++a) place(0, axes_.r[0][a], 0.0);
        }
        evaluated = evaluated_;
        return best_;
    }

private:
    // Type k (not the last) takes installment r; scan its down payments.
    void place(std::size_t k, double r, double prefix) {
        const double g = gross(k, r);
        for (double t : axes_.t[k]) {
            const double u = g - t;
            if (u < -kOracleTolerance) continue;
            if (!compatible(k, r, t, u)) continue;
            r_[k] = r;
            t_[k] = t;
            u_[k] = u;
            const double next = prefix + pu_term(k, r, t);
            if (k + 2 == n_) {
                last_type(next, 0, axes_.r[k + 1].size());
            } else {
                for (double r_next : axes_.r[k + 1]) place(k + 1, r_next, next);
            }
        }
    }

    // IC between type k at (r, t, u) and every already placed type.
    bool compatible(std::size_t k, double r, double t, double u) const {
        if (!ic_enforced_) return true;
        for (std::size_t j = 0; j < k; ++j) {
            if (u < gross(k, r_[j]) - t_[j] - kOracleTolerance) return false;
            if (u_[j] < gross(j, r) - t - kOracleTolerance) return false;
        }
        return true;
    }

    void last_type(double prefix, std::size_t begin, std::size_t end) {
        const std::size_t k = n_ - 1;
        const auto& ts = axes_.t[k];
        const bool maximize_t = profile_.beta(k) > 0.0;
        for (std::size_t a = begin; a < end; ++a) {
            const double r = axes_.r[k][a];
            const double g = gross(k, r);
            double upper = g + kOracleTolerance;
            double lower = -std::numeric_limits<double>::infinity();
            if (ic_enforced_) {
                for (std::size_t j = 0; j < k; ++j) {
                    upper = std::min(upper, g - (gross(k, r_[j]) - t_[j]) + kOracleTolerance);
                    lower = std::max(lower, gross(j, r) - u_[j] - kOracleTolerance);
                }
            }
            ++evaluated_;
            std::optional<double> chosen;
            if (maximize_t) {
                auto idx = static_cast<std::ptrdiff_t>(std::upper_bound(ts.begin(), ts.end(), upper) - ts.begin());
                // One extra index guards against the bound rounding below a feasible point.
                idx = std::min<std::ptrdiff_t>(idx, static_cast<std::ptrdiff_t>(ts.size()) - 1);
                for (; idx >= 0; --idx) {
                    const double t = ts[idx];
                    if (feasible_last(r, t, g)) {
                        chosen = t;
                        break;
                    }
                    if (t < lower) break;
                }
            } else {
                auto idx = static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), lower) - ts.begin());
                idx = idx > 0 ? idx - 1 : 0;
                for (; idx < ts.size(); ++idx) {
                    const double t = ts[idx];
                    if (feasible_last(r, t, g)) {
                        chosen = t;
                        break;
                    }
                    if (t > upper) break;
                }
            }
            if (!chosen) continue;
            Candidate cand;
            cand.found = true;
            cand.payoff = prefix + pu_term(k, r, *chosen);
            if (best_.found && cand.payoff < best_.payoff) continue;
            cand.r = r_;
            cand.t = t_;
            cand.r[k] = r;
            cand.t[k] = *chosen;
            if (cand.better_than(best_)) best_ = std::move(cand);
        }
    }

    bool feasible_last(double r, double t, double g) const {
        const double u = g - t;
        if (u < -kOracleTolerance) return false;
        return compatible(n_ - 1, r, t, u);
    }

    const TypeProfile& profile_;
    const MarketParams& params_;
    ScenarioKind regime_;
    const Axes& axes_;
    std::size_t n_;
    bool ic_enforced_ = true;
    double e_hat_ = 0.0;

    Candidate best_;
    std::uint64_t evaluated_ = 0;
    std::vector<double> r_, t_, u_;
};

Candidate search_axes(const TypeProfile& profile, const MarketParams& params, ScenarioKind regime,
                      const Axes& axes, unsigned workers, std::uint64_t& evaluated) {
    const std::size_t outer = axes.r[0].size();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(outer)));
    std::vector<Candidate> partial(workers);
    std::vector<std::uint64_t> counts(workers, 0);
    auto work = [&](unsigned w) {
        const std::size_t begin = outer * w / workers;
        const std::size_t end = outer * (w + 1) / workers;
        Searcher searcher(profile, params, regime, axes);
        partial[w] = searcher.run(begin, end, counts[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    Candidate best;
    evaluated = 0;
    for (unsigned w = 0; w < workers; ++w) {
        evaluated += counts[w];
        if (partial[w].better_than(best)) best = std::move(partial[w]);
    }
    return best;
}

}  // namespace

void GridSpec::validate() const {
    if (r_steps < 2) throw ValidationError("grid.r_steps", "must be at least 2");
    if (t_steps < 2) throw ValidationError("grid.t_steps", "must be at least 2");
    if (t_max && (!std::isfinite(*t_max) || *t_max <= 0.0))
        throw ValidationError("grid.t_max", "must be finite and positive");
    if (refine_rounds < 0) throw ValidationError("grid.refine_rounds", "must be nonnegative");
}

double default_t_max(const TypeProfile& profile, const MarketParams& params) {
    double top = 0.0;
    for (double th : profile.thetas())
        top = std::max(top, th * th * params.revenue * params.revenue / (2.0 * params.cost));
    return top > 0.0 ? 1.5 * top : 1.0;
}

OracleVerdict grid_search(const TypeProfile& profile, const MarketParams& params, const GridSpec& spec,
                          ScenarioKind regime) {
    spec.validate();
    const std::size_t n = profile.size();
    if (n > kOracleMaxTypes)
        throw ValidationError("profile.thetas", "grid search supports at most " +
                                                    std::to_string(kOracleMaxTypes) + " types, got " +
                                                    std::to_string(n));
    if (!std::isfinite(params.revenue) || params.revenue < 0.0)
        throw ValidationError("params.revenue_R", "must be finite and nonnegative");
    if (!std::isfinite(params.cost) || params.cost <= 0.0)
        throw ValidationError("params.cost_c", "must be finite and positive");
    const double R = params.revenue;
    const double t_max = spec.t_max.value_or(default_t_max(profile, params));

    Axes axes;
    std::vector<double> r_axis = linspace(0.0, R, spec.r_steps);
    std::vector<double> t_axis = linspace(-t_max, t_max, spec.t_steps);
    t_axis.push_back(0.0);
    sort_unique(r_axis);
    sort_unique(t_axis);
    axes.r.assign(n, r_axis);
    axes.t.assign(n, t_axis);

    OracleVerdict verdict;
    verdict.t_max = t_max;
    std::uint64_t evaluated = 0;
    Candidate best = search_axes(profile, params, regime, axes, spec.workers, evaluated);
    verdict.menus_evaluated += evaluated;

    double r_width = R;
    double t_width = 2.0 * t_max;
    for (int round = 0; round < spec.refine_rounds && best.found; ++round) {
        r_width /= 10.0;
        t_width /= 10.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r_lo = std::max(0.0, best.r[i] - r_width / 2.0);
            const double r_hi = std::min(R, best.r[i] + r_width / 2.0);
            const double t_lo = std::max(-t_max, best.t[i] - t_width / 2.0);
            const double t_hi = std::min(t_max, best.t[i] + t_width / 2.0);
            axes.r[i] = linspace(r_lo, r_hi, spec.r_steps);
            axes.t[i] = linspace(t_lo, t_hi, spec.t_steps);
            axes.r[i].push_back(best.r[i]);
            axes.t[i].push_back(best.t[i]);
            sort_unique(axes.r[i]);
            sort_unique(axes.t[i]);
        }
        Candidate refined = search_axes(profile, params, regime, axes, spec.workers, evaluated);
        verdict.menus_evaluated += evaluated;
        if (refined.better_than(best)) best = std::move(refined);
    }

    verdict.closed_form_payoff = R > 0.0 ? solve(profile, params, regime).pu_payoff : 0.0;
    if (!best.found) {
        verdict.feasible = false;
        verdict.best_payoff = std::numeric_limits<double>::quiet_NaN();
        verdict.gap = std::numeric_limits<double>::quiet_NaN();
        return verdict;
    }
    verdict.best_menu.contracts.resize(n);
    for (std::size_t i = 0; i < n; ++i) verdict.best_menu[i] = {best.t[i], best.r[i]};
    verdict.best_payoff = best.payoff;
    verdict.gap = best.payoff - verdict.closed_form_payoff;
    verdict.feasible =
        check_constraints(verdict.best_menu, profile, params, regime, kOracleTolerance).feasible(kOracleTolerance);
    if (!verdict.feasible) throw SolverError("grid search produced a menu that fails the constraint audit");
    return verdict;
}

BindingAudit verify_binding_pattern(const SolveReport& report, const TypeProfile& profile,
                                    const MarketParams& params) {
    const auto constraints = check_constraints(report.menu, profile, params, ScenarioKind::Joint);
    const std::size_t n = profile.size();
    constexpr double kStrict = 1e-12;

    BindingAudit audit;
    audit.holds = true;
    auto add = [&](SlackEntry entry) {
        entry.ok = entry.expected_binding ? std::abs(entry.slack) < kTolerance : entry.slack > kStrict;
        audit.holds = audit.holds && entry.ok;
        audit.table.push_back(entry);
    };
    for (std::size_t i = 0; i < n; ++i)
        add({SlackEntry::Kind::IR, i, 0, constraints.ir_slack[i], i == 0, false});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) add({SlackEntry::Kind::IC, i, j, constraints.ic_slack[i][j], j + 1 == i, false});
    return audit;
}

}  // namespace cforge
