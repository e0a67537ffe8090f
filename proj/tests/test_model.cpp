#include <doctest.h>

#include <cmath>
#include <random>

#include "contract_forge/contracts.hpp"
#include "contract_forge/model.hpp"
#include "test_support.hpp"

using namespace cforge;
using cforge::testing::two_type_params;
using cforge::testing::two_type_profile;

namespace {

// Scan e over [lo, hi] and return the maximizer of the SU payoff.
double scan_best_effort(double theta, const Contract& contract, const MarketParams& params, double lo,
                        double hi, double step) {
    double best_e = lo;
    double best_v = su_payoff(theta, lo, contract, params);
    const auto steps = static_cast<long>(std::llround((hi - lo) / step));
    for (long k = 1; k <= steps; ++k) {
        const double e = lo + step * k;
        const double v = su_payoff(theta, e, contract, params);
        if (v > best_v) best_v = v, best_e = e;
    }
    return best_e;
}

}  // namespace

TEST_CASE("TypeProfile rejects malformed ladders") {
    CHECK_NOTHROW(TypeProfile({1.0}, {1.0}));
    CHECK_THROWS_AS(TypeProfile({}, {}), ValidationError);
    CHECK_THROWS_AS(TypeProfile({1.0, 2.0}, {1.0}), ValidationError);
    CHECK_THROWS_AS(TypeProfile({2.0, 1.0}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(TypeProfile({1.0, 1.0}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(TypeProfile({0.0, 1.0}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(TypeProfile({1.0, 2.0}, {0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(TypeProfile({1.0, 2.0}, {-0.1, 1.1}), ValidationError);

    try {
        TypeProfile({1.0, 2.0}, {0.7, 0.7});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "profile.betas");
    }
}

TEST_CASE("MarketParams validation") {
    CHECK_NOTHROW(MarketParams{1.0, 1.0, 0.0}.validate());
    CHECK_THROWS_AS((MarketParams{0.0, 1.0, std::nullopt}.validate()), ValidationError);
    CHECK_THROWS_AS((MarketParams{1.0, -1.0, std::nullopt}.validate()), ValidationError);
    CHECK_THROWS_AS((MarketParams{1.0, 1.0, -0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((MarketParams{NAN, 1.0, std::nullopt}.validate()), ValidationError);
}

TEST_CASE("best_effort") {
    const MarketParams p{0.5, 5.0, std::nullopt};
    CHECK(best_effort(2.0, 0.25, p) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(best_effort(3.0, 0.5, p) == 0.0);
    CHECK_THROWS_AS(best_effort(1.0, 0.6, p), std::domain_error);
    CHECK_THROWS_AS(best_effort(1.0, -0.1, p), std::domain_error);

    SUBCASE("maximizes the SU payoff on a fine grid") {
        const MarketParams q{1.0, 5.0, std::nullopt};
        const Contract contract{0.0, 0.0};
        const double e_star = best_effort(1.0, 0.0, q);
        CHECK(e_star == doctest::Approx(0.2));
        const double scanned = scan_best_effort(1.0, contract, q, 0.0, 2.0, 1e-4);
        CHECK(std::abs(scanned - e_star) <= 1e-4);
    }
}

TEST_CASE("best_effort is nonincreasing in r and ignores t") {
    const MarketParams p{1.0, 2.0, std::nullopt};
    for (double theta : {0.1, 0.7, 1.0, 3.0}) {
        double previous = INFINITY;
        for (int k = 0; k <= 20; ++k) {
            const double r = p.revenue * k / 20.0;
            const double e = best_effort(theta, r, p);
            CHECK(e >= 0.0);
            CHECK(e <= previous);
            previous = e;
            for (double t : {-1.0, 0.0, 0.3, 5.0}) {
                const double scanned = scan_best_effort(theta, Contract{t, r}, p, 0.0, 2.0, 1e-3);
                CHECK(std::abs(scanned - e) <= 1e-3 + 1e-12);
            }
        }
    }
}

TEST_CASE("su_payoff direct substitution") {
    const MarketParams p{1.0, 5.0, std::nullopt};
    CHECK(su_payoff(1.0, 0.0, Contract{0.0, 0.0}, p) == 0.0);
    CHECK(su_payoff(1.0, 0.2, Contract{0.1, 0.0}, p) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("su_payoff at the best response reduces to [theta (R - r)]^2 / 2c - t") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const MarketParams p{0.1 + 2.0 * u(gen), 0.5 + 9.5 * u(gen), std::nullopt};
        const double theta = 0.01 + 5.0 * u(gen);
        const Contract c{-1.0 + 2.0 * u(gen), p.revenue * u(gen)};
        const double e = best_effort(theta, c.installment, p);
        CHECK(std::abs(su_payoff(theta, e, c, p) - reduced_su_payoff(theta, c, p)) < kTolerance);
    }
}

TEST_CASE("pu_expected_payoff") {
    const MarketParams p{1.0, 5.0, std::nullopt};
    const auto profile = two_type_profile();
    CHECK(pu_expected_payoff(ContractMenu{{{0.0, 0.0}, {0.0, 0.0}}}, profile, p) == 0.0);
    CHECK(pu_expected_payoff(ContractMenu{{{0.05, 0.0}}}, TypeProfile({1.0}, {1.0}), p) == doctest::Approx(0.05));
    CHECK_THROWS_AS(pu_expected_payoff(ContractMenu{{{0.0, 0.0}}}, profile, p), ValidationError);

    // theta = (1, 2), joint menu r = (0.75, 0), t = (0.00625, 0.38125):
    // e = (0.05, 0.4); 0.5 (0.00625 + 0.05 * 0.75) + 0.5 * 0.38125 = 0.2125.
    const auto report = solve_joint(profile, two_type_params());
    CHECK(pu_expected_payoff(report.menu, profile, two_type_params()) == doctest::Approx(0.2125).epsilon(1e-12));
}

TEST_CASE("social_welfare") {
    const MarketParams p{1.0, 5.0, std::nullopt};
    const auto profile = two_type_profile();
    CHECK(social_welfare(ContractMenu{{{0.3, 1.0}, {-0.2, 1.0}}}, profile, p) == 0.0);

    // 0.5 (0.05 - 2.5 * 0.05^2) + 0.5 (0.8 - 2.5 * 0.4^2) = 0.221875
    const auto report = solve_joint(profile, two_type_params());
    CHECK(social_welfare(report.menu, profile, p) == doctest::Approx(0.221875).epsilon(1e-12));
    CHECK(report.welfare == doctest::Approx(0.221875).epsilon(1e-12));
}

TEST_CASE("welfare identity holds for arbitrary menus") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        auto [profile, params] = cforge::testing::random_case(gen);
        ContractMenu menu;
        for (std::size_t i = 0; i < profile.size(); ++i)
            menu.contracts.push_back({-1.0 + 3.0 * u(gen), params.revenue * u(gen)});
        const auto efforts = best_efforts(menu, profile, params);
        double su_total = 0.0;
        for (std::size_t i = 0; i < profile.size(); ++i)
            su_total += profile.beta(i) * su_payoff(profile.theta(i), efforts[i], menu[i], params);
        CHECK(std::abs(pu_expected_payoff(menu, profile, params) + su_total -
                       social_welfare(menu, profile, params)) < kTolerance);
    }
}

TEST_CASE("success_probability") {
    CHECK(success_probability(2.0, 0.0, true) == 0.0);
    CHECK(success_probability(10.0, 1.0, true) == 1.0);
    CHECK(success_probability(10.0, 1.0, false) == 10.0);
    CHECK(success_probability(0.5, 0.4, false) == doctest::Approx(0.2));
}

TEST_CASE("formula operations are pure") {
    const MarketParams p{0.7, 3.3, std::nullopt};
    const auto profile = cforge::testing::ten_type_profile();
    const auto a = solve_joint(profile, p);
    const auto b = solve_joint(profile, p);
    CHECK(a.menu == b.menu);
    CHECK(a.pu_payoff == b.pu_payoff);
    CHECK(a.welfare == b.welfare);
    CHECK(a.su_payoffs == b.su_payoffs);
}

TEST_CASE("scenario names round-trip") {
    for (auto kind : kAllScenarios) CHECK(parse_scenario(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_scenario("both"), ValidationError);
}
