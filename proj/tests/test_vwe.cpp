#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "verivote/incentives.hpp"
#include "verivote/vwe.hpp"

#include <cmath>
#include <random>

using namespace verivote;
using testutil::rand_in;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

AgentSpec line_agent(double lo, double hi, int n, SignRule sign, double cost) {
    std::vector<double> values, probs;
    for (int k = 0; k < n; ++k) {
        values.push_back(lo + (hi - lo) * k / (n - 1));
        probs.push_back(1.0 / n);
    }
    double sum = 0.0;
    for (double p : probs) sum += p;
    probs.back() += 1.0 - sum;
    return make_discrete_agent(values, probs, sign, cost);
}

} // namespace

TEST_CASE("weight piecewise cases") {
    AgentSpec agent = line_agent(-1.0, 1.3, 24, SignRule::at_threshold(0.0), 0.0);
    CostRule cost = CostRule::constant(0.1);

    AgentWeights w{0.3, -0.2, kInf, -kInf};
    CHECK(weight(w, 1.0, agent, cost, 0.5) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(weight(w, 1.0, agent, cost, 0.2) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(weight(w, 1.0, agent, cost, -0.5) == doctest::Approx(-0.4).epsilon(1e-12));

    AgentWeights capped{0.3, -0.2, 0.8, -0.9};
    CHECK(weight(capped, 0.5, agent, cost, 1.2) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("weight rejects types outside a discrete support") {
    AgentSpec agent = line_agent(0.0, 1.0, 3, SignRule::always_in_favor(), 0.1);
    AgentWeights w{0.0, 0.0, kInf, -kInf};
    CHECK_THROWS_AS(weight(w, 1.0, agent, CostRule::constant(0.1), 0.25), std::invalid_argument);
}

TEST_CASE("weight is nondecreasing and bunches exactly the low in-favor types") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        AgentSpec agent = line_agent(-2.0, 2.0, 41, SignRule::at_threshold(rand_in(rng, -1.0, 1.0)),
                                     rand_in(rng, 0.0, 0.5));
        double p = trial % 2 ? 1.0 : rand_in(rng, 0.3, 1.0);
        AgentWeights w;
        w.omega_minus = rand_in(rng, -1.0, 0.5);
        w.omega_plus = w.omega_minus + rand_in(rng, 0.0, 1.0);
        w.nu_plus = p == 1.0 ? kInf : w.omega_plus + rand_in(rng, 0.0, 1.5);
        w.nu_minus = p == 1.0 ? -kInf : w.omega_minus - rand_in(rng, 0.0, 1.5);
        CostRule cost = CostRule::constant(agent.cost);

        double prev_plus = -kInf, prev_minus = -kInf;
        for (double t : agent.discrete().values) {
            double value = weight(w, p, agent, cost, t);
            if (agent.sign.in_favor(t)) {
                CHECK(value >= prev_plus);
                prev_plus = value;
                if (t <= w.omega_plus + agent.cost / p)
                    CHECK(value == doctest::Approx(w.omega_plus));
                else if (w.nu_plus > w.omega_plus + 1e-9)
                    CHECK(value > w.omega_plus);
            } else {
                CHECK(value >= prev_minus);
                prev_minus = value;
                if (t >= w.omega_minus - agent.cost / p)
                    CHECK(value == doctest::Approx(w.omega_minus));
                else if (w.nu_minus < w.omega_minus - 1e-9)
                    CHECK(value < w.omega_minus);
            }
        }
    }
}

TEST_CASE("constant-cost weights move one-for-one on linear segments") {
    AgentSpec agent = line_agent(0.5, 3.0, 26, SignRule::always_in_favor(), 0.2);
    AgentWeights w{1.0, 1.0, kInf, -kInf};
    CostRule cost = CostRule::constant(0.2);
    const auto& vals = agent.discrete().values;
    auto segment = [&](double t) { return t <= w.omega_plus + 0.2 ? 0 : 1; };
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
        if (segment(vals[k]) != segment(vals[k + 1])) continue;
        double diff = weight(w, 1.0, agent, cost, vals[k + 1]) - weight(w, 1.0, agent, cost, vals[k]);
        if (segment(vals[k]) == 0)
            CHECK(diff == doctest::Approx(0.0).epsilon(1e-12));
        else
            CHECK(diff == doctest::Approx(vals[k + 1] - vals[k]).epsilon(1e-12));
    }
}

TEST_CASE("decide follows the sign of the weight sum with status-quo ties") {
    std::vector<AgentSpec> specs{line_agent(-1.0, 1.0, 21, SignRule::at_threshold(0.0), 0.0),
                                 line_agent(-1.0, 1.0, 21, SignRule::at_threshold(0.0), 0.0)};
    VweParams params;
    params.agents = {AgentWeights{-1.0, -1.0, kInf, -kInf}, AgentWeights{0.0, 0.0, kInf, -kInf}};
    params.p = 1.0;

    // weights: max(t, -1) for agent 0 on favor side etc.; pick profiles directly
    CHECK(decide(params, specs, {0.4, -0.3}) == 1);   // 0.4 - 0.3 = 0.1
    CHECK(decide(params, specs, {0.2, -0.3}) == 0);   // -0.1
    CHECK(decide(params, specs, {0.3, -0.3}) == 0);   // exact tie
}

TEST_CASE("decisiveness in the three-agent veto scenario") {
    auto specs = testutil::veto_specs();
    auto params = testutil::veto_params();

    std::vector<double> truthful{-5.0, 2.0, 2.0};
    CHECK(decide(params, specs, truthful) == 0);
    // The in-favor agents do not get their preferred outcome, so they cannot
    // be decisive; the strong against report is pivotal and gets audited.
    CHECK_FALSE(is_decisive(params, specs, truthful, 1));
    CHECK_FALSE(is_decisive(params, specs, truthful, 2));
    CHECK(is_decisive(params, specs, truthful, 0));

    std::vector<double> one_lie{-5.0, 6.0, 2.0};
    CHECK(decide(params, specs, one_lie) == 1);
    CHECK(is_decisive(params, specs, one_lie, 1)); // -5 + 1 + 2 < 0 after the swap
    CHECK_FALSE(is_decisive(params, specs, one_lie, 2));

    std::vector<double> two_lies{-5.0, 6.0, 6.0};
    CHECK(decide(params, specs, two_lies) == 1);
    for (int i = 0; i < 3; ++i) CHECK_FALSE(is_decisive(params, specs, two_lies, i));
}

TEST_CASE("one-agent mechanism with a positive baseline never audits") {
    std::vector<AgentSpec> agents{line_agent(0.0, 1.0, 5, SignRule::always_in_favor(), 0.0)};
    DiscreteGrid grid(agents);
    VweParams params;
    params.agents = {AgentWeights{0.5, 0.5, kInf, -kInf}};
    Mechanism mech = vwe_mechanism(params, grid);
    for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
        CHECK(mech.d[t] == 1.0);
        CHECK(mech.a1[0][t] == 0.0);
        CHECK(mech.a0[0][t] == 0.0);
    }
}

TEST_CASE("mechanism audits exactly the decisive agents") {
    auto specs = testutil::veto_specs();
    auto params = testutil::veto_params();
    DiscreteGrid grid(specs);
    Mechanism mech = vwe_mechanism(params, grid);

    auto profile_index = [&](std::vector<int> ks) {
        std::size_t t = 0;
        for (int i = 0; i < 3; ++i) t += static_cast<std::size_t>(ks[static_cast<std::size_t>(i)]) * grid.stride(i);
        return t;
    };
    // types -5..6 map to indices 0..11
    std::size_t truthful = profile_index({0, 7, 7});
    CHECK(mech.d[truthful] == 0.0);
    CHECK(mech.a0[0][truthful] == 1.0);
    CHECK(mech.a1[1][truthful] == 0.0);

    std::size_t one_lie = profile_index({0, 11, 7});
    CHECK(mech.d[one_lie] == 1.0);
    CHECK(mech.a1[1][one_lie] == 1.0);
    CHECK(mech.a1[2][one_lie] == 0.0);

    std::size_t two_lies = profile_index({0, 11, 11});
    CHECK(mech.d[two_lies] == 1.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(mech.a1[static_cast<std::size_t>(i)][two_lies] == 0.0);
        CHECK(mech.a0[static_cast<std::size_t>(i)][two_lies] == 0.0);
    }

    // Audits only ever fall on the side that got its preferred outcome.
    for (std::size_t t = 0; t < grid.num_profiles(); ++t)
        for (int i = 0; i < 3; ++i) {
            if (mech.a1[static_cast<std::size_t>(i)][t] > 0.0) {
                CHECK(mech.d[t] == 1.0);
                CHECK(grid.in_favor(i, grid.type_index(t, i)));
            }
            if (mech.a0[static_cast<std::size_t>(i)][t] > 0.0) {
                CHECK(mech.d[t] == 0.0);
                CHECK_FALSE(grid.in_favor(i, grid.type_index(t, i)));
            }
        }
}

TEST_CASE("symmetric weights give a sign-symmetric voting rule") {
    std::vector<AgentSpec> specs{
        line_agent(-1.1, 1.1, 12, SignRule::at_threshold(0.0), 0.05),
        line_agent(-1.1, 1.1, 12, SignRule::at_threshold(0.0), 0.05)};
    VweParams params;
    params.agents = {AgentWeights{0.4, -0.4, kInf, -kInf}, AgentWeights{0.4, -0.4, kInf, -kInf}};

    const auto& vals = specs[0].discrete().values;
    for (double a : vals)
        for (double b : vals) {
            double sum = weight_sum(params, specs, cost_rules_from(specs), {a, b});
            if (std::abs(sum) < 1e-12) continue;
            int d = decide(params, specs, {a, b});
            int flipped = decide(params, specs, {-a, -b});
            CHECK(d == 1 - flipped);
        }
}

TEST_CASE("parameter validation") {
    VweParams params;
    params.agents = {AgentWeights{-0.5, 0.5, kInf, -kInf}}; // omega- > omega+
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);

    params.agents = {AgentWeights{0.5, -0.5, 1.0, -kInf}};
    params.p = 1.0; // perfect verification forbids finite caps
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.p = 0.8;
    CHECK_NOTHROW(params.validate());

    params.agents = {AgentWeights{0.5, -0.5, 0.2, -kInf}}; // cap below baseline
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);

    std::vector<AgentSpec> specs{line_agent(0.0, 1.0, 3, SignRule::always_in_favor(), 0.0)};
    DiscreteGrid grid(specs);
    VweParams imperfect;
    imperfect.agents = {AgentWeights{0.0, 0.0, 1.0, -kInf}};
    imperfect.p = 0.5;
    CHECK_THROWS_AS(vwe_mechanism(imperfect, grid), std::invalid_argument);
}

TEST_CASE("type-dependent costs keep the rule well defined") {
    AgentSpec agent = line_agent(0.0, 2.0, 5, SignRule::always_in_favor(), 0.0);
    // net type t - c(t) stays nondecreasing
    CostRule rule = CostRule::per_type([](double t) { return 0.1 + 0.2 * t; });
    CHECK_NOTHROW(validate_cost_rule(rule, agent));
    AgentWeights w{0.0, 0.0, kInf, -kInf};
    CHECK(weight(w, 1.0, agent, rule, 2.0) == doctest::Approx(2.0 - 0.5).epsilon(1e-12));

    CostRule bad = CostRule::per_type([](double t) { return 2.0 * t; });
    CHECK_THROWS_AS(validate_cost_rule(bad, agent), std::invalid_argument);
}
