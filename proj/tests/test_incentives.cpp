#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "verivote/incentives.hpp"

#include <cmath>
#include <random>

using namespace verivote;
using namespace testutil;

TEST_CASE("interim marginals of the benchmark matrix") {
    Mechanism mech(bench_grid());
    mech.d = bench_d();

    InterimProfile a1 = interim(mech, 1);
    CHECK(a1.decision[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(a1.decision[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(a1.decision[2] == doctest::Approx(0.4).epsilon(1e-12));

    InterimProfile a0 = interim(mech, 0);
    CHECK(a0.decision[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(a0.decision[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(a0.decision[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("interim of constant tables") {
    Mechanism mech(bench_grid());
    for (double& x : mech.d) x = 1.0;
    for (int i = 0; i < 2; ++i) {
        InterimProfile ip = interim(mech, i);
        for (double v : ip.decision) CHECK(v == doctest::Approx(1.0));
        for (double v : ip.verification) CHECK(v == doctest::Approx(0.0));
    }
}

TEST_CASE("worst-off types") {
    Mechanism mech(bench_grid());
    mech.d = bench_d();
    WorstOff wo = worst_off(mech, 1);
    CHECK(wo.inf_plus == doctest::Approx(0.2).epsilon(1e-12));
    REQUIRE(wo.argmin_plus.size() == 1);
    CHECK(wo.argmin_plus[0] == 1); // the intermediate type
    CHECK(wo.sup_minus == -std::numeric_limits<double>::infinity()); // no against types

    Mechanism flat(bench_grid());
    for (double& x : flat.d) x = 0.5;
    WorstOff w0 = worst_off(flat, 0);
    CHECK(w0.inf_plus == doctest::Approx(0.5));
    CHECK(w0.sup_minus == doctest::Approx(0.5));
}

TEST_CASE("interim-binding audits make the Bayesian check exactly binding") {
    Mechanism mech = bench_bic_mechanism();
    InterimProfile ip = interim(mech, 1);
    CHECK(ip.verification[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(ip.verification[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ip.verification[2] == doctest::Approx(0.2).epsilon(1e-12));

    IcReport rep = check_bic(mech, 1.0);
    CHECK(rep.satisfied);
    CHECK(std::abs(rep.min_slack) < 1e-12);
}

TEST_CASE("no audits leave the high types undeterred") {
    Mechanism mech(bench_grid());
    mech.d = bench_d();
    IcReport rep = check_bic(mech, 1.0);
    CHECK_FALSE(rep.satisfied);

    bool found = false;
    for (const auto& w : rep.witnesses)
        if (w.agent == 1 && w.side == '+' && w.report_type == 2 && w.worst_type == 1 &&
            std::abs(w.slack + 0.2) < 1e-12)
            found = true;
    CHECK(found);
}

TEST_CASE("a rule nobody can move is incentive compatible without audits") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        DiscreteGrid grid = random_grid(rng, 2, 3);
        Mechanism mech(grid);
        double level = uniform01(rng);
        for (double& x : mech.d) x = level;
        IcReport rep = check_bic(mech, trial % 2 ? 1.0 : 0.6);
        CHECK(rep.satisfied);
    }
}

TEST_CASE("pointwise check accepts the sectionwise-binding audits") {
    Mechanism mech(bench_grid());
    mech.d = bench_d();
    // Cheapest pointwise audits, worked out per opponent section:
    // agent 1 (always in favor) audits d down to the section minimum,
    mech.a1[1] = {1.0, 0.0, 1.0, 0.9, 0.0, 0.9, 1.0, 1.0, 0.0};
    // agent 0 additionally needs the cross-part cells covered: its against
    // report at section t1=3 carries d=0.2 above the in-favor minimum 0,
    // and its high in-favor report there sits below the against maximum.
    mech.a1[0] = {0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.8, 0.0};
    mech.a0[0] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2};

    IcReport rep = check_epic(mech);
    CHECK(rep.satisfied);
    CHECK(std::abs(rep.min_slack) < 1e-12);

    InterimProfile ip = interim(mech, 1);
    CHECK(ip.verification[0] == doctest::Approx(2.3 / 3.0).epsilon(1e-12));
    CHECK(ip.verification[1] == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
    CHECK(ip.verification[2] == doctest::Approx(1.1 / 3.0).epsilon(1e-12));
}

TEST_CASE("interim-binding audits are not enough pointwise") {
    Mechanism mech = bench_bic_mechanism();
    IcReport rep = check_epic(mech);
    CHECK_FALSE(rep.satisfied);
    // the failure shows up in the sections where agent 0's type is high
    bool high_column = false;
    for (const auto& w : rep.witnesses)
        if (w.agent == 1 && w.side == '+') high_column = true;
    CHECK(high_column);
}

TEST_CASE("voting mechanisms pass the pointwise check by construction") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        DiscreteGrid grid = random_grid(rng, 2 + static_cast<int>(uniform01(rng) * 2), 3);
        VweParams params;
        params.p = 1.0;
        for (int i = 0; i < grid.num_agents(); ++i) {
            AgentWeights w;
            w.omega_minus = rand_in(rng, -1.0, 0.5);
            w.omega_plus = w.omega_minus + rand_in(rng, 0.0, 1.0);
            params.agents.push_back(w);
        }
        Mechanism mech = vwe_mechanism(params, grid);
        IcReport epic = check_epic(mech);
        CHECK(epic.satisfied);
        CHECK(epic.min_slack >= -1e-12);
        CHECK(check_bic(mech, 1.0).satisfied); // pointwise constraints average up
    }
}

TEST_CASE("interim verification averages the unconditional audit probability") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        DiscreteGrid grid = random_grid(rng, 2, 4);
        Mechanism mech(grid);
        mech.d = random_table(rng, grid.num_profiles());
        for (int i = 0; i < grid.num_agents(); ++i) {
            mech.a1[static_cast<std::size_t>(i)] = random_table(rng, grid.num_profiles());
            mech.a0[static_cast<std::size_t>(i)] = random_table(rng, grid.num_profiles());
        }
        for (int i = 0; i < grid.num_agents(); ++i) {
            InterimProfile ip = interim(mech, i);
            for (int k = 0; k < grid.num_types(i); ++k) {
                KahanSum direct;
                for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
                    if (grid.type_index(t, i) != k) continue;
                    direct.add(grid.joint_prob(t) / grid.type_prob(i, k) *
                               mech.unconditional_verification(i, t));
                }
                CHECK(std::abs(ip.verification[static_cast<std::size_t>(k)] - direct.value()) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("more audits can only relax the in-favor constraints") {
    std::mt19937_64 rng(29);
    DiscreteGrid grid = random_grid(rng, 2, 3);
    Mechanism mech(grid);
    mech.d = random_table(rng, grid.num_profiles());
    IcReport before = check_bic(mech, 0.8);

    Mechanism bumped = mech;
    std::size_t cell = static_cast<std::size_t>(uniform01(rng) * grid.num_profiles());
    bumped.a1[0][cell] = 1.0;
    IcReport after = check_bic(bumped, 0.8);

    for (std::size_t idx = 0; idx < before.slacks.size(); ++idx) {
        if (before.slacks[idx].agent != 0 || before.slacks[idx].side != '+') continue;
        CHECK(after.slacks[idx].slack >= before.slacks[idx].slack - 1e-12);
    }
}

TEST_CASE("replaying the veto scenario") {
    auto specs = veto_specs();
    auto params = veto_params();

    std::vector<double> truth{-5.0, 2.0, 2.0};
    ReplayOutcome solo = replay_deviation(params, specs, truth, 1, 6.0);
    CHECK(solo.decision_at_reports == 1);
    CHECK(solo.verified);
    CHECK(solo.lie_caught);
    CHECK(solo.caught_agent == 1);
    CHECK(solo.penalty_applied);
    CHECK(solo.final_decision == 0); // in-favor liar loses the policy

    // given agent 1's report of 6, agent 2 matching it makes nobody decisive
    ReplayOutcome pile_on = replay_reports(params, specs, truth, {-5.0, 6.0, 6.0});
    CHECK_FALSE(pile_on.lie_caught);
    CHECK(pile_on.final_decision == 1);

    ReplayOutcome honest = replay_deviation(params, specs, truth, 2, 2.0);
    CHECK(honest.final_decision == decide(params, specs, truth));
    CHECK_FALSE(honest.penalty_applied);

    CHECK_THROWS_AS(replay_deviation(params, specs, truth, 1, 6.5), std::invalid_argument);
}

TEST_CASE("two audited lies are rejected") {
    auto specs = veto_specs();
    auto params = veto_params();
    // both in-favor agents overstate from a configuration where each stays decisive
    std::vector<double> truth{-5.0, 2.0, 2.0};
    std::vector<double> reports{-5.0, 3.0, 3.0};
    // reported weights: -5 + 3 + 3 = 1 > 0; swapping either to 1 gives -1 < 0
    CHECK_THROWS_AS(replay_reports(params, specs, truth, reports), std::runtime_error);
}

TEST_CASE("sequential overstatement can profit once someone else lied") {
    auto specs = veto_specs();
    auto params = veto_params();
    std::vector<double> truth{-5.0, 2.0, 2.0};

    // Truthful play given agent 1's lie: the lie is audited, status quo stays.
    ReplayOutcome truthful_third = replay_reports(params, specs, truth, {-5.0, 6.0, 2.0});
    CHECK(truthful_third.final_decision == 0);

    // Agent 2 matching the lie escapes every audit and flips the outcome.
    ReplayOutcome matching_third = replay_reports(params, specs, truth, {-5.0, 6.0, 6.0});
    CHECK(matching_third.final_decision == 1);
    CHECK_FALSE(matching_third.verified);
}
