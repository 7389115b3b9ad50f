#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "verivote/model.hpp"
#include "verivote/numeric.hpp"

#include <cmath>
#include <random>

using namespace verivote;

TEST_CASE("discrete agent validation") {
    AgentSpec a = make_discrete_agent({-1.0, 1.0}, {0.5, 0.5}, SignRule::at_threshold(0.0), 0.1);
    CHECK(a.is_discrete());
    CHECK(a.sign.in_favor(1.0));
    CHECK_FALSE(a.sign.in_favor(-1.0));
    CHECK(a.cost == 0.1);

    CHECK_THROWS_WITH_AS(
        make_discrete_agent({-1.0, 1.0}, {0.5, 0.6}, SignRule::at_threshold(0.0), 0.1),
        "probabilities do not sum to 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        make_discrete_agent({-1.0, 1.0}, {0.5, 0.5}, SignRule::at_threshold(0.0), -0.1),
        "negative verification cost", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        make_discrete_agent({1.0, -1.0}, {0.5, 0.5}, SignRule::at_threshold(0.0), 0.1),
        "values not strictly increasing", std::invalid_argument);
    CHECK_THROWS_AS(make_discrete_agent({1.0, 2.0}, {0.5, 0.5, 0.0},
                                        SignRule::at_threshold(0.0), 0.1),
                    std::invalid_argument);
}

TEST_CASE("threshold types at the boundary count as in favor") {
    AgentSpec a = make_discrete_agent({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25},
                                      SignRule::at_threshold(0.0), 0.0);
    CHECK(a.sign.in_favor(0.0));
}

TEST_CASE("public good embedding") {
    PublicGoodTypes t = public_good_embedding({2.0, 2.0}, 3.0, 2);
    CHECK(t.values == std::vector<double>{0.5, 0.5});
    CHECK(t.sign.kind == SignRule::Kind::AlwaysInFavor);

    CHECK(public_good_embedding({1.0}, 0.0, 1).values == std::vector<double>{1.0});

    PublicGoodTypes u = public_good_embedding({0.2, 0.4, 0.6}, 1.2, 3);
    CHECK(u.values[0] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(u.values[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(u.values[2] == doctest::Approx(0.2).epsilon(1e-12));
    for (double v : u.values) CHECK(u.sign.in_favor(v));

    CHECK_THROWS_AS(public_good_embedding({1.0}, 1.0, 0), std::invalid_argument);
}

TEST_CASE("discretize uniform all in favor") {
    AgentSpec cont = make_continuous_agent(uniform_dist(0.0, 1.0), SignRule::always_in_favor(), 0.0);
    AgentSpec disc = discretize(cont, 1);
    const auto& dd = disc.discrete();
    REQUIRE(dd.values.size() == 2);
    CHECK(dd.values[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(dd.values[1] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(dd.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dd.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("discretize symmetric uniform with threshold") {
    AgentSpec cont = make_continuous_agent(uniform_dist(-1.0, 1.0), SignRule::at_threshold(0.0), 0.0);
    AgentSpec disc = discretize(cont, 1);
    const auto& dd = disc.discrete();
    REQUIRE(dd.values.size() == 4);
    const double expect[] = {-0.75, -0.25, 0.25, 0.75};
    for (int k = 0; k < 4; ++k) {
        CHECK(dd.values[k] == doctest::Approx(expect[k]).epsilon(1e-9));
        CHECK(dd.probs[k] == doctest::Approx(0.25).epsilon(1e-9));
    }
    CHECK_FALSE(disc.sign.in_favor(dd.values[1]));
    CHECK(disc.sign.in_favor(dd.values[2]));
}

namespace {

// Mean of a standard normal truncated to the quantile band (u_lo, u_hi).
double truncated_normal_mean(double u_lo, double u_hi) {
    double z_lo = u_lo <= 0.0 ? -std::numeric_limits<double>::infinity() : normal_quantile(u_lo);
    double z_hi = u_hi >= 1.0 ? std::numeric_limits<double>::infinity() : normal_quantile(u_hi);
    double phi_lo = std::isinf(z_lo) ? 0.0 : normal_pdf(z_lo);
    double phi_hi = std::isinf(z_hi) ? 0.0 : normal_pdf(z_hi);
    return (phi_lo - phi_hi) / (u_hi - u_lo);
}

} // namespace

TEST_CASE("discretize standard normal against closed form and sampling") {
    AgentSpec cont = make_continuous_agent(normal_dist(0.0, 1.0), SignRule::at_threshold(0.0), 0.0);
    AgentSpec disc = discretize(cont, 2);
    const auto& dd = disc.discrete();
    REQUIRE(dd.values.size() == 8);

    KahanSum mean;
    for (std::size_t k = 0; k < 8; ++k) mean.add(dd.probs[k] * dd.values[k]);
    CHECK(std::abs(mean.value()) < 1e-6);

    for (int k = 0; k < 8; ++k) {
        double u_lo = k / 8.0, u_hi = (k + 1) / 8.0;
        CHECK(dd.values[static_cast<std::size_t>(k)] ==
              doctest::Approx(truncated_normal_mean(u_lo, u_hi)).epsilon(1e-6));
    }

    // Sampling oracle: bin means of one million quantile-transformed draws.
    std::mt19937_64 rng(20240811);
    const int samples = 1000000;
    std::vector<KahanSum> bin_sum(8);
    std::vector<int> bin_count(8, 0);
    for (int s = 0; s < samples; ++s) {
        double u = uniform01(rng);
        if (u <= 0.0) continue;
        int bin = std::min(7, static_cast<int>(u * 8.0));
        bin_sum[static_cast<std::size_t>(bin)].add(normal_quantile(u));
        ++bin_count[static_cast<std::size_t>(bin)];
    }
    for (int k = 0; k < 8; ++k) {
        double est = bin_sum[static_cast<std::size_t>(k)].value() / bin_count[static_cast<std::size_t>(k)];
        // conservative 3-standard-error band; within-bin spread is below 0.5
        double band = 3.0 * 0.5 / std::sqrt(static_cast<double>(bin_count[static_cast<std::size_t>(k)]));
        CHECK(std::abs(dd.values[static_cast<std::size_t>(k)] - est) < band);
    }
}

TEST_CASE("discretize rejects bad input") {
    AgentSpec cont = make_continuous_agent(uniform_dist(0.0, 1.0), SignRule::always_in_favor(), 0.0);
    CHECK_THROWS_AS(discretize(cont, 0), std::invalid_argument);
    AgentSpec disc = discretize(cont, 1);
    CHECK_THROWS_AS(discretize(disc, 1), std::invalid_argument);

    ContinuousDist broken;
    broken.quantile = [](double u) { return -u; };
    AgentSpec bad;
    bad.dist = broken;
    bad.sign = SignRule::always_in_favor();
    CHECK_THROWS_AS(discretize(bad, 1), std::runtime_error);
}

TEST_CASE("discretize preserves part means and part ordering") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        double mu = testutil::rand_in(rng, -1.0, 1.0);
        double sd = testutil::rand_in(rng, 0.5, 2.0);
        int n = 1 + static_cast<int>(uniform01(rng) * 4);
        AgentSpec cont = make_continuous_agent(normal_dist(mu, sd), SignRule::at_threshold(mu), 0.0);
        AgentSpec disc = discretize(cont, n);
        const auto& dd = disc.discrete();

        double range = dd.values.back() - dd.values.front();
        for (bool favor : {false, true}) {
            KahanSum mass, mean;
            for (std::size_t k = 0; k < dd.values.size(); ++k) {
                if (disc.sign.in_favor(dd.values[k]) != favor) continue;
                mass.add(dd.probs[k]);
                mean.add(dd.probs[k] * dd.values[k]);
            }
            REQUIRE(mass.value() > 0.0);
            double part_mean = mean.value() / mass.value();
            // exact conditional part mean through the quantile transform
            const auto& q = cont.continuous().quantile;
            double direct = favor ? integrate(q, 0.5, 1.0) / 0.5 : integrate(q, 0.0, 0.5) / 0.5;
            CHECK(std::abs(part_mean - direct) <= std::pow(0.5, n) * range + 1e-9);
        }
        double max_against = -std::numeric_limits<double>::infinity();
        double min_favor = std::numeric_limits<double>::infinity();
        for (double v : dd.values)
            (disc.sign.in_favor(v) ? min_favor : max_against) =
                disc.sign.in_favor(v) ? std::min(min_favor, v) : std::max(max_against, v);
        CHECK(max_against < min_favor);
    }
}

TEST_CASE("grid joint probabilities sum to one") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        DiscreteGrid grid = testutil::random_grid(rng, 1 + static_cast<int>(uniform01(rng) * 3), 4);
        KahanSum total;
        for (std::size_t t = 0; t < grid.num_profiles(); ++t) total.add(grid.joint_prob(t));
        CHECK(std::abs(total.value() - 1.0) < 1e-9);
    }
}

TEST_CASE("interim decision of a constant table") {
    DiscreteGrid grid = testutil::bench_grid();
    std::vector<double> ones(grid.num_profiles(), 1.0);
    for (int i = 0; i < grid.num_agents(); ++i)
        for (double v : interim_decision(grid, ones, i)) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("quantile validation probes") {
    ContinuousDist nonfinite;
    nonfinite.quantile = [](double u) { return u < 0.5 ? 0.0 : std::numeric_limits<double>::quiet_NaN(); };
    AgentSpec bad;
    bad.dist = nonfinite;
    bad.sign = SignRule::always_in_favor();
    CHECK_THROWS_AS(validate_continuous(bad), std::runtime_error);
}
