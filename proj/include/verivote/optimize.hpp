#pragma once

#include "verivote/incentives.hpp"
#include "verivote/model.hpp"
#include "verivote/vwe.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace verivote {

// Value and interim envelope of a decision rule in the relaxed problem.
struct RelaxedSolution {
    std::vector<double> d;
    double value = 0.0;
    std::vector<double> m_plus;  // inf of interim decision over the in-favor part
    std::vector<double> m_minus; // sup over the against part
};

// Convex provision-cost technology for the continuous public-good problem.
struct CostFunctional {
    std::function<double(double)> cost;       // C, on [0,1)
    std::function<double(double)> derivative; // C'

    void validate() const;
};

// Principal's expected payoff: sum of types when the policy passes minus
// verification costs actually incurred.
double principal_value(const Mechanism& mech);

// Objective of the decision-rule-only relaxation: net types inside the
// expectation plus the worst-off interim terms priced at c/p.
double relaxed_value(const std::vector<double>& d, const DiscreteGrid& grid, double p);

struct TwoAgentWeights {
    std::optional<double> omega_plus;
    std::optional<double> omega_minus;
};

// Baseline weights from the implicit conditional-mean equations
//   E[max{w+, t - c} | t >= 0] = E[t | t >= 0]
//   E[min{w-, t + c} | t <  0] = E[t | t <  0]
// solved by bisection on the monotone residuals. A side with zero probability
// yields no weight. Requires a zero threshold or a constant sign.
TwoAgentWeights solve_two_agent_weights(const AgentSpec& agent);

inline constexpr std::size_t kDefaultLpProfileCap = 100000;

// Maximizes the relaxed objective as an LP over decision probabilities with
// auxiliary per-agent envelope scalars. For p < 1 the influence bounds
// m+/(1-p) and (m- - p)/(1-p) are added.
RelaxedSolution solve_relaxed_lp(const DiscreteGrid& grid, double p,
                                 std::size_t profile_cap = kDefaultLpProfileCap);

struct FittedWeights {
    VweParams params;
    // Fraction of profiles where the fitted voting rule disagrees with the
    // rounded LP decision table.
    double residual = 0.0;
};

// Reads bunching plateaus (and caps, for p < 1) off the interim profile of an
// LP solution and rationalizes them as weight-function parameters. Plateau
// weights use the probability-weighted mean of net types over the plateau.
FittedWeights fit_weights(const RelaxedSolution& sol, const DiscreteGrid& grid, double p);

// Builds decision-conditional verification schedules q_i making every
// own-side incentive constraint exactly binding at detection probability p.
// Fails when the decision table violates the influence bounds, or when the
// against-part envelope exceeds the in-favor one (no verification can deter
// cross-part deviations then).
Mechanism build_verification(const std::vector<double>& d, const DiscreteGrid& grid, double p);

struct PublicGoodSolution {
    std::vector<double> schedule; // provision level per type
    double floor = 0.0;           // inf of the schedule
    double value = 0.0;           // principal's expected payoff
};

// One always-in-favor agent choosing a public-good level in [0,1): audits
// keep the worst-off constraint binding, so the principal maximizes
//   E[ t d - c (1 - m / d) - C(d) ]  with  m = inf d,
// by a pointwise inner search over d >= m and an outer search over m.
PublicGoodSolution solve_public_good(const AgentSpec& agent, const CostFunctional& tech,
                                     double c);

} // namespace verivote
