#pragma once

#include "verivote/model.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace verivote {

struct Mechanism; // defined in incentives.hpp

// Weight-function parameters for one agent: baseline weights for plain votes
// in favor / against, and the caps that bound how much influence a specific
// claim can carry when detection is imperfect.
struct AgentWeights {
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double nu_plus = std::numeric_limits<double>::infinity();
    double nu_minus = -std::numeric_limits<double>::infinity();
};

struct VweParams {
    std::vector<AgentWeights> agents;
    double p = 1.0; // detection probability; 1 = perfect verification

    void validate() const;
};

// Per-agent verification cost, either flat or depending on the true type.
class CostRule {
public:
    static CostRule constant(double c);
    static CostRule per_type(std::function<double(double)> fn);

    double at(double t) const { return fn_(t); }
    bool is_constant() const { return constant_; }

private:
    std::function<double(double)> fn_;
    bool constant_ = true;
};

std::vector<CostRule> cost_rules_from(const std::vector<AgentSpec>& specs);

// On-grid checks: costs nonnegative and net types monotone on each sign part.
void validate_cost_rule(const CostRule& rule, const AgentSpec& agent);

// Piecewise weight of a report: the net type t -/+ c/p clamped between the
// baseline weight and the cap on the agent's side of the sign partition.
double weight(const AgentWeights& w, double p, const AgentSpec& agent, const CostRule& cost,
              double t);

// Sum of weights at a profile; the policy passes only on a strictly positive
// sum (an exact tie keeps the status quo).
double weight_sum(const VweParams& params, const std::vector<AgentSpec>& specs,
                  const std::vector<CostRule>& costs, const std::vector<double>& profile);

int decide(const VweParams& params, const std::vector<AgentSpec>& specs,
           const std::vector<CostRule>& costs, const std::vector<double>& profile);
int decide(const VweParams& params, const std::vector<AgentSpec>& specs,
           const std::vector<double>& profile);

// An agent is decisive when his preferred outcome is implemented and swapping
// his weight for the baseline weight of his side would flip the decision.
bool is_decisive(const VweParams& params, const std::vector<AgentSpec>& specs,
                 const std::vector<CostRule>& costs, const std::vector<double>& profile, int i);
bool is_decisive(const VweParams& params, const std::vector<AgentSpec>& specs,
                 const std::vector<double>& profile, int i);

// Tabulates the mechanism on a grid: decide everywhere, verify exactly the
// decisive agents. Requires perfect verification (p = 1).
Mechanism vwe_mechanism(const VweParams& params, const DiscreteGrid& grid);
Mechanism vwe_mechanism(const VweParams& params, const DiscreteGrid& grid,
                        const std::vector<CostRule>& costs);

} // namespace verivote
