#pragma once

#include "verivote/incentives.hpp"
#include "verivote/model.hpp"

#include <vector>

namespace verivote {

// A [0,1]-valued table over a grid; the object the rearrangement acts on.
struct DecisionTensor {
    DiscreteGrid grid;
    std::vector<double> values;

    DecisionTensor(DiscreteGrid g, std::vector<double> v);
    void validate() const;
};

// Weighted marginal of the tensor for one agent.
std::vector<double> tensor_marginal(const DecisionTensor& g, int i);

// Produces a tensor with identical weighted marginals that is nondecreasing
// in every coordinate once each axis is sorted by ascending marginal (stable
// on ties). Monotonicity makes expectation commute with inf/sup over any set
// of an agent's types. Solved as a linear feasibility program; existence is
// guaranteed, so a failure here is numerical.
DecisionTensor monotone_rearrange(const DecisionTensor& g);

struct VerificationPair {
    std::vector<std::vector<double>> a1; // per agent, per profile
    std::vector<std::vector<double>> a0;
};

// Cheapest pointwise verification schedules for a decision table: binding
// where the pointwise constraints bite and zero where they are slack.
//   a1 = (d - min over the in-favor part of the section) / d
//   a0 = (max over the against part of the section - d) / (1 - d)
// both clamped below at zero; empty parts zero the corresponding branch.
VerificationPair epic_verification(const DecisionTensor& d_hat);

// Equivalent ex-post incentive compatible mechanism: rearranges the decision
// table, attaches the minimal pointwise verification, then pads verification
// uniformly per (agent, type) until the interim verification matches the
// input's exactly. Interim decision and verification profiles are preserved.
Mechanism bic_to_epic(const Mechanism& mech);

} // namespace verivote
