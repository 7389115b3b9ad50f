#pragma once

#include "verivote/model.hpp"
#include "verivote/vwe.hpp"

#include <string>
#include <vector>

namespace verivote {

// Tabular mechanism over a finite grid. Decision probabilities d(t) together
// with verification probabilities conditional on the realized decision: a1
// applies when the policy passes, a0 when the status quo stays. The
// unconditional verification probability is d*a1 + (1-d)*a0.
struct Mechanism {
    DiscreteGrid grid;
    std::vector<double> d;               // per profile
    std::vector<std::vector<double>> a1; // per agent, per profile
    std::vector<std::vector<double>> a0;

    explicit Mechanism(DiscreteGrid g);
    void validate() const;
    double unconditional_verification(int i, std::size_t t) const {
        return d[t] * a1[static_cast<std::size_t>(i)][t] +
               (1.0 - d[t]) * a0[static_cast<std::size_t>(i)][t];
    }
};

struct IcViolation {
    int agent = 0;
    int worst_type = 0;  // type attaining the inf/sup being beaten
    int report_type = 0; // deviation report
    char side = '+';
    double slack = 0.0;
};

// One evaluated constraint margin; nonnegative means satisfied.
struct IcSlack {
    int agent = 0;
    int report_type = 0;
    char side = '+';
    double slack = 0.0;
};

struct IcReport {
    bool satisfied = true;
    double min_slack = std::numeric_limits<double>::infinity();
    std::vector<double> agent_min_slack;
    std::vector<IcSlack> slacks; // per (agent, report type, side); worst over sections for epic
    std::vector<IcViolation> witnesses;
};

// Classification tolerance for binding-vs-violated.
inline constexpr double kSlackTol = 1e-9;

InterimProfile interim(const Mechanism& mech, int i);

struct WorstOff {
    // inf over the in-favor part of the interim decision rule (+inf when the
    // part is empty) and sup over the against part (-inf when empty).
    double inf_plus = std::numeric_limits<double>::infinity();
    double sup_minus = -std::numeric_limits<double>::infinity();
    std::vector<int> argmin_plus;
    std::vector<int> argmax_minus;
};

WorstOff worst_off(const Mechanism& mech, int i);

// Interim (Bayesian) incentive constraints with detection probability p.
IcReport check_bic(const Mechanism& mech, double p);

// Pointwise (ex-post) incentive constraints; perfect-verification semantics.
IcReport check_epic(const Mechanism& mech);

struct ReplayOutcome {
    int decision_at_reports = 0; // before any penalty
    bool verified = false;       // some report was audited
    bool lie_caught = false;
    int caught_agent = -1;
    bool penalty_applied = false;
    int final_decision = 0;
};

// Replays a reported profile against the true one under a voting-with-evidence
// mechanism: decisive reports are audited, a single revealed lie draws the
// severest penalty (in-favor liar -> status quo, against liar -> policy).
// More than one audited lie is outside the supported semantics and throws.
ReplayOutcome replay_reports(const VweParams& params, const std::vector<AgentSpec>& specs,
                             const std::vector<double>& true_profile,
                             const std::vector<double>& reports);

// Single-deviator convenience form: agent i reports r, everyone else is
// truthful.
ReplayOutcome replay_deviation(const VweParams& params, const std::vector<AgentSpec>& specs,
                               const std::vector<double>& true_profile, int i, double r);

} // namespace verivote
