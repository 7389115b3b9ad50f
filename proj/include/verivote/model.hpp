#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace verivote {

// Finite type distribution: strictly increasing support, positive masses
// summing to one.
struct DiscreteDist {
    std::vector<double> values;
    std::vector<double> probs;
};

// Continuous type distribution given through its quantile function (inverse
// CDF) on (0,1). The density is optional and unused by the core operations.
struct ContinuousDist {
    std::function<double(double)> quantile;
    std::function<double(double)> density; // may be empty
};

ContinuousDist uniform_dist(double a, double b);
ContinuousDist normal_dist(double mean, double stddev);

// Partition of an agent's types into in-favor and against the new policy.
// Under a threshold rule types at the threshold count as in favor.
struct SignRule {
    enum class Kind { Threshold, AlwaysInFavor, AlwaysAgainst };
    Kind kind = Kind::Threshold;
    double threshold = 0.0;

    static SignRule at_threshold(double t) { return {Kind::Threshold, t}; }
    static SignRule always_in_favor() { return {Kind::AlwaysInFavor, 0.0}; }
    static SignRule always_against() { return {Kind::AlwaysAgainst, 0.0}; }

    bool in_favor(double t) const {
        switch (kind) {
        case Kind::Threshold: return t >= threshold;
        case Kind::AlwaysInFavor: return true;
        case Kind::AlwaysAgainst: return false;
        }
        return true;
    }
};

struct AgentSpec {
    std::variant<DiscreteDist, ContinuousDist> dist;
    SignRule sign;
    double cost = 0.0; // verification cost, utility units

    bool is_discrete() const { return std::holds_alternative<DiscreteDist>(dist); }
    const DiscreteDist& discrete() const { return std::get<DiscreteDist>(dist); }
    const ContinuousDist& continuous() const { return std::get<ContinuousDist>(dist); }
};

// Validated constructor for a finite-type agent.
AgentSpec make_discrete_agent(std::vector<double> values, std::vector<double> probs,
                              SignRule sign, double cost);

AgentSpec make_continuous_agent(ContinuousDist dist, SignRule sign, double cost);

// Probes the quantile on a 1000-point grid; throws on non-finite or
// decreasing values.
void validate_continuous(const AgentSpec& agent);

// Replaces a continuous distribution by 2^n equal-probability quantile bins
// per sign part, each represented by its conditional mean and unconditional
// mass. Sign parts with zero probability contribute no bins.
AgentSpec discretize(const AgentSpec& agent, int n);

struct PublicGoodTypes {
    std::vector<double> values;
    SignRule sign; // always in favor
};

// Maps public-good valuations v_i with provision cost k shared by n_agents
// into types v_i - k/n_agents; every agent is in favor regardless of sign.
PublicGoodTypes public_good_embedding(const std::vector<double>& valuations,
                                      double provision_cost, int n_agents);

// Finite product type space. Profile indices are mixed-radix with the last
// agent's type varying fastest.
class DiscreteGrid {
public:
    explicit DiscreteGrid(std::vector<AgentSpec> agents);

    int num_agents() const { return static_cast<int>(agents_.size()); }
    std::size_t num_profiles() const { return num_profiles_; }
    const AgentSpec& agent(int i) const { return agents_[static_cast<std::size_t>(i)]; }
    const std::vector<AgentSpec>& agents() const { return agents_; }

    int num_types(int i) const;
    double type_value(int i, int k) const;
    double type_prob(int i, int k) const;
    bool in_favor(int i, int k) const;
    // Probability of the agent's in-favor (against) part.
    double part_prob(int i, bool favor) const;

    int type_index(std::size_t profile, int i) const {
        return static_cast<int>(profile / strides_[static_cast<std::size_t>(i)] %
                                static_cast<std::size_t>(num_types(i)));
    }
    std::size_t stride(int i) const { return strides_[static_cast<std::size_t>(i)]; }
    double joint_prob(std::size_t profile) const { return joint_[profile]; }
    std::vector<double> profile_values(std::size_t profile) const;

private:
    std::vector<AgentSpec> agents_;
    std::vector<std::size_t> strides_;
    std::vector<double> joint_;
    std::size_t num_profiles_ = 0;
};

// Per-type expected decision and verification probabilities for one agent.
struct InterimProfile {
    int agent = 0;
    std::vector<double> decision;
    std::vector<double> verification;
};

// Interim decision rule of a bare decision table.
std::vector<double> interim_decision(const DiscreteGrid& grid,
                                     const std::vector<double>& d, int i);

} // namespace verivote
