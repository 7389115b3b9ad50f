#include "verivote/vwe.hpp"

#include "verivote/incentives.hpp"
#include "verivote/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace verivote {

void VweParams::validate() const {
    if (agents.empty()) throw std::invalid_argument("vwe params need at least one agent");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("detection probability must be in (0,1]");
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& w : agents) {
        if (!(w.omega_minus <= w.omega_plus))
            throw std::invalid_argument("omega_minus must not exceed omega_plus");
        if (!(w.nu_plus >= w.omega_plus))
            throw std::invalid_argument("nu_plus must be at least omega_plus");
        if (!(w.nu_minus <= w.omega_minus))
            throw std::invalid_argument("nu_minus must be at most omega_minus");
        if (p == 1.0 && (w.nu_plus != inf || w.nu_minus != -inf))
            throw std::invalid_argument("perfect verification admits no weight caps");
    }
}

CostRule CostRule::constant(double c) {
    if (c < 0.0) throw std::invalid_argument("negative verification cost");
    CostRule r;
    r.fn_ = [c](double) { return c; };
    r.constant_ = true;
    return r;
}

CostRule CostRule::per_type(std::function<double(double)> fn) {
    if (!fn) throw std::invalid_argument("cost rule needs a function");
    CostRule r;
    r.fn_ = std::move(fn);
    r.constant_ = false;
    return r;
}

std::vector<CostRule> cost_rules_from(const std::vector<AgentSpec>& specs) {
    std::vector<CostRule> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(CostRule::constant(s.cost));
    return out;
}

void validate_cost_rule(const CostRule& rule, const AgentSpec& agent) {
    if (!agent.is_discrete()) return;
    const auto& vals = agent.discrete().values;
    double prev_plus = -std::numeric_limits<double>::infinity();
    double prev_minus = -std::numeric_limits<double>::infinity();
    for (double t : vals) {
        double c = rule.at(t);
        if (c < 0.0) throw std::invalid_argument("negative verification cost");
        if (agent.sign.in_favor(t)) {
            double net = t - c;
            if (net < prev_plus) throw std::invalid_argument("net type decreasing on the in-favor part");
            prev_plus = net;
        } else {
            double net = t + c;
            if (net < prev_minus) throw std::invalid_argument("net type decreasing on the against part");
            prev_minus = net;
        }
    }
}

namespace {

void require_in_support(const AgentSpec& agent, double t) {
    if (!agent.is_discrete()) return;
    for (double v : agent.discrete().values)
        if (v == t || std::abs(v - t) <= 1e-12 * std::max(1.0, std::abs(v))) return;
    throw std::invalid_argument("type outside the agent's support");
}

} // namespace

double weight(const AgentWeights& w, double p, const AgentSpec& agent, const CostRule& cost,
              double t) {
    require_in_support(agent, t);
    const double unit = cost.at(t) / p;
    if (agent.sign.in_favor(t)) return std::clamp(t - unit, w.omega_plus, w.nu_plus);
    return std::clamp(t + unit, w.nu_minus, w.omega_minus);
}

double weight_sum(const VweParams& params, const std::vector<AgentSpec>& specs,
                  const std::vector<CostRule>& costs, const std::vector<double>& profile) {
    if (specs.size() != params.agents.size() || profile.size() != specs.size() ||
        costs.size() != specs.size())
        throw std::invalid_argument("profile, specs and params sizes disagree");
    KahanSum s;
    for (std::size_t i = 0; i < specs.size(); ++i)
        s.add(weight(params.agents[i], params.p, specs[i], costs[i], profile[i]));
    return s.value();
}

int decide(const VweParams& params, const std::vector<AgentSpec>& specs,
           const std::vector<CostRule>& costs, const std::vector<double>& profile) {
    return weight_sum(params, specs, costs, profile) > 0.0 ? 1 : 0;
}

int decide(const VweParams& params, const std::vector<AgentSpec>& specs,
           const std::vector<double>& profile) {
    return decide(params, specs, cost_rules_from(specs), profile);
}

bool is_decisive(const VweParams& params, const std::vector<AgentSpec>& specs,
                 const std::vector<CostRule>& costs, const std::vector<double>& profile, int i) {
    const std::size_t ix = static_cast<std::size_t>(i);
    double sum = weight_sum(params, specs, costs, profile);
    int d = sum > 0.0 ? 1 : 0;
    bool favor = specs[ix].sign.in_favor(profile[ix]);
    if ((favor && d != 1) || (!favor && d != 0)) return false;

    double own = weight(params.agents[ix], params.p, specs[ix], costs[ix], profile[ix]);
    double baseline = favor ? params.agents[ix].omega_plus : params.agents[ix].omega_minus;
    double swapped = sum - own + baseline;
    int d_swapped = swapped > 0.0 ? 1 : 0;
    return d_swapped != d;
}

bool is_decisive(const VweParams& params, const std::vector<AgentSpec>& specs,
                 const std::vector<double>& profile, int i) {
    return is_decisive(params, specs, cost_rules_from(specs), profile, i);
}

Mechanism vwe_mechanism(const VweParams& params, const DiscreteGrid& grid,
                        const std::vector<CostRule>& costs) {
    params.validate();
    if (params.p < 1.0)
        throw std::invalid_argument("mechanism tabulation requires perfect verification");
    if (static_cast<int>(params.agents.size()) != grid.num_agents())
        throw std::invalid_argument("params and grid sizes disagree");
    for (int i = 0; i < grid.num_agents(); ++i)
        validate_cost_rule(costs[static_cast<std::size_t>(i)], grid.agent(i));

    // Per-agent weight tables over the type supports.
    std::vector<std::vector<double>> wtab(static_cast<std::size_t>(grid.num_agents()));
    for (int i = 0; i < grid.num_agents(); ++i) {
        auto& tab = wtab[static_cast<std::size_t>(i)];
        tab.resize(static_cast<std::size_t>(grid.num_types(i)));
        for (int k = 0; k < grid.num_types(i); ++k)
            tab[static_cast<std::size_t>(k)] = weight(params.agents[static_cast<std::size_t>(i)],
                                                      params.p, grid.agent(i),
                                                      costs[static_cast<std::size_t>(i)],
                                                      grid.type_value(i, k));
    }

    Mechanism mech(grid);
    for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
        KahanSum s;
        for (int i = 0; i < grid.num_agents(); ++i)
            s.add(wtab[static_cast<std::size_t>(i)][static_cast<std::size_t>(grid.type_index(t, i))]);
        double sum = s.value();
        int d = sum > 0.0 ? 1 : 0;
        mech.d[t] = d;
        for (int i = 0; i < grid.num_agents(); ++i) {
            const std::size_t ix = static_cast<std::size_t>(i);
            int k = grid.type_index(t, i);
            bool favor = grid.in_favor(i, k);
            if ((favor && d != 1) || (!favor && d != 0)) continue;
            double own = wtab[ix][static_cast<std::size_t>(k)];
            double baseline = favor ? params.agents[ix].omega_plus : params.agents[ix].omega_minus;
            int d_swapped = (sum - own + baseline) > 0.0 ? 1 : 0;
            if (d_swapped == d) continue;
            if (favor)
                mech.a1[ix][t] = 1.0;
            else
                mech.a0[ix][t] = 1.0;
        }
    }
    return mech;
}

Mechanism vwe_mechanism(const VweParams& params, const DiscreteGrid& grid) {
    return vwe_mechanism(params, grid, cost_rules_from(grid.agents()));
}

} // namespace verivote
