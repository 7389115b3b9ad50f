#include "verivote/incentives.hpp"

#include "verivote/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace verivote {

Mechanism::Mechanism(DiscreteGrid g) : grid(std::move(g)) {
    d.assign(grid.num_profiles(), 0.0);
    a1.assign(static_cast<std::size_t>(grid.num_agents()),
              std::vector<double>(grid.num_profiles(), 0.0));
    a0 = a1;
}

void Mechanism::validate() const {
    auto in_unit = [](double x) { return x >= -kSlackTol && x <= 1.0 + kSlackTol; };
    if (d.size() != grid.num_profiles()) throw std::invalid_argument("decision table size mismatch");
    if (a1.size() != static_cast<std::size_t>(grid.num_agents()) || a0.size() != a1.size())
        throw std::invalid_argument("verification table count mismatch");
    for (double x : d)
        if (!in_unit(x)) throw std::invalid_argument("decision probability outside [0,1]");
    for (const auto& tab : {&a1, &a0})
        for (const auto& per_agent : *tab) {
            if (per_agent.size() != grid.num_profiles())
                throw std::invalid_argument("verification table size mismatch");
            for (double x : per_agent)
                if (!in_unit(x)) throw std::invalid_argument("verification probability outside [0,1]");
        }
}

InterimProfile interim(const Mechanism& mech, int i) {
    const DiscreteGrid& g = mech.grid;
    InterimProfile out;
    out.agent = i;
    std::vector<KahanSum> dec(static_cast<std::size_t>(g.num_types(i)));
    std::vector<KahanSum> ver(static_cast<std::size_t>(g.num_types(i)));
    for (std::size_t t = 0; t < g.num_profiles(); ++t) {
        int k = g.type_index(t, i);
        double f_others = g.joint_prob(t) / g.type_prob(i, k);
        dec[static_cast<std::size_t>(k)].add(f_others * mech.d[t]);
        ver[static_cast<std::size_t>(k)].add(f_others * mech.unconditional_verification(i, t));
    }
    out.decision.resize(dec.size());
    out.verification.resize(ver.size());
    for (std::size_t k = 0; k < dec.size(); ++k) {
        out.decision[k] = dec[k].value();
        out.verification[k] = ver[k].value();
    }
    return out;
}

WorstOff worst_off(const Mechanism& mech, int i) {
    InterimProfile ip = interim(mech, i);
    WorstOff out;
    const DiscreteGrid& g = mech.grid;
    for (int k = 0; k < g.num_types(i); ++k) {
        double v = ip.decision[static_cast<std::size_t>(k)];
        if (g.in_favor(i, k)) {
            if (v < out.inf_plus - kSlackTol) {
                out.inf_plus = v;
                out.argmin_plus.assign(1, k);
            } else if (std::abs(v - out.inf_plus) <= kSlackTol) {
                out.argmin_plus.push_back(k);
            }
        } else {
            if (v > out.sup_minus + kSlackTol) {
                out.sup_minus = v;
                out.argmax_minus.assign(1, k);
            } else if (std::abs(v - out.sup_minus) <= kSlackTol) {
                out.argmax_minus.push_back(k);
            }
        }
    }
    return out;
}

namespace {

void note_slack(IcReport& rep, int agent, int worst, int report, char side, double slack) {
    rep.min_slack = std::min(rep.min_slack, slack);
    auto& per_agent = rep.agent_min_slack[static_cast<std::size_t>(agent)];
    per_agent = std::min(per_agent, slack);
    if (slack < -kSlackTol) {
        rep.satisfied = false;
        rep.witnesses.push_back(IcViolation{agent, worst, report, side, slack});
    }
}

} // namespace

IcReport check_bic(const Mechanism& mech, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("detection probability must be in (0,1]");
    mech.validate();
    const DiscreteGrid& g = mech.grid;
    IcReport rep;
    rep.agent_min_slack.assign(static_cast<std::size_t>(g.num_agents()),
                               std::numeric_limits<double>::infinity());

    for (int i = 0; i < g.num_agents(); ++i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        WorstOff wo = worst_off(mech, i);
        // Per report type: what an in-favor deviator keeps, E[d(1 - p a1)],
        // and what an against deviator ends with, E[d(1 - p a1)] + p E[avg].
        std::vector<KahanSum> keep(static_cast<std::size_t>(g.num_types(i)));
        std::vector<KahanSum> punish(static_cast<std::size_t>(g.num_types(i)));
        for (std::size_t t = 0; t < g.num_profiles(); ++t) {
            int k = g.type_index(t, i);
            double f_others = g.joint_prob(t) / g.type_prob(i, k);
            double kept = mech.d[t] * (1.0 - p * mech.a1[ix][t]);
            keep[static_cast<std::size_t>(k)].add(f_others * kept);
            punish[static_cast<std::size_t>(k)].add(
                f_others * (kept + p * mech.unconditional_verification(i, t)));
        }
        int worst_plus = wo.argmin_plus.empty() ? -1 : wo.argmin_plus.front();
        int worst_minus = wo.argmax_minus.empty() ? -1 : wo.argmax_minus.front();
        for (int k = 0; k < g.num_types(i); ++k) {
            if (worst_plus >= 0) {
                double slack = wo.inf_plus - keep[static_cast<std::size_t>(k)].value();
                rep.slacks.push_back(IcSlack{i, k, '+', slack});
                note_slack(rep, i, worst_plus, k, '+', slack);
            }
            if (worst_minus >= 0) {
                double slack = punish[static_cast<std::size_t>(k)].value() - wo.sup_minus;
                rep.slacks.push_back(IcSlack{i, k, '-', slack});
                note_slack(rep, i, worst_minus, k, '-', slack);
            }
        }
    }
    return rep;
}

IcReport check_epic(const Mechanism& mech) {
    mech.validate();
    const DiscreteGrid& g = mech.grid;
    IcReport rep;
    rep.agent_min_slack.assign(static_cast<std::size_t>(g.num_agents()),
                               std::numeric_limits<double>::infinity());

    for (int i = 0; i < g.num_agents(); ++i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        const std::size_t stride = g.stride(i);
        const std::size_t size = static_cast<std::size_t>(g.num_types(i));
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> worst_plus(size, inf), worst_minus(size, inf);
        bool has_plus = false, has_minus = false;
        // Enumerate opponent sections; within each, scan agent i's axis.
        for (std::size_t t = 0; t < g.num_profiles(); ++t) {
            if (g.type_index(t, i) != 0) continue;
            double col_min_plus = inf;
            double col_max_minus = -inf;
            int argmin_plus = -1, argmax_minus = -1;
            for (std::size_t k = 0; k < size; ++k) {
                double v = mech.d[t + k * stride];
                if (g.in_favor(i, static_cast<int>(k))) {
                    if (v < col_min_plus) {
                        col_min_plus = v;
                        argmin_plus = static_cast<int>(k);
                    }
                } else if (v > col_max_minus) {
                    col_max_minus = v;
                    argmax_minus = static_cast<int>(k);
                }
            }
            for (std::size_t k = 0; k < size; ++k) {
                std::size_t cell = t + k * stride;
                double kept = mech.d[cell] * (1.0 - mech.a1[ix][cell]);
                if (argmin_plus >= 0) {
                    has_plus = true;
                    double slack = col_min_plus - kept;
                    worst_plus[k] = std::min(worst_plus[k], slack);
                    note_slack(rep, i, argmin_plus, static_cast<int>(k), '+', slack);
                }
                if (argmax_minus >= 0) {
                    has_minus = true;
                    double slack =
                        kept + mech.unconditional_verification(i, cell) - col_max_minus;
                    worst_minus[k] = std::min(worst_minus[k], slack);
                    note_slack(rep, i, argmax_minus, static_cast<int>(k), '-', slack);
                }
            }
        }
        for (std::size_t k = 0; k < size; ++k) {
            if (has_plus) rep.slacks.push_back(IcSlack{i, static_cast<int>(k), '+', worst_plus[k]});
            if (has_minus)
                rep.slacks.push_back(IcSlack{i, static_cast<int>(k), '-', worst_minus[k]});
        }
    }
    return rep;
}

ReplayOutcome replay_reports(const VweParams& params, const std::vector<AgentSpec>& specs,
                             const std::vector<double>& true_profile,
                             const std::vector<double>& reports) {
    params.validate();
    if (params.p < 1.0) throw std::invalid_argument("replay requires perfect verification");
    if (true_profile.size() != specs.size() || reports.size() != specs.size())
        throw std::invalid_argument("profile sizes disagree");
    auto costs = cost_rules_from(specs);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        // Both profiles must consist of feasible types.
        weight(params.agents[i], params.p, specs[i], costs[i], true_profile[i]);
        weight(params.agents[i], params.p, specs[i], costs[i], reports[i]);
    }

    ReplayOutcome out;
    out.decision_at_reports = decide(params, specs, costs, reports);
    out.final_decision = out.decision_at_reports;

    int caught = -1;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!is_decisive(params, specs, costs, reports, static_cast<int>(i))) continue;
        out.verified = true;
        if (reports[i] == true_profile[i]) continue;
        if (caught >= 0)
            throw std::runtime_error("multiple audited lies: outcome unspecified");
        caught = static_cast<int>(i);
    }
    if (caught >= 0) {
        out.lie_caught = true;
        out.caught_agent = caught;
        out.penalty_applied = true;
        // Severest penalty keyed to the liar's true preference.
        bool favor = specs[static_cast<std::size_t>(caught)].sign.in_favor(
            true_profile[static_cast<std::size_t>(caught)]);
        out.final_decision = favor ? 0 : 1;
    }
    return out;
}

ReplayOutcome replay_deviation(const VweParams& params, const std::vector<AgentSpec>& specs,
                               const std::vector<double>& true_profile, int i, double r) {
    std::vector<double> reports = true_profile;
    reports.at(static_cast<std::size_t>(i)) = r;
    return replay_reports(params, specs, true_profile, reports);
}

} // namespace verivote
