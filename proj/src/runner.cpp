#include "verivote/runner.hpp"

#include "verivote/equivalence.hpp"
#include "verivote/incentives.hpp"
#include "verivote/numeric.hpp"
#include "verivote/optimize.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace verivote {

namespace {

using Clock = std::chrono::steady_clock;

std::string elapsed_since(Clock::time_point start) {
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3fs", secs);
    return buf;
}

Mechanism build_mechanism(const ExperimentConfig& cfg, const DiscreteGrid& grid) {
    const MechanismConfig& mc = *cfg.mechanism;
    if (mc.kind == MechanismConfig::Kind::Vwe) return vwe_mechanism(mc.vwe, grid);
    if (mc.kind != MechanismConfig::Kind::Tables)
        throw ConfigError("mechanism: this task needs vwe parameters or explicit tables");

    Mechanism mech(grid);
    if (mc.tables.d.size() != grid.num_profiles())
        throw ConfigError("mechanism.tables.d must have one entry per profile");
    mech.d = mc.tables.d;
    auto fill = [&](const std::vector<std::vector<double>>& src,
                    std::vector<std::vector<double>>& dst, const char* key) {
        if (src.empty()) return; // defaults to zero
        for (std::size_t i = 0; i < src.size(); ++i) {
            if (src[i].size() != grid.num_profiles())
                throw ConfigError(std::string("mechanism.tables.") + key +
                                  " entries must cover every profile");
            dst[i] = src[i];
        }
    };
    fill(mc.tables.a1, mech.a1, "a1");
    fill(mc.tables.a0, mech.a0, "a0");
    try {
        mech.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("mechanism.tables: ") + e.what());
    }
    return mech;
}

void append_interim_rows(CsvTable& csv, const Mechanism& mech) {
    for (int i = 0; i < mech.grid.num_agents(); ++i) {
        InterimProfile ip = interim(mech, i);
        for (int k = 0; k < mech.grid.num_types(i); ++k)
            csv.add_row({static_cast<long long>(i), static_cast<long long>(k),
                         mech.grid.type_value(i, k), ip.decision[static_cast<std::size_t>(k)],
                         ip.verification[static_cast<std::size_t>(k)]});
    }
}

// Simulation estimate of the principal's payoff; one stream of draws per
// profile sample keeps the estimate reproducible for a fixed seed.
std::pair<double, double> monte_carlo_value(const Mechanism& mech, long long samples,
                                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const DiscreteGrid& g = mech.grid;
    KahanSum sum, sumsq;
    for (long long s = 0; s < samples; ++s) {
        std::size_t profile = 0;
        for (int i = 0; i < g.num_agents(); ++i) {
            double u = uniform01(rng);
            double acc = 0.0;
            int pick = g.num_types(i) - 1;
            for (int k = 0; k < g.num_types(i); ++k) {
                acc += g.type_prob(i, k);
                if (u < acc) {
                    pick = k;
                    break;
                }
            }
            profile += static_cast<std::size_t>(pick) * g.stride(i);
        }
        int policy = uniform01(rng) < mech.d[profile] ? 1 : 0;
        double draw = 0.0;
        for (int i = 0; i < g.num_agents(); ++i) {
            if (policy) draw += g.type_value(i, g.type_index(profile, i));
            const auto& table = policy ? mech.a1 : mech.a0;
            if (uniform01(rng) < table[static_cast<std::size_t>(i)][profile])
                draw -= g.agent(i).cost;
        }
        sum.add(draw);
        sumsq.add(draw * draw);
    }
    double mean = sum.value() / static_cast<double>(samples);
    double var = sumsq.value() / static_cast<double>(samples) - mean * mean;
    double se = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    return {mean, se};
}

RunResult run_evaluate(const ExperimentConfig& cfg, Clock::time_point start) {
    DiscreteGrid grid(cfg.agents);
    Mechanism mech = build_mechanism(cfg, grid);
    double value = principal_value(mech);

    CsvTable csv({"agent", "type_index", "type_value", "interim_decision",
                  "interim_verification"});
    append_interim_rows(csv, mech);

    std::ostringstream os;
    os << "evaluate: value=" << format_real(value);
    if (cfg.samples) {
        auto [mc, se] = monte_carlo_value(mech, *cfg.samples, *cfg.seed);
        os << " mc=" << format_real(mc) << " se=" << format_real(se);
    }
    os << " (" << elapsed_since(start) << ")";
    return RunResult{os.str(), std::move(csv)};
}

RunResult run_check(const ExperimentConfig& cfg, Clock::time_point start) {
    DiscreteGrid grid(cfg.agents);
    Mechanism mech = build_mechanism(cfg, grid);
    IcReport report =
        cfg.notion == IcNotion::Bic ? check_bic(mech, cfg.p) : check_epic(mech);

    CsvTable csv({"agent", "type_index", "side", "slack"});
    for (const auto& s : report.slacks)
        csv.add_row({static_cast<long long>(s.agent), static_cast<long long>(s.report_type),
                     std::string(1, s.side), s.slack});

    std::ostringstream os;
    os << "check: " << (cfg.notion == IcNotion::Bic ? "BIC" : "EPIC") << ": "
       << (report.satisfied ? "satisfied" : "violated") << " (min slack "
       << format_real(report.min_slack) << ") (" << elapsed_since(start) << ")";
    return RunResult{os.str(), std::move(csv)};
}

RunResult run_solve(const ExperimentConfig& cfg, Clock::time_point start) {
    DiscreteGrid grid(cfg.agents);
    RelaxedSolution sol = solve_relaxed_lp(grid, cfg.p);
    FittedWeights fitted = fit_weights(sol, grid, cfg.p);
    Mechanism mech = build_verification(sol.d, grid, cfg.p);

    CsvTable csv({"record", "agent", "index", "value"});
    csv.add_row({std::string("value"), static_cast<long long>(-1), static_cast<long long>(-1),
                 sol.value});
    csv.add_row({std::string("fit_residual"), static_cast<long long>(-1),
                 static_cast<long long>(-1), fitted.residual});
    for (int i = 0; i < grid.num_agents(); ++i) {
        const auto& w = fitted.params.agents[static_cast<std::size_t>(i)];
        csv.add_row({std::string("omega_plus"), static_cast<long long>(i),
                     static_cast<long long>(-1), w.omega_plus});
        csv.add_row({std::string("omega_minus"), static_cast<long long>(i),
                     static_cast<long long>(-1), w.omega_minus});
        csv.add_row({std::string("nu_plus"), static_cast<long long>(i),
                     static_cast<long long>(-1), w.nu_plus});
        csv.add_row({std::string("nu_minus"), static_cast<long long>(i),
                     static_cast<long long>(-1), w.nu_minus});
        InterimProfile ip = interim(mech, i);
        for (int k = 0; k < grid.num_types(i); ++k)
            csv.add_row({std::string("interim_verification"), static_cast<long long>(i),
                         static_cast<long long>(k), ip.verification[static_cast<std::size_t>(k)]});
    }
    for (std::size_t t = 0; t < grid.num_profiles(); ++t)
        csv.add_row({std::string("d"), static_cast<long long>(-1), static_cast<long long>(t),
                     sol.d[t]});

    std::ostringstream os;
    os << "solve: value=" << format_real(sol.value)
       << " fit_residual=" << format_real(fitted.residual) << " (" << elapsed_since(start) << ")";
    return RunResult{os.str(), std::move(csv)};
}

RunResult run_epic_transform(const ExperimentConfig& cfg, Clock::time_point start) {
    DiscreteGrid grid(cfg.agents);
    Mechanism mech = build_mechanism(cfg, grid);
    Mechanism epic = bic_to_epic(mech);

    std::vector<std::string> header{"profile"};
    for (int i = 0; i < grid.num_agents(); ++i) header.push_back("t_" + std::to_string(i));
    header.push_back("d_hat");
    for (int i = 0; i < grid.num_agents(); ++i) {
        header.push_back("a1_" + std::to_string(i));
        header.push_back("a0_" + std::to_string(i));
    }
    CsvTable csv(header);
    for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
        std::vector<std::variant<std::string, double, long long>> row;
        row.emplace_back(static_cast<long long>(t));
        for (int i = 0; i < grid.num_agents(); ++i)
            row.emplace_back(grid.type_value(i, grid.type_index(t, i)));
        row.emplace_back(epic.d[t]);
        for (int i = 0; i < grid.num_agents(); ++i) {
            row.emplace_back(epic.a1[static_cast<std::size_t>(i)][t]);
            row.emplace_back(epic.a0[static_cast<std::size_t>(i)][t]);
        }
        csv.add_row(std::move(row));
    }

    std::ostringstream os;
    os << "epic-transform: value=" << format_real(principal_value(epic)) << " ("
       << elapsed_since(start) << ")";
    return RunResult{os.str(), std::move(csv)};
}

RunResult run_sweep(const ExperimentConfig& cfg, Clock::time_point start) {
    const SweepConfig& sw = *cfg.sweep;
    CsvTable csv({"cost", "omega_plus", "omega_minus"});
    for (double c : sw.values) {
        AgentSpec agent = cfg.agents[static_cast<std::size_t>(sw.agent)];
        agent.cost = c;
        TwoAgentWeights w = solve_two_agent_weights(agent);
        std::vector<std::variant<std::string, double, long long>> row;
        row.emplace_back(c);
        if (w.omega_plus)
            row.emplace_back(*w.omega_plus);
        else
            row.emplace_back(std::string());
        if (w.omega_minus)
            row.emplace_back(*w.omega_minus);
        else
            row.emplace_back(std::string());
        csv.add_row(std::move(row));
    }
    std::ostringstream os;
    os << "sweep: cost over " << sw.values.size() << " points (" << elapsed_since(start) << ")";
    return RunResult{os.str(), std::move(csv)};
}

RunResult run_public_good(const ExperimentConfig& cfg, Clock::time_point start) {
    const PublicGoodConfig& pg = *cfg.public_good;
    AgentSpec agent = cfg.agents.front();
    if (!agent.is_discrete()) {
        const auto& q = agent.continuous().quantile;
        std::vector<double> values, probs;
        for (int j = 0; j < pg.probe_points; ++j) {
            values.push_back(q((j + 0.5) / pg.probe_points));
            probs.push_back(1.0 / pg.probe_points);
        }
        agent = make_discrete_agent(std::move(values), std::move(probs), agent.sign, agent.cost);
    }

    const double scale = pg.scale;
    CostFunctional tech;
    tech.cost = [scale](double d) { return scale * (-d - std::log1p(-d)); };
    tech.derivative = [scale](double d) { return scale * (-1.0 + 1.0 / (1.0 - d)); };

    PublicGoodSolution sol = solve_public_good(agent, tech, agent.cost);

    CsvTable csv({"type", "decision", "bunched", "foc_residual"});
    const auto& dd = agent.discrete();
    for (std::size_t k = 0; k < dd.values.size(); ++k) {
        double d = sol.schedule[k];
        bool bunched = d <= sol.floor + 1e-9;
        double resid = dd.values[k] - agent.cost * sol.floor / (d * d) - tech.derivative(d);
        csv.add_row({dd.values[k], d, static_cast<long long>(bunched ? 1 : 0),
                     bunched ? 0.0 : resid});
    }
    std::ostringstream os;
    os << "public-good: value=" << format_real(sol.value) << " floor=" << format_real(sol.floor)
       << " (" << elapsed_since(start) << ")";
    return RunResult{os.str(), std::move(csv)};
}

} // namespace

RunResult run_task(const ExperimentConfig& cfg) {
    auto start = Clock::now();
    switch (cfg.task) {
    case Task::Evaluate: return run_evaluate(cfg, start);
    case Task::Check: return run_check(cfg, start);
    case Task::Solve: return run_solve(cfg, start);
    case Task::EpicTransform: return run_epic_transform(cfg, start);
    case Task::Sweep: return run_sweep(cfg, start);
    case Task::PublicGood: return run_public_good(cfg, start);
    }
    throw std::logic_error("unhandled task");
}

} // namespace verivote
