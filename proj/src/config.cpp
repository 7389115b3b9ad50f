#include "verivote/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace verivote {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key " + path + "." + it.key());
}

const json& need(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing key " + path + "." + key);
    return obj.at(key);
}

double num(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path + " must be a number");
    return v.get<double>();
}

std::vector<double> num_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path + " must be a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(num(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

SignRule parse_sign(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path + " must be an object");
    require_keys(v, path, {"threshold", "always"});
    if (v.contains("threshold") == v.contains("always"))
        throw ConfigError(path + " needs exactly one of threshold/always");
    if (v.contains("threshold"))
        return SignRule::at_threshold(num(v.at("threshold"), path + ".threshold"));
    std::string always = need(v, path, "always").get<std::string>();
    if (always == "favor") return SignRule::always_in_favor();
    if (always == "against") return SignRule::always_against();
    throw ConfigError(path + ".always must be favor or against");
}

AgentSpec parse_agent(const json& v, const std::string& path, bool& stayed_continuous) {
    if (!v.is_object()) throw ConfigError(path + " must be an object");
    require_keys(v, path, {"values", "probs", "distribution", "bins", "sign", "cost"});
    SignRule sign = parse_sign(need(v, path, "sign"), path + ".sign");
    double cost = v.contains("cost") ? num(v.at("cost"), path + ".cost") : 0.0;
    if (cost < 0.0) throw ConfigError(path + ".cost must be nonnegative");

    if (v.contains("values") != v.contains("probs"))
        throw ConfigError(path + " needs values and probs together");
    if (v.contains("values") && v.contains("distribution"))
        throw ConfigError(path + " takes either values/probs or a distribution");

    if (v.contains("values")) {
        try {
            return make_discrete_agent(num_list(v.at("values"), path + ".values"),
                                       num_list(v.at("probs"), path + ".probs"), sign, cost);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path + ".probs: " + e.what());
        }
    }
    if (!v.contains("distribution")) throw ConfigError(path + " needs values/probs or distribution");

    const json& dist = v.at("distribution");
    const std::string dpath = path + ".distribution";
    if (!dist.is_object()) throw ConfigError(dpath + " must be an object");
    require_keys(dist, dpath, {"kind", "low", "high", "mean", "stddev"});
    std::string kind = need(dist, dpath, "kind").get<std::string>();
    ContinuousDist cd;
    if (kind == "uniform") {
        double lo = num(need(dist, dpath, "low"), dpath + ".low");
        double hi = num(need(dist, dpath, "high"), dpath + ".high");
        if (!(hi > lo)) throw ConfigError(dpath + ".high must exceed low");
        cd = uniform_dist(lo, hi);
    } else if (kind == "normal") {
        double mean = num(need(dist, dpath, "mean"), dpath + ".mean");
        double sd = num(need(dist, dpath, "stddev"), dpath + ".stddev");
        if (!(sd > 0.0)) throw ConfigError(dpath + ".stddev must be positive");
        cd = normal_dist(mean, sd);
    } else {
        throw ConfigError(dpath + ".kind must be uniform or normal");
    }
    AgentSpec agent = make_continuous_agent(std::move(cd), sign, cost);
    if (v.contains("bins")) {
        int n = v.at("bins").is_number_integer() ? v.at("bins").get<int>() : -1;
        if (n < 1) throw ConfigError(path + ".bins must be a positive integer");
        return discretize(agent, n);
    }
    stayed_continuous = true;
    return agent;
}

MechanismConfig parse_mechanism(const json& v, const std::string& path, std::size_t n_agents) {
    if (!v.is_object()) throw ConfigError(path + " must be an object");
    require_keys(v, path, {"vwe", "tables", "solve"});
    int present = int(v.contains("vwe")) + int(v.contains("tables")) + int(v.contains("solve"));
    if (present != 1) throw ConfigError(path + " needs exactly one of vwe/tables/solve");

    MechanismConfig out;
    if (v.contains("solve")) {
        out.kind = MechanismConfig::Kind::Solve;
        return out;
    }
    if (v.contains("vwe")) {
        const json& w = v.at("vwe");
        const std::string wpath = path + ".vwe";
        if (!w.is_object()) throw ConfigError(wpath + " must be an object");
        require_keys(w, wpath, {"omega_plus", "omega_minus", "nu_plus", "nu_minus", "p"});
        out.kind = MechanismConfig::Kind::Vwe;
        auto wp = num_list(need(w, wpath, "omega_plus"), wpath + ".omega_plus");
        auto wm = num_list(need(w, wpath, "omega_minus"), wpath + ".omega_minus");
        if (wp.size() != n_agents || wm.size() != n_agents)
            throw ConfigError(wpath + " weight lists must match the agent count");
        out.vwe.agents.resize(n_agents);
        for (std::size_t i = 0; i < n_agents; ++i) {
            out.vwe.agents[i].omega_plus = wp[i];
            out.vwe.agents[i].omega_minus = wm[i];
        }
        if (w.contains("nu_plus")) {
            auto np = num_list(w.at("nu_plus"), wpath + ".nu_plus");
            if (np.size() != n_agents) throw ConfigError(wpath + ".nu_plus length mismatch");
            for (std::size_t i = 0; i < n_agents; ++i) out.vwe.agents[i].nu_plus = np[i];
        }
        if (w.contains("nu_minus")) {
            auto nm = num_list(w.at("nu_minus"), wpath + ".nu_minus");
            if (nm.size() != n_agents) throw ConfigError(wpath + ".nu_minus length mismatch");
            for (std::size_t i = 0; i < n_agents; ++i) out.vwe.agents[i].nu_minus = nm[i];
        }
        if (w.contains("p")) out.vwe.p = num(w.at("p"), wpath + ".p");
        try {
            out.vwe.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(wpath + ": " + std::string(e.what()));
        }
        return out;
    }
    const json& t = v.at("tables");
    const std::string tpath = path + ".tables";
    if (!t.is_object()) throw ConfigError(tpath + " must be an object");
    require_keys(t, tpath, {"d", "a1", "a0"});
    out.kind = MechanismConfig::Kind::Tables;
    out.tables.d = num_list(need(t, tpath, "d"), tpath + ".d");
    auto parse_per_agent = [&](const char* key) {
        std::vector<std::vector<double>> tabs;
        if (!t.contains(key)) return tabs;
        const json& arr = t.at(key);
        const std::string apath = tpath + "." + key;
        if (!arr.is_array()) throw ConfigError(apath + " must be a list per agent");
        for (std::size_t i = 0; i < arr.size(); ++i)
            tabs.push_back(num_list(arr[i], apath + "[" + std::to_string(i) + "]"));
        if (tabs.size() != n_agents) throw ConfigError(apath + " must have one table per agent");
        return tabs;
    };
    out.tables.a1 = parse_per_agent("a1");
    out.tables.a0 = parse_per_agent("a0");
    return out;
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    require_keys(root, "config",
                 {"task", "p", "seed", "samples", "out", "agents", "mechanism", "check", "sweep",
                  "public_good"});

    ExperimentConfig cfg;
    std::string task = need(root, "config", "task").get<std::string>();
    if (task == "evaluate") cfg.task = Task::Evaluate;
    else if (task == "check") cfg.task = Task::Check;
    else if (task == "solve") cfg.task = Task::Solve;
    else if (task == "epic-transform") cfg.task = Task::EpicTransform;
    else if (task == "sweep") cfg.task = Task::Sweep;
    else if (task == "public-good") cfg.task = Task::PublicGood;
    else throw ConfigError("config.task must be one of evaluate/check/solve/epic-transform/sweep/public-good");

    if (root.contains("p")) {
        cfg.p = num(root.at("p"), "config.p");
        if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ConfigError("config.p must be in (0,1]");
    }
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned()) throw ConfigError("config.seed must be a nonnegative integer");
        cfg.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("samples")) {
        if (!root.at("samples").is_number_integer() || root.at("samples").get<long long>() < 1)
            throw ConfigError("config.samples must be a positive integer");
        cfg.samples = root.at("samples").get<long long>();
    }
    if (root.contains("out")) cfg.out = root.at("out").get<std::string>();

    const json& agents = need(root, "config", "agents");
    if (!agents.is_array() || agents.empty()) throw ConfigError("config.agents must be a nonempty list");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        bool stayed = false;
        cfg.agents.push_back(
            parse_agent(agents[i], "agents[" + std::to_string(i) + "]", stayed));
        cfg.any_continuous = cfg.any_continuous || stayed;
    }

    if (root.contains("check")) {
        const json& c = root.at("check");
        require_keys(c, "check", {"notion"});
        std::string notion = need(c, "check", "notion").get<std::string>();
        if (notion == "bic") cfg.notion = IcNotion::Bic;
        else if (notion == "epic") cfg.notion = IcNotion::Epic;
        else throw ConfigError("check.notion must be bic or epic");
    }
    if (root.contains("mechanism"))
        cfg.mechanism = parse_mechanism(root.at("mechanism"), "mechanism", cfg.agents.size());
    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        require_keys(s, "sweep", {"variable", "agent", "values"});
        std::string var = need(s, "sweep", "variable").get<std::string>();
        if (var != "cost") throw ConfigError("sweep.variable must be cost");
        SweepConfig sc;
        if (!need(s, "sweep", "agent").is_number_integer())
            throw ConfigError("sweep.agent must be an agent index");
        sc.agent = s.at("agent").get<int>();
        if (sc.agent < 0 || sc.agent >= static_cast<int>(cfg.agents.size()))
            throw ConfigError("sweep.agent out of range");
        sc.values = num_list(need(s, "sweep", "values"), "sweep.values");
        if (sc.values.empty()) throw ConfigError("sweep.values must be nonempty");
        for (double c : sc.values)
            if (c < 0.0) throw ConfigError("sweep.values must be nonnegative");
        cfg.sweep = sc;
    }
    if (root.contains("public_good")) {
        const json& pg = root.at("public_good");
        require_keys(pg, "public_good", {"cost_fn", "probe_points"});
        PublicGoodConfig pc;
        if (pg.contains("cost_fn")) {
            const json& fn = pg.at("cost_fn");
            require_keys(fn, "public_good.cost_fn", {"kind", "scale"});
            std::string kind = need(fn, "public_good.cost_fn", "kind").get<std::string>();
            if (kind != "barrier")
                throw ConfigError("public_good.cost_fn.kind must be barrier");
            if (fn.contains("scale")) {
                pc.scale = num(fn.at("scale"), "public_good.cost_fn.scale");
                if (!(pc.scale > 0.0)) throw ConfigError("public_good.cost_fn.scale must be positive");
            }
        }
        if (pg.contains("probe_points")) {
            if (!pg.at("probe_points").is_number_integer() || pg.at("probe_points").get<int>() < 1)
                throw ConfigError("public_good.probe_points must be a positive integer");
            pc.probe_points = pg.at("probe_points").get<int>();
        }
        cfg.public_good = pc;
    }

    // Cross-field requirements.
    switch (cfg.task) {
    case Task::Evaluate:
    case Task::Check:
    case Task::EpicTransform:
        if (!cfg.mechanism) throw ConfigError("config.mechanism is required for this task");
        if (cfg.any_continuous)
            throw ConfigError("agents[*].bins is required: this task needs a finite grid");
        break;
    case Task::Solve:
        if (cfg.any_continuous)
            throw ConfigError("agents[*].bins is required: this task needs a finite grid");
        break;
    case Task::Sweep:
        if (!cfg.sweep) throw ConfigError("config.sweep is required for task sweep");
        break;
    case Task::PublicGood:
        if (!cfg.public_good) throw ConfigError("config.public_good is required for task public-good");
        if (cfg.agents.size() != 1) throw ConfigError("config.agents: public-good takes one agent");
        break;
    }
    if (cfg.samples && !cfg.seed)
        throw ConfigError("config.seed is required when samples is set");
    return cfg;
}

} // namespace verivote
