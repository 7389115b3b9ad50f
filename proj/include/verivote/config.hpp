#pragma once

#include "verivote/model.hpp"
#include "verivote/vwe.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace verivote {

// Invalid or unknown configuration content; the message names the offending
// key. Mapped to exit code 2 by the command-line tool.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Task { Evaluate, Check, Solve, EpicTransform, Sweep, PublicGood };

enum class IcNotion { Bic, Epic };

struct MechanismTablesConfig {
    std::vector<double> d; // flat, profile-index order (last agent fastest)
    std::vector<std::vector<double>> a1;
    std::vector<std::vector<double>> a0;
};

struct MechanismConfig {
    enum class Kind { Vwe, Tables, Solve };
    Kind kind = Kind::Solve;
    VweParams vwe;
    MechanismTablesConfig tables;
};

struct SweepConfig {
    int agent = 0;
    std::vector<double> values; // verification costs to sweep over
};

struct PublicGoodConfig {
    double scale = 1.0; // multiplies the built-in barrier technology
    int probe_points = 50;
};

struct ExperimentConfig {
    Task task = Task::Check;
    double p = 1.0;
    std::optional<std::uint64_t> seed;
    std::optional<long long> samples;
    std::string out;
    std::vector<AgentSpec> agents;   // discretized where bins were given
    bool any_continuous = false;     // true when some agent stays continuous
    IcNotion notion = IcNotion::Bic;
    std::optional<MechanismConfig> mechanism;
    std::optional<SweepConfig> sweep;
    std::optional<PublicGoodConfig> public_good;
};

ExperimentConfig load_config(const std::string& path);

} // namespace verivote
