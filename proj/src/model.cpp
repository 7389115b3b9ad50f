#include "verivote/model.hpp"

#include "verivote/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace verivote {

ContinuousDist uniform_dist(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("uniform_dist: requires b > a");
    ContinuousDist d;
    d.quantile = [a, b](double u) { return a + (b - a) * u; };
    d.density = [a, b](double) { return 1.0 / (b - a); };
    return d;
}

ContinuousDist normal_dist(double mean, double stddev) {
    if (!(stddev > 0.0)) throw std::invalid_argument("normal_dist: requires stddev > 0");
    ContinuousDist d;
    d.quantile = [mean, stddev](double u) { return mean + stddev * normal_quantile(u); };
    d.density = [mean, stddev](double x) { return normal_pdf((x - mean) / stddev) / stddev; };
    return d;
}

AgentSpec make_discrete_agent(std::vector<double> values, std::vector<double> probs,
                              SignRule sign, double cost) {
    if (values.empty()) throw std::invalid_argument("agent needs at least one type");
    if (values.size() != probs.size())
        throw std::invalid_argument("values and probs must have equal length");
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        if (!(values[k] < values[k + 1]))
            throw std::invalid_argument("values not strictly increasing");
    KahanSum total;
    for (double p : probs) {
        if (!(p > 0.0)) throw std::invalid_argument("probabilities must be positive");
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::invalid_argument("probabilities do not sum to 1");
    if (cost < 0.0) throw std::invalid_argument("negative verification cost");

    AgentSpec spec;
    spec.dist = DiscreteDist{std::move(values), std::move(probs)};
    spec.sign = sign;
    spec.cost = cost;
    // Every in-favor type must strictly exceed every against type. With a
    // sorted support and a threshold or constant rule this holds whenever the
    // partition is an upper set.
    const auto& vals = spec.discrete().values;
    for (std::size_t k = 0; k + 1 < vals.size(); ++k)
        if (spec.sign.in_favor(vals[k]) && !spec.sign.in_favor(vals[k + 1]))
            throw std::invalid_argument("sign rule puts an against type above an in-favor type");
    return spec;
}

AgentSpec make_continuous_agent(ContinuousDist dist, SignRule sign, double cost) {
    if (!dist.quantile) throw std::invalid_argument("continuous agent needs a quantile");
    if (cost < 0.0) throw std::invalid_argument("negative verification cost");
    AgentSpec spec;
    spec.dist = std::move(dist);
    spec.sign = sign;
    spec.cost = cost;
    validate_continuous(spec);
    return spec;
}

void validate_continuous(const AgentSpec& agent) {
    const auto& q = agent.continuous().quantile;
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 1000; ++j) {
        double u = static_cast<double>(j) / 1001.0;
        double v = q(u);
        if (!std::isfinite(v)) throw std::runtime_error("quantile returned a non-finite value");
        if (v < prev) throw std::runtime_error("quantile is not monotone");
        prev = v;
    }
}

namespace {

// Splits (0,1) at the probability mass of the against part. Returns the
// u-coordinate below which types are against.
double against_mass(const AgentSpec& agent) {
    switch (agent.sign.kind) {
    case SignRule::Kind::AlwaysInFavor: return 0.0;
    case SignRule::Kind::AlwaysAgainst: return 1.0;
    case SignRule::Kind::Threshold: break;
    }
    const auto& q = agent.continuous().quantile;
    const double theta = agent.sign.threshold;
    const double eps = 1e-12;
    if (q(eps) >= theta) return 0.0;
    if (q(1.0 - eps) < theta) return 1.0;
    // inf{u : Q(u) >= theta} by bisection on the monotone quantile
    double lo = eps, hi = 1.0 - eps;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (q(mid) < theta)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

AgentSpec discretize(const AgentSpec& agent, int n) {
    if (agent.is_discrete()) throw std::invalid_argument("discretize: agent is already discrete");
    if (n < 1) throw std::invalid_argument("discretize: n must be at least 1");
    if (n > 20) throw std::invalid_argument("discretize: n too large");
    validate_continuous(agent);

    const auto& q = agent.continuous().quantile;
    const double split = against_mass(agent);
    const int bins_per_part = 1 << n;

    std::vector<double> values, probs;
    auto emit_part = [&](double u_lo, double u_hi) {
        double mass = u_hi - u_lo;
        if (!(mass > 1e-15)) return;
        double step = mass / bins_per_part;
        for (int b = 0; b < bins_per_part; ++b) {
            double a = u_lo + b * step;
            double mean = integrate(q, a, a + step) / step;
            if (!std::isfinite(mean)) throw std::runtime_error("quantile returned a non-finite value");
            values.push_back(mean);
            probs.push_back(step);
        }
    };
    emit_part(0.0, split);   // against part (lower quantiles)
    emit_part(split, 1.0);

    // Renormalize the tiny quadrature drift in the masses.
    KahanSum total;
    for (double p : probs) total.add(p);
    for (double& p : probs) p /= total.value();

    return make_discrete_agent(std::move(values), std::move(probs), agent.sign, agent.cost);
}

PublicGoodTypes public_good_embedding(const std::vector<double>& valuations,
                                      double provision_cost, int n_agents) {
    if (n_agents < 1) throw std::invalid_argument("public_good_embedding: n_agents must be >= 1");
    PublicGoodTypes out;
    out.sign = SignRule::always_in_favor();
    out.values.reserve(valuations.size());
    const double share = provision_cost / n_agents;
    for (double v : valuations) out.values.push_back(v - share);
    return out;
}

DiscreteGrid::DiscreteGrid(std::vector<AgentSpec> agents) : agents_(std::move(agents)) {
    if (agents_.empty()) throw std::invalid_argument("grid needs at least one agent");
    for (const auto& a : agents_)
        if (!a.is_discrete()) throw std::invalid_argument("grid agents must be discrete");

    strides_.assign(agents_.size(), 1);
    num_profiles_ = 1;
    for (int i = num_agents() - 1; i >= 0; --i) {
        strides_[static_cast<std::size_t>(i)] = num_profiles_;
        num_profiles_ *= static_cast<std::size_t>(num_types(i));
    }

    joint_.resize(num_profiles_);
    KahanSum total;
    for (std::size_t t = 0; t < num_profiles_; ++t) {
        double p = 1.0;
        for (int i = 0; i < num_agents(); ++i) p *= type_prob(i, type_index(t, i));
        joint_[t] = p;
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-9)
        throw std::invalid_argument("joint probabilities do not sum to 1");
}

int DiscreteGrid::num_types(int i) const {
    return static_cast<int>(agents_[static_cast<std::size_t>(i)].discrete().values.size());
}

double DiscreteGrid::type_value(int i, int k) const {
    return agents_[static_cast<std::size_t>(i)].discrete().values[static_cast<std::size_t>(k)];
}

double DiscreteGrid::type_prob(int i, int k) const {
    return agents_[static_cast<std::size_t>(i)].discrete().probs[static_cast<std::size_t>(k)];
}

bool DiscreteGrid::in_favor(int i, int k) const {
    return agents_[static_cast<std::size_t>(i)].sign.in_favor(type_value(i, k));
}

double DiscreteGrid::part_prob(int i, bool favor) const {
    KahanSum s;
    for (int k = 0; k < num_types(i); ++k)
        if (in_favor(i, k) == favor) s.add(type_prob(i, k));
    return s.value();
}

std::vector<double> DiscreteGrid::profile_values(std::size_t profile) const {
    std::vector<double> out(static_cast<std::size_t>(num_agents()));
    for (int i = 0; i < num_agents(); ++i)
        out[static_cast<std::size_t>(i)] = type_value(i, type_index(profile, i));
    return out;
}

std::vector<double> interim_decision(const DiscreteGrid& grid, const std::vector<double>& d,
                                     int i) {
    if (d.size() != grid.num_profiles())
        throw std::invalid_argument("decision table size does not match grid");
    std::vector<KahanSum> acc(static_cast<std::size_t>(grid.num_types(i)));
    for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
        int k = grid.type_index(t, i);
        // f_{-i} = joint / f_i(k)
        acc[static_cast<std::size_t>(k)].add(grid.joint_prob(t) / grid.type_prob(i, k) * d[t]);
    }
    std::vector<double> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] = acc[k].value();
    return out;
}

} // namespace verivote
