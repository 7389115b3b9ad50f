#include "verivote/equivalence.hpp"

#include "verivote/lp.hpp"
#include "verivote/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace verivote {

DecisionTensor::DecisionTensor(DiscreteGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    validate();
}

void DecisionTensor::validate() const {
    if (values.size() != grid.num_profiles())
        throw std::invalid_argument("tensor size does not match grid");
    for (double x : values)
        if (x < -kSlackTol || x > 1.0 + kSlackTol)
            throw std::invalid_argument("tensor entry outside [0,1]");
}

std::vector<double> tensor_marginal(const DecisionTensor& g, int i) {
    return interim_decision(g.grid, g.values, i);
}

DecisionTensor monotone_rearrange(const DecisionTensor& g) {
    g.validate();
    const DiscreteGrid& grid = g.grid;
    if (grid.num_agents() > 3)
        throw std::invalid_argument("rearrangement supports up to three agents");
    const std::size_t n = grid.num_profiles();

    // Axis orders: ascending marginal, stable on ties.
    std::vector<std::vector<double>> marginals(static_cast<std::size_t>(grid.num_agents()));
    std::vector<std::vector<int>> order(static_cast<std::size_t>(grid.num_agents()));
    for (int i = 0; i < grid.num_agents(); ++i) {
        marginals[static_cast<std::size_t>(i)] = tensor_marginal(g, i);
        auto& ord = order[static_cast<std::size_t>(i)];
        ord.resize(static_cast<std::size_t>(grid.num_types(i)));
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
            return marginals[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] <
                   marginals[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
        });
    }

    LinearProgram lp;
    lp.num_vars = static_cast<int>(n);
    lp.objective.assign(n, 0.0);

    // Marginal-preserving equalities, scaled to unit row norm.
    for (int i = 0; i < grid.num_agents(); ++i) {
        for (int k = 0; k < grid.num_types(i); ++k) {
            std::vector<double> row(n, 0.0);
            double scale = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                if (grid.type_index(t, i) == k) {
                    row[t] = grid.joint_prob(t) / grid.type_prob(i, k);
                    scale = std::max(scale, row[t]);
                }
            double rhs = marginals[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (scale > 0.0) {
                for (double& v : row) v /= scale;
                rhs /= scale;
            }
            lp.add_row(std::move(row), LpRelation::Equal, rhs);
        }
    }
    // Monotonicity along each sorted axis: g(prev) - g(next) <= 0.
    for (int i = 0; i < grid.num_agents(); ++i) {
        const auto& ord = order[static_cast<std::size_t>(i)];
        const std::size_t stride = grid.stride(i);
        for (std::size_t j = 0; j + 1 < ord.size(); ++j) {
            for (std::size_t t = 0; t < n; ++t) {
                if (grid.type_index(t, i) != 0) continue;
                std::vector<double> row(n, 0.0);
                row[t + static_cast<std::size_t>(ord[j]) * stride] = 1.0;
                row[t + static_cast<std::size_t>(ord[j + 1]) * stride] = -1.0;
                lp.add_row(std::move(row), LpRelation::LessEq, 0.0);
            }
        }
    }
    // Entries at most one.
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> row(n, 0.0);
        row[t] = 1.0;
        lp.add_row(std::move(row), LpRelation::LessEq, 1.0);
    }

    LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
        throw std::runtime_error("rearrangement feasibility solve failed (" +
                                 to_string(res.status) + ")");

    std::vector<double> values(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
    for (double& v : values) v = clamp01(v);
    DecisionTensor out(grid, std::move(values));

    for (int i = 0; i < grid.num_agents(); ++i) {
        std::vector<double> after = tensor_marginal(out, i);
        for (std::size_t k = 0; k < after.size(); ++k)
            if (std::abs(after[k] - marginals[static_cast<std::size_t>(i)][k]) > 1e-9)
                throw std::runtime_error("rearrangement drifted off the prescribed marginals");
    }
    return out;
}

VerificationPair epic_verification(const DecisionTensor& d_hat) {
    d_hat.validate();
    const DiscreteGrid& g = d_hat.grid;
    const std::size_t n = g.num_profiles();
    VerificationPair out;
    out.a1.assign(static_cast<std::size_t>(g.num_agents()), std::vector<double>(n, 0.0));
    out.a0 = out.a1;

    for (int i = 0; i < g.num_agents(); ++i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        const std::size_t stride = g.stride(i);
        const std::size_t size = static_cast<std::size_t>(g.num_types(i));
        for (std::size_t base = 0; base < n; ++base) {
            if (g.type_index(base, i) != 0) continue;
            double min_plus = std::numeric_limits<double>::infinity();
            double max_minus = -std::numeric_limits<double>::infinity();
            bool any_plus = false, any_minus = false;
            for (std::size_t k = 0; k < size; ++k) {
                double v = d_hat.values[base + k * stride];
                if (g.in_favor(i, static_cast<int>(k))) {
                    any_plus = true;
                    min_plus = std::min(min_plus, v);
                } else {
                    any_minus = true;
                    max_minus = std::max(max_minus, v);
                }
            }
            for (std::size_t k = 0; k < size; ++k) {
                std::size_t cell = base + k * stride;
                double d = d_hat.values[cell];
                if (any_plus && d > 0.0) {
                    double a = (d - min_plus) / d;
                    if (a > 1.0 + kSlackTol)
                        throw std::runtime_error("verification probability above one");
                    out.a1[ix][cell] = clamp01(a);
                }
                if (any_minus && d < 1.0) {
                    double a = (max_minus - d) / (1.0 - d);
                    if (a > 1.0 + kSlackTol)
                        throw std::runtime_error("verification probability above one");
                    out.a0[ix][cell] = clamp01(a);
                }
            }
        }
    }
    return out;
}

Mechanism bic_to_epic(const Mechanism& mech) {
    IcReport pre = check_bic(mech, 1.0);
    if (!pre.satisfied)
        throw std::invalid_argument("input mechanism is not Bayesian incentive compatible");
    const DiscreteGrid& g = mech.grid;

    DecisionTensor rearranged = monotone_rearrange(DecisionTensor(g, mech.d));
    VerificationPair ver = epic_verification(rearranged);

    Mechanism out(g);
    out.d = rearranged.values;
    out.a1 = std::move(ver.a1);
    out.a0 = std::move(ver.a0);

    // Match each agent's interim verification by adding decision-independent
    // audit mass, spread over the opponent sections and clipped into [0,1].
    for (int i = 0; i < g.num_agents(); ++i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        InterimProfile input_ip = interim(mech, i);
        InterimProfile raw_ip = interim(out, i);
        for (int k = 0; k < g.num_types(i); ++k) {
            double target = input_ip.verification[static_cast<std::size_t>(k)];
            double raw = raw_ip.verification[static_cast<std::size_t>(k)];
            double deficit = target - raw;
            if (deficit < -kSlackTol)
                throw std::runtime_error(
                    "constructed interim verification exceeds the input's");
            if (deficit <= 0.0) continue;

            // Added unconditional mass as a function of the uniform bump.
            auto added = [&](double bump) {
                KahanSum s;
                for (std::size_t t = 0; t < g.num_profiles(); ++t) {
                    if (g.type_index(t, i) != k) continue;
                    double f_others = g.joint_prob(t) / g.type_prob(i, k);
                    double d = out.d[t];
                    double inc = d * (std::min(1.0, out.a1[ix][t] + bump) - out.a1[ix][t]) +
                                 (1.0 - d) * (std::min(1.0, out.a0[ix][t] + bump) - out.a0[ix][t]);
                    s.add(f_others * inc);
                }
                return s.value();
            };
            if (added(1.0) < deficit - kSlackTol)
                throw std::runtime_error("cannot pad verification up to the input's level");
            double bump = bisect_increasing([&](double b) { return added(b) - deficit; }, 0.0, 1.0);
            for (std::size_t t = 0; t < g.num_profiles(); ++t) {
                if (g.type_index(t, i) != k) continue;
                out.a1[ix][t] = std::min(1.0, out.a1[ix][t] + bump);
                out.a0[ix][t] = std::min(1.0, out.a0[ix][t] + bump);
            }
        }
    }
    out.validate();
    return out;
}

} // namespace verivote
