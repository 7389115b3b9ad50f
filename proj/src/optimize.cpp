#include "verivote/optimize.hpp"

#include "verivote/lp.hpp"
#include "verivote/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace verivote {

void CostFunctional::validate() const {
    if (!cost || !derivative) throw std::invalid_argument("cost functional needs C and C'");
    if (std::abs(cost(0.0)) > 1e-9) throw std::invalid_argument("C(0) must be 0");
    if (std::abs(derivative(0.0)) > 1e-9) throw std::invalid_argument("C'(0) must be 0");
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 100; ++j) {
        double d = (1.0 - 1e-6) * j / 100.0;
        double cp = derivative(d);
        if (!std::isfinite(cp) || cp < prev - 1e-9)
            throw std::invalid_argument("C' must be nondecreasing");
        prev = std::max(prev, cp);
    }
    if (!(cost(1.0 - 1e-6) >= 10.0))
        throw std::invalid_argument("C must blow up towards full provision");
}

double principal_value(const Mechanism& mech) {
    mech.validate();
    const DiscreteGrid& g = mech.grid;
    KahanSum total;
    for (std::size_t t = 0; t < g.num_profiles(); ++t) {
        double f = g.joint_prob(t);
        KahanSum cell;
        for (int i = 0; i < g.num_agents(); ++i) {
            cell.add(mech.d[t] * g.type_value(i, g.type_index(t, i)));
            cell.add(-mech.unconditional_verification(i, t) * g.agent(i).cost);
        }
        total.add(f * cell.value());
    }
    return total.value();
}

double relaxed_value(const std::vector<double>& d, const DiscreteGrid& grid, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("detection probability must be in (0,1]");
    if (d.size() != grid.num_profiles())
        throw std::invalid_argument("decision table size does not match grid");
    for (double x : d)
        if (x < -kSlackTol || x > 1.0 + kSlackTol)
            throw std::invalid_argument("decision probability outside [0,1]");

    KahanSum total;
    for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
        KahanSum net;
        for (int i = 0; i < grid.num_agents(); ++i) {
            int k = grid.type_index(t, i);
            double unit = grid.agent(i).cost / p;
            net.add(grid.type_value(i, k) + (grid.in_favor(i, k) ? -unit : unit));
        }
        total.add(grid.joint_prob(t) * d[t] * net.value());
    }
    for (int i = 0; i < grid.num_agents(); ++i) {
        double c = grid.agent(i).cost;
        if (c == 0.0) continue;
        std::vector<double> D = interim_decision(grid, d, i);
        double inf_plus = std::numeric_limits<double>::infinity();
        double sup_minus = -std::numeric_limits<double>::infinity();
        bool any_plus = false, any_minus = false;
        for (int k = 0; k < grid.num_types(i); ++k) {
            if (grid.in_favor(i, k)) {
                any_plus = true;
                inf_plus = std::min(inf_plus, D[static_cast<std::size_t>(k)]);
            } else {
                any_minus = true;
                sup_minus = std::max(sup_minus, D[static_cast<std::size_t>(k)]);
            }
        }
        if (any_plus) total.add(c / p * grid.part_prob(i, true) * inf_plus);
        if (any_minus) total.add(-c / p * grid.part_prob(i, false) * sup_minus);
    }
    return total.value();
}

namespace {

struct PartView {
    std::vector<double> values;
    std::vector<double> probs; // conditional, sum to 1
    double mass = 0.0;
};

// Conditional view of one sign part of a discrete agent.
PartView discrete_part(const AgentSpec& agent, bool favor) {
    PartView out;
    const auto& dd = agent.discrete();
    KahanSum mass;
    for (std::size_t k = 0; k < dd.values.size(); ++k) {
        if (agent.sign.in_favor(dd.values[k]) != favor) continue;
        out.values.push_back(dd.values[k]);
        out.probs.push_back(dd.probs[k]);
        mass.add(dd.probs[k]);
    }
    out.mass = mass.value();
    for (double& p : out.probs) p /= out.mass;
    return out;
}

double u_split(const AgentSpec& agent) {
    switch (agent.sign.kind) {
    case SignRule::Kind::AlwaysInFavor: return 0.0;
    case SignRule::Kind::AlwaysAgainst: return 1.0;
    case SignRule::Kind::Threshold: break;
    }
    const auto& q = agent.continuous().quantile;
    const double eps = 1e-12;
    if (q(eps) >= 0.0) return 0.0;
    if (q(1.0 - eps) < 0.0) return 1.0;
    double lo = eps, hi = 1.0 - eps;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (q(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

namespace {

// sup{w : f(w) <= 0} for nondecreasing f; used when the root set is an
// interval extending to the left (in-favor side).
double rightmost_nonpositive(const std::function<double(double)>& f, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// inf{w : f(w) >= 0} for nondecreasing f; used when the root set is an
// interval extending to the right (against side).
double leftmost_nonnegative(const std::function<double(double)>& f, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TwoAgentWeights solve_two_agent_weights(const AgentSpec& agent) {
    if (agent.sign.kind == SignRule::Kind::Threshold && agent.sign.threshold != 0.0)
        throw std::invalid_argument("optimal-weight equations assume a zero threshold");
    const double c = agent.cost;
    TwoAgentWeights out;

    if (agent.is_discrete()) {
        auto side_mean = [&](bool favor, double& vlo, double& vhi,
                             PartView& part) -> bool {
            part = discrete_part(agent, favor);
            if (part.values.empty()) return false;
            vlo = part.values.front();
            vhi = part.values.back();
            return true;
        };
        {
            PartView part;
            double vlo = 0, vhi = 0;
            if (side_mean(true, vlo, vhi, part)) {
                KahanSum mean;
                for (std::size_t k = 0; k < part.values.size(); ++k)
                    mean.add(part.probs[k] * part.values[k]);
                double target = mean.value();
                auto residual = [&](double w) {
                    KahanSum s;
                    for (std::size_t k = 0; k < part.values.size(); ++k)
                        s.add(part.probs[k] * std::max(w, part.values[k] - c));
                    return s.value() - target;
                };
                out.omega_plus = rightmost_nonpositive(residual, vlo - c - 1.0, vhi + c + 1.0);
            }
        }
        {
            PartView part;
            double vlo = 0, vhi = 0;
            if (side_mean(false, vlo, vhi, part)) {
                KahanSum mean;
                for (std::size_t k = 0; k < part.values.size(); ++k)
                    mean.add(part.probs[k] * part.values[k]);
                double target = mean.value();
                auto residual = [&](double w) {
                    KahanSum s;
                    for (std::size_t k = 0; k < part.values.size(); ++k)
                        s.add(part.probs[k] * std::min(w, part.values[k] + c));
                    return s.value() - target;
                };
                out.omega_minus = leftmost_nonnegative(residual, vlo - c - 1.0, vhi + c + 1.0);
            }
        }
        return out;
    }

    validate_continuous(agent);
    const auto& q = agent.continuous().quantile;
    const double split = u_split(agent);
    const double eps = 1e-13;

    // Quantile location of the kink of max/min{w, Q(u) -/+ c} on (a,b).
    auto kink = [&](double a, double b, double knot) {
        if (q(std::max(a + eps, eps)) >= knot) return a;
        if (q(std::min(b - eps, 1.0 - eps)) < knot) return b;
        double lo = a, hi = b;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (q(mid) < knot)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    if (1.0 - split > 1e-12) {
        double a = split, b = 1.0;
        double mass = b - a;
        double target = integrate(q, a, b) / mass;
        double vlo = q(std::max(a + eps, eps));
        double vhi = q(std::min(b - eps, 1.0 - eps));
        auto residual = [&](double w) {
            double uk = kink(a, b, w + c);
            // E[max(w, Q - c)] over the part, split at the kink
            double value = w * (uk - a) + integrate(q, uk, b) - c * (b - uk);
            return value / mass - target;
        };
        out.omega_plus = rightmost_nonpositive(residual, vlo - c - 1.0, vhi + c + 1.0);
    }
    if (split > 1e-12) {
        double a = 0.0, b = split;
        double mass = b - a;
        double target = integrate(q, a, b) / mass;
        double vlo = q(std::max(a + eps, eps));
        double vhi = q(std::min(b - eps, 1.0 - eps));
        auto residual = [&](double w) {
            double uk = kink(a, b, w - c);
            // E[min(w, Q + c)] over the part
            double value = integrate(q, a, uk) + c * (uk - a) + w * (b - uk);
            return value / mass - target;
        };
        out.omega_minus = leftmost_nonnegative(residual, vlo - c - 1.0, vhi + c + 1.0);
    }
    return out;
}

RelaxedSolution solve_relaxed_lp(const DiscreteGrid& grid, double p, std::size_t profile_cap) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("detection probability must be in (0,1]");
    const std::size_t n_profiles = grid.num_profiles();
    if (n_profiles > profile_cap)
        throw std::invalid_argument("grid exceeds the relaxed-solver profile cap");
    const int n_agents = grid.num_agents();

    // Variable layout: d per profile, then one envelope scalar per nonempty
    // sign part.
    std::vector<int> mp_index(static_cast<std::size_t>(n_agents), -1);
    std::vector<int> mm_index(static_cast<std::size_t>(n_agents), -1);
    int n_vars = static_cast<int>(n_profiles);
    for (int i = 0; i < n_agents; ++i) {
        bool any_plus = false, any_minus = false;
        for (int k = 0; k < grid.num_types(i); ++k) (grid.in_favor(i, k) ? any_plus : any_minus) = true;
        if (any_plus) mp_index[static_cast<std::size_t>(i)] = n_vars++;
        if (any_minus) mm_index[static_cast<std::size_t>(i)] = n_vars++;
    }

    LinearProgram lp;
    lp.num_vars = n_vars;
    lp.objective.assign(static_cast<std::size_t>(n_vars), 0.0);
    for (std::size_t t = 0; t < n_profiles; ++t) {
        KahanSum net;
        for (int i = 0; i < n_agents; ++i) {
            int k = grid.type_index(t, i);
            double unit = grid.agent(i).cost / p;
            net.add(grid.type_value(i, k) + (grid.in_favor(i, k) ? -unit : unit));
        }
        lp.objective[t] = grid.joint_prob(t) * net.value();
    }
    for (int i = 0; i < n_agents; ++i) {
        double unit = grid.agent(i).cost / p;
        if (mp_index[static_cast<std::size_t>(i)] >= 0)
            lp.objective[static_cast<std::size_t>(mp_index[static_cast<std::size_t>(i)])] =
                unit * grid.part_prob(i, true);
        if (mm_index[static_cast<std::size_t>(i)] >= 0)
            lp.objective[static_cast<std::size_t>(mm_index[static_cast<std::size_t>(i)])] =
                -unit * grid.part_prob(i, false);
    }

    // d <= 1
    for (std::size_t t = 0; t < n_profiles; ++t) {
        std::vector<double> row(static_cast<std::size_t>(n_vars), 0.0);
        row[t] = 1.0;
        lp.add_row(std::move(row), LpRelation::LessEq, 1.0);
    }
    // Envelope and influence-bound rows per (agent, type).
    for (int i = 0; i < n_agents; ++i) {
        for (int k = 0; k < grid.num_types(i); ++k) {
            std::vector<double> interim_row(static_cast<std::size_t>(n_vars), 0.0);
            for (std::size_t t = 0; t < n_profiles; ++t)
                if (grid.type_index(t, i) == k)
                    interim_row[t] = grid.joint_prob(t) / grid.type_prob(i, k);
            if (grid.in_favor(i, k)) {
                int mp = mp_index[static_cast<std::size_t>(i)];
                std::vector<double> row = interim_row;
                for (double& v : row) v = -v;
                row[static_cast<std::size_t>(mp)] = 1.0;
                lp.add_row(std::move(row), LpRelation::LessEq, 0.0); // m+ <= D_i(k)
                if (p < 1.0) {
                    std::vector<double> cap = interim_row;
                    cap[static_cast<std::size_t>(mp)] = -1.0 / (1.0 - p);
                    lp.add_row(std::move(cap), LpRelation::LessEq, 0.0); // D_i(k) <= m+/(1-p)
                }
            } else {
                int mm = mm_index[static_cast<std::size_t>(i)];
                std::vector<double> row = interim_row;
                row[static_cast<std::size_t>(mm)] = -1.0;
                lp.add_row(std::move(row), LpRelation::LessEq, 0.0); // D_i(k) <= m-
                if (p < 1.0) {
                    std::vector<double> cap = interim_row;
                    for (double& v : cap) v = -v;
                    cap[static_cast<std::size_t>(mm)] = 1.0 / (1.0 - p);
                    // (m- - p)/(1-p) <= D_i(k)
                    lp.add_row(std::move(cap), LpRelation::LessEq, p / (1.0 - p));
                }
            }
        }
    }

    LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal)
        throw std::runtime_error("relaxed solver did not converge (" + to_string(res.status) + ")");

    RelaxedSolution sol;
    sol.d.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n_profiles));
    for (double& x : sol.d) x = clamp01(x);
    sol.value = relaxed_value(sol.d, grid, p);
    sol.m_plus.assign(static_cast<std::size_t>(n_agents),
                      std::numeric_limits<double>::infinity());
    sol.m_minus.assign(static_cast<std::size_t>(n_agents),
                       -std::numeric_limits<double>::infinity());
    for (int i = 0; i < n_agents; ++i) {
        std::vector<double> D = interim_decision(grid, sol.d, i);
        for (int k = 0; k < grid.num_types(i); ++k) {
            double v = D[static_cast<std::size_t>(k)];
            if (grid.in_favor(i, k))
                sol.m_plus[static_cast<std::size_t>(i)] =
                    std::min(sol.m_plus[static_cast<std::size_t>(i)], v);
            else
                sol.m_minus[static_cast<std::size_t>(i)] =
                    std::max(sol.m_minus[static_cast<std::size_t>(i)], v);
        }
    }
    return sol;
}

FittedWeights fit_weights(const RelaxedSolution& sol, const DiscreteGrid& grid, double p) {
    const double tol = 1e-7;
    const double inf = std::numeric_limits<double>::infinity();
    FittedWeights out;
    out.params.p = p;
    out.params.agents.resize(static_cast<std::size_t>(grid.num_agents()));

    for (int i = 0; i < grid.num_agents(); ++i) {
        auto& w = out.params.agents[static_cast<std::size_t>(i)];
        std::vector<double> D = interim_decision(grid, sol.d, i);
        double unit = grid.agent(i).cost / p;
        double m_plus = sol.m_plus[static_cast<std::size_t>(i)];
        double m_minus = sol.m_minus[static_cast<std::size_t>(i)];

        // The rationalizing parameter is pinned by the bunched type closest
        // to the kink: the largest net type sharing the in-favor envelope
        // (smallest on the against side). Any smaller value would unbunch it.
        auto plateau_edge = [&](bool favor, double level, bool from_above) -> std::optional<double> {
            std::optional<double> edge;
            for (int k = 0; k < grid.num_types(i); ++k) {
                if (grid.in_favor(i, k) != favor) continue;
                double d_k = D[static_cast<std::size_t>(k)];
                bool on = from_above ? d_k >= level - tol : d_k <= level + tol;
                if (!on) continue;
                double net = grid.type_value(i, k) + (favor ? -unit : unit);
                if (!edge)
                    edge = net;
                else
                    edge = from_above ? std::min(*edge, net) : std::max(*edge, net);
            }
            return edge;
        };

        std::optional<double> wp = std::isfinite(m_plus) ? plateau_edge(true, m_plus, false)
                                                         : std::nullopt;
        std::optional<double> wm = std::isfinite(m_minus) ? plateau_edge(false, m_minus, true)
                                                          : std::nullopt;
        if (!wp && !wm) throw std::runtime_error("agent has no types on either part");
        w.omega_plus = wp ? *wp : *wm;
        w.omega_minus = wm ? *wm : *wp;
        if (w.omega_minus > w.omega_plus) w.omega_minus = w.omega_plus;

        w.nu_plus = inf;
        w.nu_minus = -inf;
        if (p < 1.0) {
            if (std::isfinite(m_plus)) {
                double cap_level = m_plus / (1.0 - p);
                // The cap binds only when some interim value reaches it below 1.
                if (cap_level < 1.0 + tol) {
                    auto cap = plateau_edge(true, cap_level, true);
                    if (cap && *cap > w.omega_plus) w.nu_plus = *cap;
                }
            }
            if (std::isfinite(m_minus)) {
                double cap_level = (m_minus - p) / (1.0 - p);
                if (cap_level > -tol) {
                    auto cap = plateau_edge(false, cap_level, false);
                    if (cap && *cap < w.omega_minus) w.nu_minus = *cap;
                }
            }
        }
    }

    // Disagreement between the fitted voting rule and the rounded table.
    auto costs = cost_rules_from(grid.agents());
    std::size_t mismatches = 0;
    for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
        int want = sol.d[t] > 0.5 ? 1 : 0;
        int got = decide(out.params, grid.agents(), costs, grid.profile_values(t));
        if (want != got) ++mismatches;
    }
    out.residual = static_cast<double>(mismatches) / static_cast<double>(grid.num_profiles());
    return out;
}

Mechanism build_verification(const std::vector<double>& d, const DiscreteGrid& grid, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("detection probability must be in (0,1]");
    if (d.size() != grid.num_profiles())
        throw std::invalid_argument("decision table size does not match grid");
    for (double x : d)
        if (x < -kSlackTol || x > 1.0 + kSlackTol)
            throw std::invalid_argument("decision probability outside [0,1]");

    Mechanism mech(grid);
    mech.d = d;
    for (double& x : mech.d) x = clamp01(x);

    for (int i = 0; i < grid.num_agents(); ++i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        std::vector<double> D = interim_decision(grid, mech.d, i);
        double inf_plus = std::numeric_limits<double>::infinity();
        double sup_minus = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < grid.num_types(i); ++k) {
            double v = D[static_cast<std::size_t>(k)];
            if (grid.in_favor(i, k))
                inf_plus = std::min(inf_plus, v);
            else
                sup_minus = std::max(sup_minus, v);
        }
        if (std::isfinite(inf_plus) && std::isfinite(sup_minus) &&
            sup_minus > inf_plus + kSlackTol)
            throw std::runtime_error(
                "against-part envelope exceeds the in-favor envelope; deviations across parts "
                "cannot be deterred");

        std::vector<double> q(static_cast<std::size_t>(grid.num_types(i)), 0.0);
        for (int k = 0; k < grid.num_types(i); ++k) {
            double Dk = D[static_cast<std::size_t>(k)];
            if (grid.in_favor(i, k)) {
                if (Dk <= kSlackTol) continue; // equation degenerates; inf must be 0
                if (Dk * (1.0 - p) > inf_plus + kSlackTol)
                    throw std::runtime_error(
                        "no deterrent audit probability exists: decision rule violates the "
                        "influence bound on the in-favor part");
                auto f = [&](double x) { return inf_plus - Dk * (1.0 - p * x); };
                q[static_cast<std::size_t>(k)] =
                    f(1.0) < 0.0 ? 1.0 : bisect_increasing(f, 0.0, 1.0);
            } else {
                if (1.0 - Dk <= kSlackTol) continue; // sup must be 1; nothing to add
                if (Dk + p * (1.0 - Dk) < sup_minus - kSlackTol)
                    throw std::runtime_error(
                        "no deterrent audit probability exists: decision rule violates the "
                        "influence bound on the against part");
                auto f = [&](double x) { return Dk + p * x * (1.0 - Dk) - sup_minus; };
                q[static_cast<std::size_t>(k)] =
                    f(1.0) < 0.0 ? 1.0 : bisect_increasing(f, 0.0, 1.0);
            }
        }
        for (std::size_t t = 0; t < grid.num_profiles(); ++t) {
            int k = grid.type_index(t, i);
            if (grid.in_favor(i, k))
                mech.a1[ix][t] = q[static_cast<std::size_t>(k)];
            else
                mech.a0[ix][t] = q[static_cast<std::size_t>(k)];
        }
    }
    return mech;
}

PublicGoodSolution solve_public_good(const AgentSpec& agent, const CostFunctional& tech,
                                     double c) {
    tech.validate();
    if (c < 0.0) throw std::invalid_argument("negative verification cost");
    if (!agent.is_discrete())
        throw std::invalid_argument("public-good solver needs a discrete type list");
    const auto& dd = agent.discrete();
    for (double t : dd.values)
        if (!agent.sign.in_favor(t))
            throw std::invalid_argument("public-good solver assumes an always-in-favor agent");

    const double d_max = 1.0 - 1e-9;

    auto phi = [&](double d, double t, double m) {
        return t * d - c * (1.0 - m / d) - tech.cost(d);
    };
    auto phi_prime = [&](double d, double t, double m) {
        return t - c * m / (d * d) - tech.derivative(d);
    };

    // Pointwise best provision level for one type at floor m: coarse grid,
    // golden refinement, then a sign-change polish of the derivative at
    // interior optima.
    auto inner = [&](double t, double m) -> std::pair<double, double> {
        if (m >= d_max) return {d_max, phi(d_max, t, m)};
        const int grid_pts = 256;
        double best_d = m, best_v = phi(m, t, m);
        for (int j = 1; j <= grid_pts; ++j) {
            double d = m + (d_max - m) * j / grid_pts;
            double v = phi(d, t, m);
            if (v > best_v) {
                best_v = v;
                best_d = d;
            }
        }
        double step = (d_max - m) / grid_pts;
        double lo = std::max(m, best_d - step), hi = std::min(d_max, best_d + step);
        double d_star = golden_max([&](double d) { return phi(d, t, m); }, lo, hi, 80);
        if (phi(m, t, m) >= phi(d_star, t, m)) return {m, phi(m, t, m)};
        // Interior: pin the first-order condition.
        double a = std::max(m, d_star - step), b = std::min(d_max, d_star + step);
        if (phi_prime(a, t, m) > 0.0 && phi_prime(b, t, m) < 0.0)
            d_star = bisect_increasing([&](double d) { return -phi_prime(d, t, m); }, a, b);
        double v = phi(d_star, t, m);
        double v_floor = phi(m, t, m);
        return v_floor >= v ? std::make_pair(m, v_floor) : std::make_pair(d_star, v);
    };

    auto expected = [&](double m) {
        KahanSum s;
        for (std::size_t k = 0; k < dd.values.size(); ++k)
            s.add(dd.probs[k] * inner(dd.values[k], m).second);
        return s.value();
    };

    const double m_lo = 1e-7, m_hi = 1.0 - 1e-6;
    const int m_pts = 200;
    double best_m = m_lo, best_g = expected(m_lo);
    for (int j = 1; j <= m_pts; ++j) {
        double m = m_lo + (m_hi - m_lo) * j / m_pts;
        double g = expected(m);
        if (g > best_g) {
            best_g = g;
            best_m = m;
        }
    }
    double mstep = (m_hi - m_lo) / m_pts;
    double m_star = golden_max(expected, std::max(m_lo, best_m - mstep),
                               std::min(m_hi, best_m + mstep), 70);
    if (expected(best_m) > expected(m_star)) m_star = best_m;

    PublicGoodSolution out;
    out.floor = m_star;
    out.value = expected(m_star);
    out.schedule.resize(dd.values.size());
    for (std::size_t k = 0; k < dd.values.size(); ++k)
        out.schedule[k] = inner(dd.values[k], m_star).first;
    return out;
}

} // namespace verivote
