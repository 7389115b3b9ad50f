#include "verivote/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace verivote {

void LinearProgram::add_row(std::vector<double> coeffs, LpRelation rel, double rhs) {
    if (static_cast<int>(coeffs.size()) != num_vars)
        throw std::invalid_argument("lp row has wrong width");
    rows.push_back(LpRow{std::move(coeffs), rel, rhs});
}

std::string to_string(LpStatus status) {
    switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration limit";
    }
    return "unknown";
}

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr long kBlandAfter = 5000;
constexpr long kMaxIters = 400000;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        double inv = 1.0 / at(pr, pc);
        double* prow = &a_[pr * cols_];
        for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            double f = at(r, pc);
            if (std::abs(f) < kPivotTol) {
                at(r, pc) = 0.0;
                continue;
            }
            double* row = &a_[r * cols_];
            for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0;
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
};

} // namespace

LpResult lp_solve(const LinearProgram& lp) {
    const std::size_t n = static_cast<std::size_t>(lp.num_vars);
    const std::size_t m = lp.rows.size();
    if (lp.objective.size() != n) throw std::invalid_argument("objective has wrong width");

    // Normalized rows: b >= 0.
    std::vector<LpRow> rows = lp.rows;
    for (auto& row : rows) {
        if (row.rhs < 0.0) {
            row.rhs = -row.rhs;
            for (double& v : row.coeffs) v = -v;
            if (row.relation == LpRelation::LessEq)
                row.relation = LpRelation::GreaterEq;
            else if (row.relation == LpRelation::GreaterEq)
                row.relation = LpRelation::LessEq;
        }
    }

    std::size_t num_slack = 0, num_art = 0;
    for (const auto& row : rows) {
        if (row.relation != LpRelation::Equal) ++num_slack;
        if (row.relation != LpRelation::LessEq) ++num_art;
    }

    const std::size_t total = n + num_slack + num_art;
    // rows 0..m-1: constraints; row m: phase-2 objective; row m+1: phase-1.
    Tableau t(m + 2, total + 1);
    std::vector<std::size_t> basis(m);
    std::vector<bool> is_artificial(total, false);

    std::size_t slack_at = n, art_at = n + num_slack;
    double art_rhs_sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = rows[r].coeffs[j];
        t.at(r, total) = rows[r].rhs;
        switch (rows[r].relation) {
        case LpRelation::LessEq:
            t.at(r, slack_at) = 1.0;
            basis[r] = slack_at++;
            break;
        case LpRelation::GreaterEq:
            t.at(r, slack_at) = -1.0;
            ++slack_at;
            t.at(r, art_at) = 1.0;
            is_artificial[art_at] = true;
            basis[r] = art_at++;
            break;
        case LpRelation::Equal:
            t.at(r, art_at) = 1.0;
            is_artificial[art_at] = true;
            basis[r] = art_at++;
            break;
        }
        if (is_artificial[basis[r]]) art_rhs_sum += rows[r].rhs;
    }

    // Phase-2 objective row: z - c'x = 0.
    for (std::size_t j = 0; j < n; ++j) t.at(m, j) = -lp.objective[j];
    // Phase-1 row: minimize the sum of artificials (maximize its negation),
    // then reduce so the basic artificial columns carry zero reduced cost.
    for (std::size_t j = 0; j < total; ++j)
        if (is_artificial[j]) t.at(m + 1, j) = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
        if (!is_artificial[basis[r]]) continue;
        for (std::size_t j = 0; j <= total; ++j) t.at(m + 1, j) -= t.at(r, j);
    }

    long iters = 0;
    auto run_simplex = [&](std::size_t obj_row) -> LpStatus {
        for (;;) {
            if (++iters > kMaxIters) return LpStatus::IterationLimit;
            const bool bland = iters > kBlandAfter;
            std::size_t enter = total;
            double best = -kFeasTol;
            for (std::size_t j = 0; j < total; ++j) {
                if (is_artificial[j]) continue; // artificials never re-enter
                double red = t.at(obj_row, j);
                if (red < -kFeasTol) {
                    if (bland) {
                        enter = j;
                        break;
                    }
                    if (red < best) {
                        best = red;
                        enter = j;
                    }
                }
            }
            if (enter == total) return LpStatus::Optimal;

            std::size_t leave = m;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m; ++r) {
                double a = t.at(r, enter);
                if (a <= kPivotTol) continue;
                double ratio = t.at(r, total) / a;
                if (ratio < best_ratio - kFeasTol ||
                    (ratio < best_ratio + kFeasTol &&
                     (leave == m || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == m) return LpStatus::Unbounded;
            t.pivot(leave, enter);
            basis[leave] = enter;
        }
    };

    if (num_art > 0 && art_rhs_sum > kFeasTol) {
        LpStatus s1 = run_simplex(m + 1);
        if (s1 == LpStatus::IterationLimit) return LpResult{s1, 0.0, {}};
        if (s1 == LpStatus::Unbounded) return LpResult{LpStatus::Infeasible, 0.0, {}};
    }
    if (num_art > 0) {
        // Phase-1 objective value is -sum of artificials.
        if (t.at(m + 1, total) < -1e-8) return LpResult{LpStatus::Infeasible, 0.0, {}};
        // Pivot remaining artificials (basic at zero) out of the basis.
        for (std::size_t r = 0; r < m; ++r) {
            if (!is_artificial[basis[r]]) continue;
            std::size_t enter = total;
            for (std::size_t j = 0; j < total; ++j) {
                if (is_artificial[j]) continue;
                if (std::abs(t.at(r, j)) > 1e-7) {
                    enter = j;
                    break;
                }
            }
            if (enter == total) continue; // redundant row; stays at zero
            t.pivot(r, enter);
            basis[r] = enter;
        }
    }

    LpStatus s2 = run_simplex(m);
    if (s2 != LpStatus::Optimal) return LpResult{s2, 0.0, {}};

    LpResult res;
    res.status = LpStatus::Optimal;
    res.objective = t.at(m, total);
    res.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) res.x[basis[r]] = t.at(r, total);
    return res;
}

} // namespace verivote
