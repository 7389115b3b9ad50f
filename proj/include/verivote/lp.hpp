#pragma once

#include <string>
#include <vector>

namespace verivote {

// Dense two-phase simplex for small maximization problems:
//
//   max c'x  s.t.  a'x {<=,=,>=} b per row,  x >= 0.
//
// Uses Dantzig pricing and falls back to Bland's rule to rule out cycling.
// Feasibility tolerance 1e-9. All instances in this project are small and
// dense, so no factorized or sparse machinery is needed.

enum class LpRelation { LessEq, Equal, GreaterEq };

struct LpRow {
    std::vector<double> coeffs; // length num_vars; zeros allowed
    LpRelation relation = LpRelation::LessEq;
    double rhs = 0.0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;
};

struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective; // maximize
    std::vector<LpRow> rows;

    void add_row(std::vector<double> coeffs, LpRelation rel, double rhs);
};

LpResult lp_solve(const LinearProgram& lp);

std::string to_string(LpStatus status);

} // namespace verivote
