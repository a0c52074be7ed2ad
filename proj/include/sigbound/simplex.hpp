#pragma once

// Dense two-phase tableau simplex for
//     maximize c^T z  subject to  A z <= b,  z >= 0.
// Pricing is Dantzig's rule, falling back to Bland's rule after a run of
// degenerate pivots so the method always terminates.

#include "sigbound/linalg.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace sigbound::lp {

struct Problem {
    Matrix a;               // m x n
    std::vector<double> b;  // m
    std::vector<double> c;  // n
};

struct Options {
    double pivot_tol = 1e-11;        // smallest admissible |pivot|
    double optimality_tol = 1e-12;   // reduced cost threshold for entering
    double feasibility_tol = 1e-10;  // phase-1 objective threshold
    std::size_t degenerate_streak = 50;
    std::size_t max_iterations = 0;  // 0: 50 (m + n) + 1000
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(Status status) noexcept;

struct Solution {
    Status status = Status::IterationLimit;
    double objective = 0.0;
    std::vector<double> primal;  // n
    std::vector<double> dual;    // m, >= 0 at optimality (up to tolerance)
    std::size_t iterations = 0;
    std::size_t bland_pivots = 0;
};

/// Throws DimensionError on inconsistent shapes.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace sigbound::lp
