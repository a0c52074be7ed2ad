#include "sigbound/simplex.hpp"

#include "sigbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigbound::lp {

std::string_view to_string(Status status) noexcept {
    switch (status) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration_limit";
    }
    return "iteration_limit";
}

namespace {

// Columns: [structural n | slack m | artificial 1 | rhs 1]. Row m holds the
// reduced costs of the active objective; its rhs entry is -objective.
class Tableau {
public:
    Tableau(const Problem& p, const Options& opt)
        : m_(p.b.size()), n_(p.c.size()), width_(n_ + m_ + 2), opt_(opt),
          cells_((m_ + 1) * width_, 0.0), basis_(m_), allowed_(n_ + m_ + 1, true) {
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t j = 0; j < n_; ++j) at(r, j) = p.a(r, j);
            at(r, n_ + r) = 1.0;
            at(r, artificial()) = -1.0;
            at(r, rhs()) = p.b[r];
            basis_[r] = n_ + r;
        }
        max_iterations_ = opt.max_iterations > 0 ? opt.max_iterations : 50 * (m_ + n_) + 1000;
    }

    std::size_t artificial() const noexcept { return n_ + m_; }
    std::size_t rhs() const noexcept { return n_ + m_ + 1; }

    double& at(std::size_t r, std::size_t c) noexcept { return cells_[r * width_ + c]; }
    double at(std::size_t r, std::size_t c) const noexcept { return cells_[r * width_ + c]; }

    void pivot(std::size_t row, std::size_t col) {
        const double inv = 1.0 / at(row, col);
        double* pr = &cells_[row * width_];
        for (std::size_t c = 0; c < width_; ++c) pr[c] *= inv;
        pr[col] = 1.0;
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == row) continue;
            double* rr = &cells_[r * width_];
            const double factor = rr[col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < width_; ++c) {
                if (pr[c] != 0.0) rr[c] -= factor * pr[c];
            }
            rr[col] = 0.0;
        }
        basis_[row] = col;
    }

    // Loads objective `obj` (length n_+m_+1, zero beyond structurals as needed)
    // and prices out the current basis.
    void set_objective(const std::vector<double>& obj) {
        for (std::size_t c = 0; c < width_; ++c) at(m_, c) = 0.0;
        for (std::size_t j = 0; j < obj.size(); ++j) at(m_, j) = obj[j];
        for (std::size_t r = 0; r < m_; ++r) {
            const double cb = at(m_, basis_[r]);
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c < width_; ++c) at(m_, c) -= cb * at(r, c);
            at(m_, basis_[r]) = 0.0;
        }
    }

    // Returns Optimal, Unbounded or IterationLimit.
    Status run(std::size_t& iterations, std::size_t& bland_pivots) {
        std::size_t degenerate_run = 0;
        while (true) {
            if (iterations >= max_iterations_) return Status::IterationLimit;
            const bool bland = degenerate_run >= opt_.degenerate_streak;
            std::size_t enter = width_;
            double best = opt_.optimality_tol;
            for (std::size_t j = 0; j < rhs(); ++j) {
                if (!allowed_[j]) continue;
                const double rc = at(m_, j);
                if (rc > best) {
                    enter = j;
                    if (bland) break;
                    best = rc;
                }
            }
            if (enter == width_) return Status::Optimal;

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = at(r, enter);
                if (a <= opt_.pivot_tol) continue;
                const double ratio = std::max(at(r, rhs()), 0.0) / a;
                if (leave == m_ || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
                    leave = r;
                    best_ratio = ratio;
                } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
                    const bool take = bland ? basis_[r] < basis_[leave]
                                            : a > at(leave, enter);
                    if (take) {
                        leave = r;
                        best_ratio = std::min(best_ratio, ratio);
                    }
                }
            }
            if (leave == m_) return Status::Unbounded;

            degenerate_run = best_ratio <= 0.0 ? degenerate_run + 1 : 0;
            if (bland) ++bland_pivots;
            pivot(leave, enter);
            ++iterations;
        }
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    Options opt_;
    std::vector<double> cells_;
    std::vector<std::size_t> basis_;
    std::vector<bool> allowed_;
    std::size_t max_iterations_ = 0;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
    const std::size_t m = problem.b.size();
    const std::size_t n = problem.c.size();
    if (problem.a.rows() != m || problem.a.cols() != n) {
        throw DimensionError("lp::solve: A must be " + std::to_string(m) + "x" +
                             std::to_string(n));
    }

    Tableau t(problem, options);
    Solution sol;

    std::size_t worst = m;
    for (std::size_t r = 0; r < m; ++r) {
        if (problem.b[r] < 0.0 && (worst == m || problem.b[r] < problem.b[worst])) worst = r;
    }

    if (worst != m) {
        // Phase 1: maximize -artificial, starting from the artificial in the
        // most violated row so every rhs becomes nonnegative.
        std::vector<double> phase1(n + m + 1, 0.0);
        phase1[t.artificial()] = -1.0;
        t.set_objective(phase1);
        t.pivot(worst, t.artificial());
        t.set_objective(phase1);
        const Status s = t.run(sol.iterations, sol.bland_pivots);
        if (s == Status::IterationLimit) {
            sol.status = s;
            return sol;
        }
        if (-t.at(m, t.rhs()) < -options.feasibility_tol) {
            sol.status = Status::Infeasible;
            sol.dual.assign(m, 0.0);
            for (std::size_t r = 0; r < m; ++r) sol.dual[r] = std::max(0.0, -t.at(m, n + r));
            return sol;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis_[r] != t.artificial()) continue;
            std::size_t col = t.artificial();
            double best = options.pivot_tol;
            for (std::size_t j = 0; j < t.artificial(); ++j) {
                if (std::abs(t.at(r, j)) > best) {
                    best = std::abs(t.at(r, j));
                    col = j;
                }
            }
            if (col != t.artificial()) t.pivot(r, col);
        }
    }
    t.allowed_[t.artificial()] = false;

    std::vector<double> phase2(n + m + 1, 0.0);
    std::copy(problem.c.begin(), problem.c.end(), phase2.begin());
    t.set_objective(phase2);
    sol.status = t.run(sol.iterations, sol.bland_pivots);
    if (sol.status == Status::IterationLimit) return sol;

    sol.primal.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis_[r] < n) sol.primal[t.basis_[r]] = t.at(r, t.rhs());
    }
    sol.dual.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) sol.dual[r] = -t.at(m, n + r);
    sol.objective = -t.at(m, t.rhs());
    return sol;
}

}  // namespace sigbound::lp
