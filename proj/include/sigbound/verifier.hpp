#pragma once

// Chebyshev-center certification of label assignments.
//
// For a label assignment y and weights W the verifier solves
//
//     maximize   eps
//     subject to -y_i w_i^T x + eps ||w_i|| <= 0     for every label i
//                -box <= x_j <= box                  for every feature j
//
// and reports y as argmaxable when the optimal radius reaches eps_floor.
// A NotEpsArgmaxable verdict is backed by a dual bound below the floor;
// anything the solver cannot settle either way is Indeterminate.

#include "sigbound/labelspace.hpp"
#include "sigbound/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigbound {

struct LpConfig {
    double box_bound = 1e4;
    double eps_floor = 1e-8;
    double solver_feas_tol = 1e-9;

    /// Throws DomainError unless eps_floor > solver_feas_tol > 0 and box_bound > 0.
    void validate() const;
};

enum class VerifyStatus { Argmaxable, NotEpsArgmaxable, Indeterminate };

std::string_view to_string(VerifyStatus status) noexcept;

struct VerifyResult {
    VerifyStatus status = VerifyStatus::Indeterminate;
    /// Chebyshev radius achieved by `witness`: min_i y_i w_i^T x / ||w_i||.
    /// Set for Argmaxable only; zero otherwise.
    double radius = 0.0;
    std::vector<double> witness;
    /// Certified upper bound on the optimal radius (from the LP dual).
    double radius_upper_bound = 0.0;
    /// The inscribed ball pokes out of the box (|x_j| + radius > box).
    bool ball_exceeds_box = false;
    std::string reason;  // Indeterminate only
    std::size_t lp_iterations = 0;
    double seconds = 0.0;

    bool argmaxable() const noexcept { return status == VerifyStatus::Argmaxable; }
};

/// Verifier bound to one matrix; row norms are computed once and reused.
/// Stateless per call, so one instance may serve many threads.
class ChebyshevVerifier {
public:
    /// Throws DomainError on zero-norm rows or an invalid config.
    ChebyshevVerifier(const WeightMatrix& w, LpConfig config = {});

    /// Throws DimensionError when y.size() != n.
    VerifyResult verify(const LabelAssignment& y) const;

    const WeightMatrix& matrix() const noexcept { return w_; }
    const LpConfig& config() const noexcept { return config_; }
    std::span<const double> row_norms() const noexcept { return norms_; }

private:
    const WeightMatrix& w_;
    LpConfig config_;
    std::vector<double> norms_;
};

VerifyResult chebyshev_verify(const WeightMatrix& w, const LabelAssignment& y,
                              const LpConfig& config = {});

struct BatchSummary {
    std::size_t argmaxable = 0;
    std::size_t one_argmaxable = 0;  // radius >= 1
    std::size_t not_eps = 0;
    std::size_t indeterminate = 0;
    std::size_t errors = 0;          // subset of indeterminate caused by bad input
};

struct BatchResult {
    std::vector<VerifyResult> results;  // input order
    BatchSummary summary;
};

/// Verifies every assignment with `jobs` worker threads (0 = hardware
/// concurrency). Per-item input errors become Indeterminate results whose
/// reason starts with "input error:"; the batch always completes.
BatchResult verify_batch(const WeightMatrix& w, std::span<const LabelAssignment> ys,
                         const LpConfig& config = {}, std::size_t jobs = 1);

struct RadiusRow {
    double percentile = 0.0;
    double radius = 0.0;
};

struct RadiusReport {
    std::vector<RadiusRow> rows;
    std::vector<double> sorted_radii;  // ascending, NotEps/Indeterminate as 0
    BatchSummary summary;
};

/// Nearest-rank percentile of an ascending sequence; p in [0, 100].
double nearest_rank_percentile(std::span<const double> ascending, double p);

/// Verifies every member of `family` and tabulates radius percentiles.
/// Throws BudgetExceeded when the family is larger than `budget`.
RadiusReport radius_report(const WeightMatrix& w, const FamilySpec& family,
                           const LpConfig& config, std::span<const double> percentiles,
                           std::size_t jobs = 1,
                           std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace sigbound
