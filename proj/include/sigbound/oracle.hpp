#pragma once

// Brute-force enumeration of the sign vectors a matrix can produce,
// independent of the LP verifier.

#include "sigbound/labelspace.hpp"
#include "sigbound/linalg.hpp"
#include "sigbound/verifier.hpp"

#include <cstddef>
#include <cstdint>
#include <set>
#include <string_view>
#include <vector>

namespace sigbound {

enum class RegionMethod { Exact2D, SampledComplete, SampledPartial };

std::string_view to_string(RegionMethod method) noexcept;

/// A(W) = { sign(Wx) : x in R^d }, or the part of it found so far.
struct RegionSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::set<LabelAssignment> members;
    RegionMethod method = RegionMethod::SampledPartial;
    bool budget_hit = false;           // SampledPartial because samples ran out
    bool general_position = false;     // W passed the general-position test
    std::uint64_t samples_used = 0;
    std::uint64_t boundary_draws = 0;  // discarded samples with a near-zero logit

    bool contains(const LabelAssignment& y) const { return members.count(y) > 0; }
};

inline constexpr std::uint64_t kDefaultSampleBudget = 10'000'000;

/// General position including the n < d case (rows linearly independent).
bool in_general_position(const WeightMatrix& w, double tau_det = kDefaultDetTolerance);

/// Exact enumeration for d = 2: walks the 2n angular sectors between the
/// lines w_i^T x = 0. Throws DegeneracyError on zero or collinear rows.
RegionSet enumerate_regions_2d(const WeightMatrix& w, double tau_det = kDefaultDetTolerance);

/// Samples x uniformly on the unit sphere and collects sign(Wx). Finishes as
/// SampledComplete as soon as the count reaches cover_count(n, d) for a
/// general-position W; otherwise SampledPartial. Requires n <= 64.
/// With jobs > 1 each worker draws from its own seeded stream; the member
/// set is deterministic, samples_used is not.
RegionSet enumerate_regions_sampled(const WeightMatrix& w,
                                    std::uint64_t budget = kDefaultSampleBudget,
                                    std::uint64_t seed = 0, std::size_t jobs = 1);

struct CrossCheckReport {
    RegionSet oracle;
    std::vector<LabelAssignment> lp_yes_oracle_no;
    std::vector<LabelAssignment> oracle_yes_lp_no;
    std::vector<double> oracle_yes_lp_no_bounds;  // LP dual radius bound per entry
    std::size_t lp_argmaxable = 0;
    std::size_t lp_indeterminate = 0;

    bool clean() const noexcept { return lp_yes_oracle_no.empty() && oracle_yes_lp_no.empty(); }
};

inline constexpr std::size_t kCrossCheckMaxLabels = 16;

/// Runs the verifier on all 2^n assignments and diffs the argmaxable set
/// against the oracle (exact for d = 2, sampled otherwise).
/// Throws DomainError when n > 16.
CrossCheckReport cross_check(const WeightMatrix& w, const LpConfig& config = {},
                             std::uint64_t sample_budget = kDefaultSampleBudget,
                             std::uint64_t seed = 0, std::size_t jobs = 1);

}  // namespace sigbound
