#pragma once

// Sign-vector combinatorics for multi-label outputs: activity, alternation,
// the k-active / k-alternating families and the region count of a central
// hyperplane arrangement in general position.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigbound {

using BigInt = boost::multiprecision::cpp_int;

/// A complete label assignment y in {+1,-1}^n. Never holds zeros.
class LabelAssignment {
public:
    /// Throws DomainError if `signs` is empty or holds anything but +1/-1.
    explicit LabelAssignment(std::vector<std::int8_t> signs);

    /// All-inactive assignment of length n.
    static LabelAssignment all_inactive(std::size_t n);

    /// Parses "+--+". Accepts ASCII '-' and U+2212 for the negative sign.
    static LabelAssignment from_dense(std::string_view text);

    /// Builds an assignment from 1-based active label indices.
    static LabelAssignment from_active(std::size_t n, std::span<const std::size_t> active);

    std::size_t size() const noexcept { return signs_.size(); }
    std::int8_t operator[](std::size_t i) const noexcept { return signs_[i]; }
    bool active(std::size_t i) const noexcept { return signs_[i] > 0; }
    std::span<const std::int8_t> signs() const noexcept { return signs_; }

    /// Dense form using ASCII '+' and '-'.
    std::string to_dense() const;

    /// 1-based indices of active labels, ascending.
    std::vector<std::size_t> active_indices() const;

    /// Global sign flip (-y).
    LabelAssignment flipped() const;

    friend bool operator==(const LabelAssignment&, const LabelAssignment&) = default;
    friend auto operator<=>(const LabelAssignment& a, const LabelAssignment& b) {
        return a.signs_ <=> b.signs_;
    }

private:
    std::vector<std::int8_t> signs_;
};

struct LabelAssignmentHash {
    std::size_t operator()(const LabelAssignment& y) const noexcept;
};

/// Number of active (+) labels.
std::size_t act(const LabelAssignment& y) noexcept;

/// Number of adjacent sign changes when reading y left to right.
std::size_t alt(const LabelAssignment& y) noexcept;

enum class FamilyKind { Active, Alternating };

std::string_view to_string(FamilyKind kind) noexcept;
std::optional<FamilyKind> parse_family_kind(std::string_view text) noexcept;

/// A_{n,k} (act <= k) or V_{n,k} (alt <= k).
struct FamilySpec {
    std::size_t n = 1;
    std::size_t k = 0;
    FamilyKind kind = FamilyKind::Active;

    /// Throws DomainError on n == 0, k > n (Active) or k > n-1 (Alternating).
    void validate() const;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Exact binomial coefficient C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Exact cardinality of the family.
BigInt count_family(const FamilySpec& spec);

/// Number of regions cut out by n central hyperplanes in general position
/// in R^d: 2 * sum_{j<d} C(n-1, j). Equals 2^n once d >= n.
BigInt cover_count(std::uint64_t n, std::uint64_t d);

/// Streams the members of a family in a fixed order.
///
/// Active: by increasing act, then lexicographically by the sorted tuple of
/// active positions. Alternating: by increasing number of flips, then
/// lexicographically by the flip positions (a flip at position p means
/// y_p != y_{p+1}), then the first entry (- before +).
class FamilyEnumerator {
public:
    /// Throws BudgetExceeded if the family has more than `budget` members.
    explicit FamilyEnumerator(FamilySpec spec,
                              std::uint64_t budget = kDefaultEnumerationBudget);

    /// Writes the next member into `out`; returns false when exhausted.
    bool next(LabelAssignment& out);

    std::uint64_t size() const noexcept { return total_; }
    const FamilySpec& spec() const noexcept { return spec_; }

private:
    bool advance_combination();
    LabelAssignment materialize() const;

    FamilySpec spec_;
    std::uint64_t total_ = 0;
    std::size_t level_ = 0;          // current act / flip count
    std::vector<std::size_t> combo_; // positions in [0, universe)
    bool negative_first_ = true;     // Alternating only
    bool started_ = false;
    bool done_ = false;
};

/// Convenience: materializes the whole family.
std::vector<LabelAssignment> enumerate_family(const FamilySpec& spec,
                                              std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace sigbound
