#pragma once

// Dense matrix kernel: determinants, maximal minors, general position and
// total-positivity (Gr+) checks, and sign vectors sign(Wx).

#include "sigbound/labelspace.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sigbound {

/// Row-major dense real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Horizontal concatenation [A B]; row counts must match.
Matrix hconcat(const Matrix& a, const Matrix& b);

/// y = A x.
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> a) noexcept;

enum class ProvenanceKind { Random, Dft, DftWithSlack };

std::string_view to_string(ProvenanceKind kind) noexcept;
std::optional<ProvenanceKind> parse_provenance_kind(std::string_view text) noexcept;

/// Where a weight matrix came from. `slack_columns` is meaningful for
/// DftWithSlack; `k` for the DFT kinds.
struct Provenance {
    ProvenanceKind kind = ProvenanceKind::Random;
    std::size_t slack_columns = 0;
    std::optional<std::size_t> k;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Classifier weights W in R^{n x d}; row i is the normal w^(i) of label i.
/// Immutable after construction.
class WeightMatrix {
public:
    /// Throws DomainError for empty shapes or non-finite entries.
    explicit WeightMatrix(Matrix values, Provenance provenance = {});

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t d() const noexcept { return values_.cols(); }
    std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
    const Matrix& values() const noexcept { return values_; }
    const Provenance& provenance() const noexcept { return provenance_; }

    /// Euclidean norm of every row.
    std::vector<double> row_norms() const;

private:
    Matrix values_;
    Provenance provenance_;
};

inline constexpr std::size_t kDefaultDeterminantCap = 512;
inline constexpr std::uint64_t kDefaultMinorBudget = 1'000'000;
inline constexpr double kDefaultDetTolerance = 1e-10;
inline constexpr double kDefaultSignTolerance = 1e-12;
inline constexpr double kDefaultPerturbationScale = 1e-9;

/// Determinant by LU factorization with partial pivoting.
/// Throws DimensionError for non-square input or dim > cap.
double determinant(const Matrix& m, std::size_t cap = kDefaultDeterminantCap);

struct Minor {
    std::vector<std::size_t> rows;  // 0-based, ascending
    double value = 0.0;
    double row_norm_product = 0.0;  // product of ||w^(i)|| over `rows`
};

/// Streams every maximal minor Delta_I (d x d, rows I) of an n x d matrix,
/// with I in colexicographic order.
class MinorEnumerator {
public:
    /// Throws DomainError if n < d, BudgetExceeded if C(n,d) > budget.
    explicit MinorEnumerator(const WeightMatrix& w, std::uint64_t budget = kDefaultMinorBudget);

    bool next(Minor& out);
    std::uint64_t count() const noexcept { return count_; }

private:
    const WeightMatrix& w_;
    std::vector<double> norms_;
    std::vector<std::size_t> combo_;
    std::vector<double> scratch_;
    std::uint64_t count_ = 0;
    bool started_ = false;
    bool done_ = false;
};

/// Materializes all maximal minors.
std::vector<Minor> maximal_minors(const WeightMatrix& w,
                                  std::uint64_t budget = kDefaultMinorBudget);

/// True iff |Delta_I| >= tau_det * prod_{i in I} ||w^(i)|| for every I.
bool is_general_position(const WeightMatrix& w, double tau_det = kDefaultDetTolerance,
                         std::uint64_t budget = kDefaultMinorBudget);

enum class GrVerdict { UniformPositive, UniformNegative, MixedSigns, Degenerate };

std::string_view to_string(GrVerdict verdict) noexcept;

struct GrStatus {
    GrVerdict verdict = GrVerdict::Degenerate;
    double min_abs_minor = 0.0;
    double min_relative_minor = 0.0;  // min |Delta_I| / prod ||w^(i)||
    std::uint64_t checked_minors = 0;
    std::uint64_t positive_minors = 0;
    std::uint64_t negative_minors = 0;

    bool uniform() const noexcept {
        return verdict == GrVerdict::UniformPositive || verdict == GrVerdict::UniformNegative;
    }
};

/// Classifies W against the totally positive Grassmannian. Degenerate wins
/// over MixedSigns when a minor falls below the (relative) tolerance.
GrStatus gr_plus_status(const WeightMatrix& w, double tau_det = kDefaultDetTolerance,
                        std::uint64_t budget = kDefaultMinorBudget);

/// x lies on (or numerically too close to) the hyperplanes of `rows`.
struct BoundaryError {
    std::vector<std::size_t> rows;  // 0-based
    std::string message() const;
};

using SignResult = std::variant<LabelAssignment, BoundaryError>;

/// sign(Wx); BoundaryError when some |(Wx)_i| < tau_sign.
SignResult sign_vector(const WeightMatrix& w, std::span<const double> x,
                       double tau_sign = kDefaultSignTolerance);

/// x plus a seeded uniform perturbation of magnitude scale * ||x||
/// per coordinate (scale itself when x = 0).
std::vector<double> perturb(std::span<const double> x, std::uint64_t seed,
                            double scale = kDefaultPerturbationScale);

/// sign_vector, retrying with perturb(x, seed + attempt) on BoundaryError.
SignResult sign_vector_perturbed(const WeightMatrix& w, std::span<const double> x,
                                 std::uint64_t seed, std::size_t max_attempts = 16,
                                 double tau_sign = kDefaultSignTolerance);

}  // namespace sigbound
