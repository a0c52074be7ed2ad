#include "sigbound/linalg.hpp"

#include "sigbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sigbound {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                             " entries, expected " + std::to_string(rows_ * cols_));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("hconcat: row counts " + std::to_string(a.rows()) + " and " +
                             std::to_string(b.rows()) + " differ");
    }
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
        std::copy(b.row(i).begin(), b.row(i).end(), out.row(i).begin() + a.cols());
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) noexcept {
    // Scaled accumulation keeps tiny and huge rows from under/overflowing.
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double v : a) {
        const double r = v / scale;
        s += r * r;
    }
    return scale * std::sqrt(s);
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) {
        throw DimensionError("matrix has " + std::to_string(a.cols()) +
                             " columns but vector has length " + std::to_string(x.size()));
    }
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

std::string_view to_string(ProvenanceKind kind) noexcept {
    switch (kind) {
        case ProvenanceKind::Random: return "random";
        case ProvenanceKind::Dft: return "dft";
        case ProvenanceKind::DftWithSlack: return "dft+slack";
    }
    return "random";
}

std::optional<ProvenanceKind> parse_provenance_kind(std::string_view text) noexcept {
    if (text == "random") return ProvenanceKind::Random;
    if (text == "dft") return ProvenanceKind::Dft;
    if (text == "dft+slack") return ProvenanceKind::DftWithSlack;
    return std::nullopt;
}

WeightMatrix::WeightMatrix(Matrix values, Provenance provenance)
    : values_(std::move(values)), provenance_(provenance) {
    if (values_.rows() == 0 || values_.cols() == 0) {
        throw DomainError("weight matrix needs n >= 1 and d >= 1");
    }
    const auto data = values_.data();
    for (std::size_t idx = 0; idx < data.size(); ++idx) {
        if (!std::isfinite(data[idx])) {
            throw DomainError("weight matrix entry (" + std::to_string(idx / values_.cols() + 1) +
                              "," + std::to_string(idx % values_.cols() + 1) +
                              ") is not finite");
        }
    }
}

std::vector<double> WeightMatrix::row_norms() const {
    std::vector<double> out(n());
    for (std::size_t i = 0; i < n(); ++i) out[i] = norm2(row(i));
    return out;
}

namespace {

// In-place LU with partial pivoting on a dim x dim row-major buffer.
double lu_determinant(std::span<double> a, std::size_t dim) {
    double det = 1.0;
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * dim + col]);
        for (std::size_t r = col + 1; r < dim; ++r) {
            const double v = std::abs(a[r * dim + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != col) {
            std::swap_ranges(a.begin() + pivot * dim, a.begin() + (pivot + 1) * dim,
                             a.begin() + col * dim);
            det = -det;
        }
        const double p = a[col * dim + col];
        det *= p;
        for (std::size_t r = col + 1; r < dim; ++r) {
            const double factor = a[r * dim + col] / p;
            if (factor == 0.0) continue;
            for (std::size_t c = col + 1; c < dim; ++c) {
                a[r * dim + c] -= factor * a[col * dim + c];
            }
        }
    }
    return det;
}

}  // namespace

double determinant(const Matrix& m, std::size_t cap) {
    if (m.rows() != m.cols()) {
        throw DimensionError("determinant of non-square " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix");
    }
    if (m.rows() > cap) {
        throw DimensionError("determinant dimension " + std::to_string(m.rows()) +
                             " exceeds cap " + std::to_string(cap));
    }
    if (m.rows() == 0) return 1.0;
    std::vector<double> buf(m.data().begin(), m.data().end());
    return lu_determinant(buf, m.rows());
}

MinorEnumerator::MinorEnumerator(const WeightMatrix& w, std::uint64_t budget)
    : w_(w), norms_(w.row_norms()) {
    if (w.n() < w.d()) {
        throw DomainError("maximal minors need n >= d (n=" + std::to_string(w.n()) +
                          ", d=" + std::to_string(w.d()) + ")");
    }
    BigInt total = binomial(w.n(), w.d());
    if (total > budget) {
        throw BudgetExceeded("C(" + std::to_string(w.n()) + "," + std::to_string(w.d()) +
                                 ") maximal minors exceed budget " + std::to_string(budget),
                             total.str());
    }
    count_ = total.convert_to<std::uint64_t>();
    scratch_.resize(w.d() * w.d());
}

bool MinorEnumerator::next(Minor& out) {
    if (done_) return false;
    const std::size_t n = w_.n();
    const std::size_t d = w_.d();
    if (!started_) {
        started_ = true;
        combo_.resize(d);
        for (std::size_t i = 0; i < d; ++i) combo_[i] = i;
    } else {
        // Colex successor: bump the lowest slot that has room below its right neighbour.
        std::size_t j = 0;
        while (j < d) {
            const std::size_t limit = (j + 1 < d) ? combo_[j + 1] : n;
            if (combo_[j] + 1 < limit) break;
            ++j;
        }
        if (j == d) {
            done_ = true;
            return false;
        }
        ++combo_[j];
        for (std::size_t i = 0; i < j; ++i) combo_[i] = i;
    }
    double norm_product = 1.0;
    for (std::size_t r = 0; r < d; ++r) {
        const auto src = w_.row(combo_[r]);
        std::copy(src.begin(), src.end(), scratch_.begin() + r * d);
        norm_product *= norms_[combo_[r]];
    }
    out.rows = combo_;
    out.value = lu_determinant(scratch_, d);
    out.row_norm_product = norm_product;
    return true;
}

std::vector<Minor> maximal_minors(const WeightMatrix& w, std::uint64_t budget) {
    MinorEnumerator it(w, budget);
    std::vector<Minor> out;
    out.reserve(it.count());
    Minor m;
    while (it.next(m)) out.push_back(m);
    return out;
}

bool is_general_position(const WeightMatrix& w, double tau_det, std::uint64_t budget) {
    MinorEnumerator it(w, budget);
    Minor m;
    while (it.next(m)) {
        if (std::abs(m.value) < tau_det * m.row_norm_product) return false;
    }
    return true;
}

std::string_view to_string(GrVerdict verdict) noexcept {
    switch (verdict) {
        case GrVerdict::UniformPositive: return "UniformPositive";
        case GrVerdict::UniformNegative: return "UniformNegative";
        case GrVerdict::MixedSigns: return "MixedSigns";
        case GrVerdict::Degenerate: return "Degenerate";
    }
    return "Degenerate";
}

GrStatus gr_plus_status(const WeightMatrix& w, double tau_det, std::uint64_t budget) {
    MinorEnumerator it(w, budget);
    GrStatus status;
    status.min_abs_minor = INFINITY;
    status.min_relative_minor = INFINITY;
    bool degenerate = false;
    Minor m;
    while (it.next(m)) {
        ++status.checked_minors;
        const double magnitude = std::abs(m.value);
        const double relative = m.row_norm_product > 0.0 ? magnitude / m.row_norm_product : 0.0;
        status.min_abs_minor = std::min(status.min_abs_minor, magnitude);
        status.min_relative_minor = std::min(status.min_relative_minor, relative);
        if (relative < tau_det) degenerate = true;
        if (m.value > 0.0) ++status.positive_minors;
        if (m.value < 0.0) ++status.negative_minors;
    }
    if (degenerate) {
        status.verdict = GrVerdict::Degenerate;
    } else if (status.negative_minors == 0) {
        status.verdict = GrVerdict::UniformPositive;
    } else if (status.positive_minors == 0) {
        status.verdict = GrVerdict::UniformNegative;
    } else {
        status.verdict = GrVerdict::MixedSigns;
    }
    return status;
}

std::string BoundaryError::message() const {
    std::string out = "input lies on the hyperplane of row";
    out += rows.size() == 1 ? " " : "s ";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(rows[i] + 1);
    }
    return out;
}

SignResult sign_vector(const WeightMatrix& w, std::span<const double> x, double tau_sign) {
    if (x.size() != w.d()) {
        throw DimensionError("sign_vector: x has length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(w.d()));
    }
    std::vector<std::int8_t> signs(w.n());
    BoundaryError boundary;
    for (std::size_t i = 0; i < w.n(); ++i) {
        const double z = dot(w.row(i), x);
        if (!std::isfinite(z)) throw DomainError("sign_vector: non-finite logit");
        if (std::abs(z) < tau_sign) {
            boundary.rows.push_back(i);
            continue;
        }
        signs[i] = z > 0.0 ? 1 : -1;
    }
    if (!boundary.rows.empty()) return boundary;
    return LabelAssignment(std::move(signs));
}

std::vector<double> perturb(std::span<const double> x, std::uint64_t seed, double scale) {
    const double x_norm = norm2(x);
    const double magnitude = x_norm > 0.0 ? scale * x_norm : scale;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v += magnitude * unit(rng);
    return out;
}

SignResult sign_vector_perturbed(const WeightMatrix& w, std::span<const double> x,
                                 std::uint64_t seed, std::size_t max_attempts,
                                 double tau_sign) {
    SignResult result = sign_vector(w, x, tau_sign);
    for (std::size_t attempt = 0;
         attempt < max_attempts && std::holds_alternative<BoundaryError>(result); ++attempt) {
        const auto moved = perturb(x, seed + attempt);
        result = sign_vector(w, moved, tau_sign);
    }
    return result;
}

}  // namespace sigbound
