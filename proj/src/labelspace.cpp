#include "sigbound/labelspace.hpp"

#include "sigbound/error.hpp"

#include <algorithm>

namespace sigbound {

LabelAssignment::LabelAssignment(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
    if (signs_.empty()) throw DomainError("label assignment must have at least one label");
    for (std::size_t i = 0; i < signs_.size(); ++i) {
        if (signs_[i] != 1 && signs_[i] != -1) {
            throw DomainError("label assignment entry " + std::to_string(i + 1) +
                              " is not +1 or -1");
        }
    }
}

LabelAssignment LabelAssignment::all_inactive(std::size_t n) {
    return LabelAssignment(std::vector<std::int8_t>(n, -1));
}

LabelAssignment LabelAssignment::from_dense(std::string_view text) {
    static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
    std::vector<std::int8_t> signs;
    signs.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '+') {
            signs.push_back(1);
            ++i;
        } else if (text[i] == '-') {
            signs.push_back(-1);
            ++i;
        } else if (text.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
            signs.push_back(-1);
            i += kUnicodeMinus.size();
        } else {
            throw DomainError("illegal character at offset " + std::to_string(i + 1) +
                              " in dense label assignment");
        }
    }
    return LabelAssignment(std::move(signs));
}

LabelAssignment LabelAssignment::from_active(std::size_t n, std::span<const std::size_t> active) {
    if (n == 0) throw DomainError("label assignment must have at least one label");
    std::vector<std::int8_t> signs(n, -1);
    for (std::size_t index : active) {
        if (index < 1 || index > n) {
            throw DomainError("active index " + std::to_string(index) + " out of range 1.." +
                              std::to_string(n));
        }
        signs[index - 1] = 1;
    }
    return LabelAssignment(std::move(signs));
}

std::string LabelAssignment::to_dense() const {
    std::string out(signs_.size(), '-');
    for (std::size_t i = 0; i < signs_.size(); ++i) {
        if (signs_[i] > 0) out[i] = '+';
    }
    return out;
}

std::vector<std::size_t> LabelAssignment::active_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < signs_.size(); ++i) {
        if (signs_[i] > 0) out.push_back(i + 1);
    }
    return out;
}

LabelAssignment LabelAssignment::flipped() const {
    std::vector<std::int8_t> signs(signs_);
    for (auto& s : signs) s = static_cast<std::int8_t>(-s);
    return LabelAssignment(std::move(signs));
}

std::size_t LabelAssignmentHash::operator()(const LabelAssignment& y) const noexcept {
    // FNV-1a over the sign bytes.
    std::uint64_t h = 1469598103934665603ull;
    for (auto s : y.signs()) {
        h ^= static_cast<std::uint8_t>(s);
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

std::size_t act(const LabelAssignment& y) noexcept {
    auto signs = y.signs();
    return static_cast<std::size_t>(std::count(signs.begin(), signs.end(), std::int8_t{1}));
}

std::size_t alt(const LabelAssignment& y) noexcept {
    std::size_t changes = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i] != y[i - 1]) ++changes;
    }
    return changes;
}

std::string_view to_string(FamilyKind kind) noexcept {
    return kind == FamilyKind::Active ? "active" : "alternating";
}

std::optional<FamilyKind> parse_family_kind(std::string_view text) noexcept {
    if (text == "active") return FamilyKind::Active;
    if (text == "alternating") return FamilyKind::Alternating;
    return std::nullopt;
}

void FamilySpec::validate() const {
    if (n == 0) throw DomainError("family needs n >= 1");
    if (kind == FamilyKind::Active && k > n) {
        throw DomainError("k-active family needs k <= n");
    }
    if (kind == FamilyKind::Alternating && k > n - 1) {
        throw DomainError("k-alternating family needs k <= n-1");
    }
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt out = 1;
    for (std::uint64_t j = 0; j < k; ++j) {
        out *= n - j;
        out /= j + 1;
    }
    return out;
}

namespace {

// sum_{j=0}^{upper} C(m, j), accumulated with the multiplicative recurrence.
BigInt binomial_prefix_sum(std::uint64_t m, std::uint64_t upper) {
    upper = std::min(upper, m);
    BigInt term = 1;
    BigInt sum = 1;
    for (std::uint64_t j = 0; j < upper; ++j) {
        term *= m - j;
        term /= j + 1;
        sum += term;
    }
    return sum;
}

}  // namespace

BigInt count_family(const FamilySpec& spec) {
    spec.validate();
    if (spec.kind == FamilyKind::Active) return binomial_prefix_sum(spec.n, spec.k);
    return 2 * binomial_prefix_sum(spec.n - 1, spec.k);
}

BigInt cover_count(std::uint64_t n, std::uint64_t d) {
    if (n == 0 || d == 0) throw DomainError("cover count needs n >= 1 and d >= 1");
    return 2 * binomial_prefix_sum(n - 1, d - 1);
}

FamilyEnumerator::FamilyEnumerator(FamilySpec spec, std::uint64_t budget) : spec_(spec) {
    BigInt count = count_family(spec_);
    if (count > budget) {
        throw BudgetExceeded("family " + std::string(to_string(spec_.kind)) + "(n=" +
                                 std::to_string(spec_.n) + ", k=" + std::to_string(spec_.k) +
                                 ") exceeds enumeration budget " + std::to_string(budget),
                             count.str());
    }
    total_ = count.convert_to<std::uint64_t>();
}

bool FamilyEnumerator::advance_combination() {
    const std::size_t universe =
        spec_.kind == FamilyKind::Active ? spec_.n : spec_.n - 1;
    const std::size_t j = combo_.size();
    for (std::size_t pos = j; pos-- > 0;) {
        if (combo_[pos] < universe - j + pos) {
            ++combo_[pos];
            for (std::size_t q = pos + 1; q < j; ++q) combo_[q] = combo_[q - 1] + 1;
            return true;
        }
    }
    return false;
}

LabelAssignment FamilyEnumerator::materialize() const {
    std::vector<std::int8_t> signs(spec_.n, -1);
    if (spec_.kind == FamilyKind::Active) {
        for (std::size_t p : combo_) signs[p] = 1;
    } else {
        std::int8_t current = negative_first_ ? -1 : 1;
        std::size_t next_flip = 0;
        for (std::size_t i = 0; i < spec_.n; ++i) {
            signs[i] = current;
            if (next_flip < combo_.size() && combo_[next_flip] == i) {
                current = static_cast<std::int8_t>(-current);
                ++next_flip;
            }
        }
    }
    return LabelAssignment(std::move(signs));
}

bool FamilyEnumerator::next(LabelAssignment& out) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        level_ = 0;
        combo_.clear();
        negative_first_ = true;
        out = materialize();
        return true;
    }
    if (spec_.kind == FamilyKind::Alternating && negative_first_) {
        negative_first_ = false;
        out = materialize();
        return true;
    }
    negative_first_ = true;
    if (!advance_combination()) {
        ++level_;
        if (level_ > spec_.k) {
            done_ = true;
            return false;
        }
        combo_.resize(level_);
        for (std::size_t i = 0; i < level_; ++i) combo_[i] = i;
    }
    out = materialize();
    return true;
}

std::vector<LabelAssignment> enumerate_family(const FamilySpec& spec, std::uint64_t budget) {
    FamilyEnumerator it(spec, budget);
    std::vector<LabelAssignment> out;
    out.reserve(it.size());
    LabelAssignment y = LabelAssignment::all_inactive(spec.n);
    while (it.next(y)) out.push_back(y);
    return out;
}

}  // namespace sigbound
