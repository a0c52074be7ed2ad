#include "sigbound/metrics.hpp"

#include "sigbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sigbound {

void PredictionRecord::validate() const {
    if (scores.size() != gold.size()) {
        throw DimensionError("prediction has " + std::to_string(scores.size()) +
                             " scores but gold has " + std::to_string(gold.size()) + " labels");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw DomainError("prediction score is not finite");
    }
}

std::vector<std::size_t> top_k(std::span<const double> scores, std::size_t k) {
    k = std::min(k, scores.size());
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

namespace {

// Exact when p == r; the general formula can be off by an ulp there.
double harmonic(double p, double r) {
    if (p == r) return p;
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

void require_records(std::span<const PredictionRecord> records) {
    if (records.empty()) throw DomainError("metrics need at least one record");
    const std::size_t n = records.front().gold.size();
    for (const auto& r : records) {
        r.validate();
        if (r.gold.size() != n) throw DimensionError("records disagree on the label count");
    }
}

}  // namespace

AtKMetrics prec_rec_f1_at_k(std::span<const PredictionRecord> records, std::size_t k) {
    require_records(records);
    const std::size_t n = records.front().gold.size();
    if (k == 0 || k > n) {
        throw DomainError("k must lie in [1, n] (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
    }
    AtKMetrics out;
    double p_sum = 0.0;
    double r_sum = 0.0;
    double f_sum = 0.0;
    for (const auto& rec : records) {
        std::size_t correct = 0;
        for (std::size_t label : top_k(rec.scores, k)) {
            if (rec.gold.active(label)) ++correct;
        }
        const std::size_t relevant = act(rec.gold);
        const double p = static_cast<double>(correct) / static_cast<double>(k);
        double r = 1.0;
        if (relevant == 0) {
            ++out.empty_gold;
        } else {
            r = static_cast<double>(correct) / static_cast<double>(relevant);
        }
        p_sum += p;
        r_sum += r;
        f_sum += harmonic(p, r);
    }
    const double m = static_cast<double>(records.size());
    out.records = records.size();
    out.precision = p_sum / m;
    out.recall = r_sum / m;
    out.f1 = harmonic(out.precision, out.recall);
    out.f1_per_record = f_sum / m;
    return out;
}

F1Metrics micro_macro_f1(std::span<const PredictionRecord> records, double threshold) {
    require_records(records);
    const std::size_t n = records.front().gold.size();
    std::vector<std::size_t> tp(n, 0), fp(n, 0), fn(n, 0);
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool predicted = rec.scores[i] > threshold;
            const bool gold = rec.gold.active(i);
            if (predicted && gold) ++tp[i];
            if (predicted && !gold) ++fp[i];
            if (!predicted && gold) ++fn[i];
        }
    }
    F1Metrics out;
    std::size_t tp_all = 0, fp_all = 0, fn_all = 0;
    double macro_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tp_all += tp[i];
        fp_all += fp[i];
        fn_all += fn[i];
        if (tp[i] + fn[i] == 0) {
            ++out.zero_support_labels;
            continue;
        }
        macro_sum += 2.0 * static_cast<double>(tp[i]) /
                     static_cast<double>(2 * tp[i] + fp[i] + fn[i]);
    }
    const std::size_t denom = 2 * tp_all + fp_all + fn_all;
    out.micro = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp_all) / static_cast<double>(denom);
    out.macro = macro_sum / static_cast<double>(n);
    return out;
}

NdcgMetrics ndcg_at_k(std::span<const PredictionRecord> records, std::size_t k) {
    require_records(records);
    if (k == 0) throw DomainError("nDCG needs k >= 1");
    const std::size_t n = records.front().gold.size();
    k = std::min(k, n);
    NdcgMetrics out;
    double sum = 0.0;
    for (const auto& rec : records) {
        const std::size_t relevant = act(rec.gold);
        if (relevant == 0) {
            ++out.skipped;
            continue;
        }
        double dcg = 0.0;
        const auto ranked = top_k(rec.scores, k);
        for (std::size_t r = 0; r < ranked.size(); ++r) {
            if (rec.gold.active(ranked[r])) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
        }
        double ideal = 0.0;
        for (std::size_t r = 0; r < std::min(k, relevant); ++r) {
            ideal += 1.0 / std::log2(static_cast<double>(r) + 2.0);
        }
        sum += dcg / ideal;
        ++out.evaluated;
    }
    out.value = out.evaluated == 0 ? 0.0 : sum / static_cast<double>(out.evaluated);
    return out;
}

}  // namespace sigbound
