#pragma once

// Naive metric reimplementation: ranks are computed label by label by
// counting how many labels beat it, with no sorting at all.

#include "sigbound/metrics.hpp"

#include <cmath>
#include <vector>

namespace sigbound::testing {

inline std::size_t naive_rank(const std::vector<double>& s, std::size_t i) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (s[j] > s[i] || (s[j] == s[i] && j < i)) ++r;
    return r;  // 0 = best
}

struct NaiveAtK {
    double p = 0, r = 0, f1 = 0, ndcg = 0;
};

inline NaiveAtK naive_metrics(const std::vector<PredictionRecord>& recs, std::size_t k) {
    NaiveAtK out;
    double ndcg_sum = 0;
    std::size_t ndcg_n = 0;
    for (const auto& rec : recs) {
        const std::size_t n = rec.scores.size();
        double hit = 0, rel = 0, dcg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool g = rec.gold[i] > 0;
            rel += g;
            const std::size_t rk = naive_rank(rec.scores, i);
            if (g && rk < k) {
                hit += 1;
                dcg += 1.0 / std::log2(rk + 2.0);
            }
        }
        out.p += hit / k;
        out.r += rel == 0 ? 1.0 : hit / rel;
        if (rel > 0) {
            double ideal = 0;
            for (std::size_t q = 0; q < k && q < rel; ++q) ideal += 1.0 / std::log2(q + 2.0);
            ndcg_sum += dcg / ideal;
            ++ndcg_n;
        }
    }
    out.p /= recs.size();
    out.r /= recs.size();
    out.f1 = out.p + out.r == 0 ? 0 : 2 * out.p * out.r / (out.p + out.r);
    out.ndcg = ndcg_n ? ndcg_sum / ndcg_n : 0;
    return out;
}

}  // namespace sigbound::testing
