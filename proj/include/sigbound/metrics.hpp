#pragma once

// Multi-label evaluation metrics over scored predictions.
//
// Rankings sort labels by descending score; equal scores rank the lower
// label index first.

#include "sigbound/labelspace.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sigbound {

struct PredictionRecord {
    std::vector<double> scores;  // per-label probability or logit
    LabelAssignment gold;

    /// Throws DimensionError / DomainError on length mismatch or non-finite scores.
    void validate() const;
};

/// Label indices (0-based) of the k highest scores, best first.
std::vector<std::size_t> top_k(std::span<const double> scores, std::size_t k);

struct AtKMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;               // harmonic mean of the averaged precision and recall
    double f1_per_record = 0.0;    // mean of per-record harmonic means
    std::size_t records = 0;
    std::size_t empty_gold = 0;    // records whose gold set is empty (recall taken as 1)
};

/// Prec@k, Rec@k and F1@k averaged over records.
/// Throws DomainError on an empty record list or k outside [1, n].
AtKMetrics prec_rec_f1_at_k(std::span<const PredictionRecord> records, std::size_t k);

struct F1Metrics {
    double micro = 0.0;
    double macro = 0.0;
    std::size_t zero_support_labels = 0;  // labels never active in gold (F1 taken as 0)
};

/// Thresholded F1: a label is predicted active when score > threshold.
F1Metrics micro_macro_f1(std::span<const PredictionRecord> records, double threshold = 0.5);

struct NdcgMetrics {
    double value = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // records with an empty gold set
};

/// nDCG@k with binary gains and 1/log2(rank+1) discount; k larger than n
/// is clamped to n.
NdcgMetrics ndcg_at_k(std::span<const PredictionRecord> records, std::size_t k);

}  // namespace sigbound
