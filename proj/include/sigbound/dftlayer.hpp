#pragma once

// Truncated-DFT output layers: the fixed n x (2k+1) trigonometric matrix,
// random slack columns, logits by direct product or by an inverse real FFT,
// and the bias vector that starts every label at probability k/n.

#include "sigbound/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sigbound {

struct DftSpec {
    std::size_t n = 0;   // labels
    std::size_t k = 1;   // highest retained frequency == max active labels
    std::size_t s = 0;   // slack columns
    std::uint64_t seed = 0;

    std::size_t dft_columns() const noexcept { return 2 * k + 1; }
    std::size_t columns() const noexcept { return dft_columns() + s; }

    /// Throws DomainError unless k >= 1 and 2k+1 <= n.
    void validate() const;
};

/// Named (n, k) settings for common benchmark label spaces.
struct DftPreset {
    std::string_view name;
    std::size_t n;
    std::size_t k;
};

/// MIMIC-III (n=8921, k=80), BioASQ (k=50), OpenImages (k=50). BioASQ and
/// OpenImages carry n=0: their label count depends on the dataset release
/// and must be supplied by the caller.
std::span<const DftPreset> dft_presets() noexcept;

/// W^DFT_{n,2k+1}: column 0 is 1/sqrt(n); columns 2j-1, 2j are
/// sqrt(2/n) cos(j t_i), sqrt(2/n) sin(j t_i) with t_i = 2 pi i / n
/// (0-based i). Columns are orthonormal.
WeightMatrix build_dft_matrix(std::size_t n, std::size_t k);

/// n x s block of iid N(0, 1/n) entries from a seeded mt19937_64 stream.
Matrix slack_block(std::size_t n, std::size_t s, std::uint64_t seed);

/// [W S] with S = slack_block(W.n(), s, seed). Original columns are copied
/// verbatim. s = 0 returns W unchanged.
WeightMatrix augment_slack(const WeightMatrix& w, std::size_t s, std::uint64_t seed);

/// The full [W^DFT S] matrix of a spec.
WeightMatrix build_layer_matrix(const DftSpec& spec);

/// z = W x by plain matrix-vector product.
std::vector<double> logits_direct(const WeightMatrix& w, std::span<const double> x);

/// z = iRFFT(x[0:2k+1]) + S x[2k+1:], where the DFT part is evaluated as a
/// length-n real inverse transform whose only nonzero bins are 0..k.
/// `slack` must be n x spec.s.
std::vector<double> logits_fft(const DftSpec& spec, const Matrix& slack,
                               std::span<const double> x);

/// Projection bias [sqrt(n) logit(k/n), 0, ..., 0] of length 2k+1+s.
/// Throws DomainError unless 0 < k < n.
std::vector<double> bias_init(std::size_t n, std::size_t k, std::size_t s = 0);

double logit(double p);
double sigmoid(double z);

}  // namespace sigbound
