#include "sigbound/dftlayer.hpp"

#include "sigbound/error.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

namespace sigbound {

void DftSpec::validate() const {
    if (k == 0) throw DomainError("DFT layer needs k >= 1");
    if (2 * k + 1 > n) {
        throw DomainError("DFT layer needs 2k+1 <= n (n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ")");
    }
}

std::span<const DftPreset> dft_presets() noexcept {
    static constexpr std::array<DftPreset, 3> kPresets{{
        {"mimic3", 8921, 80},
        {"bioasq", 0, 50},
        {"openimages", 0, 50},
    }};
    return kPresets;
}

WeightMatrix build_dft_matrix(std::size_t n, std::size_t k) {
    DftSpec spec{n, k, 0, 0};
    spec.validate();
    const std::size_t d = spec.dft_columns();
    Matrix m(n, d);
    const double dc = 1.0 / std::sqrt(static_cast<double>(n));
    const double ac = std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m(i, 0) = dc;
        for (std::size_t f = 1; f <= k; ++f) {
            // Reduce f*i mod n before scaling so large n keep full angle accuracy.
            const double angle = 2.0 * std::numbers::pi *
                                 static_cast<double>((f * i) % n) / static_cast<double>(n);
            m(i, 2 * f - 1) = ac * std::cos(angle);
            m(i, 2 * f) = ac * std::sin(angle);
        }
    }
    Provenance p;
    p.kind = ProvenanceKind::Dft;
    p.k = k;
    return WeightMatrix(std::move(m), p);
}

Matrix slack_block(std::size_t n, std::size_t s, std::uint64_t seed) {
    Matrix out(n, s);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < s; ++j) out(i, j) = gauss(rng);
    }
    return out;
}

WeightMatrix augment_slack(const WeightMatrix& w, std::size_t s, std::uint64_t seed) {
    if (s == 0) return w;
    Provenance p = w.provenance();
    p.kind = ProvenanceKind::DftWithSlack;
    p.slack_columns += s;
    p.seed = seed;
    return WeightMatrix(hconcat(w.values(), slack_block(w.n(), s, seed)), p);
}

WeightMatrix build_layer_matrix(const DftSpec& spec) {
    return augment_slack(build_dft_matrix(spec.n, spec.k), spec.s, spec.seed);
}

std::vector<double> logits_direct(const WeightMatrix& w, std::span<const double> x) {
    return multiply(w.values(), x);
}

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

}  // namespace

std::vector<double> logits_fft(const DftSpec& spec, const Matrix& slack,
                               std::span<const double> x) {
    spec.validate();
    if (x.size() != spec.columns()) {
        throw DimensionError("logits_fft: x has length " + std::to_string(x.size()) +
                             ", expected 2k+1+s = " + std::to_string(spec.columns()));
    }
    if (slack.rows() != (spec.s == 0 ? slack.rows() : spec.n) || slack.cols() != spec.s) {
        throw DimensionError("logits_fft: slack block must be n x s");
    }

    const std::size_t n = spec.n;
    const std::size_t bins = n / 2 + 1;
    std::unique_ptr<fftw_complex, FftwDeleter> spectrum(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
    std::unique_ptr<double, FftwDeleter> signal(
        static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    if (!spectrum || !signal) throw std::bad_alloc();

    // c2r computes z_t = X_0 + 2 sum_f Re(X_f e^{i f t}) for f < n/2. Matching
    // against x_0/sqrt(n) + sqrt(2/n) sum_f (a_f cos f t + b_f sin f t) gives
    // X_0 = x_0/sqrt(n) and X_f = sqrt(2/n)/2 * (a_f - i b_f).
    const double dc = 1.0 / std::sqrt(static_cast<double>(n));
    const double half_ac = 0.5 * std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t f = 0; f < bins; ++f) {
        spectrum.get()[f][0] = 0.0;
        spectrum.get()[f][1] = 0.0;
    }
    spectrum.get()[0][0] = dc * x[0];
    for (std::size_t f = 1; f <= spec.k; ++f) {
        spectrum.get()[f][0] = half_ac * x[2 * f - 1];
        spectrum.get()[f][1] = -half_ac * x[2 * f];
    }

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.get(), signal.get(),
                                    FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("logits_fft: FFTW planning failed");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> z(signal.get(), signal.get() + n);
    const auto slack_x = x.subspan(spec.dft_columns());
    if (spec.s > 0) {
        for (std::size_t i = 0; i < n; ++i) z[i] += dot(slack.row(i), slack_x);
    }
    return z;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<double> bias_init(std::size_t n, std::size_t k, std::size_t s) {
    if (k == 0 || k >= n) {
        throw DomainError("bias_init needs 0 < k < n (n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ")");
    }
    std::vector<double> b(2 * k + 1 + s, 0.0);
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    b[0] = std::sqrt(nd) * std::log(kd / (nd - kd));
    return b;
}

}  // namespace sigbound
