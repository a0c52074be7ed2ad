#include "sigbound/oracle.hpp"

#include "sigbound/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>
#include <unordered_set>

namespace sigbound {

std::string_view to_string(RegionMethod method) noexcept {
    switch (method) {
        case RegionMethod::Exact2D: return "exact2d";
        case RegionMethod::SampledComplete: return "sampled_complete";
        case RegionMethod::SampledPartial: return "sampled_partial";
    }
    return "sampled_partial";
}

bool in_general_position(const WeightMatrix& w, double tau_det) {
    if (w.n() >= w.d()) return is_general_position(w, tau_det);
    // Fewer rows than columns: rows must be independent, i.e. a nonsingular Gram matrix.
    const auto norms = w.row_norms();
    Matrix gram(w.n(), w.n());
    double scale = 1.0;
    for (std::size_t i = 0; i < w.n(); ++i) {
        if (norms[i] == 0.0) return false;
        scale *= norms[i] * norms[i];
        for (std::size_t j = 0; j < w.n(); ++j) gram(i, j) = dot(w.row(i), w.row(j));
    }
    return std::abs(determinant(gram)) >= tau_det * scale;
}

RegionSet enumerate_regions_2d(const WeightMatrix& w, double tau_det) {
    if (w.d() != 2) throw DomainError("enumerate_regions_2d needs d = 2");
    const auto norms = w.row_norms();
    for (std::size_t i = 0; i < w.n(); ++i) {
        if (norms[i] == 0.0) throw DegeneracyError("row " + std::to_string(i + 1) + " is zero");
        for (std::size_t j = 0; j < i; ++j) {
            const double cross = w(i, 0) * w(j, 1) - w(i, 1) * w(j, 0);
            if (std::abs(cross) < tau_det * norms[i] * norms[j]) {
                throw DegeneracyError("rows " + std::to_string(j + 1) + " and " +
                                      std::to_string(i + 1) + " are collinear");
            }
        }
    }

    // Each line w_i^T x = 0 crosses the unit circle at the normal's angle +- pi/2.
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> cuts;
    cuts.reserve(2 * w.n());
    for (std::size_t i = 0; i < w.n(); ++i) {
        const double a = std::atan2(w(i, 1), w(i, 0)) + 0.5 * std::numbers::pi;
        cuts.push_back(std::fmod(a + two_pi, two_pi));
        cuts.push_back(std::fmod(a + std::numbers::pi + two_pi, two_pi));
    }
    std::sort(cuts.begin(), cuts.end());

    RegionSet out;
    out.n = w.n();
    out.d = 2;
    out.method = RegionMethod::Exact2D;
    out.general_position = true;
    for (std::size_t s = 0; s < cuts.size(); ++s) {
        const double lo = cuts[s];
        const double hi = s + 1 < cuts.size() ? cuts[s + 1] : cuts[0] + two_pi;
        const double mid = 0.5 * (lo + hi);
        const double x[2] = {std::cos(mid), std::sin(mid)};
        std::vector<std::int8_t> signs(w.n());
        for (std::size_t i = 0; i < w.n(); ++i) {
            signs[i] = dot(w.row(i), x) > 0.0 ? 1 : -1;
        }
        out.members.insert(LabelAssignment(std::move(signs)));
    }
    return out;
}

namespace {

std::uint64_t pack(std::span<const std::int8_t> signs) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] > 0) key |= std::uint64_t{1} << i;
    }
    return key;
}

LabelAssignment unpack(std::uint64_t key, std::size_t n) {
    std::vector<std::int8_t> signs(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if ((key >> i) & 1u) signs[i] = 1;
    }
    return LabelAssignment(std::move(signs));
}

}  // namespace

RegionSet enumerate_regions_sampled(const WeightMatrix& w, std::uint64_t budget,
                                    std::uint64_t seed, std::size_t jobs) {
    const std::size_t n = w.n();
    const std::size_t d = w.d();
    if (n > 64) throw DomainError("enumerate_regions_sampled supports n <= 64");

    RegionSet out;
    out.n = n;
    out.d = d;
    try {
        out.general_position = in_general_position(w);
    } catch (const BudgetExceeded&) {
        out.general_position = false;
    }
    std::uint64_t target = 0;  // 0: no completeness certificate available
    if (out.general_position) {
        const BigInt count = cover_count(n, d);
        if (count <= std::numeric_limits<std::uint64_t>::max()) {
            target = count.convert_to<std::uint64_t>();
        }
    }

    const auto norms = w.row_norms();
    const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::unordered_set<std::uint64_t> global;
    std::mutex global_mutex;
    std::atomic<bool> complete{false};
    std::atomic<std::uint64_t> samples{0};
    std::atomic<std::uint64_t> boundary{0};

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::max<std::size_t>(1, std::min<std::size_t>(jobs, budget == 0 ? 1 : budget));

    const auto worker = [&](std::size_t t) {
        const std::uint64_t share = budget / jobs + (t < budget % jobs ? 1 : 0);
        std::seed_seq sequence{seed, static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(sequence);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> x(d);
        std::vector<std::int8_t> signs(n);
        std::unordered_set<std::uint64_t> local;
        std::uint64_t drawn = 0;
        std::uint64_t rejected = 0;

        const auto flush = [&] {
            std::lock_guard lock(global_mutex);
            global.insert(local.begin(), local.end());
            local.clear();
            if (target != 0 && global.size() >= target) complete = true;
        };

        for (std::uint64_t s = 0; s < share && !complete.load(std::memory_order_relaxed); ++s) {
            double xnorm = 0.0;
            do {
                for (double& v : x) v = gauss(rng);
                xnorm = norm2(x);
            } while (xnorm == 0.0);
            ++drawn;
            bool on_boundary = false;
            for (std::size_t i = 0; i < n; ++i) {
                const double z = dot(w.row(i), x);
                if (std::abs(z) < kDefaultSignTolerance * norms[i] * xnorm) {
                    on_boundary = true;
                    break;
                }
                signs[i] = z > 0.0 ? 1 : -1;
            }
            if (on_boundary) {
                ++rejected;
                continue;
            }
            // -x is an equally valid uniform draw and lands in the antipodal region.
            const std::uint64_t key = pack(signs);
            const bool fresh = local.insert(key).second;
            local.insert(~key & mask);
            if (fresh && target != 0 && jobs == 1 && local.size() >= target) complete = true;
            if (jobs > 1 && (drawn & 0xFFF) == 0) flush();
        }
        flush();
        samples += drawn;
        boundary += rejected;
    };

    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
    }

    for (std::uint64_t key : global) out.members.insert(unpack(key, n));
    out.samples_used = samples;
    out.boundary_draws = boundary;
    if (target != 0 && out.members.size() == target) {
        out.method = RegionMethod::SampledComplete;
    } else {
        out.method = RegionMethod::SampledPartial;
        out.budget_hit = out.samples_used >= budget;
    }
    return out;
}

CrossCheckReport cross_check(const WeightMatrix& w, const LpConfig& config,
                             std::uint64_t sample_budget, std::uint64_t seed, std::size_t jobs) {
    const std::size_t n = w.n();
    if (n > kCrossCheckMaxLabels) {
        throw DomainError("cross_check enumerates 2^n assignments and needs n <= " +
                          std::to_string(kCrossCheckMaxLabels));
    }
    CrossCheckReport report;
    bool exact = false;
    if (w.d() == 2) {
        try {
            report.oracle = enumerate_regions_2d(w);
            exact = true;
        } catch (const DegeneracyError&) {
        }
    }
    if (!exact) report.oracle = enumerate_regions_sampled(w, sample_budget, seed, jobs);

    std::vector<LabelAssignment> all;
    all.reserve(std::size_t{1} << n);
    for (std::uint64_t key = 0; key < (std::uint64_t{1} << n); ++key) all.push_back(unpack(key, n));
    const BatchResult batch = verify_batch(w, all, config, jobs);
    report.lp_argmaxable = batch.summary.argmaxable;
    report.lp_indeterminate = batch.summary.indeterminate;

    for (std::size_t i = 0; i < all.size(); ++i) {
        const bool lp_yes = batch.results[i].argmaxable();
        const bool oracle_yes = report.oracle.contains(all[i]);
        if (lp_yes && !oracle_yes) report.lp_yes_oracle_no.push_back(all[i]);
        if (!lp_yes && oracle_yes) {
            report.oracle_yes_lp_no.push_back(all[i]);
            report.oracle_yes_lp_no_bounds.push_back(batch.results[i].radius_upper_bound);
        }
    }
    return report;
}

}  // namespace sigbound
