#include "sigbound/verifier.hpp"

#include "sigbound/error.hpp"
#include "sigbound/simplex.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace sigbound {

void LpConfig::validate() const {
    if (!(box_bound > 0.0) || !std::isfinite(box_bound)) {
        throw DomainError("box bound must be positive and finite");
    }
    if (!(solver_feas_tol > 0.0)) throw DomainError("solver feasibility tolerance must be > 0");
    if (!(eps_floor > solver_feas_tol)) {
        throw DomainError("eps floor must exceed the solver feasibility tolerance");
    }
}

std::string_view to_string(VerifyStatus status) noexcept {
    switch (status) {
        case VerifyStatus::Argmaxable: return "argmaxable";
        case VerifyStatus::NotEpsArgmaxable: return "not_eps_argmaxable";
        case VerifyStatus::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

ChebyshevVerifier::ChebyshevVerifier(const WeightMatrix& w, LpConfig config)
    : w_(w), config_(config), norms_(w.row_norms()) {
    config_.validate();
    for (std::size_t i = 0; i < norms_.size(); ++i) {
        if (!(norms_[i] > 0.0)) {
            throw DomainError("row " + std::to_string(i + 1) +
                              " of the weight matrix has zero norm");
        }
    }
}

VerifyResult ChebyshevVerifier::verify(const LabelAssignment& y) const {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = w_.n();
    const std::size_t d = w_.d();
    if (y.size() != n) {
        throw DimensionError("label assignment has " + std::to_string(y.size()) +
                             " labels, matrix has " + std::to_string(n) + " rows");
    }

    // Scaled problem: x = box * (u - v) with u, v in [0, 1]^d, eps = box * e,
    // every halfspace row normalized to a unit normal.
    // Variables [u (d) | v (d) | e]; rows [halfspaces (n) | u <= 1 (d) | v <= 1 (d)].
    const std::size_t vars = 2 * d + 1;
    lp::Problem problem{Matrix(n + 2 * d, vars), std::vector<double>(n + 2 * d, 0.0),
                        std::vector<double>(vars, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = static_cast<double>(y[i]) / norms_[i];
        const auto wi = w_.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            problem.a(i, j) = -scale * wi[j];
            problem.a(i, d + j) = scale * wi[j];
        }
        problem.a(i, 2 * d) = 1.0;
    }
    for (std::size_t j = 0; j < 2 * d; ++j) {
        problem.a(n + j, j) = 1.0;
        problem.b[n + j] = 1.0;
    }
    problem.c[2 * d] = 1.0;

    lp::Options options;
    options.feasibility_tol = config_.solver_feas_tol;
    const lp::Solution sol = lp::solve(problem, options);

    VerifyResult result;
    result.lp_iterations = sol.iterations;
    const auto finish = [&](VerifyResult r) {
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    };

    if (sol.status != lp::Status::Optimal) {
        result.status = VerifyStatus::Indeterminate;
        result.reason = "LP solver stopped with status " + std::string(lp::to_string(sol.status));
        return finish(std::move(result));
    }

    const double box = config_.box_bound;
    std::vector<double> x(d);
    for (std::size_t j = 0; j < d; ++j) {
        x[j] = std::clamp(box * (sol.primal[j] - sol.primal[d + j]), -box, box);
    }
    double achieved = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        achieved = std::min(achieved, static_cast<double>(y[i]) * dot(w_.row(i), x) / norms_[i]);
    }

    // Weak duality with the variable upper bounds u, v <= 1 and e <= sqrt(d)
    // absorbing any residual dual infeasibility.
    std::vector<double> dual(sol.dual.size());
    for (std::size_t r = 0; r < dual.size(); ++r) dual[r] = std::max(0.0, sol.dual[r]);
    double bound = 0.0;
    for (std::size_t r = n; r < n + 2 * d; ++r) bound += dual[r];
    for (std::size_t j = 0; j < vars; ++j) {
        double reduced = problem.c[j];
        for (std::size_t r = 0; r < dual.size(); ++r) reduced -= dual[r] * problem.a(r, j);
        const double upper = j < 2 * d ? 1.0 : std::sqrt(static_cast<double>(d));
        bound += std::max(0.0, reduced) * upper;
    }
    result.radius_upper_bound = box * bound;

    if (achieved >= config_.eps_floor) {
        result.status = VerifyStatus::Argmaxable;
        result.radius = achieved;
        for (double xj : x) {
            if (std::abs(xj) + achieved > box) result.ball_exceeds_box = true;
        }
        result.witness = std::move(x);
    } else if (result.radius_upper_bound < config_.eps_floor) {
        result.status = VerifyStatus::NotEpsArgmaxable;
    } else {
        result.status = VerifyStatus::Indeterminate;
        result.reason = "optimal radius not separated from the eps floor (witness " +
                        std::to_string(achieved) + ", dual bound " +
                        std::to_string(result.radius_upper_bound) + ")";
    }
    return finish(std::move(result));
}

VerifyResult chebyshev_verify(const WeightMatrix& w, const LabelAssignment& y,
                              const LpConfig& config) {
    return ChebyshevVerifier(w, config).verify(y);
}

namespace {

void tally(BatchSummary& summary, const VerifyResult& r, bool input_error) {
    switch (r.status) {
        case VerifyStatus::Argmaxable:
            ++summary.argmaxable;
            if (r.radius >= 1.0) ++summary.one_argmaxable;
            break;
        case VerifyStatus::NotEpsArgmaxable: ++summary.not_eps; break;
        case VerifyStatus::Indeterminate:
            ++summary.indeterminate;
            if (input_error) ++summary.errors;
            break;
    }
}

}  // namespace

BatchResult verify_batch(const WeightMatrix& w, std::span<const LabelAssignment> ys,
                         const LpConfig& config, std::size_t jobs) {
    BatchResult out;
    out.results.resize(ys.size());
    if (ys.empty()) return out;

    const ChebyshevVerifier verifier(w, config);
    std::vector<char> input_error(ys.size(), 0);
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
        for (std::size_t idx = cursor++; idx < ys.size(); idx = cursor++) {
            try {
                out.results[idx] = verifier.verify(ys[idx]);
            } catch (const Error& e) {
                out.results[idx].status = VerifyStatus::Indeterminate;
                out.results[idx].reason = std::string("input error: ") + e.what();
                input_error[idx] = 1;
            }
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, ys.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < ys.size(); ++i) tally(out.summary, out.results[i], input_error[i]);
    return out;
}

double nearest_rank_percentile(std::span<const double> ascending, double p) {
    if (ascending.empty()) throw DomainError("percentile of an empty sequence");
    if (!(p >= 0.0 && p <= 100.0)) throw DomainError("percentile must lie in [0, 100]");
    const double m = static_cast<double>(ascending.size());
    const double rank = std::ceil(p / 100.0 * m);
    const std::size_t idx = rank < 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
    return ascending[std::min(idx, ascending.size() - 1)];
}

RadiusReport radius_report(const WeightMatrix& w, const FamilySpec& family,
                           const LpConfig& config, std::span<const double> percentiles,
                           std::size_t jobs, std::uint64_t budget) {
    for (double p : percentiles) {
        if (!(p >= 0.0 && p <= 100.0)) throw DomainError("percentile must lie in [0, 100]");
    }
    const auto members = enumerate_family(family, budget);
    const BatchResult batch = verify_batch(w, members, config, jobs);

    RadiusReport report;
    report.summary = batch.summary;
    report.sorted_radii.reserve(batch.results.size());
    for (const auto& r : batch.results) report.sorted_radii.push_back(r.argmaxable() ? r.radius : 0.0);
    std::sort(report.sorted_radii.begin(), report.sorted_radii.end());
    for (double p : percentiles) {
        report.rows.push_back({p, nearest_rank_percentile(report.sorted_radii, p)});
    }
    return report;
}

}  // namespace sigbound
