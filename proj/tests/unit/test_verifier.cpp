#include "doctest.h"
#include "oracles.hpp"

#include "sigbound/dftlayer.hpp"
#include "sigbound/error.hpp"
#include "sigbound/verifier.hpp"

#include <algorithm>
#include <random>
#include <variant>

using namespace sigbound;

namespace {

bool witness_realizes(const WeightMatrix& w, const VerifyResult& r, const LabelAssignment& y) {
    const auto s = sign_vector(w, r.witness);
    return std::holds_alternative<LabelAssignment>(s) && std::get<LabelAssignment>(s) == y;
}

LabelAssignment random_k_active(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i + 1;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_int_distribution<std::size_t> howmany(0, k);
    idx.resize(howmany(rng));
    return LabelAssignment::from_active(n, idx);
}

}  // namespace

TEST_CASE("six-label trigonometric layer examples") {
    const auto w = build_dft_matrix(6, 1);
    const ChebyshevVerifier v(w);

    const auto one = LabelAssignment::from_dense("+-----");
    const auto r1 = v.verify(one);
    CHECK(r1.status == VerifyStatus::Argmaxable);
    CHECK(r1.radius >= 1e-8);
    CHECK(witness_realizes(w, r1, one));

    const auto r2 = v.verify(LabelAssignment::from_dense("+-+---"));
    CHECK(r2.status == VerifyStatus::NotEpsArgmaxable);
    CHECK(r2.radius_upper_bound < 1e-8);
    CHECK(r2.witness.empty());

    const auto r3 = v.verify(LabelAssignment::from_dense("------"));
    CHECK(r3.status == VerifyStatus::Argmaxable);
    CHECK(witness_realizes(w, r3, LabelAssignment::from_dense("------")));
}

TEST_CASE("batch over the six-label layer") {
    const auto w = build_dft_matrix(6, 1);

    const auto ones = enumerate_family({6, 1, FamilyKind::Active});
    std::vector<LabelAssignment> exactly_one(ones.begin() + 1, ones.end());
    const auto b1 = verify_batch(w, exactly_one);
    CHECK(b1.summary.argmaxable == 6);

    const auto all = testing::all_assignments(6);
    const auto b = verify_batch(w, all, {}, 2);
    CHECK(b.summary.argmaxable == 32);
    CHECK(b.summary.not_eps == 32);
    CHECK(b.summary.indeterminate == 0);
    for (std::size_t i = 0; i < all.size(); ++i) {
        CAPTURE(all[i].to_dense());
        // Argmaxable exactly when the sign sequence changes at most twice.
        CHECK(b.results[i].argmaxable() == (testing::naive_changes(all[i]) <= 2));
        if (b.results[i].argmaxable()) CHECK(witness_realizes(w, b.results[i], all[i]));
    }

    const auto empty = verify_batch(w, std::span<const LabelAssignment>{});
    CHECK(empty.results.empty());
    CHECK(empty.summary.argmaxable == 0);
}

TEST_CASE("batch records per-item input errors") {
    const auto w = build_dft_matrix(6, 1);
    std::vector<LabelAssignment> ys{LabelAssignment::from_dense("+-----"),
                                    LabelAssignment::from_dense("+--")};
    const auto b = verify_batch(w, ys);
    CHECK(b.summary.argmaxable == 1);
    CHECK(b.summary.indeterminate == 1);
    CHECK(b.summary.errors == 1);
    CHECK(b.results[1].reason.rfind("input error:", 0) == 0);
}

TEST_CASE("witnesses are sound on random matrices") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 5 + t % 4;
        const std::size_t d = 2 + t % 3;
        const WeightMatrix w(testing::gaussian_matrix(n, d, rng));
        const auto all = testing::all_assignments(n);
        const auto b = verify_batch(w, all);
        std::size_t yes = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (!b.results[i].argmaxable()) continue;
            ++yes;
            CHECK(witness_realizes(w, b.results[i], all[i]));
            // The reported radius is attained by the witness.
            double rmin = INFINITY;
            const auto z = multiply(w.values(), b.results[i].witness);
            for (std::size_t r = 0; r < n; ++r)
                rmin = std::min(rmin, all[i][r] * z[r] / norm2(w.values().row(r)));
            CHECK(rmin == doctest::Approx(b.results[i].radius).epsilon(1e-9));
        }
        // Random matrices are in general position almost surely.
        CHECK(BigInt(yes) == cover_count(n, d));
    }
}

TEST_CASE("verdicts are invariant under positive row scaling") {
    std::mt19937_64 rng(5);
    Matrix m = testing::gaussian_matrix(7, 3, rng);
    Matrix scaled = m;
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double c = scale(rng);
        for (std::size_t j = 0; j < m.cols(); ++j) scaled(i, j) *= c;
    }
    const WeightMatrix a(m), b(scaled);
    for (const auto& y : testing::all_assignments(7)) {
        CHECK(chebyshev_verify(a, y).status == chebyshev_verify(b, y).status);
    }
}

TEST_CASE("slack columns never remove argmaxable assignments") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        const WeightMatrix w(testing::gaussian_matrix(8, 3, rng));
        const auto all = testing::all_assignments(8);
        const auto base = verify_batch(w, all);
        for (std::size_t s : {1u, 4u}) {
            const auto wide = augment_slack(w, s, 100 + t);
            const auto more = verify_batch(wide, all);
            CHECK(more.summary.argmaxable >= base.summary.argmaxable);
            for (std::size_t i = 0; i < all.size(); ++i) {
                if (base.results[i].argmaxable()) CHECK(more.results[i].argmaxable());
            }
        }
    }
}

TEST_CASE("k-active assignments of a slack-augmented layer are argmaxable") {
    std::mt19937_64 rng(30);
    const auto w = augment_slack(build_dft_matrix(30, 3), 16, 7);
    const ChebyshevVerifier v(w);
    for (int t = 0; t < 60; ++t) {
        const auto y = random_k_active(30, 3, rng);
        CAPTURE(y.to_dense());
        const auto r = v.verify(y);
        CHECK(r.status == VerifyStatus::Argmaxable);
        CHECK(r.radius >= 1e-8);
    }
}

TEST_CASE("radius report") {
    const auto w = build_dft_matrix(6, 1);
    const std::vector<double> ps{0, 50, 100};
    const auto rep = radius_report(w, {6, 1, FamilyKind::Active}, {}, ps);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.sorted_radii.size() == 7);
    CHECK(rep.summary.argmaxable == 7);
    CHECK(std::is_sorted(rep.sorted_radii.begin(), rep.sorted_radii.end()));
    CHECK(rep.rows[0].radius == rep.sorted_radii.front());
    CHECK(rep.rows[2].radius == rep.sorted_radii.back());
    CHECK(rep.rows[0].radius > 0.0);

    // Three-active assignments include non-realizable ones; they count as 0.
    const auto rep3 = radius_report(w, {6, 3, FamilyKind::Active}, {}, ps);
    CHECK(rep3.summary.not_eps > 0);
    CHECK(rep3.rows[0].radius == 0.0);

    CHECK_THROWS_AS(radius_report(w, {6, 6, FamilyKind::Active}, {}, ps, 1, 10), BudgetExceeded);
}

TEST_CASE("nearest-rank percentile") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(nearest_rank_percentile(v, 0) == 1);
    CHECK(nearest_rank_percentile(v, 5) == 1);
    CHECK(nearest_rank_percentile(v, 50) == 5);
    CHECK(nearest_rank_percentile(v, 51) == 6);
    CHECK(nearest_rank_percentile(v, 100) == 10);
    CHECK_THROWS_AS(nearest_rank_percentile(v, 101), DomainError);
}

TEST_CASE("verifier input validation") {
    const WeightMatrix zero_row(Matrix{{1, 0}, {0, 0}, {1, 1}});
    CHECK_THROWS_AS(ChebyshevVerifier{zero_row}, DomainError);

    const auto w = build_dft_matrix(6, 1);
    CHECK_THROWS_AS(chebyshev_verify(w, LabelAssignment::from_dense("+-")), DimensionError);

    LpConfig bad;
    bad.eps_floor = 1e-12;  // below the solver tolerance
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
