#include "doctest.h"
#include "metrics_oracle.hpp"

#include "sigbound/error.hpp"
#include "sigbound/metrics.hpp"

#include <algorithm>
#include <random>

using namespace sigbound;

namespace {

PredictionRecord rec(std::vector<double> s, const char* gold) {
    return {std::move(s), LabelAssignment::from_dense(gold)};
}

std::vector<PredictionRecord> random_records(std::size_t count, std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution coin(0.3);
    std::vector<PredictionRecord> out;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<double> scores;
        std::vector<std::int8_t> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores.push_back(u(rng));
            g[i] = coin(rng) ? 1 : -1;
        }
        out.push_back({std::move(scores), LabelAssignment(std::move(g))});
    }
    return out;
}

}  // namespace

TEST_CASE("top-k ordering and ties") {
    const std::vector<double> s{0.2, 0.9, 0.2, 0.5};
    CHECK(top_k(s, 3) == std::vector<std::size_t>{1, 3, 0});
    CHECK(top_k(s, 10).size() == 4);
}

TEST_CASE("precision and recall at k examples") {
    std::vector<PredictionRecord> one{rec({0.9, 0.8, 0.1}, "+--")};
    const auto m = prec_rec_f1_at_k(one, 2);
    CHECK(m.precision == doctest::Approx(0.5));
    CHECK(m.recall == doctest::Approx(1.0));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0));

    std::vector<PredictionRecord> perfect{rec({0.9, 0.1, 0.8}, "+-+")};
    const auto p = prec_rec_f1_at_k(perfect, 2);
    CHECK(p.precision == 1.0);
    CHECK(p.recall == 1.0);
    CHECK(p.f1 == 1.0);

    std::vector<PredictionRecord> empty_gold{rec({0.9, 0.1}, "--")};
    const auto e = prec_rec_f1_at_k(empty_gold, 1);
    CHECK(e.recall == 1.0);
    CHECK(e.empty_gold == 1);

    CHECK_THROWS_AS(prec_rec_f1_at_k(std::span<const PredictionRecord>{}, 1), DomainError);
    CHECK_THROWS_AS(prec_rec_f1_at_k(one, 0), DomainError);
    CHECK_THROWS_AS(prec_rec_f1_at_k(one, 4), DomainError);
}

TEST_CASE("equal precision and recall give the same F1") {
    // Two gold labels, top-2 catches one: P = R = 0.5.
    std::vector<PredictionRecord> r{rec({0.9, 0.8, 0.1, 0.0}, "+--+")};
    const auto m = prec_rec_f1_at_k(r, 2);
    REQUIRE(m.precision == m.recall);
    CHECK(m.f1 == m.precision);
}

TEST_CASE("averaged and per-record F1 differ") {
    std::vector<PredictionRecord> r{rec({0.9, 0.1}, "+-"), rec({0.9, 0.1}, "-+")};
    const auto m = prec_rec_f1_at_k(r, 1);
    CHECK(m.precision == doctest::Approx(0.5));
    CHECK(m.recall == doctest::Approx(0.5));
    CHECK(m.f1 == doctest::Approx(0.5));
    CHECK(m.f1_per_record == doctest::Approx(0.5));

    std::vector<PredictionRecord> s{rec({0.9, 0.8, 0.1}, "+++"), rec({0.9, 0.8, 0.1}, "--+")};
    const auto t = prec_rec_f1_at_k(s, 1);
    // P = 0.5, R = (1/3 + 0)/2; per record: 0.5 and 0.
    CHECK(t.f1 == doctest::Approx(2 * 0.5 * (1.0 / 6) / (0.5 + 1.0 / 6)));
    CHECK(t.f1_per_record == doctest::Approx(0.25));
}

TEST_CASE("micro and macro F1") {
    std::vector<PredictionRecord> same{rec({0.9, 0.1}, "+-"), rec({0.2, 0.7}, "-+")};
    const auto a = micro_macro_f1(same);
    CHECK(a.micro == 1.0);
    CHECK(a.macro == 1.0);

    std::vector<PredictionRecord> silent{rec({0.1, 0.1}, "+-"), rec({0.2, 0.3}, "++")};
    CHECK(micro_macro_f1(silent).micro == 0.0);

    // Label A always right, label B always wrong.
    std::vector<PredictionRecord> toy{rec({0.9, 0.1}, "++"), rec({0.1, 0.9}, "--")};
    const auto t = micro_macro_f1(toy);
    CHECK(t.macro == doctest::Approx(0.5));
    // Pooled: tp = 1, fp = 1, fn = 1.
    CHECK(t.micro == doctest::Approx(0.5));

    std::vector<PredictionRecord> unused{rec({0.9, 0.1}, "+-")};
    const auto u = micro_macro_f1(unused);
    CHECK(u.zero_support_labels == 1);
    CHECK(u.macro == doctest::Approx(0.5));
}

TEST_CASE("nDCG examples") {
    std::vector<PredictionRecord> perfect{rec({0.9, 0.8, 0.1}, "++-")};
    CHECK(ndcg_at_k(perfect, 2).value == doctest::Approx(1.0));

    std::vector<PredictionRecord> second{rec({0.8, 0.9, 0.1}, "+--")};
    CHECK(ndcg_at_k(second, 2).value == doctest::Approx(1.0 / std::log2(3.0)));

    std::vector<PredictionRecord> below{rec({0.1, 0.9, 0.8}, "+--")};
    CHECK(ndcg_at_k(below, 2).value == 0.0);

    std::vector<PredictionRecord> skip{rec({0.1, 0.9}, "--"), rec({0.9, 0.1}, "+-")};
    const auto s = ndcg_at_k(skip, 5);
    CHECK(s.skipped == 1);
    CHECK(s.evaluated == 1);
    CHECK(s.value == 1.0);
}

TEST_CASE("agreement with the naive oracle") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 3 + t % 8;
        const auto recs = random_records(20, n, rng);
        for (std::size_t k = 1; k <= n; ++k) {
            const auto want = testing::naive_metrics(recs, k);
            const auto got = prec_rec_f1_at_k(recs, k);
            CHECK(got.precision == doctest::Approx(want.p).epsilon(1e-12));
            CHECK(got.recall == doctest::Approx(want.r).epsilon(1e-12));
            CHECK(got.f1 == doctest::Approx(want.f1).epsilon(1e-12));
            CHECK(ndcg_at_k(recs, k).value == doctest::Approx(want.ndcg).epsilon(1e-12));
        }
    }
}

TEST_CASE("rank metrics are invariant under monotone transforms and record order") {
    std::mt19937_64 rng(3);
    auto recs = random_records(40, 9, rng);
    auto transformed = recs;
    for (auto& r : transformed)
        for (auto& s : r.scores) s = std::exp(3.0 * s) - 7.0;
    auto shuffled = recs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t k : {1u, 3u, 9u}) {
        const auto a = prec_rec_f1_at_k(recs, k);
        const auto b = prec_rec_f1_at_k(transformed, k);
        const auto c = prec_rec_f1_at_k(shuffled, k);
        CHECK(a.precision == b.precision);
        CHECK(a.recall == b.recall);
        CHECK(a.precision == doctest::Approx(c.precision).epsilon(1e-14));
        CHECK(a.recall == doctest::Approx(c.recall).epsilon(1e-14));
        CHECK(ndcg_at_k(recs, k).value == ndcg_at_k(transformed, k).value);
        CHECK(a.f1 <= std::max(a.precision, a.recall) + 1e-15);
        for (double v : {a.precision, a.recall, a.f1, a.f1_per_record}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    const auto f = micro_macro_f1(recs);
    const auto g = micro_macro_f1(shuffled);
    CHECK(f.micro == doctest::Approx(g.micro).epsilon(1e-14));
    CHECK(f.macro == doctest::Approx(g.macro).epsilon(1e-14));
}

TEST_CASE("record validation") {
    std::vector<PredictionRecord> bad{rec({0.9, 0.1, 0.3}, "+-")};
    CHECK_THROWS_AS(prec_rec_f1_at_k(bad, 1), DimensionError);
    std::vector<PredictionRecord> nan{rec({0.9, std::nan("")}, "+-")};
    CHECK_THROWS_AS(ndcg_at_k(nan, 1), DomainError);
}
