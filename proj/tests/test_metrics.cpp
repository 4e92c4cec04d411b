#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "laser/metrics.hpp"
#include "oracles.hpp"

using namespace laser;

TEST_CASE("ndcg_at_k worked values") {
    // gains [2,3,0] at k=3: dcg = 2 + 3/log2(3), idcg = 3 + 2/log2(3).
    CHECK(ndcg_at_k({2, 3, 0}, 3) == Catch::Approx(0.9134).margin(5e-5));
    CHECK(ndcg_at_k({3, 2, 0}, 3) == Catch::Approx(1.0));
    CHECK(ndcg_at_k({0, 0, 0}, 3) == 0.0);
    CHECK(ndcg_at_k({}, 5) == 0.0);
    CHECK(ndcg_at_k({1}, 1) == Catch::Approx(1.0));
    CHECK_THROWS_AS(ndcg_at_k({1, 2}, 0), UsageError);
}

TEST_CASE("ndcg truncation only sees the top k") {
    // Items past rank k contribute to the ideal ordering but not the dcg.
    std::vector<double> gains = {0, 0, 5};
    CHECK(ndcg_at_k(gains, 2) == 0.0);
    CHECK(ndcg_at_k(gains, 3) > 0.0);
}

TEST_CASE("ndcg matches a brute-force oracle on random lists") {
    std::mt19937_64 rng(1207);
    for (int trial = 0; trial < 300; ++trial) {
        size_t n = 1 + rng() % 6;
        std::vector<double> gains(n);
        for (auto& g : gains) g = static_cast<double>(rng() % 5);
        size_t k = 1 + rng() % (n + 2);
        CHECK(ndcg_at_k(gains, k) == Catch::Approx(oracle::ndcg(gains, k)).margin(1e-12));
    }
}

TEST_CASE("ndcg is invariant under positive scaling of gains") {
    std::vector<double> gains = {1, 4, 0, 2, 2};
    std::vector<double> scaled;
    for (double g : gains) scaled.push_back(g * 3.7);
    CHECK(ndcg_at_k(scaled, 4) == Catch::Approx(ndcg_at_k(gains, 4)).margin(1e-12));
}

TEST_CASE("average precision worked value") {
    // Relevant at ranks 1 and 3: (1/1 + 2/3) / 2.
    CHECK(average_precision_at_k({true, false, true, false}, 4) ==
          Catch::Approx(0.8333).margin(5e-5));
    CHECK(average_precision_at_k({false, false}, 2) == 0.0);
    CHECK(average_precision_at_k({true}, 3) == Catch::Approx(1.0));
    // Divisor counts only relevant items inside the cutoff.
    CHECK(average_precision_at_k({true, false, true}, 1) == Catch::Approx(1.0));
}

TEST_CASE("average precision matches the oracle on random lists") {
    std::mt19937_64 rng(88);
    for (int trial = 0; trial < 300; ++trial) {
        size_t n = 1 + rng() % 8;
        std::vector<bool> rel(n);
        for (size_t i = 0; i < n; ++i) rel[i] = rng() % 2 == 0;
        size_t k = 1 + rng() % (n + 2);
        CHECK(average_precision_at_k(rel, k) ==
              Catch::Approx(oracle::average_precision(rel, k)).margin(1e-12));
    }
}

TEST_CASE("map_at_k averages per-list average precision") {
    std::vector<std::vector<bool>> lists = {
        {true, false, true, false},  // 0.8333...
        {false, true},               // 0.5
    };
    double expected = (average_precision_at_k(lists[0], 4) + 0.5) / 2.0;
    CHECK(map_at_k(lists, 4) == Catch::Approx(expected).margin(1e-12));
    CHECK_THROWS_AS(map_at_k({}, 4), UsageError);
}

TEST_CASE("candidate_recall counts ground-truth coverage") {
    std::set<EntityId> gt = {"a", "b", "c", "d"};
    CHECK(candidate_recall(gt, {"a", "c", "x"}) == Catch::Approx(0.5));
    CHECK(candidate_recall(gt, {"a", "b", "c", "d", "e"}) == Catch::Approx(1.0));
    CHECK(candidate_recall(gt, {}) == 0.0);
    CHECK_THROWS_AS(candidate_recall({}, {"a"}), UsageError);
}

TEST_CASE("pearson worked values and errors") {
    CHECK(pearson({1, 2, 3}, {2, 4, 6}) == Catch::Approx(1.0));
    CHECK(pearson({1, 2, 3}, {6, 4, 2}) == Catch::Approx(-1.0));
    CHECK(pearson({1, 2, 3, 4}, {1, 3, 2, 4}) == Catch::Approx(0.8));
    CHECK_THROWS_AS(pearson({1, 2}, {1}), UsageError);
    CHECK_THROWS_AS(pearson({1}, {2}), UsageError);
    CHECK_THROWS_MATCHES(pearson({5, 5, 5}, {1, 2, 3}), DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("constant series")));
}

TEST_CASE("pearson is invariant under affine transforms") {
    std::mt19937_64 rng(31);
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
        x.push_back(static_cast<double>(rng() % 1000) / 7.0);
        y.push_back(static_cast<double>(rng() % 1000) / 11.0);
    }
    double r = pearson(x, y);
    std::vector<double> x2, y2;
    for (size_t i = 0; i < x.size(); ++i) {
        x2.push_back(3.0 * x[i] + 17.0);
        y2.push_back(0.5 * y[i] - 4.0);
    }
    CHECK(pearson(x2, y2) == Catch::Approx(r).margin(1e-12));
    // Negating one side flips the sign.
    for (auto& v : x2) v = -v;
    CHECK(pearson(x2, y2) == Catch::Approx(-r).margin(1e-12));
    CHECK(std::abs(r) <= 1.0 + 1e-12);
}
