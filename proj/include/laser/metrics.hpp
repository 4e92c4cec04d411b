#pragma once
// Ranking metrics and correlation. All take items in ranked order (best
// predicted first); relevance gains are linear, discount is 1/log2(rank+1).

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "laser/common.hpp"

namespace laser {

inline double dcg_at_k(const std::vector<double>& gains, size_t k) {
    double dcg = 0.0;
    size_t n = std::min(k, gains.size());
    for (size_t i = 0; i < n; ++i) dcg += gains[i] / std::log2(static_cast<double>(i) + 2.0);
    return dcg;
}

// Normalized DCG against the ideal ordering of the same gains. A list with no
// positive gain has no ideal to normalize by and scores 0.
inline double ndcg_at_k(const std::vector<double>& gains, size_t k) {
    if (k < 1) throw UsageError("ndcg_at_k: k must be at least 1");
    std::vector<double> ideal = gains;
    std::sort(ideal.begin(), ideal.end(), std::greater<double>());
    double idcg = dcg_at_k(ideal, k);
    if (idcg <= 0.0) return 0.0;
    return dcg_at_k(gains, k) / idcg;
}

// Average precision at k: sum of precision@r over relevant ranks r <= k,
// divided by the number of relevant items inside the top k. 0 when none.
inline double average_precision_at_k(const std::vector<bool>& relevant, size_t k) {
    size_t n = std::min(k, relevant.size());
    double sum = 0.0;
    size_t hits = 0;
    for (size_t r = 0; r < n; ++r) {
        if (!relevant[r]) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    if (hits == 0) return 0.0;
    return sum / static_cast<double>(hits);
}

inline double map_at_k(const std::vector<std::vector<bool>>& ranked_lists, size_t k) {
    if (ranked_lists.empty()) throw UsageError("map_at_k: no ranked lists");
    double sum = 0.0;
    for (const auto& list : ranked_lists) sum += average_precision_at_k(list, k);
    return sum / static_cast<double>(ranked_lists.size());
}

inline double candidate_recall(const std::set<EntityId>& ground_truth,
                               const std::set<EntityId>& candidates) {
    if (ground_truth.empty()) throw UsageError("candidate recall needs a non-empty ground truth");
    size_t hit = 0;
    for (const auto& id : ground_truth)
        if (candidates.count(id)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(ground_truth.size());
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw UsageError("correlation inputs differ in length: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
    if (x.size() < 2) throw UsageError("correlation needs at least two samples");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DataError("undefined correlation: constant series");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace laser
