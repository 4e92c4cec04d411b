#pragma once
// Cross-validated evaluation of the ranker against single-feature baselines,
// leave-one-group-out feature ablation, and the feature correlation matrix.
// Fold assignment, training, and every export are deterministic for a seed.

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "laser/clickstream.hpp"
#include "laser/common.hpp"
#include "laser/features.hpp"
#include "laser/kg.hpp"
#include "laser/lambdamart.hpp"
#include "laser/metrics.hpp"
#include "laser/skipgram.hpp"

namespace laser {

struct RankedItem {
    EntityId event;
    double score = 0.0;
};

struct RankedList {
    EntityId query;
    LanguageCode language;
    std::vector<RankedItem> items;  // scores non-increasing, ids break ties
};

// Descending sort by one feature column; event id breaks ties.
inline RankedList rank_by_feature(const EntityId& query, const std::vector<EntityId>& candidates,
                                  const LanguageCode& l, const KnowledgeGraph& graph,
                                  const EmbeddingTable& embeddings, const FeatureConfig& cfg,
                                  size_t feature_index) {
    if (feature_index >= kFeatureCount)
        throw UsageError("feature index out of range: " + std::to_string(feature_index));
    RankedList out;
    out.query = query;
    out.language = l;
    for (const auto& v : candidates)
        out.items.push_back({v, extract(query, v, l, graph, embeddings, cfg).to_array()[feature_index]});
    std::sort(out.items.begin(), out.items.end(), [](const RankedItem& a, const RankedItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.event < b.event;
    });
    return out;
}

inline TrainingSet training_set_from_rows(const std::vector<FeatureRow>& rows,
                                          const LanguageCode& language) {
    std::map<EntityId, QueryGroup> by_query;
    for (const auto& r : rows) {
        if (r.language != language) continue;
        QueryGroup& g = by_query[r.query];
        g.query = r.query;
        g.language = language;
        auto arr = r.features.to_array();
        g.items.push_back({r.event, r.rel, std::vector<double>(arr.begin(), arr.end())});
    }
    TrainingSet ts;
    const auto& names = feature_names();
    ts.feature_names.assign(names.begin(), names.end());
    for (auto& [q, g] : by_query) ts.groups.push_back(std::move(g));
    return ts;
}

namespace detail {

// Items of one group ordered by model score (desc, event id on ties);
// returns labels in that predicted order.
inline std::vector<double> predicted_order_labels(const QueryGroup& g,
                                                  const std::vector<double>& scores) {
    std::vector<size_t> order(g.items.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return g.items[a].event < g.items[b].event;
    });
    std::vector<double> labels(order.size());
    for (size_t p = 0; p < order.size(); ++p) labels[p] = g.items[order[p]].label;
    return labels;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace detail

struct EvalCell {
    double ndcg = 0.0;
    double map = 0.0;
};

struct EvalReport {
    int folds = 0;
    size_t eval_k = 10;
    std::vector<std::string> methods;  // fixed report order
    // method -> language -> per-fold metrics (index = fold).
    std::map<std::string, std::map<LanguageCode, std::vector<EvalCell>>> per_fold;
    std::map<std::string, std::map<LanguageCode, EvalCell>> averaged;
    // language -> (eligible query count, mean recall over them).
    std::map<LanguageCode, std::pair<size_t, double>> recall;
};

struct CvOptions {
    int folds = 5;
    size_t eval_k = 10;
    size_t recall_min_positives = 10;  // eligible queries have more than this
    std::uint64_t seed = 42;
    LambdaMartConfig ltr;
};

// Per-language k-fold cross validation of the trained ranker plus the two
// single-feature baselines, and candidate recall over eligible queries.
// `candidates` maps language -> query -> generated candidate set.
inline EvalReport evaluate_cv(
    const std::map<LanguageCode, GroundTruth>& ground_truths,
    const std::vector<FeatureRow>& rows,
    const std::map<LanguageCode, std::map<EntityId, std::set<EntityId>>>& candidates,
    const CvOptions& opt) {
    EvalReport report;
    report.folds = opt.folds;
    report.eval_k = opt.eval_k;
    report.methods = {"laser", "milne_witten", "embedding_similarity"};
    const size_t kMilneWitten = 8, kEmbedding = 9;

    for (const auto& [language, gt] : ground_truths) {
        TrainingSet ts = training_set_from_rows(rows, language);
        if (ts.groups.size() < static_cast<size_t>(opt.folds))
            throw DataError("language '" + language + "': " + std::to_string(ts.groups.size()) +
                            " queries cannot fill " + std::to_string(opt.folds) + " folds");
        FoldAssignment folds = split_folds(gt, opt.folds, opt.seed);

        std::map<std::string, std::vector<std::vector<double>>> fold_ndcg, fold_ap;
        for (const auto& m : report.methods) {
            fold_ndcg[m].resize(static_cast<size_t>(opt.folds));
            fold_ap[m].resize(static_cast<size_t>(opt.folds));
        }

        for (int fold = 0; fold < opt.folds; ++fold) {
            TrainingSet train_set, test_set;
            train_set.feature_names = ts.feature_names;
            test_set.feature_names = ts.feature_names;
            for (const auto& g : ts.groups) {
                auto it = folds.fold_of.find(g.query);
                if (it == folds.fold_of.end())
                    throw DataError("query '" + g.query + "' missing from fold assignment");
                (it->second == fold ? test_set : train_set).groups.push_back(g);
            }
            TreeEnsemble model = train(train_set, opt.ltr);

            for (const auto& g : test_set.groups) {
                std::vector<double> model_scores, mw_scores, emb_scores;
                for (const auto& item : g.items) {
                    model_scores.push_back(model.predict_row(item.features));
                    mw_scores.push_back(item.features[kMilneWitten]);
                    emb_scores.push_back(item.features[kEmbedding]);
                }
                auto add = [&](const std::string& method, const std::vector<double>& scores) {
                    std::vector<double> labels = detail::predicted_order_labels(g, scores);
                    std::vector<bool> relevant(labels.size());
                    for (size_t i = 0; i < labels.size(); ++i) relevant[i] = labels[i] > 0.0;
                    fold_ndcg[method][static_cast<size_t>(fold)].push_back(
                        ndcg_at_k(labels, opt.eval_k));
                    fold_ap[method][static_cast<size_t>(fold)].push_back(
                        average_precision_at_k(relevant, opt.eval_k));
                };
                add("laser", model_scores);
                add("milne_witten", mw_scores);
                add("embedding_similarity", emb_scores);
            }
        }

        for (const auto& method : report.methods) {
            auto& cells = report.per_fold[method][language];
            std::vector<double> ndcg_means, ap_means;
            for (int fold = 0; fold < opt.folds; ++fold) {
                EvalCell cell;
                cell.ndcg = detail::mean(fold_ndcg[method][static_cast<size_t>(fold)]);
                cell.map = detail::mean(fold_ap[method][static_cast<size_t>(fold)]);
                ndcg_means.push_back(cell.ndcg);
                ap_means.push_back(cell.map);
                cells.push_back(cell);
            }
            report.averaged[method][language] = {detail::mean(ndcg_means), detail::mean(ap_means)};
        }

        // Candidate recall over queries with more than recall_min_positives.
        size_t eligible = 0;
        double recall_sum = 0.0;
        auto lang_candidates = candidates.find(language);
        for (const auto& entry : gt.entries) {
            if (entry.positive_count <= opt.recall_min_positives) continue;
            std::set<EntityId> positives;
            for (size_t i = 0; i < entry.positive_count; ++i)
                positives.insert(entry.items[i].event);
            std::set<EntityId> cand;
            if (lang_candidates != candidates.end()) {
                auto qit = lang_candidates->second.find(entry.query);
                if (qit != lang_candidates->second.end()) cand = qit->second;
            }
            recall_sum += candidate_recall(positives, cand);
            ++eligible;
        }
        report.recall[language] = {eligible,
                                   eligible ? recall_sum / static_cast<double>(eligible) : 0.0};
    }
    return report;
}

struct AblationRow {
    std::string configuration;  // "full" or "without_<group>"
    double ndcg = 0.0;          // cross-validated nDCG@k
};

namespace detail {

inline double cross_validated_ndcg(const TrainingSet& ts, int folds, std::uint64_t seed,
                                   const LambdaMartConfig& cfg, size_t eval_k) {
    std::vector<EntityId> queries;
    for (const auto& g : ts.groups) queries.push_back(g.query);
    std::sort(queries.begin(), queries.end());
    FoldAssignment fa = assign_folds(std::move(queries), folds, seed);
    std::vector<double> fold_means;
    for (int fold = 0; fold < folds; ++fold) {
        TrainingSet train_set, test_set;
        train_set.feature_names = ts.feature_names;
        test_set.feature_names = ts.feature_names;
        for (const auto& g : ts.groups)
            (fa.fold_of.at(g.query) == fold ? test_set : train_set).groups.push_back(g);
        TreeEnsemble model = train(train_set, cfg);
        std::vector<double> ndcgs;
        for (const auto& g : test_set.groups) {
            std::vector<double> scores;
            for (const auto& item : g.items) scores.push_back(model.predict_row(item.features));
            ndcgs.push_back(ndcg_at_k(predicted_order_labels(g, scores), eval_k));
        }
        fold_means.push_back(mean(ndcgs));
    }
    return mean(fold_means);
}

inline TrainingSet drop_columns(const TrainingSet& ts, const std::vector<size_t>& drop) {
    std::set<size_t> dropped(drop.begin(), drop.end());
    TrainingSet out;
    for (size_t i = 0; i < ts.feature_names.size(); ++i)
        if (!dropped.count(i)) out.feature_names.push_back(ts.feature_names[i]);
    for (const auto& g : ts.groups) {
        QueryGroup ng;
        ng.query = g.query;
        ng.language = g.language;
        for (const auto& item : g.items) {
            TrainingItem ni;
            ni.event = item.event;
            ni.label = item.label;
            for (size_t i = 0; i < item.features.size(); ++i)
                if (!dropped.count(i)) ni.features.push_back(item.features[i]);
            ng.items.push_back(std::move(ni));
        }
        out.groups.push_back(std::move(ng));
    }
    return out;
}

}  // namespace detail

// Full model plus one row per left-out feature group, each retrained with
// the same seed and fold split; cross-validated nDCG@k per row.
inline std::vector<AblationRow> run_ablation(const TrainingSet& ts, int folds, std::uint64_t seed,
                                             const LambdaMartConfig& cfg, size_t eval_k = 10) {
    if (ts.feature_names.size() != kFeatureCount)
        throw UsageError("ablation needs the full feature matrix (" +
                         std::to_string(kFeatureCount) + " columns)");
    std::vector<AblationRow> rows;
    rows.push_back({"full", detail::cross_validated_ndcg(ts, folds, seed, cfg, eval_k)});
    for (const auto& [name, indices] : feature_groups()) {
        TrainingSet reduced = detail::drop_columns(ts, indices);
        rows.push_back({"without_" + name,
                        detail::cross_validated_ndcg(reduced, folds, seed, cfg, eval_k)});
    }
    return rows;
}

// Absolute Pearson correlation between every pair of feature columns; cells
// touching a constant column are NaN (exported as "nan").
inline std::vector<std::vector<double>> abs_correlation_matrix(const std::vector<FeatureRow>& rows) {
    if (rows.size() < 2) throw DataError("correlation needs at least two feature rows");
    std::vector<std::vector<double>> columns(kFeatureCount, std::vector<double>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        auto a = rows[r].features.to_array();
        for (size_t f = 0; f < kFeatureCount; ++f) columns[f][r] = a[f];
    }
    std::vector<std::vector<double>> matrix(kFeatureCount, std::vector<double>(kFeatureCount, 0.0));
    for (size_t i = 0; i < kFeatureCount; ++i) {
        for (size_t j = 0; j < kFeatureCount; ++j) {
            try {
                matrix[i][j] = std::abs(pearson(columns[i], columns[j]));
            } catch (const DataError&) {
                matrix[i][j] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    return matrix;
}

// --- exports ----------------------------------------------------------------

inline void save_eval_report(const EvalReport& report, const std::string& path) {
    auto out = open_output(path);
    out << "# method\tlang\tfold\tndcg@" << report.eval_k << "\tmap@" << report.eval_k << '\n';
    for (const auto& method : report.methods) {
        auto mit = report.per_fold.find(method);
        if (mit == report.per_fold.end()) continue;
        for (const auto& [language, cells] : mit->second) {
            for (size_t fold = 0; fold < cells.size(); ++fold)
                out << method << '\t' << language << '\t' << fold << '\t'
                    << format_double(cells[fold].ndcg) << '\t' << format_double(cells[fold].map)
                    << '\n';
            const EvalCell& avg = report.averaged.at(method).at(language);
            out << method << '\t' << language << "\tavg\t" << format_double(avg.ndcg) << '\t'
                << format_double(avg.map) << '\n';
        }
        if (mit->second.size() > 1) {
            double n = 0.0, m = 0.0;
            for (const auto& [language, cell] : report.averaged.at(method)) {
                n += cell.ndcg;
                m += cell.map;
            }
            double count = static_cast<double>(mit->second.size());
            out << method << "\tall\tavg\t" << format_double(n / count) << '\t'
                << format_double(m / count) << '\n';
        }
    }
    out << "# candidate recall: lang\teligible_queries\trecall\n";
    for (const auto& [language, r] : report.recall)
        out << "recall\t" << language << '\t' << r.first << '\t'
            << (r.first ? format_double(r.second) : "nan") << '\n';
}

inline void save_ablation_report(const std::vector<AblationRow>& rows, size_t eval_k,
                                 const std::string& path) {
    auto out = open_output(path);
    out << "# configuration\tndcg@" << eval_k << '\n';
    for (const auto& r : rows) out << r.configuration << '\t' << format_double(r.ndcg) << '\n';
}

inline void save_correlation_matrix(const std::vector<std::vector<double>>& matrix,
                                    const std::string& path) {
    auto out = open_output(path);
    out << "# feature";
    for (const auto& name : feature_names()) out << '\t' << name;
    out << '\n';
    for (size_t i = 0; i < matrix.size(); ++i) {
        out << feature_names()[i];
        for (double v : matrix[i]) out << '\t' << (std::isnan(v) ? "nan" : format_double(v));
        out << '\n';
    }
}

}  // namespace laser
