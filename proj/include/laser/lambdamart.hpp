#pragma once
// LambdaMART from scratch: pairwise lambda gradients weighted by the nDCG
// swap delta, second-order regression trees on the negated lambdas, and a
// boosted ensemble with versioned text serialization. Training is fully
// deterministic: ties in split search break toward the lowest feature index,
// then the lowest threshold, and ranking ties toward the lower item index.

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "laser/common.hpp"
#include "laser/metrics.hpp"
#include "laser/tsv.hpp"

namespace laser {

struct TrainingItem {
    EntityId event;
    double label = 0.0;
    std::vector<double> features;
};

struct QueryGroup {
    EntityId query;
    LanguageCode language;
    std::vector<TrainingItem> items;
};

struct TrainingSet {
    std::vector<std::string> feature_names;  // column order of every item
    std::vector<QueryGroup> groups;
};

struct LambdaMartConfig {
    int n_trees = 100;
    double learning_rate = 0.1;
    int max_leaves = 16;
    int min_samples_leaf = 1;
    double l2_leaf_reg = 1.0;
    int ndcg_truncation = 10;
    std::uint64_t seed = 42;
};

namespace detail {

// Ranking by score descending, ties toward the lower index.
inline std::vector<size_t> rank_order(const std::vector<double>& scores) {
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

inline double rank_discount(size_t pos, size_t k) {
    if (pos >= k) return 0.0;
    return 1.0 / std::log2(static_cast<double>(pos) + 2.0);
}

}  // namespace detail

// |nDCG@K change| if items i and j swapped ranks under the current scores.
inline double delta_ndcg(const std::vector<double>& labels, const std::vector<double>& scores,
                         size_t i, size_t j, size_t k) {
    if (i == j) throw UsageError("delta_ndcg: need two distinct items");
    std::vector<double> ideal = labels;
    std::sort(ideal.begin(), ideal.end(), std::greater<double>());
    double idcg = dcg_at_k(ideal, k);
    if (idcg <= 0.0) return 0.0;
    std::vector<size_t> order = detail::rank_order(scores);
    std::vector<size_t> pos(order.size());
    for (size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
    double di = detail::rank_discount(pos[i], k);
    double dj = detail::rank_discount(pos[j], k);
    return std::abs((labels[i] - labels[j]) * (di - dj)) / idcg;
}

// Pairwise lambdas and hessians for one query group. For each pair with
// label_i > label_j: rho = 1/(1+exp(s_i - s_j)); lambda_i gains rho*delta,
// lambda_j loses it, both hessians gain rho*(1-rho)*delta.
inline void compute_lambdas(const std::vector<double>& labels, const std::vector<double>& scores,
                            size_t k, std::vector<double>& lambdas, std::vector<double>& hessians) {
    if (labels.size() != scores.size()) throw UsageError("compute_lambdas: size mismatch");
    if (labels.size() < 2) throw UsageError("compute_lambdas: group needs at least 2 items");
    lambdas.assign(labels.size(), 0.0);
    hessians.assign(labels.size(), 0.0);
    for (size_t i = 0; i < labels.size(); ++i) {
        for (size_t j = 0; j < labels.size(); ++j) {
            if (labels[i] <= labels[j]) continue;
            double delta = delta_ndcg(labels, scores, i, j, k);
            if (delta == 0.0) continue;
            double rho = 1.0 / (1.0 + std::exp(scores[i] - scores[j]));
            lambdas[i] += rho * delta;
            lambdas[j] -= rho * delta;
            double h = rho * (1.0 - rho) * delta;
            hessians[i] += h;
            hessians[j] += h;
        }
    }
}

struct TreeNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0.0;
    int left = -1;   // x[feature] < threshold
    int right = -1;  // x[feature] >= threshold
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const std::vector<double>& row) const {
        if (nodes.empty()) return 0.0;
        const TreeNode* n = &nodes[0];
        while (!n->is_leaf) n = &nodes[static_cast<size_t>(row[static_cast<size_t>(n->feature)] <
                                                                   n->threshold
                                                               ? n->left
                                                               : n->right)];
        return n->value;
    }
};

namespace detail {

struct SplitResult {
    bool found = false;
    size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

// Best split of `samples` by exhaustive scan over midpoints of consecutive
// distinct feature values; gain is the second-order improvement.
inline SplitResult best_split(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& g, const std::vector<double>& h,
                              const std::vector<size_t>& samples, const LambdaMartConfig& cfg) {
    SplitResult best;
    if (samples.size() < 2 * static_cast<size_t>(cfg.min_samples_leaf)) return best;
    double g_total = 0.0, h_total = 0.0;
    for (size_t s : samples) {
        g_total += g[s];
        h_total += h[s];
    }
    double parent = g_total * g_total / (h_total + cfg.l2_leaf_reg);
    size_t n_features = rows[samples[0]].size();
    std::vector<std::pair<double, size_t>> vals(samples.size());
    for (size_t f = 0; f < n_features; ++f) {
        for (size_t i = 0; i < samples.size(); ++i)
            vals[i] = {rows[samples[i]][f], samples[i]};
        std::sort(vals.begin(), vals.end());
        double g_left = 0.0, h_left = 0.0;
        for (size_t i = 0; i + 1 < vals.size(); ++i) {
            g_left += g[vals[i].second];
            h_left += h[vals[i].second];
            if (vals[i].first == vals[i + 1].first) continue;
            size_t n_left = i + 1, n_right = vals.size() - n_left;
            if (n_left < static_cast<size_t>(cfg.min_samples_leaf) ||
                n_right < static_cast<size_t>(cfg.min_samples_leaf))
                continue;
            double g_right = g_total - g_left, h_right = h_total - h_left;
            double gain = g_left * g_left / (h_left + cfg.l2_leaf_reg) +
                          g_right * g_right / (h_right + cfg.l2_leaf_reg) - parent;
            double threshold = (vals[i].first + vals[i + 1].first) / 2.0;
            if (gain <= 0.0) continue;
            bool better = !best.found || gain > best.gain ||
                          (gain == best.gain &&
                           (f < best.feature || (f == best.feature && threshold < best.threshold)));
            if (better) {
                best.found = true;
                best.feature = f;
                best.threshold = threshold;
                best.gain = gain;
            }
        }
    }
    return best;
}

}  // namespace detail

// Greedy best-first tree growth: the open leaf with the largest split gain
// is expanded until max_leaves is reached or no split improves.
inline RegressionTree fit_tree(const std::vector<std::vector<double>>& rows,
                               const std::vector<double>& gradients,
                               const std::vector<double>& hessians,
                               const LambdaMartConfig& cfg) {
    if (rows.empty()) throw UsageError("fit_tree: empty sample set");
    if (gradients.size() != rows.size() || hessians.size() != rows.size())
        throw UsageError("fit_tree: gradient/hessian size mismatch");

    RegressionTree tree;
    auto leaf_value = [&](const std::vector<size_t>& samples) {
        double g = 0.0, h = 0.0;
        for (size_t s : samples) {
            g += gradients[s];
            h += hessians[s];
        }
        double v = -g / (h + cfg.l2_leaf_reg);
        return v == 0.0 ? 0.0 : v;  // normalize -0
    };

    struct OpenLeaf {
        int node_id;
        std::vector<size_t> samples;
        detail::SplitResult split;
    };

    std::vector<size_t> all(rows.size());
    std::iota(all.begin(), all.end(), size_t{0});
    tree.nodes.push_back({true, -1, 0.0, -1, -1, leaf_value(all)});
    std::vector<OpenLeaf> open;
    open.push_back({0, std::move(all), {}});
    open.back().split = detail::best_split(rows, gradients, hessians, open.back().samples, cfg);

    int leaves = 1;
    while (leaves < cfg.max_leaves) {
        int pick = -1;
        for (size_t i = 0; i < open.size(); ++i) {
            if (!open[i].split.found) continue;
            if (pick < 0 || open[i].split.gain > open[static_cast<size_t>(pick)].split.gain)
                pick = static_cast<int>(i);
        }
        if (pick < 0) break;
        OpenLeaf leaf = std::move(open[static_cast<size_t>(pick)]);
        open.erase(open.begin() + pick);

        std::vector<size_t> left_samples, right_samples;
        for (size_t s : leaf.samples) {
            if (rows[s][leaf.split.feature] < leaf.split.threshold)
                left_samples.push_back(s);
            else
                right_samples.push_back(s);
        }
        int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({true, -1, 0.0, -1, -1, leaf_value(left_samples)});
        int right_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({true, -1, 0.0, -1, -1, leaf_value(right_samples)});
        TreeNode& parent = tree.nodes[static_cast<size_t>(leaf.node_id)];
        parent.is_leaf = false;
        parent.feature = static_cast<int>(leaf.split.feature);
        parent.threshold = leaf.split.threshold;
        parent.left = left_id;
        parent.right = right_id;
        ++leaves;

        OpenLeaf l{left_id, std::move(left_samples), {}};
        l.split = detail::best_split(rows, gradients, hessians, l.samples, cfg);
        OpenLeaf r{right_id, std::move(right_samples), {}};
        r.split = detail::best_split(rows, gradients, hessians, r.samples, cfg);
        open.push_back(std::move(l));
        open.push_back(std::move(r));
    }
    return tree;
}

struct TreeEnsemble {
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;
    double base_score = 0.0;
    LambdaMartConfig config;
    std::vector<std::string> feature_names;  // column order the model expects

    double predict_row(const std::vector<double>& row) const {
        if (row.size() != feature_names.size())
            throw UsageError("predict: feature vector has " + std::to_string(row.size()) +
                             " columns, model expects " + std::to_string(feature_names.size()));
        double s = base_score;
        for (const auto& t : trees) s += learning_rate * t.predict(row);
        return s;
    }
};

struct TrainingRound {
    int round = 0;
    double train_ndcg = 0.0;            // mean nDCG@K over groups after this round
    double lambda_abs_sum = 0.0;        // sum of |lambda| before this round's tree
    double max_group_lambda_sum = 0.0;  // max over groups of |sum of lambdas|
};

struct TrainingLog {
    std::vector<TrainingRound> rounds;
};

inline TreeEnsemble train(const TrainingSet& ts, const LambdaMartConfig& cfg,
                          TrainingLog* log = nullptr) {
    if (ts.groups.empty()) throw UsageError("train: empty training set");
    if (cfg.n_trees < 0) throw UsageError("train: tree count cannot be negative");
    if (cfg.ndcg_truncation < 1) throw UsageError("train: ndcg truncation must be at least 1");
    if (cfg.learning_rate <= 0.0) throw UsageError("train: learning rate must be positive");
    if (cfg.max_leaves < 2) throw UsageError("train: need at least 2 leaves");
    for (const auto& g : ts.groups) {
        if (g.items.size() < 2)
            throw DataError("query group '" + g.query + "' needs at least 2 items");
        for (const auto& it : g.items)
            if (it.features.size() != ts.feature_names.size())
                throw DataError("query group '" + g.query + "': feature width mismatch");
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    std::vector<std::pair<size_t, size_t>> group_spans;  // [begin, end) into rows
    for (const auto& g : ts.groups) {
        size_t begin = rows.size();
        for (const auto& it : g.items) {
            rows.push_back(it.features);
            labels.push_back(it.label);
        }
        group_spans.emplace_back(begin, rows.size());
    }

    TreeEnsemble model;
    model.learning_rate = cfg.learning_rate;
    model.base_score = 0.0;
    model.config = cfg;
    model.feature_names = ts.feature_names;

    size_t k = static_cast<size_t>(cfg.ndcg_truncation);
    std::vector<double> scores(rows.size(), model.base_score);
    std::vector<double> grad(rows.size()), hess(rows.size());
    std::vector<double> group_labels, group_scores, lam, hes;

    auto mean_train_ndcg = [&]() {
        double sum = 0.0;
        for (const auto& [begin, end] : group_spans) {
            std::vector<size_t> order(end - begin);
            std::iota(order.begin(), order.end(), size_t{0});
            std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                if (scores[begin + a] != scores[begin + b])
                    return scores[begin + a] > scores[begin + b];
                return a < b;
            });
            std::vector<double> gains(order.size());
            for (size_t p = 0; p < order.size(); ++p) gains[p] = labels[begin + order[p]];
            sum += ndcg_at_k(gains, k);
        }
        return sum / static_cast<double>(group_spans.size());
    };

    for (int round = 0; round < cfg.n_trees; ++round) {
        double lambda_abs = 0.0, max_group_sum = 0.0;
        for (const auto& [begin, end] : group_spans) {
            group_labels.assign(labels.begin() + begin, labels.begin() + end);
            group_scores.assign(scores.begin() + begin, scores.begin() + end);
            compute_lambdas(group_labels, group_scores, k, lam, hes);
            double group_sum = 0.0;
            for (size_t i = begin; i < end; ++i) {
                grad[i] = -lam[i - begin];
                hess[i] = hes[i - begin];
                lambda_abs += std::abs(lam[i - begin]);
                group_sum += lam[i - begin];
            }
            max_group_sum = std::max(max_group_sum, std::abs(group_sum));
        }
        RegressionTree tree = fit_tree(rows, grad, hess, cfg);
        for (size_t i = 0; i < rows.size(); ++i)
            scores[i] += cfg.learning_rate * tree.predict(rows[i]);
        model.trees.push_back(std::move(tree));
        if (log) log->rounds.push_back({round, mean_train_ndcg(), lambda_abs, max_group_sum});
    }
    return model;
}

// --- model file -------------------------------------------------------------

inline void save_model(const TreeEnsemble& model, const std::string& path) {
    auto out = open_output(path);
    out << "laser_model_v1\n";
    out << "learning_rate\t" << format_double(model.learning_rate) << '\n';
    out << "base_score\t" << format_double(model.base_score) << '\n';
    out << "n_trees\t" << model.config.n_trees << '\n';
    out << "max_leaves\t" << model.config.max_leaves << '\n';
    out << "min_samples_leaf\t" << model.config.min_samples_leaf << '\n';
    out << "l2_leaf_reg\t" << format_double(model.config.l2_leaf_reg) << '\n';
    out << "ndcg_truncation\t" << model.config.ndcg_truncation << '\n';
    out << "seed\t" << model.config.seed << '\n';
    out << "features\t";
    for (size_t i = 0; i < model.feature_names.size(); ++i)
        out << (i ? "," : "") << model.feature_names[i];
    out << '\n';
    out << "trees\t" << model.trees.size() << '\n';
    for (size_t t = 0; t < model.trees.size(); ++t) {
        const auto& tree = model.trees[t];
        out << "tree\t" << t << '\t' << tree.nodes.size() << '\n';
        for (size_t n = 0; n < tree.nodes.size(); ++n) {
            const TreeNode& node = tree.nodes[n];
            if (node.is_leaf)
                out << n << "\tleaf\t" << format_double(node.value) << '\n';
            else
                out << n << "\tsplit\t" << node.feature << '\t' << format_double(node.threshold)
                    << '\t' << node.left << '\t' << node.right << '\n';
        }
    }
    out << "end\n";
}

inline TreeEnsemble load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    auto next_line = [&](std::string& line) {
        if (!std::getline(in, line)) throw DataError(path + ": truncated model file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    std::string line;
    next_line(line);
    if (line != "laser_model_v1") {
        if (line.rfind("laser_model_", 0) == 0)
            throw DataError(path + ": unsupported model version '" + line + "'");
        throw DataError(path + ": unversioned model file");
    }

    TreeEnsemble model;
    auto expect_kv = [&](const std::string& key) {
        next_line(line);
        auto f = split(line, '\t');
        if (f.size() != 2 || f[0] != key)
            throw DataError(path + ": expected '" + key + "' line, got '" + line + "'");
        return f[1];
    };
    model.learning_rate = parse_double(expect_kv("learning_rate"), "learning_rate");
    model.base_score = parse_double(expect_kv("base_score"), "base_score");
    model.config.n_trees = static_cast<int>(parse_int(expect_kv("n_trees"), "n_trees"));
    model.config.max_leaves = static_cast<int>(parse_int(expect_kv("max_leaves"), "max_leaves"));
    model.config.min_samples_leaf =
        static_cast<int>(parse_int(expect_kv("min_samples_leaf"), "min_samples_leaf"));
    model.config.l2_leaf_reg = parse_double(expect_kv("l2_leaf_reg"), "l2_leaf_reg");
    model.config.ndcg_truncation =
        static_cast<int>(parse_int(expect_kv("ndcg_truncation"), "ndcg_truncation"));
    model.config.seed = static_cast<std::uint64_t>(parse_int(expect_kv("seed"), "seed"));
    model.config.learning_rate = model.learning_rate;
    model.feature_names = split(expect_kv("features"), ',');
    if (model.feature_names.size() == 1 && model.feature_names[0].empty())
        model.feature_names.clear();
    long n_trees = parse_int(expect_kv("trees"), "trees");

    for (long t = 0; t < n_trees; ++t) {
        next_line(line);
        auto f = split(line, '\t');
        if (f.size() != 3 || f[0] != "tree" || parse_int(f[1], "tree index") != t)
            throw DataError(path + ": expected header for tree " + std::to_string(t));
        long n_nodes = parse_int(f[2], "node count");
        RegressionTree tree;
        tree.nodes.resize(static_cast<size_t>(n_nodes));
        for (long n = 0; n < n_nodes; ++n) {
            next_line(line);
            auto g = split(line, '\t');
            if (g.size() < 3 || parse_int(g[0], "node id") != n)
                throw DataError(path + ": bad node line '" + line + "'");
            TreeNode& node = tree.nodes[static_cast<size_t>(n)];
            if (g[1] == "leaf") {
                if (g.size() != 3) throw DataError(path + ": bad leaf line '" + line + "'");
                node.is_leaf = true;
                node.value = parse_double(g[2], "leaf value");
            } else if (g[1] == "split") {
                if (g.size() != 6) throw DataError(path + ": bad split line '" + line + "'");
                node.is_leaf = false;
                node.feature = static_cast<int>(parse_int(g[2], "split feature"));
                node.threshold = parse_double(g[3], "split threshold");
                node.left = static_cast<int>(parse_int(g[4], "left child"));
                node.right = static_cast<int>(parse_int(g[5], "right child"));
                if (node.feature < 0 ||
                    static_cast<size_t>(node.feature) >= model.feature_names.size())
                    throw DataError(path + ": split feature out of range in '" + line + "'");
                if (node.left < 0 || node.left >= n_nodes || node.right < 0 ||
                    node.right >= n_nodes)
                    throw DataError(path + ": child index out of range in '" + line + "'");
            } else {
                throw DataError(path + ": unknown node kind '" + g[1] + "'");
            }
        }
        model.trees.push_back(std::move(tree));
    }
    next_line(line);
    if (line != "end") throw DataError(path + ": missing end marker");
    return model;
}

}  // namespace laser
