#pragma once
// Skip-gram with negative sampling over walk corpora. Input vectors start
// uniform in [-0.5/dim, 0.5/dim), output vectors start at zero; training
// maximizes log sigmoid(v_center . u_context) plus the negative terms.
// Negatives are drawn from the unigram distribution raised to 0.75; a draw
// equal to the context word is skipped. The single-worker path is exactly
// reproducible for a given seed; with more workers the matrices are shared
// without locks, so results vary run to run.

#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "laser/common.hpp"
#include "laser/tsv.hpp"

namespace laser {

struct EmbedConfig {
    int dim = 64;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double initial_lr = 0.025;
    int workers = 1;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double sgns_objective(const std::vector<double>& center, const std::vector<double>& context,
                             const std::vector<std::vector<double>>& negatives) {
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    double j = std::log(sigmoid(dot(center, context)));
    for (const auto& n : negatives) j += std::log(sigmoid(-dot(center, n)));
    return j;
}

// Ascent direction of the objective for every vector involved; returns the
// objective value at the input point.
inline double sgns_gradients(const std::vector<double>& center, const std::vector<double>& context,
                             const std::vector<std::vector<double>>& negatives,
                             std::vector<double>& g_center, std::vector<double>& g_context,
                             std::vector<std::vector<double>>& g_negatives) {
    size_t dim = center.size();
    g_center.assign(dim, 0.0);
    g_context.assign(dim, 0.0);
    g_negatives.assign(negatives.size(), std::vector<double>(dim, 0.0));
    double dot_pos = 0.0;
    for (size_t i = 0; i < dim; ++i) dot_pos += center[i] * context[i];
    double coef = 1.0 - sigmoid(dot_pos);
    for (size_t i = 0; i < dim; ++i) {
        g_center[i] += coef * context[i];
        g_context[i] = coef * center[i];
    }
    double j = std::log(sigmoid(dot_pos));
    for (size_t k = 0; k < negatives.size(); ++k) {
        double d = 0.0;
        for (size_t i = 0; i < dim; ++i) d += center[i] * negatives[k][i];
        double s = sigmoid(d);
        for (size_t i = 0; i < dim; ++i) {
            g_center[i] -= s * negatives[k][i];
            g_negatives[k][i] = -s * center[i];
        }
        j += std::log(sigmoid(-d));
    }
    return j;
}

struct EmbeddingTable {
    int dim = 0;
    std::map<EntityId, std::vector<double>> vectors;

    bool contains(const EntityId& id) const { return vectors.count(id) != 0; }

    const std::vector<double>& at(const EntityId& id) const {
        auto it = vectors.find(id);
        if (it == vectors.end()) throw DataError("no embedding for entity '" + id + "'");
        return it->second;
    }
};

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw UsageError("cosine: dimension mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

inline EmbeddingTable train_embeddings(const std::vector<std::vector<EntityId>>& corpus,
                                       const EmbedConfig& cfg, std::uint64_t seed) {
    if (cfg.dim < 1) throw UsageError("embedding dimension must be at least 1");
    if (cfg.window < 1) throw UsageError("context window must be at least 1");
    if (cfg.negatives < 0) throw UsageError("negative sample count cannot be negative");
    if (cfg.epochs < 1) throw UsageError("epoch count must be at least 1");
    if (cfg.initial_lr <= 0.0) throw UsageError("learning rate must be positive");

    // Vocabulary ordered by frequency (ties by id) so indices are stable.
    std::map<EntityId, long long> freq;
    for (const auto& walk : corpus)
        for (const auto& id : walk) ++freq[id];
    if (freq.empty()) throw DataError("cannot train embeddings on an empty walk corpus");
    std::vector<std::pair<EntityId, long long>> vocab(freq.begin(), freq.end());
    std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::unordered_map<EntityId, int> index;
    for (size_t i = 0; i < vocab.size(); ++i) index[vocab[i].first] = static_cast<int>(i);

    std::vector<std::vector<int>> encoded(corpus.size());
    for (size_t w = 0; w < corpus.size(); ++w) {
        encoded[w].reserve(corpus[w].size());
        for (const auto& id : corpus[w]) encoded[w].push_back(index.at(id));
    }

    size_t n = vocab.size(), dim = static_cast<size_t>(cfg.dim);
    std::vector<double> syn0(n * dim), syn1(n * dim, 0.0);
    std::mt19937_64 init_rng(derive_seed(seed, "init"));
    for (auto& x : syn0) x = (uniform_real01(init_rng) - 0.5) / static_cast<double>(dim);

    // Cumulative unigram^0.75 table for negative draws.
    std::vector<double> cum(n);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        total += std::pow(static_cast<double>(vocab[i].second), 0.75);
        cum[i] = total;
    }
    auto draw_negative = [&](std::mt19937_64& rng) {
        double r = uniform_real01(rng) * total;
        size_t i = static_cast<size_t>(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
        return static_cast<int>(std::min(i, n - 1));
    };

    size_t total_walks = encoded.size() * static_cast<size_t>(cfg.epochs);
    std::atomic<size_t> walks_done{0};

    auto train_walk = [&](size_t epoch, size_t w) {
        double progress =
            static_cast<double>(walks_done.fetch_add(1)) / static_cast<double>(total_walks);
        double lr = cfg.initial_lr * std::max(1.0 - progress, 1e-4);
        std::mt19937_64 rng(derive_seed(seed, "pairs", epoch * encoded.size() + w));
        const auto& walk = encoded[w];
        std::vector<double> neu1e(dim);
        for (size_t i = 0; i < walk.size(); ++i) {
            double* vc = &syn0[static_cast<size_t>(walk[i]) * dim];
            size_t lo = i >= static_cast<size_t>(cfg.window) ? i - cfg.window : 0;
            size_t hi = std::min(walk.size(), i + static_cast<size_t>(cfg.window) + 1);
            for (size_t j = lo; j < hi; ++j) {
                if (j == i) continue;
                int ctx = walk[j];
                std::fill(neu1e.begin(), neu1e.end(), 0.0);
                for (int d = -1; d < cfg.negatives; ++d) {
                    int target;
                    double label;
                    if (d < 0) {
                        target = ctx;
                        label = 1.0;
                    } else {
                        target = draw_negative(rng);
                        if (target == ctx) continue;
                        label = 0.0;
                    }
                    double* u = &syn1[static_cast<size_t>(target) * dim];
                    double f = 0.0;
                    for (size_t x = 0; x < dim; ++x) f += vc[x] * u[x];
                    double g = (label - sigmoid(f)) * lr;
                    for (size_t x = 0; x < dim; ++x) neu1e[x] += g * u[x];
                    for (size_t x = 0; x < dim; ++x) u[x] += g * vc[x];
                }
                for (size_t x = 0; x < dim; ++x) vc[x] += neu1e[x];
            }
        }
    };

    int workers = std::max(1, cfg.workers);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (workers == 1 || encoded.size() < 2) {
            for (size_t w = 0; w < encoded.size(); ++w) train_walk(epoch, w);
        } else {
            size_t nthreads = std::min<size_t>(static_cast<size_t>(workers), encoded.size());
            size_t chunk = (encoded.size() + nthreads - 1) / nthreads;
            std::vector<std::thread> threads;
            for (size_t t = 0; t < nthreads; ++t) {
                size_t begin = t * chunk, end = std::min(encoded.size(), begin + chunk);
                if (begin >= end) break;
                threads.emplace_back([&, begin, end, epoch] {
                    for (size_t w = begin; w < end; ++w) train_walk(epoch, w);
                });
            }
            for (auto& th : threads) th.join();
        }
    }

    EmbeddingTable table;
    table.dim = cfg.dim;
    for (size_t i = 0; i < n; ++i)
        table.vectors[vocab[i].first] =
            std::vector<double>(syn0.begin() + i * dim, syn0.begin() + (i + 1) * dim);
    return table;
}

// Top-k events by cosine similarity to the query's vector. Ties break toward
// the smaller event id; events without an embedding are not candidates.
inline std::vector<EntityId> candidate_events(const EmbeddingTable& table, const EntityId& query,
                                              const std::set<EntityId>& events, size_t k) {
    const auto& qv = table.at(query);
    std::vector<std::pair<double, EntityId>> scored;
    for (const auto& v : events) {
        if (v == query || !table.contains(v)) continue;
        scored.emplace_back(cosine(qv, table.at(v)), v);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (scored.size() > k) scored.resize(k);
    std::vector<EntityId> out;
    out.reserve(scored.size());
    for (const auto& [s, id] : scored) out.push_back(id);
    return out;
}

inline void save_embeddings(const EmbeddingTable& table, const std::string& path) {
    auto out = open_output(path);
    out << "dim=" << table.dim << '\n';
    for (const auto& [id, vec] : table.vectors) {
        out << id;
        for (double x : vec) out << '\t' << format_double(x);
        out << '\n';
    }
}

inline EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataError(path + ": empty embedding file");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header.rfind("dim=", 0) != 0) throw DataError(path + ": expected 'dim=<d>' header");
    EmbeddingTable table;
    table.dim = static_cast<int>(parse_int(header.substr(4), "embedding dimension"));
    if (table.dim < 1) throw DataError(path + ": embedding dimension must be positive");
    std::string line;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != static_cast<size_t>(table.dim) + 1)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.dim + 1) + " fields, got " +
                            std::to_string(fields.size()));
        std::vector<double> vec(static_cast<size_t>(table.dim));
        for (int i = 0; i < table.dim; ++i)
            vec[static_cast<size_t>(i)] = parse_double(fields[static_cast<size_t>(i) + 1], "embedding value");
        if (!table.vectors.emplace(fields[0], std::move(vec)).second)
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate entity '" +
                            fields[0] + "'");
    }
    return table;
}

}  // namespace laser
