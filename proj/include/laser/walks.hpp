#pragma once
// Random-walk corpus generation over a language's link graph. Walks follow
// out-edges; an undirected view adds each edge's reverse. Transitions are
// either uniform or biased by the return parameter p and in-out parameter q.
// Every (start node, walk index) pair gets its own seeded generator, so the
// corpus is identical no matter how many workers produced it.

#include <map>
#include <string>
#include <thread>
#include <vector>

#include "laser/common.hpp"
#include "laser/kg.hpp"

namespace laser {

enum class WalkStrategy { Uniform, Biased };

struct WalkConfig {
    int walk_length = 40;      // nodes per walk, including the start
    int walks_per_node = 10;
    WalkStrategy strategy = WalkStrategy::Uniform;
    double p = 1.0;            // return parameter (biased strategy)
    double q = 1.0;            // in-out parameter (biased strategy)
    bool treat_undirected = false;
    int workers = 1;
};

class WalkGraph {
public:
    WalkGraph(const LinkSet& links, bool treat_undirected) {
        for (const auto& node : links.nodes()) {
            std::vector<EntityId> nbrs = links.out_neighbors(node);
            if (treat_undirected) {
                const auto& in = links.in_neighbors(node);
                nbrs.insert(nbrs.end(), in.begin(), in.end());
                std::sort(nbrs.begin(), nbrs.end());
                nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
            }
            if (!nbrs.empty()) starts_.push_back(node);
            adj_.emplace(node, std::move(nbrs));
        }
    }

    const std::vector<EntityId>& neighbors(const EntityId& node) const {
        static const std::vector<EntityId> empty;
        auto it = adj_.find(node);
        return it == adj_.end() ? empty : it->second;
    }

    bool connected(const EntityId& a, const EntityId& b) const {
        const auto& nbrs = neighbors(a);
        return std::binary_search(nbrs.begin(), nbrs.end(), b);
    }

    // Sorted nodes with at least one traversable neighbor; walk start points.
    const std::vector<EntityId>& start_nodes() const { return starts_; }

private:
    std::map<EntityId, std::vector<EntityId>> adj_;
    std::vector<EntityId> starts_;
};

// One walk from `start`. A start without neighbors yields just [start]; a
// sink reached mid-walk truncates it.
inline std::vector<EntityId> single_walk(const WalkGraph& graph, const EntityId& start,
                                         const WalkConfig& cfg, std::mt19937_64& rng) {
    if (cfg.walk_length < 1) throw UsageError("walk length must be at least 1");
    if (cfg.strategy == WalkStrategy::Biased && (cfg.p <= 0.0 || cfg.q <= 0.0))
        throw UsageError("walk bias parameters p and q must be positive");
    std::vector<EntityId> walk;
    walk.reserve(static_cast<size_t>(cfg.walk_length));
    walk.push_back(start);
    while (walk.size() < static_cast<size_t>(cfg.walk_length)) {
        const EntityId& cur = walk.back();
        const auto& nbrs = graph.neighbors(cur);
        if (nbrs.empty()) break;
        if (cfg.strategy == WalkStrategy::Uniform || walk.size() == 1) {
            // The first step has no previous node, so it is always uniform.
            walk.push_back(nbrs[static_cast<size_t>(uniform_below(rng, nbrs.size()))]);
            continue;
        }
        const EntityId& prev = walk[walk.size() - 2];
        std::vector<double> cum(nbrs.size());
        double total = 0.0;
        for (size_t i = 0; i < nbrs.size(); ++i) {
            double w;
            if (nbrs[i] == prev)
                w = 1.0 / cfg.p;
            else if (graph.connected(prev, nbrs[i]))
                w = 1.0;
            else
                w = 1.0 / cfg.q;
            total += w;
            cum[i] = total;
        }
        double r = uniform_real01(rng) * total;
        size_t pick = static_cast<size_t>(
            std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
        if (pick >= nbrs.size()) pick = nbrs.size() - 1;
        walk.push_back(nbrs[pick]);
    }
    return walk;
}

// walks_per_node walks from every node that has a traversable neighbor, in
// (start node, walk index) order.
inline std::vector<std::vector<EntityId>> generate_walks(const WalkGraph& graph,
                                                         const WalkConfig& cfg,
                                                         std::uint64_t seed) {
    if (cfg.walks_per_node < 1) throw UsageError("walks per node must be at least 1");
    const auto& starts = graph.start_nodes();
    size_t per = static_cast<size_t>(cfg.walks_per_node);
    std::vector<std::vector<EntityId>> corpus(starts.size() * per);

    auto run_range = [&](size_t begin, size_t end) {
        for (size_t ni = begin; ni < end; ++ni) {
            std::uint64_t node_seed = derive_seed(seed, "walk", fnv1a64(starts[ni]));
            for (size_t w = 0; w < per; ++w) {
                std::mt19937_64 rng(mix64(node_seed + w));
                corpus[ni * per + w] = single_walk(graph, starts[ni], cfg, rng);
            }
        }
    };

    int workers = std::max(1, cfg.workers);
    if (workers == 1 || starts.size() < 2) {
        run_range(0, starts.size());
    } else {
        size_t nthreads = std::min<size_t>(static_cast<size_t>(workers), starts.size());
        std::vector<std::thread> threads;
        size_t chunk = (starts.size() + nthreads - 1) / nthreads;
        for (size_t t = 0; t < nthreads; ++t) {
            size_t begin = t * chunk;
            size_t end = std::min(starts.size(), begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_range, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    return corpus;
}

}  // namespace laser
