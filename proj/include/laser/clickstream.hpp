#pragma once
// Click ingestion and the relevance labels derived from it: balanced click
// counts (each language rescaled to the global click mass), per-language
// relevance shares, ground-truth construction with negative sampling, and
// cross-validation fold assignment over query entities.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "laser/common.hpp"
#include "laser/tsv.hpp"

namespace laser {

using ClickPair = std::pair<EntityId, EntityId>;  // (source, target)

struct ClickTable {
    LanguageCode language;
    std::map<ClickPair, long long> counts;

    long long total() const {
        long long t = 0;
        for (const auto& [pair, c] : counts) t += c;
        return t;
    }
};

inline ClickTable load_clicks(const std::string& path, const LanguageCode& language) {
    ClickTable table;
    table.language = language;
    TsvReader reader(path);
    std::vector<std::string> f;
    while (reader.next(f)) {
        reader.expect_fields(f, 3);
        std::string s = trim(f[0]), t = trim(f[1]);
        if (s.empty() || t.empty()) reader.fail("empty click endpoint");
        long long count = parse_int(trim(f[2]), "click count");
        if (count <= 0) reader.fail("click count must be positive, got " + trim(f[2]));
        table.counts[{s, t}] += count;  // duplicate pairs aggregate
    }
    return table;
}

// Balanced click counts: every language's counts are rescaled so that its
// total matches the grand total over all languages, removing language-size
// bias. Languages with zero total clicks are excluded from the language set.
struct BalancedClicks {
    std::vector<LanguageCode> languages;  // effective language set, sorted
    std::map<ClickPair, std::map<LanguageCode, double>> values;
    std::vector<LanguageCode> excluded_languages;

    double at(const ClickPair& pair, const LanguageCode& l) const {
        auto it = values.find(pair);
        if (it == values.end()) return 0.0;
        auto jt = it->second.find(l);
        return jt == it->second.end() ? 0.0 : jt->second;
    }
};

inline BalancedClicks balance_clicks(const std::vector<ClickTable>& tables) {
    if (tables.empty()) throw UsageError("balance_clicks: need at least one language table");
    BalancedClicks out;
    std::map<LanguageCode, long long> per_language_total;
    long long grand_total = 0;
    for (const auto& t : tables) {
        long long total = t.total();
        if (total == 0) {
            out.excluded_languages.push_back(t.language);
            continue;
        }
        per_language_total[t.language] += total;
        grand_total += total;
    }
    for (const auto& [l, t] : per_language_total) out.languages.push_back(l);
    for (const auto& t : tables) {
        if (!per_language_total.count(t.language)) continue;
        double scale = static_cast<double>(grand_total) /
                       static_cast<double>(per_language_total.at(t.language));
        for (const auto& [pair, count] : t.counts)
            out.values[pair][t.language] += static_cast<double>(count) * scale;
    }
    return out;
}

// Share of the pair's balanced clicks that falls on language l. Zero when the
// pair was never clicked in l; undefined (error) when it was never clicked in
// any language. Callers are expected to ask only about entity->event pairs.
inline double relevance(const EntityId& e, const EntityId& v, const LanguageCode& l,
                        const BalancedClicks& balanced) {
    auto it = balanced.values.find({e, v});
    if (it == balanced.values.end())
        throw DataError("undefined relevance: pair (" + e + ", " + v +
                        ") was never clicked in any language");
    double denom = 0.0;
    for (const auto& [lang, b] : it->second) denom += b;
    if (denom <= 0.0)
        throw DataError("undefined relevance: pair (" + e + ", " + v + ") has zero click mass");
    auto jt = it->second.find(l);
    if (jt == it->second.end()) return 0.0;
    return jt->second / denom;
}

// Dense (source, event) -> language -> relevance table over the effective
// language set; rows sum to 1 for every clicked pair.
struct RelevanceTable {
    std::vector<LanguageCode> languages;
    std::map<ClickPair, std::map<LanguageCode, double>> rel;

    double at(const EntityId& e, const EntityId& v, const LanguageCode& l) const {
        auto it = rel.find({e, v});
        if (it == rel.end())
            throw DataError("undefined relevance: pair (" + e + ", " + v + ") not in table");
        auto jt = it->second.find(l);
        return jt == it->second.end() ? 0.0 : jt->second;
    }
};

// Keeps only pairs whose target is a known event.
inline RelevanceTable build_relevance_table(const BalancedClicks& balanced,
                                            const std::set<EntityId>& events) {
    RelevanceTable table;
    table.languages = balanced.languages;
    for (const auto& [pair, by_lang] : balanced.values) {
        if (!events.count(pair.second)) continue;
        double denom = 0.0;
        for (const auto& [lang, b] : by_lang) denom += b;
        if (denom <= 0.0) continue;
        auto& row = table.rel[pair];
        for (const auto& l : table.languages) {
            auto jt = by_lang.find(l);
            row[l] = jt == by_lang.end() ? 0.0 : jt->second / denom;
        }
    }
    return table;
}

struct GroundTruthItem {
    EntityId event;
    double rel = 0.0;
};

struct GroundTruthEntry {
    EntityId query;
    std::vector<GroundTruthItem> items;  // positives (rel desc) then negatives
    size_t positive_count = 0;
};

struct GroundTruth {
    LanguageCode language;
    std::vector<GroundTruthEntry> entries;  // sorted by query id
};

// For each query with at least one clicked event: positives ordered by
// relevance (ties by event id), then the same number of uniformly sampled
// negative events (never clicked from the query, not the query itself).
inline GroundTruth build_ground_truth(const LanguageCode& language, const RelevanceTable& table,
                                      const std::set<EntityId>& event_universe,
                                      std::uint64_t seed) {
    std::map<EntityId, std::vector<GroundTruthItem>> positives_by_query;
    for (const auto& [pair, by_lang] : table.rel) {
        auto jt = by_lang.find(language);
        double r = jt == by_lang.end() ? 0.0 : jt->second;
        positives_by_query[pair.first].push_back({pair.second, r});
    }

    GroundTruth gt;
    gt.language = language;
    for (auto& [query, positives] : positives_by_query) {
        std::sort(positives.begin(), positives.end(),
                  [](const GroundTruthItem& a, const GroundTruthItem& b) {
                      if (a.rel != b.rel) return a.rel > b.rel;
                      return a.event < b.event;
                  });
        std::set<EntityId> positive_ids;
        for (const auto& p : positives) positive_ids.insert(p.event);

        std::vector<EntityId> eligible;
        for (const auto& v : event_universe)
            if (!positive_ids.count(v) && v != query) eligible.push_back(v);
        if (eligible.size() < positives.size())
            throw DataError("query '" + query + "': only " + std::to_string(eligible.size()) +
                            " eligible negatives for " + std::to_string(positives.size()) +
                            " positives");

        std::mt19937_64 rng(derive_seed(seed, "negatives", fnv1a64(query)));
        // Partial Fisher-Yates: the first n slots become the sample.
        size_t n = positives.size();
        for (size_t i = 0; i < n; ++i) {
            size_t j = i + static_cast<size_t>(uniform_below(rng, eligible.size() - i));
            std::swap(eligible[i], eligible[j]);
        }

        GroundTruthEntry entry;
        entry.query = query;
        entry.items = std::move(positives);
        entry.positive_count = n;
        for (size_t i = 0; i < n; ++i) entry.items.push_back({eligible[i], 0.0});
        gt.entries.push_back(std::move(entry));
    }
    return gt;
}

struct FoldAssignment {
    int k = 0;
    std::map<EntityId, int> fold_of;

    std::vector<EntityId> queries_in_fold(int fold) const {
        std::vector<EntityId> out;
        for (const auto& [q, f] : fold_of)
            if (f == fold) out.push_back(q);
        return out;
    }
};

// Queries must arrive sorted so the shuffle is a pure function of the seed.
inline FoldAssignment assign_folds(std::vector<EntityId> queries, int k, std::uint64_t seed) {
    if (k < 2) throw UsageError("fold count must be at least 2, got " + std::to_string(k));
    if (queries.size() < static_cast<size_t>(k))
        throw UsageError("need at least " + std::to_string(k) + " queries for " +
                         std::to_string(k) + " folds, got " + std::to_string(queries.size()));
    std::mt19937_64 rng(derive_seed(seed, "folds"));
    deterministic_shuffle(queries, rng);
    FoldAssignment fa;
    fa.k = k;
    for (size_t i = 0; i < queries.size(); ++i)
        fa.fold_of[queries[i]] = static_cast<int>(i % static_cast<size_t>(k));
    return fa;
}

inline FoldAssignment split_folds(const GroundTruth& gt, int k, std::uint64_t seed) {
    std::vector<EntityId> queries;
    for (const auto& e : gt.entries) queries.push_back(e.query);
    return assign_folds(std::move(queries), k, seed);
}

// --- artifact round trips -------------------------------------------------

inline void save_ground_truth(const GroundTruth& gt, const std::string& path) {
    auto out = open_output(path);
    out << "# lang\tquery_id\trank\tevent_id\trel\n";
    for (const auto& entry : gt.entries) {
        for (size_t i = 0; i < entry.items.size(); ++i) {
            out << gt.language << '\t' << entry.query << '\t' << i + 1 << '\t'
                << entry.items[i].event << '\t' << format_double(entry.items[i].rel) << '\n';
        }
    }
}

inline GroundTruth load_ground_truth(const std::string& path, const LanguageCode& language) {
    GroundTruth gt;
    gt.language = language;
    TsvReader reader(path);
    std::vector<std::string> f;
    GroundTruthEntry* current = nullptr;
    while (reader.next(f)) {
        reader.expect_fields(f, 5);
        if (trim(f[0]) != language) reader.fail("language mismatch: expected " + language);
        const std::string query = trim(f[1]);
        if (!current || current->query != query) {
            gt.entries.push_back({query, {}, 0});
            current = &gt.entries.back();
        }
        current->items.push_back({trim(f[3]), parse_double(trim(f[4]), "rel")});
    }
    // Positive counts are structural: the second half of each entry is the
    // negative sample, so the split point is the midpoint.
    for (auto& e : gt.entries) e.positive_count = e.items.size() / 2;
    std::sort(gt.entries.begin(), gt.entries.end(),
              [](const GroundTruthEntry& a, const GroundTruthEntry& b) { return a.query < b.query; });
    return gt;
}

inline void save_relevance_table(const RelevanceTable& table, const std::string& path) {
    auto out = open_output(path);
    out << "# source_id\tevent_id\tlang\trel\n";
    for (const auto& [pair, by_lang] : table.rel)
        for (const auto& [lang, r] : by_lang)
            out << pair.first << '\t' << pair.second << '\t' << lang << '\t' << format_double(r)
                << '\n';
}

inline RelevanceTable load_relevance_table(const std::string& path) {
    RelevanceTable table;
    std::set<LanguageCode> langs;
    TsvReader reader(path);
    std::vector<std::string> f;
    while (reader.next(f)) {
        reader.expect_fields(f, 4);
        LanguageCode lang = trim(f[2]);
        table.rel[{trim(f[0]), trim(f[1])}][lang] = parse_double(trim(f[3]), "rel");
        langs.insert(lang);
    }
    table.languages.assign(langs.begin(), langs.end());
    return table;
}

}  // namespace laser
