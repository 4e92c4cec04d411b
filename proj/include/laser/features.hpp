#pragma once
// The ten ranking features for a (query entity, event, language) triple:
// two spatial (km), two temporal (days), five link based, one embedding
// based. Missing spatial or temporal data falls back to fixed sentinels so
// the vector shape never changes.

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "laser/common.hpp"
#include "laser/date.hpp"
#include "laser/geo.hpp"
#include "laser/kg.hpp"
#include "laser/skipgram.hpp"
#include "laser/tsv.hpp"

namespace laser {

constexpr size_t kFeatureCount = 10;

inline const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "language_distance",  "pair_distance",         "interval_overlap",
        "begin_time_distance", "incoming_links",        "outgoing_links",
        "shared_incoming_links", "shared_outgoing_links", "milne_witten",
        "embedding_similarity"};
    return names;
}

// Feature groups for ablation; indices into the fixed feature order.
inline const std::vector<std::pair<std::string, std::vector<size_t>>>& feature_groups() {
    static const std::vector<std::pair<std::string, std::vector<size_t>>> groups = {
        {"spatial", {0, 1}},
        {"temporal", {2, 3}},
        {"links", {4, 5, 6, 7, 8}},
        {"embeddings", {9}},
    };
    return groups;
}

struct FeatureVector {
    double language_distance = 0.0;    // km, event to the language's countries
    double pair_distance = 0.0;        // km, event to query entity
    double interval_overlap = 0.0;     // days
    double begin_time_distance = 0.0;  // days
    double incoming_links = 0.0;
    double outgoing_links = 0.0;
    double shared_incoming_links = 0.0;
    double shared_outgoing_links = 0.0;
    double milne_witten = 0.0;
    double embedding_similarity = 0.0;

    std::array<double, kFeatureCount> to_array() const {
        return {language_distance,  pair_distance,         interval_overlap,
                begin_time_distance, incoming_links,        outgoing_links,
                shared_incoming_links, shared_outgoing_links, milne_witten,
                embedding_similarity};
    }

    static FeatureVector from_array(const std::array<double, kFeatureCount>& a) {
        FeatureVector fv;
        fv.language_distance = a[0];
        fv.pair_distance = a[1];
        fv.interval_overlap = a[2];
        fv.begin_time_distance = a[3];
        fv.incoming_links = a[4];
        fv.outgoing_links = a[5];
        fv.shared_incoming_links = a[6];
        fv.shared_outgoing_links = a[7];
        fv.milne_witten = a[8];
        fv.embedding_similarity = a[9];
        return fv;
    }
};

struct FeatureConfig {
    double missing_distance_sentinel = 20015.09;  // km, half circumference
    double missing_time_sentinel = 36500.0;       // days
    Date reference_date{2021, 12, 31};            // closes open intervals
};

// Minimum distance from the event's coordinates to any country polygon of
// the language; 0 when a coordinate lies inside one.
inline double language_distance(const EntityId& v, const LanguageCode& l,
                                const KnowledgeGraph& graph, const FeatureConfig& cfg) {
    const auto& polys = graph.country_polygons(l);
    if (polys.polygons.empty()) throw DataError("no country polygons for language '" + l + "'");
    const auto& coords = graph.resolve_coordinates(v);
    if (coords.empty()) return cfg.missing_distance_sentinel;
    double best = cfg.missing_distance_sentinel;
    for (const auto& c : coords)
        for (const auto& poly : polys.polygons) best = std::min(best, point_to_polygon_km(c, poly));
    return best;
}

inline double pair_distance(const EntityId& v, const EntityId& e, const KnowledgeGraph& graph,
                            const FeatureConfig& cfg) {
    const auto& cv = graph.resolve_coordinates(v);
    const auto& ce = graph.resolve_coordinates(e);
    if (cv.empty() || ce.empty()) return cfg.missing_distance_sentinel;
    double best = cfg.missing_distance_sentinel;
    for (const auto& a : cv)
        for (const auto& b : ce) best = std::min(best, haversine_km(a, b));
    return best;
}

// Days shared by the two intervals (end minus start), 0 if disjoint or if
// either entity has no time interval. Open ends close at the reference date.
inline double interval_overlap(const EntityId& v, const EntityId& e, const KnowledgeGraph& graph,
                               const FeatureConfig& cfg) {
    const auto& tv = graph.entity(v).time;
    const auto& te = graph.entity(e).time;
    if (!tv || !te) return 0.0;
    Date start = std::max(tv->start, te->start);
    Date end = std::min(tv->end_or(cfg.reference_date), te->end_or(cfg.reference_date));
    long days = days_between(start, end);
    return days > 0 ? static_cast<double>(days) : 0.0;
}

inline double begin_time_distance(const EntityId& v, const EntityId& e,
                                  const KnowledgeGraph& graph, const FeatureConfig& cfg) {
    const auto& tv = graph.entity(v).time;
    const auto& te = graph.entity(e).time;
    if (!tv || !te) return cfg.missing_time_sentinel;
    long days = days_between(tv->start, te->start);
    return static_cast<double>(days < 0 ? -days : days);
}

namespace detail {

inline size_t sorted_intersection_size(const std::vector<EntityId>& a,
                                       const std::vector<EntityId>& b) {
    size_t i = 0, j = 0, count = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

}  // namespace detail

struct LinkFeatures {
    size_t incoming = 0;          // |in(v)|
    size_t outgoing = 0;          // |out(v)|
    size_t shared_incoming = 0;   // |in(v) ∩ in(e)|
    size_t shared_outgoing = 0;   // |out(v) ∩ out(e)|
};

inline LinkFeatures link_features(const EntityId& e, const EntityId& v, const LanguageCode& l,
                                  const KnowledgeGraph& graph) {
    const LinkSet& links = graph.link_set(l);
    LinkFeatures lf;
    const auto& in_v = links.in_neighbors(v);
    const auto& out_v = links.out_neighbors(v);
    lf.incoming = in_v.size();
    lf.outgoing = out_v.size();
    lf.shared_incoming = detail::sorted_intersection_size(in_v, links.in_neighbors(e));
    lf.shared_outgoing = detail::sorted_intersection_size(out_v, links.out_neighbors(e));
    return lf;
}

// Link-overlap relatedness from shared in-links, clamped to [0,1]. Zero when
// either in-set or the intersection is empty.
inline double milne_witten(const EntityId& e, const EntityId& v, const LanguageCode& l,
                           const KnowledgeGraph& graph) {
    const LinkSet& links = graph.link_set(l);
    const auto& in_e = links.in_neighbors(e);
    const auto& in_v = links.in_neighbors(v);
    if (in_e.empty() || in_v.empty()) return 0.0;
    size_t inter = detail::sorted_intersection_size(in_e, in_v);
    if (inter == 0) return 0.0;
    size_t lo = std::min(in_e.size(), in_v.size());
    size_t hi = std::max(in_e.size(), in_v.size());
    size_t total = graph.entities.size();
    if (total <= lo)
        throw DataError("milne_witten: entity count " + std::to_string(total) +
                        " not above smaller in-degree " + std::to_string(lo));
    double value = 1.0 - (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(inter))) /
                             (std::log(static_cast<double>(total)) - std::log(static_cast<double>(lo)));
    return std::min(1.0, std::max(0.0, value));
}

inline FeatureVector extract(const EntityId& e, const EntityId& v, const LanguageCode& l,
                             const KnowledgeGraph& graph, const EmbeddingTable& embeddings,
                             const FeatureConfig& cfg) {
    FeatureVector fv;
    fv.language_distance = language_distance(v, l, graph, cfg);
    fv.pair_distance = pair_distance(v, e, graph, cfg);
    fv.interval_overlap = interval_overlap(v, e, graph, cfg);
    fv.begin_time_distance = begin_time_distance(v, e, graph, cfg);
    LinkFeatures lf = link_features(e, v, l, graph);
    fv.incoming_links = static_cast<double>(lf.incoming);
    fv.outgoing_links = static_cast<double>(lf.outgoing);
    fv.shared_incoming_links = static_cast<double>(lf.shared_incoming);
    fv.shared_outgoing_links = static_cast<double>(lf.shared_outgoing);
    fv.milne_witten = milne_witten(e, v, l, graph);
    fv.embedding_similarity = embeddings.contains(e) && embeddings.contains(v)
                                  ? cosine(embeddings.at(e), embeddings.at(v))
                                  : 0.0;
    return fv;
}

// --- feature matrix artifact ------------------------------------------------

struct FeatureRow {
    EntityId query;
    EntityId event;
    LanguageCode language;
    double rel = 0.0;
    FeatureVector features;
};

inline void save_feature_matrix(const std::vector<FeatureRow>& rows, const std::string& path) {
    auto out = open_output(path);
    out << "# query_id\tevent_id\tlang\trel";
    for (const auto& name : feature_names()) out << '\t' << name;
    out << '\n';
    for (const auto& r : rows) {
        out << r.query << '\t' << r.event << '\t' << r.language << '\t' << format_double(r.rel);
        for (double x : r.features.to_array()) out << '\t' << format_double(x);
        out << '\n';
    }
}

inline std::vector<FeatureRow> load_feature_matrix(const std::string& path) {
    std::vector<FeatureRow> rows;
    TsvReader reader(path);
    std::vector<std::string> f;
    while (reader.next(f)) {
        reader.expect_fields(f, 4 + kFeatureCount);
        FeatureRow r;
        r.query = trim(f[0]);
        r.event = trim(f[1]);
        r.language = trim(f[2]);
        r.rel = parse_double(trim(f[3]), "rel");
        std::array<double, kFeatureCount> a{};
        for (size_t i = 0; i < kFeatureCount; ++i)
            a[i] = parse_double(trim(f[4 + i]), feature_names()[i]);
        r.features = FeatureVector::from_array(a);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace laser
