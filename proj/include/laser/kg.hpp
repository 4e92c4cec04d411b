#pragma once
// Knowledge-graph store: entity records with optional time intervals and
// coordinate sets, per-language directed link sets, and per-language country
// polygons. Everything is immutable once finalize() has run; queries are
// read-only and safe to call from any number of threads.
//
// Input schemas (UTF-8, '#' comment lines skipped):
//   entities.tsv   id \t label \t is_event{0,1} \t t_s \t t_e \t coords \t place_links
//                  coords = "lat,lon;lat,lon", place_links = "id;id"; trailing
//                  empty fields may be omitted
//   links_<l>.tsv  source_id \t target_id
//   countries.tsv  lang \t country_id \t "lat,lon;lat,lon;..."

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "laser/common.hpp"
#include "laser/date.hpp"
#include "laser/geo.hpp"
#include "laser/tsv.hpp"

namespace laser {

struct EntityRecord {
    EntityId id;
    std::string label;
    bool is_event = false;
    std::optional<TimeInterval> time;
    std::vector<Coord> coords;
    std::vector<EntityId> place_links;
};

using EntityTable = std::map<EntityId, EntityRecord>;

// Directed per-language link set with sorted adjacency indexes.
class LinkSet {
public:
    LanguageCode language;
    size_t edge_count = 0;
    size_t self_loops_dropped = 0;
    size_t duplicates_dropped = 0;

    void add_edge(const EntityId& source, const EntityId& target) {
        if (source == target) {
            ++self_loops_dropped;
            return;
        }
        staged_.emplace_back(source, target);
    }

    // Deduplicates edges and builds the adjacency indexes.
    void build() {
        std::sort(staged_.begin(), staged_.end());
        size_t before = staged_.size();
        staged_.erase(std::unique(staged_.begin(), staged_.end()), staged_.end());
        duplicates_dropped += before - staged_.size();
        edge_count = staged_.size();
        out_.clear();
        in_.clear();
        for (const auto& [s, t] : staged_) {
            out_[s].push_back(t);
            in_[t].push_back(s);
        }
        staged_.clear();
        staged_.shrink_to_fit();
        // Sources were visited in sorted order, so out-lists are sorted; the
        // in-lists need a pass.
        for (auto& [id, v] : in_) std::sort(v.begin(), v.end());
    }

    static const std::vector<EntityId>& empty_neighbors() {
        static const std::vector<EntityId> kEmpty;
        return kEmpty;
    }

    const std::vector<EntityId>& out_neighbors(const EntityId& id) const {
        auto it = out_.find(id);
        return it == out_.end() ? empty_neighbors() : it->second;
    }

    const std::vector<EntityId>& in_neighbors(const EntityId& id) const {
        auto it = in_.find(id);
        return it == in_.end() ? empty_neighbors() : it->second;
    }

    bool has_edge(const EntityId& source, const EntityId& target) const {
        const auto& n = out_neighbors(source);
        return std::binary_search(n.begin(), n.end(), target);
    }

    // All ids appearing as an endpoint, sorted.
    std::vector<EntityId> nodes() const {
        std::set<EntityId> ids;
        for (const auto& [id, v] : out_) ids.insert(id);
        for (const auto& [id, v] : in_) ids.insert(id);
        return {ids.begin(), ids.end()};
    }

private:
    std::vector<std::pair<EntityId, EntityId>> staged_;
    std::unordered_map<EntityId, std::vector<EntityId>> out_;
    std::unordered_map<EntityId, std::vector<EntityId>> in_;
};

struct CountryPolygons {
    std::vector<std::string> country_ids;
    std::vector<Polygon> polygons;
};

using CountryPolygonTable = std::map<LanguageCode, CountryPolygons>;

namespace detail {

inline std::vector<Coord> parse_coord_list(const std::string& field, const TsvReader& reader) {
    std::vector<Coord> coords;
    if (trim(field).empty()) return coords;
    for (const auto& part : split(field, ';')) {
        auto pair = split(trim(part), ',');
        if (pair.size() != 2) reader.fail("bad coordinate '" + part + "' (expected lat,lon)");
        Coord c{parse_double(trim(pair[0]), "latitude"), parse_double(trim(pair[1]), "longitude")};
        try {
            check_coord(c);
        } catch (const DataError& e) {
            reader.fail(e.what());
        }
        coords.push_back(c);
    }
    return coords;
}

}  // namespace detail

inline EntityTable load_entities(const std::string& path) {
    EntityTable table;
    TsvReader reader(path);
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() < 3 || f.size() > 7)
            reader.fail("expected 3 to 7 tab-separated fields, got " + std::to_string(f.size()));
        f.resize(7);
        EntityRecord rec;
        rec.id = trim(f[0]);
        if (rec.id.empty()) reader.fail("empty entity id");
        rec.label = f[1];
        std::string flag = trim(f[2]);
        if (flag != "0" && flag != "1") reader.fail("is_event must be 0 or 1, got '" + flag + "'");
        rec.is_event = flag == "1";

        std::string ts = trim(f[3]), te = trim(f[4]);
        if (!ts.empty()) {
            TimeInterval ti;
            try {
                ti.start = parse_date(ts);
                if (!te.empty()) ti.end = parse_date(te);
            } catch (const DataError& e) {
                reader.fail(e.what());
            }
            if (ti.end && days_between(ti.start, *ti.end) < 0)
                reader.fail("interval end " + te + " precedes start " + ts);
            rec.time = ti;
        } else if (!te.empty()) {
            reader.fail("end date without start date");
        }

        rec.coords = detail::parse_coord_list(f[5], reader);
        if (!trim(f[6]).empty()) {
            for (const auto& p : split(f[6], ';')) {
                std::string id = trim(p);
                if (!id.empty()) rec.place_links.push_back(id);
            }
        }

        if (table.count(rec.id)) reader.fail("duplicate entity id '" + rec.id + "'");
        table.emplace(rec.id, std::move(rec));
    }
    return table;
}

inline LinkSet load_link_set(const std::string& path, const LanguageCode& language) {
    LinkSet links;
    links.language = language;
    TsvReader reader(path);
    std::vector<std::string> f;
    while (reader.next(f)) {
        reader.expect_fields(f, 2);
        std::string s = trim(f[0]), t = trim(f[1]);
        if (s.empty() || t.empty()) reader.fail("empty link endpoint");
        links.add_edge(s, t);
    }
    links.build();
    return links;
}

inline CountryPolygonTable load_countries(const std::string& path) {
    CountryPolygonTable table;
    TsvReader reader(path);
    std::vector<std::string> f;
    while (reader.next(f)) {
        reader.expect_fields(f, 3);
        LanguageCode lang = trim(f[0]);
        if (lang.empty()) reader.fail("empty language code");
        Polygon poly = detail::parse_coord_list(f[2], reader);
        if (poly.size() < 3)
            reader.fail("polygon needs at least 3 vertices, got " + std::to_string(poly.size()));
        auto& entry = table[lang];
        entry.country_ids.push_back(trim(f[1]));
        entry.polygons.push_back(std::move(poly));
    }
    return table;
}

class KnowledgeGraph {
public:
    EntityTable entities;
    std::map<LanguageCode, LinkSet> links;
    CountryPolygonTable countries;

    // Freezes the graph: collects the event set, resolves coordinates for
    // every entity (own coords win over place-link coords), and counts link
    // endpoints that never appear in the entity table.
    void finalize() {
        events_.clear();
        resolved_coords_.clear();
        unknown_endpoints_.clear();
        for (const auto& [id, rec] : entities) {
            if (rec.is_event) events_.insert(id);
            resolved_coords_[id] = resolve_uncached(rec);
        }
        for (const auto& [lang, ls] : links) {
            size_t unknown = 0;
            for (const auto& id : ls.nodes())
                if (!entities.count(id)) ++unknown;
            unknown_endpoints_[lang] = unknown;
        }
        finalized_ = true;
    }

    bool finalized() const { return finalized_; }

    const std::set<EntityId>& events() const { return events_; }

    const EntityRecord& entity(const EntityId& id) const {
        auto it = entities.find(id);
        if (it == entities.end()) throw DataError("unknown entity '" + id + "'");
        return it->second;
    }

    bool has_entity(const EntityId& id) const { return entities.count(id) != 0; }

    const LinkSet& link_set(const LanguageCode& l) const {
        auto it = links.find(l);
        if (it == links.end()) throw DataError("no link set loaded for language '" + l + "'");
        return it->second;
    }

    const std::vector<EntityId>& in_neighbors(const EntityId& id, const LanguageCode& l) const {
        return link_set(l).in_neighbors(id);
    }

    const std::vector<EntityId>& out_neighbors(const EntityId& id, const LanguageCode& l) const {
        return link_set(l).out_neighbors(id);
    }

    // Precedence: the entity's own coordinates; else the union of its place
    // links' own coordinates; else empty. Precomputed by finalize().
    const std::vector<Coord>& resolve_coordinates(const EntityId& id) const {
        auto it = resolved_coords_.find(id);
        if (it == resolved_coords_.end()) throw DataError("unknown entity '" + id + "'");
        return it->second;
    }

    const CountryPolygons& country_polygons(const LanguageCode& l) const {
        auto it = countries.find(l);
        if (it == countries.end()) throw DataError("no country polygons for language '" + l + "'");
        return it->second;
    }

    size_t unknown_endpoints(const LanguageCode& l) const {
        auto it = unknown_endpoints_.find(l);
        return it == unknown_endpoints_.end() ? 0 : it->second;
    }

private:
    std::vector<Coord> resolve_uncached(const EntityRecord& rec) const {
        if (!rec.coords.empty()) return rec.coords;
        std::vector<Coord> merged;
        for (const auto& pid : rec.place_links) {
            auto it = entities.find(pid);
            if (it == entities.end()) continue;
            for (const auto& c : it->second.coords) {
                if (std::find(merged.begin(), merged.end(), c) == merged.end()) merged.push_back(c);
            }
        }
        return merged;
    }

    bool finalized_ = false;
    std::set<EntityId> events_;
    std::unordered_map<EntityId, std::vector<Coord>> resolved_coords_;
    std::map<LanguageCode, size_t> unknown_endpoints_;
};

}  // namespace laser
