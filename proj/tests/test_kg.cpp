#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "laser/kg.hpp"
#include "temp_dir.hpp"

using namespace laser;
using testutil::TempDir;

TEST_CASE("load_entities parses minimal and full rows") {
    TempDir dir;
    auto path = dir.write("entities.tsv",
                          "# comment line\n"
                          "Q1\tCOVID-19 pandemic\t1\t2019-12-01\n"
                          "Q2\tBerlin\t0\t\t\t52.52,13.405\n"
                          "Q3\tTour de France 2021\t1\t2021-06-26\t2021-07-18\t"
                          "48.85,2.35;43.29,5.37\tQ2;Q4\n"
                          "\n"
                          "Q4\tParis\t0\n");
    auto table = load_entities(path);
    REQUIRE(table.size() == 4);

    const auto& q1 = table.at("Q1");
    CHECK(q1.label == "COVID-19 pandemic");
    CHECK(q1.is_event);
    REQUIRE(q1.time.has_value());
    CHECK(q1.time->start == Date{2019, 12, 1});
    CHECK_FALSE(q1.time->end.has_value());
    CHECK(q1.coords.empty());
    CHECK(q1.place_links.empty());

    const auto& q2 = table.at("Q2");
    CHECK_FALSE(q2.is_event);
    CHECK_FALSE(q2.time.has_value());
    REQUIRE(q2.coords.size() == 1);
    CHECK(q2.coords[0].lat == Catch::Approx(52.52));
    CHECK(q2.coords[0].lon == Catch::Approx(13.405));

    const auto& q3 = table.at("Q3");
    REQUIRE(q3.time.has_value());
    REQUIRE(q3.time->end.has_value());
    CHECK(*q3.time->end == Date{2021, 7, 18});
    CHECK(q3.coords.size() == 2);
    CHECK(q3.place_links == std::vector<EntityId>{"Q2", "Q4"});

    CHECK(table.at("Q4").coords.empty());
}

TEST_CASE("load_entities rejects malformed rows with line context") {
    TempDir dir;

    SECTION("too few fields") {
        auto p = dir.write("e.tsv", "Q1\tlabel\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("expected 3 to 7")));
    }
    SECTION("too many fields") {
        auto p = dir.write("e.tsv", "Q1\tl\t0\t\t\t\t\textra\n");
        CHECK_THROWS_AS(load_entities(p), DataError);
    }
    SECTION("bad is_event flag") {
        auto p = dir.write("e.tsv", "Q1\tl\t2\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("is_event must be 0 or 1")));
    }
    SECTION("empty id") {
        auto p = dir.write("e.tsv", "\tl\t0\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("empty entity id")));
    }
    SECTION("end date without start date") {
        auto p = dir.write("e.tsv", "Q1\tl\t1\t\t2021-01-01\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("end date without start")));
    }
    SECTION("interval end precedes start") {
        auto p = dir.write("e.tsv", "Q1\tl\t1\t2021-05-01\t2021-04-30\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("precedes start")));
    }
    SECTION("latitude out of range") {
        auto p = dir.write("e.tsv", "Q1\tl\t0\t\t\t95.0,10.0\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("out of range")));
    }
    SECTION("coordinate missing its longitude half") {
        auto p = dir.write("e.tsv", "Q1\tl\t0\t\t\t52.52\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("expected lat,lon")));
    }
    SECTION("duplicate id") {
        auto p = dir.write("e.tsv", "Q1\tl\t0\nQ1\tl2\t1\t2020-01-01\n");
        CHECK_THROWS_MATCHES(load_entities(p), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("duplicate entity id 'Q1'")));
    }
    SECTION("error message carries path and line number") {
        auto p = dir.write("e.tsv", "Q1\tl\t0\n# note\nQ2\tl\t9\n");
        try {
            load_entities(p);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            std::string msg = e.what();
            CHECK(msg.find(p) != std::string::npos);
            CHECK(msg.find(":3:") != std::string::npos);
        }
    }
    SECTION("missing file") {
        CHECK_THROWS_AS(load_entities((dir.path() / "nope.tsv").string()), DataError);
    }
}

TEST_CASE("load_link_set drops self-loops and duplicates") {
    TempDir dir;
    auto p = dir.write("links.tsv",
                       "a\tb\n"
                       "b\ta\n"
                       "a\ta\n"
                       "a\tb\n"
                       "a\tc\n");
    auto ls = load_link_set(p, "de");
    CHECK(ls.language == "de");
    CHECK(ls.edge_count == 3);
    CHECK(ls.self_loops_dropped == 1);
    CHECK(ls.duplicates_dropped == 1);
    CHECK(ls.out_neighbors("a") == std::vector<EntityId>{"b", "c"});
    CHECK(ls.out_neighbors("b") == std::vector<EntityId>{"a"});
    CHECK(ls.in_neighbors("a") == std::vector<EntityId>{"b"});
    CHECK(ls.in_neighbors("b") == std::vector<EntityId>{"a"});
    CHECK(ls.out_neighbors("zzz").empty());
    CHECK(ls.has_edge("a", "b"));
    CHECK(ls.has_edge("a", "c"));
    CHECK_FALSE(ls.has_edge("a", "a"));
    CHECK_FALSE(ls.has_edge("c", "a"));
    CHECK(ls.nodes() == std::vector<EntityId>{"a", "b", "c"});
}

TEST_CASE("load_link_set handles empty files and rejects bad rows") {
    TempDir dir;
    SECTION("empty file") {
        auto ls = load_link_set(dir.write("links.tsv", ""), "en");
        CHECK(ls.edge_count == 0);
        CHECK(ls.nodes().empty());
    }
    SECTION("wrong field count") {
        auto p = dir.write("links.tsv", "a\tb\tc\n");
        CHECK_THROWS_AS(load_link_set(p, "en"), DataError);
    }
    SECTION("empty endpoint") {
        auto p = dir.write("links.tsv", "a\t\n");
        CHECK_THROWS_MATCHES(load_link_set(p, "en"), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("empty link endpoint")));
    }
}

TEST_CASE("link set neighbor counts match a raw file re-scan") {
    std::mt19937_64 rng(20210814);
    TempDir dir;
    std::vector<std::string> ids;
    for (int i = 0; i < 12; ++i) ids.push_back("N" + std::to_string(i));

    std::string raw;
    std::vector<std::pair<std::string, std::string>> lines;
    for (int i = 0; i < 300; ++i) {
        const auto& s = ids[rng() % ids.size()];
        const auto& t = ids[rng() % ids.size()];
        lines.emplace_back(s, t);
        raw += s + "\t" + t + "\n";
    }
    auto ls = load_link_set(dir.write("links.tsv", raw), "de");

    std::map<std::string, std::set<std::string>> in, out;
    size_t self_loops = 0, kept = 0, total_non_loop = 0;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [s, t] : lines) {
        if (s == t) {
            ++self_loops;
            continue;
        }
        ++total_non_loop;
        if (seen.insert({s, t}).second) ++kept;
        out[s].insert(t);
        in[t].insert(s);
    }
    CHECK(ls.self_loops_dropped == self_loops);
    CHECK(ls.duplicates_dropped == total_non_loop - kept);
    CHECK(ls.edge_count == kept);
    for (const auto& id : ids) {
        CHECK(ls.in_neighbors(id).size() == in[id].size());
        CHECK(ls.out_neighbors(id).size() == out[id].size());
    }
}

TEST_CASE("load_countries groups polygons by language") {
    TempDir dir;
    auto p = dir.write("countries.tsv",
                       "de\tQ183\t47.3,5.9;55.1,5.9;55.1,15.0;47.3,15.0\n"
                       "de\tQ40\t46.4,9.5;49.0,9.5;49.0,17.2;46.4,17.2\n"
                       "fr\tQ142\t41.3,-5.1;51.1,-5.1;51.1,9.6;41.3,9.6\n");
    auto table = load_countries(p);
    REQUIRE(table.size() == 2);
    CHECK(table.at("de").country_ids == std::vector<std::string>{"Q183", "Q40"});
    CHECK(table.at("de").polygons.size() == 2);
    CHECK(table.at("fr").polygons.size() == 1);
    CHECK(table.at("fr").polygons[0].size() == 4);

    SECTION("degenerate polygon rejected") {
        auto bad = dir.write("bad.tsv", "de\tQ183\t47.3,5.9;55.1,5.9\n");
        CHECK_THROWS_MATCHES(load_countries(bad), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("at least 3 vertices")));
    }
    SECTION("empty language code rejected") {
        auto bad = dir.write("bad.tsv", "\tQ183\t47.3,5.9;55.1,5.9;55.1,15.0\n");
        CHECK_THROWS_AS(load_countries(bad), DataError);
    }
}

namespace {

KnowledgeGraph make_graph() {
    TempDir dir;
    KnowledgeGraph g;
    g.entities = load_entities(dir.write(
        "entities.tsv",
        "E1\tFestival\t1\t2021-07-01\t2021-07-03\t\tP1;P2\n"
        "E2\tSummit\t1\t2021-03-01\t\t50.0,8.0\tP1\n"
        "P1\tTown A\t0\t\t\t10.0,10.0;11.0,11.0\n"
        "P2\tTown B\t0\t\t\t11.0,11.0;12.0,12.0\n"
        "P3\tNowhere\t0\t\t\t\tMISSING\n"));
    g.links["de"] = load_link_set(dir.write("links_de.tsv",
                                            "E1\tP1\n"
                                            "P1\tE1\n"
                                            "GHOST\tE1\n"
                                            "E2\tP2\n"),
                                  "de");
    g.countries = load_countries(
        dir.write("countries.tsv", "de\tQ183\t47.3,5.9;55.1,5.9;55.1,15.0;47.3,15.0\n"));
    g.finalize();
    return g;
}

}  // namespace

TEST_CASE("KnowledgeGraph finalize collects events and resolves coordinates") {
    auto g = make_graph();
    CHECK(g.finalized());
    CHECK(g.events() == std::set<EntityId>{"E1", "E2"});

    // Own coordinates win over place links.
    const auto& e2 = g.resolve_coordinates("E2");
    REQUIRE(e2.size() == 1);
    CHECK(e2[0] == Coord{50.0, 8.0});

    // No own coordinates: union over place links, shared vertex deduplicated.
    const auto& e1 = g.resolve_coordinates("E1");
    REQUIRE(e1.size() == 3);
    CHECK(std::count(e1.begin(), e1.end(), Coord{11.0, 11.0}) == 1);

    // Place link pointing at an id absent from the table contributes nothing.
    CHECK(g.resolve_coordinates("P3").empty());

    // Resolution is idempotent: same reference both calls.
    CHECK(&g.resolve_coordinates("E1") == &g.resolve_coordinates("E1"));
}

TEST_CASE("KnowledgeGraph accessors reject unknown keys") {
    auto g = make_graph();
    CHECK_THROWS_MATCHES(g.entity("NOPE"), DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("unknown entity 'NOPE'")));
    CHECK_THROWS_AS(g.resolve_coordinates("NOPE"), DataError);
    CHECK_THROWS_MATCHES(g.link_set("xx"), DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("no link set loaded")));
    CHECK_THROWS_MATCHES(g.country_polygons("xx"), DataError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("no country polygons")));
    CHECK(g.has_entity("E1"));
    CHECK_FALSE(g.has_entity("GHOST"));
}

TEST_CASE("KnowledgeGraph tracks link endpoints missing from the entity table") {
    auto g = make_graph();
    CHECK(g.unknown_endpoints("de") == 1);
    CHECK(g.unknown_endpoints("fr") == 0);
    // Unknown endpoints still participate in adjacency queries.
    CHECK(g.in_neighbors("E1", "de") == std::vector<EntityId>{"GHOST", "P1"});
    CHECK(g.out_neighbors("E1", "de") == std::vector<EntityId>{"P1"});
}

TEST_CASE("loading the same files twice yields identical observable graphs") {
    auto a = make_graph();
    auto b = make_graph();
    REQUIRE(a.entities.size() == b.entities.size());
    CHECK(a.events() == b.events());
    for (const auto& [id, rec] : a.entities) {
        CHECK(b.entities.at(id).label == rec.label);
        CHECK(b.resolve_coordinates(id) == a.resolve_coordinates(id));
    }
    const auto& la = a.link_set("de");
    const auto& lb = b.link_set("de");
    CHECK(la.edge_count == lb.edge_count);
    for (const auto& id : la.nodes()) {
        CHECK(la.out_neighbors(id) == lb.out_neighbors(id));
        CHECK(la.in_neighbors(id) == lb.in_neighbors(id));
    }
}
