#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "laser/pipeline.hpp"
#include "temp_dir.hpp"

using namespace laser;
using testutil::TempDir;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Two-language mini dataset: 10 events, 4 query pages, dense enough links
// that every node is reached by walks, and clicks in both languages.
struct MiniDataset {
    TempDir dir;
    std::string config_path;

    MiniDataset() {
        std::string entities;
        for (int i = 0; i < 10; ++i) {
            // Events alternate between a Germany-box and a France-box point,
            // all dated within 2021; two get no time interval.
            double lat = i % 2 == 0 ? 51.0 + 0.3 * i : 44.0 + 0.3 * i;
            double lon = i % 2 == 0 ? 9.0 + 0.2 * i : 2.0 + 0.2 * i;
            std::string time = i < 8 ? "2021-0" + std::to_string(1 + i % 8) + "-10\t2021-0" +
                                           std::to_string(1 + i % 8) + "-20"
                                     : "\t";
            entities += "e" + std::to_string(i) + "\tEvent " + std::to_string(i) + "\t1\t" + time +
                        "\t" + std::to_string(lat) + "," + std::to_string(lon) + "\n";
        }
        for (int i = 0; i < 4; ++i)
            entities += "q" + std::to_string(i) + "\tPage " + std::to_string(i) + "\t0\t\t\t" +
                        std::to_string(48.0 + i) + "," + std::to_string(6.0 + i) + "\n";

        // Click pairs shared by both languages with different counts.
        const std::vector<std::pair<std::string, std::string>> clicks = {
            {"q0", "e0"}, {"q0", "e1"}, {"q0", "e2"}, {"q1", "e1"}, {"q1", "e3"},
            {"q2", "e2"}, {"q2", "e4"}, {"q3", "e0"}, {"q3", "e5"},
        };
        std::string clicks_de, clicks_fr;
        for (size_t i = 0; i < clicks.size(); ++i) {
            clicks_de += clicks[i].first + "\t" + clicks[i].second + "\t" +
                         std::to_string(5 + 3 * i) + "\n";
            clicks_fr += clicks[i].first + "\t" + clicks[i].second + "\t" +
                         std::to_string(20 - 2 * i) + "\n";
        }

        // Links: click edges both ways plus an event ring, same shape in both
        // languages with a few extras in fr.
        std::string links;
        for (const auto& [s, t] : clicks) links += s + "\t" + t + "\n" + t + "\t" + s + "\n";
        for (int i = 0; i < 10; ++i)
            links += "e" + std::to_string(i) + "\te" + std::to_string((i + 1) % 10) + "\n";
        std::string links_fr = links + "e0\te5\ne5\te0\n";

        dir.write("entities.tsv", entities);
        dir.write("countries.tsv",
                  "de\tQ183\t47.2,5.8;55.5,5.8;55.5,15.5;47.2,15.5\n"
                  "fr\tQ142\t41.3,-5.2;51.5,-5.2;51.5,9.6;41.3,9.6\n");
        dir.write("links_de.tsv", links);
        dir.write("links_fr.tsv", links_fr);
        dir.write("clicks_de.tsv", clicks_de);
        dir.write("clicks_fr.tsv", clicks_fr);
        config_path = dir.write("laser.conf",
                                "# mini dataset\n"
                                "data.entities = entities.tsv\n"
                                "data.countries = countries.tsv\n"
                                "data.links.de = links_de.tsv\n"
                                "data.links.fr = links_fr.tsv\n"
                                "data.clicks.de = clicks_de.tsv\n"
                                "data.clicks.fr = clicks_fr.tsv\n"
                                "languages = de,fr\n"
                                "output_dir = out\n"
                                "seed = 42\n"
                                "workers = 1\n"
                                "candidate_k = 50\n"
                                "walks.length = 8\n"
                                "walks.per_node = 3\n"
                                "embed.dim = 8\n"
                                "embed.window = 3\n"
                                "embed.negatives = 3\n"
                                "embed.epochs = 2\n"
                                "ltr.trees = 5\n"
                                "ltr.max_leaves = 4\n"
                                "eval.folds = 2\n"
                                "eval.k = 10\n"
                                "eval.recall_min_positives = 1\n");
    }
};

}  // namespace

TEST_CASE("load_pipeline_config parses keys and resolves relative paths") {
    MiniDataset data;
    auto cfg = load_pipeline_config(data.config_path);

    CHECK(cfg.languages == std::vector<LanguageCode>{"de", "fr"});
    CHECK(cfg.seed == 42);
    CHECK(cfg.workers == 1);
    CHECK(cfg.candidate_k == 50);
    CHECK(cfg.walks.walk_length == 8);
    CHECK(cfg.walks.walks_per_node == 3);
    CHECK(cfg.embed.dim == 8);
    CHECK(cfg.ltr.n_trees == 5);
    CHECK(cfg.ltr.max_leaves == 4);
    CHECK(cfg.eval_folds == 2);
    CHECK(cfg.recall_min_positives == 1);
    // Relative paths resolve against the config file's directory.
    CHECK(cfg.entities_path == (data.dir.path() / "entities.tsv").lexically_normal().string());
    CHECK(cfg.output_dir == (data.dir.path() / "out").lexically_normal().string());
    // The seed and worker counts propagate into the sub-configs.
    CHECK(cfg.ltr.seed == cfg.seed);
    CHECK(cfg.walks.workers == cfg.workers);
    CHECK(cfg.embed.workers == cfg.workers);

    SECTION("absolute paths pass through") {
        TempDir other;
        auto p = other.write("c.conf",
                             "data.entities = /abs/entities.tsv\n"
                             "data.countries = /abs/countries.tsv\n"
                             "data.links.de = /abs/links.tsv\n"
                             "data.clicks.de = /abs/clicks.tsv\n"
                             "languages = de\n");
        auto c = load_pipeline_config(p);
        CHECK(c.entities_path == "/abs/entities.tsv");
        CHECK(c.links_paths.at("de") == "/abs/links.tsv");
    }
}

TEST_CASE("load_pipeline_config rejects malformed configs") {
    TempDir dir;
    const std::string base =
        "data.entities = e.tsv\n"
        "data.countries = c.tsv\n"
        "data.links.de = l.tsv\n"
        "data.clicks.de = k.tsv\n"
        "languages = de\n";

    SECTION("unknown key") {
        auto p = dir.write("c.conf", base + "walks.lenght = 8\n");
        CHECK_THROWS_MATCHES(load_pipeline_config(p), UsageError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("unknown config key")));
    }
    SECTION("duplicate key") {
        auto p = dir.write("c.conf", base + "seed = 1\nseed = 2\n");
        CHECK_THROWS_MATCHES(load_pipeline_config(p), UsageError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("duplicate key 'seed'")));
    }
    SECTION("line without equals sign") {
        auto p = dir.write("c.conf", base + "just words\n");
        CHECK_THROWS_MATCHES(load_pipeline_config(p), UsageError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("expected 'key = value'")));
    }
    SECTION("missing required keys") {
        auto p = dir.write("c.conf", "languages = de\n");
        CHECK_THROWS_MATCHES(load_pipeline_config(p), UsageError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("missing key 'data.entities'")));
        auto p2 = dir.write("c2.conf",
                            "data.entities = e.tsv\ndata.countries = c.tsv\nlanguages = de\n");
        CHECK_THROWS_MATCHES(load_pipeline_config(p2), UsageError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("missing key 'data.links.de'")));
    }
    SECTION("bad values") {
        auto p = dir.write("c.conf", base + "walks.undirected = yes\n");
        CHECK_THROWS_AS(load_pipeline_config(p), UsageError);
        auto p2 = dir.write("c2.conf", base + "seed = abc\n");
        CHECK_THROWS_AS(load_pipeline_config(p2), UsageError);
        auto p3 = dir.write("c3.conf", base + "candidate_k = 0\n");
        CHECK_THROWS_AS(load_pipeline_config(p3), UsageError);
        auto p4 = dir.write("c4.conf", base + "walks.strategy = bfs\n");
        CHECK_THROWS_AS(load_pipeline_config(p4), UsageError);
        auto p5 = dir.write("c5.conf", base + "features.reference_date = 2021-13-01\n");
        CHECK_THROWS_AS(load_pipeline_config(p5), UsageError);
    }
    SECTION("missing file") {
        CHECK_THROWS_AS(load_pipeline_config((dir.path() / "nope.conf").string()), UsageError);
    }
}

TEST_CASE("pipeline runs end to end, resumes, and reruns downstream stages") {
    MiniDataset data;
    auto cfg = load_pipeline_config(data.config_path);
    std::ostringstream log;
    Pipeline pipeline(cfg, &log);

    auto ran = pipeline.run_all(false);
    CHECK(ran == Pipeline::stage_names());
    for (const auto& stage : Pipeline::stage_names())
        for (const auto& f : pipeline.stage_outputs(stage)) CHECK(std::filesystem::exists(f));
    CHECK(std::filesystem::exists(pipeline.output_path("manifest.tsv")));

    SECTION("second run skips every stage") {
        std::ostringstream log2;
        Pipeline again(cfg, &log2);
        CHECK(again.run_all(false).empty());
        CHECK(log2.str().find("[ingest] up to date") != std::string::npos);
        CHECK(log2.str().find("[evaluate] up to date") != std::string::npos);
    }
    SECTION("deleting a mid-pipeline output reruns it and everything after") {
        std::filesystem::remove(pipeline.output_path("model_de.txt"));
        Pipeline again(cfg);
        CHECK(again.run_all(false) == std::vector<std::string>{"train", "evaluate"});
    }
    SECTION("force reruns everything") {
        Pipeline again(cfg);
        CHECK(again.run_all(true) == Pipeline::stage_names());
    }
    SECTION("manifest lists bare filenames with content hashes") {
        auto manifest = read_file(pipeline.output_path("manifest.tsv"));
        CHECK(manifest.find("# stage\tfile\tfnv1a64\n") == 0);
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(
                          file_fnv1a64(pipeline.output_path("features.tsv"))));
        CHECK(manifest.find("features\tfeatures.tsv\t" + std::string(hex)) != std::string::npos);
        CHECK(manifest.find(data.dir.path().string()) == std::string::npos);
    }
    SECTION("graph summary counts the mini dataset") {
        auto summary = read_file(pipeline.output_path("graph_summary.tsv"));
        CHECK(summary.find("entities\t14") != std::string::npos);
        CHECK(summary.find("events\t10") != std::string::npos);
        CHECK(summary.find("country_languages\t2") != std::string::npos);
    }
    SECTION("recommendations rank candidates for a known query") {
        auto list = pipeline.recommend("q0", "de", 5);
        CHECK(list.query == "q0");
        CHECK(list.language == "de");
        REQUIRE(!list.items.empty());
        CHECK(list.items.size() <= 5);
        for (size_t i = 0; i + 1 < list.items.size(); ++i)
            CHECK(list.items[i].score >= list.items[i + 1].score);
        for (const auto& item : list.items) {
            CHECK(item.event.front() == 'e');
            CHECK(!item.label.empty());
        }
    }
    SECTION("recommend rejects unknown queries with suggestions") {
        CHECK_THROWS_MATCHES(pipeline.recommend("q0x", "de", 5), DataError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("nearest ids:")));
        CHECK_THROWS_MATCHES(pipeline.recommend("q0", "xx", 5), UsageError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("not configured")));
    }
    SECTION("ablation and correlation read the feature matrix artifact") {
        auto ablation = pipeline.ablate("de");
        REQUIRE(ablation.size() == 5);
        CHECK(ablation[0].configuration == "full");
        auto matrix = pipeline.correlate();
        REQUIRE(matrix.size() == kFeatureCount);
        CHECK_THROWS_AS(pipeline.ablate("xx"), DataError);
    }
    SECTION("unknown stage names are rejected") {
        CHECK_THROWS_AS(pipeline.stage_outputs("deploy"), UsageError);
        Pipeline p2(cfg);
        CHECK_THROWS_AS(p2.run_stage("deploy"), UsageError);
    }
}

TEST_CASE("fixed seed and one worker reproduce artifacts byte for byte") {
    MiniDataset a, b;
    auto cfg_a = load_pipeline_config(a.config_path);
    auto cfg_b = load_pipeline_config(b.config_path);
    Pipeline pa(cfg_a), pb(cfg_b);
    pa.run_all(false);
    pb.run_all(false);

    for (const std::string name :
         {"embeddings_de.tsv", "embeddings_fr.tsv", "relevance.tsv", "gt_de.tsv", "features.tsv",
          "model_de.txt", "model_fr.txt", "training_log_de.tsv", "report.tsv"}) {
        INFO(name);
        CHECK(read_file(pa.output_path(name)) == read_file(pb.output_path(name)));
    }

    SECTION("a different seed changes the model") {
        auto cfg_c = load_pipeline_config(b.config_path);
        cfg_c.seed = 43;
        cfg_c.ltr.seed = 43;
        cfg_c.output_dir = (b.dir.path() / "out43").string();
        Pipeline pc(cfg_c);
        pc.run_all(false);
        CHECK(read_file(pc.output_path("embeddings_de.tsv")) !=
              read_file(pa.output_path("embeddings_de.tsv")));
    }
}

TEST_CASE("file hashing matches the reference vectors") {
    TempDir dir;
    CHECK(file_fnv1a64(dir.write("empty.bin", "")) == 0xcbf29ce484222325ULL);
    CHECK(file_fnv1a64(dir.write("a.bin", "a")) == 0xaf63dc4c8601ec8cULL);
    CHECK(file_fnv1a64(dir.write("foobar.bin", "foobar")) == 0x85944171f73967e8ULL);
    CHECK_THROWS_AS(file_fnv1a64((dir.path() / "nope.bin").string()), DataError);
}

TEST_CASE("edit distance and id suggestions") {
    CHECK(edit_distance("", "") == 0);
    CHECK(edit_distance("abc", "abc") == 0);
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("abc", "") == 3);

    EntityTable entities;
    for (const std::string id : {"Berlin", "Paris", "Barcelona", "Bern"})
        entities[id] = EntityRecord{id, id, false, {}, {}, {}};
    auto s = suggest_ids("Berln", entities, 2);
    REQUIRE(s.size() == 2);
    // Berlin and Bern are both one edit away; the tie breaks on id order.
    CHECK(s[0] == "Berlin");
    CHECK(s[1] == "Bern");
}

TEST_CASE("recommendation output formats") {
    RecommendationList list;
    list.query = "q\"1";
    list.language = "de";
    list.items.push_back({"e1", 1.5, "An \"event\"\twith tabs"});
    list.items.push_back({"e2", -0.25, "Plain"});

    auto tsv = format_recommendations_tsv(list);
    CHECK(tsv.find("# rank\tevent_id\tscore\tlabel\n") == 0);
    CHECK(tsv.find("1\te1\t1.5\tAn \"event\"\twith tabs\n") != std::string::npos);
    CHECK(tsv.find("2\te2\t-0.25\tPlain\n") != std::string::npos);

    auto json = format_recommendations_json(list);
    CHECK(json.find("\"query\":\"q\\\"1\"") != std::string::npos);
    CHECK(json.find("\"rank\":1") != std::string::npos);
    CHECK(json.find("\"event\":\"e1\"") != std::string::npos);
    CHECK(json.find("\\\"event\\\"\\twith tabs") != std::string::npos);
    CHECK(json.find("\"score\":-0.25") != std::string::npos);
    CHECK(json.back() == '\n');
}
