#pragma once
// Pipeline orchestration: flat key=value config, the seven stages (ingest,
// embed, relevance, groundtruth, features, train, evaluate) with resumable
// outputs and a content-hash manifest, plus the query-phase recommend path.
// Relative paths in a config file resolve against the config's directory.

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "laser/clickstream.hpp"
#include "laser/common.hpp"
#include "laser/eval.hpp"
#include "laser/features.hpp"
#include "laser/kg.hpp"
#include "laser/lambdamart.hpp"
#include "laser/skipgram.hpp"
#include "laser/walks.hpp"

namespace laser {

struct PipelineConfig {
    std::string entities_path;
    std::string countries_path;
    std::vector<LanguageCode> languages;
    std::map<LanguageCode, std::string> links_paths;
    std::map<LanguageCode, std::string> clicks_paths;
    std::string output_dir = "out";
    std::uint64_t seed = 42;
    int workers = 1;
    size_t candidate_k = 200;
    WalkConfig walks;
    EmbedConfig embed;
    FeatureConfig features;
    LambdaMartConfig ltr;
    int eval_folds = 5;
    size_t eval_k = 10;
    size_t recall_min_positives = 10;
};

namespace detail {

inline bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw UsageError("config key '" + key + "' expects true or false, got '" + value + "'");
}

inline std::string resolve_path(const std::string& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace detail

inline PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::string base_dir = std::filesystem::path(path).parent_path().string();
    if (base_dir.empty()) base_dir = ".";

    PipelineConfig cfg;
    std::map<std::string, std::string> raw;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw UsageError(path + ":" + std::to_string(line_no) + ": empty config key");
        if (!raw.emplace(key, value).second)
            throw UsageError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    auto fail_key = [&](const std::string& key, const std::string& msg) -> void {
        throw UsageError("config key '" + key + "': " + msg);
    };
    auto as_int = [&](const std::string& key, const std::string& value) -> long long {
        try {
            return parse_int(value, key);
        } catch (const DataError& e) {
            fail_key(key, e.what());
            return 0;
        }
    };
    auto as_double = [&](const std::string& key, const std::string& value) {
        try {
            return parse_double(value, key);
        } catch (const DataError& e) {
            fail_key(key, e.what());
            return 0.0;
        }
    };

    for (const auto& [key, value] : raw) {
        if (key == "data.entities") {
            cfg.entities_path = detail::resolve_path(base_dir, value);
        } else if (key == "data.countries") {
            cfg.countries_path = detail::resolve_path(base_dir, value);
        } else if (key.rfind("data.links.", 0) == 0) {
            cfg.links_paths[key.substr(11)] = detail::resolve_path(base_dir, value);
        } else if (key.rfind("data.clicks.", 0) == 0) {
            cfg.clicks_paths[key.substr(12)] = detail::resolve_path(base_dir, value);
        } else if (key == "languages") {
            for (const auto& l : split(value, ',')) {
                std::string lang = trim(l);
                if (lang.empty()) fail_key(key, "empty language code");
                cfg.languages.push_back(lang);
            }
        } else if (key == "output_dir") {
            cfg.output_dir = detail::resolve_path(base_dir, value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(as_int(key, value));
        } else if (key == "workers") {
            cfg.workers = static_cast<int>(as_int(key, value));
        } else if (key == "candidate_k") {
            long k = as_int(key, value);
            if (k < 1) fail_key(key, "must be at least 1");
            cfg.candidate_k = static_cast<size_t>(k);
        } else if (key == "walks.length") {
            cfg.walks.walk_length = static_cast<int>(as_int(key, value));
        } else if (key == "walks.per_node") {
            cfg.walks.walks_per_node = static_cast<int>(as_int(key, value));
        } else if (key == "walks.strategy") {
            if (value == "uniform")
                cfg.walks.strategy = WalkStrategy::Uniform;
            else if (value == "node2vec")
                cfg.walks.strategy = WalkStrategy::Biased;
            else
                fail_key(key, "expected uniform or node2vec, got '" + value + "'");
        } else if (key == "walks.p") {
            cfg.walks.p = as_double(key, value);
        } else if (key == "walks.q") {
            cfg.walks.q = as_double(key, value);
        } else if (key == "walks.undirected") {
            cfg.walks.treat_undirected = detail::parse_bool(value, key);
        } else if (key == "embed.dim") {
            cfg.embed.dim = static_cast<int>(as_int(key, value));
        } else if (key == "embed.window") {
            cfg.embed.window = static_cast<int>(as_int(key, value));
        } else if (key == "embed.negatives") {
            cfg.embed.negatives = static_cast<int>(as_int(key, value));
        } else if (key == "embed.epochs") {
            cfg.embed.epochs = static_cast<int>(as_int(key, value));
        } else if (key == "embed.lr") {
            cfg.embed.initial_lr = as_double(key, value);
        } else if (key == "features.missing_distance_sentinel") {
            cfg.features.missing_distance_sentinel = as_double(key, value);
        } else if (key == "features.missing_time_sentinel") {
            cfg.features.missing_time_sentinel = as_double(key, value);
        } else if (key == "features.reference_date") {
            try {
                cfg.features.reference_date = parse_date(value);
            } catch (const DataError& e) {
                fail_key(key, e.what());
            }
        } else if (key == "ltr.trees") {
            cfg.ltr.n_trees = static_cast<int>(as_int(key, value));
        } else if (key == "ltr.learning_rate") {
            cfg.ltr.learning_rate = as_double(key, value);
        } else if (key == "ltr.max_leaves") {
            cfg.ltr.max_leaves = static_cast<int>(as_int(key, value));
        } else if (key == "ltr.min_samples_leaf") {
            cfg.ltr.min_samples_leaf = static_cast<int>(as_int(key, value));
        } else if (key == "ltr.l2_reg") {
            cfg.ltr.l2_leaf_reg = as_double(key, value);
        } else if (key == "ltr.ndcg_truncation") {
            cfg.ltr.ndcg_truncation = static_cast<int>(as_int(key, value));
        } else if (key == "eval.folds") {
            cfg.eval_folds = static_cast<int>(as_int(key, value));
        } else if (key == "eval.k") {
            long k = as_int(key, value);
            if (k < 1) fail_key(key, "must be at least 1");
            cfg.eval_k = static_cast<size_t>(k);
        } else if (key == "eval.recall_min_positives") {
            cfg.recall_min_positives = static_cast<size_t>(as_int(key, value));
        } else {
            throw UsageError(path + ": unknown config key '" + key + "'");
        }
    }

    if (cfg.entities_path.empty()) throw UsageError(path + ": missing key 'data.entities'");
    if (cfg.countries_path.empty()) throw UsageError(path + ": missing key 'data.countries'");
    if (cfg.languages.empty()) throw UsageError(path + ": missing key 'languages'");
    for (const auto& l : cfg.languages) {
        if (!cfg.links_paths.count(l))
            throw UsageError(path + ": missing key 'data.links." + l + "'");
        if (!cfg.clicks_paths.count(l))
            throw UsageError(path + ": missing key 'data.clicks." + l + "'");
    }
    cfg.ltr.seed = cfg.seed;
    cfg.walks.workers = cfg.workers;
    cfg.embed.workers = cfg.workers;
    return cfg;
}

inline std::uint64_t file_fnv1a64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i)
            h = (h ^ static_cast<unsigned char>(buf[i])) * 0x100000001b3ULL;
        if (in.gcount() < static_cast<std::streamsize>(sizeof buf)) break;
    }
    return h;
}

inline size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::vector<EntityId> suggest_ids(const EntityId& id, const EntityTable& entities,
                                         size_t n = 3) {
    std::vector<std::pair<size_t, EntityId>> scored;
    for (const auto& [candidate, rec] : entities)
        scored.emplace_back(edit_distance(id, candidate), candidate);
    std::sort(scored.begin(), scored.end());
    if (scored.size() > n) scored.resize(n);
    std::vector<EntityId> out;
    for (const auto& [d, candidate] : scored) out.push_back(candidate);
    return out;
}

struct RecommendationItem {
    EntityId event;
    double score = 0.0;
    std::string label;
};

struct RecommendationList {
    EntityId query;
    LanguageCode language;
    std::vector<RecommendationItem> items;  // descending scores
};

class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg, std::ostream* log = nullptr)
        : cfg_(std::move(cfg)), log_(log) {}

    static const std::vector<std::string>& stage_names() {
        static const std::vector<std::string> names = {
            "ingest", "embed", "relevance", "groundtruth", "features", "train", "evaluate"};
        return names;
    }

    const PipelineConfig& config() const { return cfg_; }

    std::string output_path(const std::string& file) const {
        return (std::filesystem::path(cfg_.output_dir) / file).string();
    }

    std::vector<std::string> stage_outputs(const std::string& stage) const {
        std::vector<std::string> out;
        if (stage == "ingest") {
            out.push_back(output_path("graph_summary.tsv"));
        } else if (stage == "embed") {
            for (const auto& l : cfg_.languages) out.push_back(output_path("embeddings_" + l + ".tsv"));
        } else if (stage == "relevance") {
            out.push_back(output_path("relevance.tsv"));
        } else if (stage == "groundtruth") {
            for (const auto& l : cfg_.languages) out.push_back(output_path("gt_" + l + ".tsv"));
        } else if (stage == "features") {
            out.push_back(output_path("features.tsv"));
        } else if (stage == "train") {
            for (const auto& l : cfg_.languages) {
                out.push_back(output_path("model_" + l + ".txt"));
                out.push_back(output_path("training_log_" + l + ".tsv"));
            }
        } else if (stage == "evaluate") {
            out.push_back(output_path("report.tsv"));
        } else {
            throw UsageError("unknown stage '" + stage + "'");
        }
        return out;
    }

    void run_stage(const std::string& stage) {
        std::filesystem::create_directories(cfg_.output_dir);
        if (stage == "ingest")
            run_ingest();
        else if (stage == "embed")
            run_embed();
        else if (stage == "relevance")
            run_relevance();
        else if (stage == "groundtruth")
            run_groundtruth();
        else if (stage == "features")
            run_features();
        else if (stage == "train")
            run_train();
        else if (stage == "evaluate")
            run_evaluate();
        else
            throw UsageError("unknown stage '" + stage + "'");
    }

    // A stage runs when any output is missing, an earlier stage ran in this
    // invocation, or force is set. Returns the stages that ran.
    std::vector<std::string> run_all(bool force) {
        std::vector<std::string> ran;
        bool upstream_ran = false;
        for (const auto& stage : stage_names()) {
            bool missing = false;
            for (const auto& f : stage_outputs(stage))
                if (!std::filesystem::exists(f)) missing = true;
            if (force || missing || upstream_ran) {
                say("[" + stage + "] running");
                run_stage(stage);
                upstream_ran = true;
                ran.push_back(stage);
            } else {
                say("[" + stage + "] up to date");
            }
        }
        write_manifest();
        return ran;
    }

    void write_manifest() const {
        auto out = open_output(output_path("manifest.tsv"));
        out << "# stage\tfile\tfnv1a64\n";
        for (const auto& stage : stage_names()) {
            for (const auto& f : stage_outputs(stage)) {
                if (!std::filesystem::exists(f)) continue;
                char hex[17];
                std::snprintf(hex, sizeof hex, "%016llx",
                              static_cast<unsigned long long>(file_fnv1a64(f)));
                out << stage << '\t' << std::filesystem::path(f).filename().string() << '\t' << hex
                    << '\n';
            }
        }
    }

    RecommendationList recommend(const EntityId& query, const LanguageCode& language,
                                 size_t n) const {
        if (std::find(cfg_.languages.begin(), cfg_.languages.end(), language) ==
            cfg_.languages.end())
            throw UsageError("language '" + language + "' is not configured");
        KnowledgeGraph graph = load_graph();
        if (!graph.has_entity(query)) {
            auto suggestions = suggest_ids(query, graph.entities);
            std::string msg = "unknown entity '" + query + "'";
            if (!suggestions.empty()) {
                msg += "; nearest ids:";
                for (const auto& s : suggestions) msg += " " + s;
            }
            throw DataError(msg);
        }
        EmbeddingTable emb = load_embeddings(output_path("embeddings_" + language + ".tsv"));
        if (!emb.contains(query))
            throw DataError("entity '" + query + "' has no embedding in language '" + language +
                            "' (never reached by a walk)");
        TreeEnsemble model = load_model(output_path("model_" + language + ".txt"));
        std::vector<EntityId> candidates =
            candidate_events(emb, query, graph.events(), cfg_.candidate_k);

        RecommendationList list;
        list.query = query;
        list.language = language;
        for (const auto& v : candidates) {
            FeatureVector fv = extract(query, v, language, graph, emb, cfg_.features);
            auto arr = fv.to_array();
            double score = model.predict_row(std::vector<double>(arr.begin(), arr.end()));
            list.items.push_back({v, score, graph.entity(v).label});
        }
        std::sort(list.items.begin(), list.items.end(),
                  [](const RecommendationItem& a, const RecommendationItem& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.event < b.event;
                  });
        if (list.items.size() > n) list.items.resize(n);
        return list;
    }

    std::vector<AblationRow> ablate(const LanguageCode& language) const {
        auto rows = load_feature_matrix(output_path("features.tsv"));
        TrainingSet ts = training_set_from_rows(rows, language);
        if (ts.groups.empty())
            throw DataError("no feature rows for language '" + language + "'");
        return run_ablation(ts, cfg_.eval_folds, cfg_.seed, cfg_.ltr, cfg_.eval_k);
    }

    std::vector<std::vector<double>> correlate() const {
        return abs_correlation_matrix(load_feature_matrix(output_path("features.tsv")));
    }

    KnowledgeGraph load_graph() const {
        KnowledgeGraph graph;
        graph.entities = load_entities(cfg_.entities_path);
        graph.countries = load_countries(cfg_.countries_path);
        for (const auto& l : cfg_.languages)
            graph.links.emplace(l, load_link_set(cfg_.links_paths.at(l), l));
        graph.finalize();
        return graph;
    }

private:
    void say(const std::string& msg) const {
        if (log_) *log_ << msg << '\n';
    }

    void run_ingest() {
        KnowledgeGraph graph = load_graph();
        std::map<LanguageCode, ClickTable> clicks;
        for (const auto& l : cfg_.languages)
            clicks.emplace(l, load_clicks(cfg_.clicks_paths.at(l), l));

        auto out = open_output(output_path("graph_summary.tsv"));
        out << "entities\t" << graph.entities.size() << '\n';
        out << "events\t" << graph.events().size() << '\n';
        out << "country_languages\t" << graph.countries.size() << '\n';
        out << "# lang\tedges\tself_loops_dropped\tduplicates_dropped\tunknown_endpoints"
               "\tclick_pairs\tclick_total\n";
        for (const auto& l : cfg_.languages) {
            const LinkSet& ls = graph.link_set(l);
            const ClickTable& ct = clicks.at(l);
            out << l << '\t' << ls.edge_count << '\t' << ls.self_loops_dropped << '\t'
                << ls.duplicates_dropped << '\t' << graph.unknown_endpoints(l) << '\t'
                << ct.counts.size() << '\t' << ct.total() << '\n';
        }
        say("[ingest] wrote " + output_path("graph_summary.tsv"));
    }

    void run_embed() {
        KnowledgeGraph graph = load_graph();
        for (const auto& l : cfg_.languages) {
            WalkGraph wg(graph.link_set(l), cfg_.walks.treat_undirected);
            auto corpus = generate_walks(wg, cfg_.walks, derive_seed(cfg_.seed, "walks", fnv1a64(l)));
            EmbeddingTable emb =
                train_embeddings(corpus, cfg_.embed, derive_seed(cfg_.seed, "embed", fnv1a64(l)));
            save_embeddings(emb, output_path("embeddings_" + l + ".tsv"));
            say("[embed] " + l + ": " + std::to_string(corpus.size()) + " walks, " +
                std::to_string(emb.vectors.size()) + " vectors");
        }
    }

    void run_relevance() {
        EntityTable entities = load_entities(cfg_.entities_path);
        std::set<EntityId> events;
        for (const auto& [id, rec] : entities)
            if (rec.is_event) events.insert(id);
        std::vector<ClickTable> tables;
        for (const auto& l : cfg_.languages)
            tables.push_back(load_clicks(cfg_.clicks_paths.at(l), l));
        BalancedClicks balanced = balance_clicks(tables);
        for (const auto& l : balanced.excluded_languages)
            std::cerr << "warning: language '" << l << "' has no clicks and is excluded from "
                      << "relevance labels\n";
        RelevanceTable table = build_relevance_table(balanced, events);
        save_relevance_table(table, output_path("relevance.tsv"));
        say("[relevance] " + std::to_string(table.rel.size()) + " labeled pairs");
    }

    void run_groundtruth() {
        EntityTable entities = load_entities(cfg_.entities_path);
        std::set<EntityId> events;
        for (const auto& [id, rec] : entities)
            if (rec.is_event) events.insert(id);
        RelevanceTable table = load_relevance_table(output_path("relevance.tsv"));
        for (const auto& l : cfg_.languages) {
            GroundTruth gt = build_ground_truth(l, table, events, derive_seed(cfg_.seed, "gt", fnv1a64(l)));
            save_ground_truth(gt, output_path("gt_" + l + ".tsv"));
            say("[groundtruth] " + l + ": " + std::to_string(gt.entries.size()) + " queries");
        }
    }

    void run_features() {
        KnowledgeGraph graph = load_graph();
        std::vector<FeatureRow> rows;
        for (const auto& l : cfg_.languages) {
            EmbeddingTable emb = load_embeddings(output_path("embeddings_" + l + ".tsv"));
            GroundTruth gt = load_ground_truth(output_path("gt_" + l + ".tsv"), l);
            for (const auto& entry : gt.entries) {
                for (const auto& item : entry.items) {
                    FeatureRow r;
                    r.query = entry.query;
                    r.event = item.event;
                    r.language = l;
                    r.rel = item.rel;
                    r.features = extract(entry.query, item.event, l, graph, emb, cfg_.features);
                    rows.push_back(std::move(r));
                }
            }
        }
        save_feature_matrix(rows, output_path("features.tsv"));
        say("[features] " + std::to_string(rows.size()) + " rows");
    }

    void run_train() {
        auto rows = load_feature_matrix(output_path("features.tsv"));
        for (const auto& l : cfg_.languages) {
            TrainingSet ts = training_set_from_rows(rows, l);
            if (ts.groups.empty()) throw DataError("no feature rows for language '" + l + "'");
            TrainingLog log;
            TreeEnsemble model = train(ts, cfg_.ltr, &log);
            save_model(model, output_path("model_" + l + ".txt"));
            auto out = open_output(output_path("training_log_" + l + ".tsv"));
            out << "# round\ttrain_ndcg@" << cfg_.ltr.ndcg_truncation
                << "\tlambda_abs_sum\tmax_group_lambda_sum\n";
            for (const auto& r : log.rounds)
                out << r.round << '\t' << format_double(r.train_ndcg) << '\t'
                    << format_double(r.lambda_abs_sum) << '\t'
                    << format_double(r.max_group_lambda_sum) << '\n';
            say("[train] " + l + ": " + std::to_string(model.trees.size()) + " trees, final nDCG " +
                (log.rounds.empty() ? std::string("n/a")
                                    : format_double(log.rounds.back().train_ndcg)));
        }
    }

    void run_evaluate() {
        EntityTable entities = load_entities(cfg_.entities_path);
        std::set<EntityId> events;
        for (const auto& [id, rec] : entities)
            if (rec.is_event) events.insert(id);
        auto rows = load_feature_matrix(output_path("features.tsv"));
        std::map<LanguageCode, GroundTruth> gts;
        std::map<LanguageCode, std::map<EntityId, std::set<EntityId>>> candidates;
        for (const auto& l : cfg_.languages) {
            GroundTruth gt = load_ground_truth(output_path("gt_" + l + ".tsv"), l);
            EmbeddingTable emb = load_embeddings(output_path("embeddings_" + l + ".tsv"));
            auto& lang_candidates = candidates[l];
            for (const auto& entry : gt.entries) {
                if (entry.positive_count <= cfg_.recall_min_positives) continue;
                if (!emb.contains(entry.query)) continue;
                auto top = candidate_events(emb, entry.query, events, cfg_.candidate_k);
                lang_candidates[entry.query] = std::set<EntityId>(top.begin(), top.end());
            }
            gts.emplace(l, std::move(gt));
        }
        CvOptions opt;
        opt.folds = cfg_.eval_folds;
        opt.eval_k = cfg_.eval_k;
        opt.recall_min_positives = cfg_.recall_min_positives;
        opt.seed = cfg_.seed;
        opt.ltr = cfg_.ltr;
        EvalReport report = evaluate_cv(gts, rows, candidates, opt);
        save_eval_report(report, output_path("report.tsv"));
        say("[evaluate] wrote " + output_path("report.tsv"));
    }

    PipelineConfig cfg_;
    std::ostream* log_ = nullptr;
};

// --- recommendation output formats -------------------------------------------

inline std::string format_recommendations_tsv(const RecommendationList& list) {
    std::string out = "# rank\tevent_id\tscore\tlabel\n";
    for (size_t i = 0; i < list.items.size(); ++i) {
        const auto& item = list.items[i];
        out += std::to_string(i + 1) + '\t' + item.event + '\t' + format_double(item.score) +
               '\t' + item.label + '\n';
    }
    return out;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

}  // namespace detail

inline std::string format_recommendations_json(const RecommendationList& list) {
    std::string out = "{\"query\":\"" + detail::json_escape(list.query) + "\",\"language\":\"" +
                      detail::json_escape(list.language) + "\",\"results\":[";
    for (size_t i = 0; i < list.items.size(); ++i) {
        const auto& item = list.items[i];
        if (i) out += ',';
        out += "{\"rank\":" + std::to_string(i + 1) + ",\"event\":\"" +
               detail::json_escape(item.event) + "\",\"score\":" + format_double(item.score) +
               ",\"label\":\"" + detail::json_escape(item.label) + "\"}";
    }
    out += "]}\n";
    return out;
}

}  // namespace laser
