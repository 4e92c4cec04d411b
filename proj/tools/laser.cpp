// Command-line front end for the recommendation pipeline. Exit codes:
// 0 success, 1 usage error, 2 data error, 3 internal error.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "laser/laser.hpp"

namespace {

struct CommonFlags {
    std::string config;
    long long seed = 0;
    bool seed_set = false;
    int workers = 0;
    bool workers_set = false;
    bool force = false;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config, "pipeline config file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* seed_opt = sub->add_option("--seed", flags.seed, "override the config seed");
    auto* workers_opt =
        sub->add_option("--workers", flags.workers, "override the config worker count");
    sub->add_flag("--force", flags.force, "rerun stages even when outputs exist");
    sub->parse_complete_callback([&flags, seed_opt, workers_opt] {
        flags.seed_set = seed_opt->count() > 0;
        flags.workers_set = workers_opt->count() > 0;
    });
}

laser::PipelineConfig load_with_overrides(const CommonFlags& flags) {
    laser::PipelineConfig cfg = laser::load_pipeline_config(flags.config);
    if (flags.seed_set) {
        cfg.seed = static_cast<std::uint64_t>(flags.seed);
        cfg.ltr.seed = cfg.seed;
    }
    if (flags.workers_set) {
        if (flags.workers < 1) throw laser::UsageError("--workers must be at least 1");
        cfg.workers = flags.workers;
        cfg.walks.workers = flags.workers;
        cfg.embed.workers = flags.workers;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"language-specific event recommendation pipeline"};
    app.require_subcommand(1);

    const std::vector<std::string> stage_commands = {
        "ingest", "embed", "relevance", "groundtruth", "features", "train", "evaluate"};
    std::map<std::string, CommonFlags> flags;
    for (const auto& s : stage_commands) add_common(app.add_subcommand(s, "run the " + s + " stage"),
                                                    flags[s]);

    auto* pipeline_cmd = app.add_subcommand("pipeline", "run all stages, skipping up-to-date ones");
    add_common(pipeline_cmd, flags["pipeline"]);

    auto* ablate_cmd = app.add_subcommand("ablate", "leave-one-feature-group-out comparison");
    add_common(ablate_cmd, flags["ablate"]);
    std::string ablate_lang;
    ablate_cmd->add_option("--lang", ablate_lang, "single language (default: all configured)");

    auto* correlate_cmd = app.add_subcommand("correlate", "feature correlation matrix");
    add_common(correlate_cmd, flags["correlate"]);

    auto* recommend_cmd = app.add_subcommand("recommend", "rank events for a query entity");
    add_common(recommend_cmd, flags["recommend"]);
    std::string query, lang, format = "tsv";
    long long top = 10;
    recommend_cmd->add_option("--query", query, "query entity id")->required();
    recommend_cmd->add_option("--lang", lang, "language code")->required();
    recommend_cmd->add_option("--top", top, "number of results")->check(CLI::PositiveNumber);
    recommend_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (const auto& s : stage_commands) {
            if (!app.got_subcommand(s)) continue;
            laser::Pipeline pipeline(load_with_overrides(flags[s]), &std::cout);
            pipeline.run_stage(s);
            pipeline.write_manifest();
            return 0;
        }
        if (app.got_subcommand(pipeline_cmd)) {
            const CommonFlags& f = flags["pipeline"];
            laser::Pipeline pipeline(load_with_overrides(f), &std::cout);
            pipeline.run_all(f.force);
            return 0;
        }
        if (app.got_subcommand(ablate_cmd)) {
            laser::Pipeline pipeline(load_with_overrides(flags["ablate"]), &std::cout);
            std::vector<laser::LanguageCode> languages =
                ablate_lang.empty() ? pipeline.config().languages
                                    : std::vector<laser::LanguageCode>{ablate_lang};
            for (const auto& l : languages) {
                auto rows = pipeline.ablate(l);
                std::string out = pipeline.output_path("ablation_" + l + ".tsv");
                laser::save_ablation_report(rows, pipeline.config().eval_k, out);
                std::cout << "# " << l << ": configuration\tndcg@" << pipeline.config().eval_k
                          << '\n';
                for (const auto& r : rows)
                    std::cout << r.configuration << '\t' << laser::format_double(r.ndcg) << '\n';
            }
            return 0;
        }
        if (app.got_subcommand(correlate_cmd)) {
            laser::Pipeline pipeline(load_with_overrides(flags["correlate"]), &std::cout);
            auto matrix = pipeline.correlate();
            std::string out = pipeline.output_path("correlation.tsv");
            laser::save_correlation_matrix(matrix, out);
            std::cout << "wrote " << out << '\n';
            return 0;
        }
        if (app.got_subcommand(recommend_cmd)) {
            laser::Pipeline pipeline(load_with_overrides(flags["recommend"]), nullptr);
            laser::RecommendationList list =
                pipeline.recommend(query, lang, static_cast<size_t>(top));
            if (format == "json")
                std::cout << laser::format_recommendations_json(list);
            else
                std::cout << laser::format_recommendations_tsv(list);
            return 0;
        }
        std::cerr << "error: no subcommand given\n";
        return 1;
    } catch (const laser::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const laser::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
