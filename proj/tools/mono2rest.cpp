// SPDX-License-Identifier: Apache-2.0
// mono2rest command-line entry point.

#include "mono2rest/error.hpp"
#include "mono2rest/pipeline.hpp"
#include "mono2rest/version.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <functional>
#include <string>

namespace {

using mono2rest::pipeline::PipelineConfig;

void configure_logging()
{
    auto logger = spdlog::stderr_color_mt("mono2rest");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("MONO2REST_LOG")) {
        spdlog::set_level(spdlog::level::from_str(env));
    }
}

struct Options {
    PipelineConfig cfg;
    std::string embedding_mode = "name_only";
    bool pair_normalized = false;
};

void add_options(CLI::App& app, Options& o)
{
    auto& c = o.cfg;
    auto& opt = c.optimizer;
    app.add_option("--out-dir", c.out_dir, "Directory for all artifacts")->capture_default_str();
    app.add_option("--seed", opt.rng_seed, "Random seed")->capture_default_str();
    app.add_option("--app-prefix", c.app_prefixes, "Package prefix of the analyzed application (repeatable)");
    app.add_option("--edges", c.edges, "Call graph listing (java-callgraph format)");
    app.add_option("--signatures", c.signatures, "javap listing of the application classes");
    app.add_option("--embeddings", c.embeddings, "Precomputed embeddings JSON (default: built-in trigram embedder)");
    app.add_option("--embedding-mode", o.embedding_mode, "name_only or full_context")
        ->check(CLI::IsMember({"name_only", "full_context"}))
        ->capture_default_str();
    app.add_flag("--fallback-embedder", c.fallback_embedder, "Use the built-in trigram embedder");
    app.add_option("--k", opt.k, "Number of clusters")->capture_default_str();
    app.add_option("--generations", opt.generations, "Optimizer generations")->capture_default_str();
    app.add_option("--population", opt.population_size, "Population size")->capture_default_str();
    app.add_option("--crossover-rate", opt.crossover_rate, "Crossover probability")->capture_default_str();
    app.add_option("--mutation-rate", opt.mutation_rate, "Mutation probability per offspring")->capture_default_str();
    app.add_option("--reference-divisions", opt.reference_point_divisions, "Reference-point lattice divisions")
        ->capture_default_str();
    app.add_flag("--semsim-pair-normalized", o.pair_normalized,
                 "Divide semantic similarity by ordered member pairs instead of member count");
    app.add_option("--classifications", c.classifications, "Precomputed HTTP verb classifications JSON");
    app.add_option("--tags", c.tags, "Extra part-of-speech word list ('word tag' per line)");
    app.add_option("--group-threshold", c.group_threshold, "Cosine threshold for grouping class segments")
        ->capture_default_str();
    app.add_flag("--expose-roots", c.expose_roots, "Also expose public methods nothing calls");
    app.add_option("--reference", c.reference, "Reference decomposition JSON");
    app.add_flag("--optimal-match", c.optimal_match, "Optimal instead of greedy cluster-to-service matching");
    app.add_option("--graph", c.graph_file, "graph.json to read (default: <out-dir>/graph.json)");
    app.add_option("--clustering", c.clustering_file, "clustering.json to read (default: <out-dir>/clustering.json)");
}

} // namespace

int main(int argc, char** argv)
{
    configure_logging();

    CLI::App app{"Identify microservice candidates in a monolith and generate their REST APIs", "mono2rest"};
    app.set_version_flag("--version", std::string(mono2rest::tool_name) + " " + mono2rest::tool_version);
    app.set_config("--config", "", "TOML file with option values (flags override it)");
    app.require_subcommand(1);
    app.fallthrough();

    Options options;
    add_options(app, options);

    using Stage = std::function<void(const mono2rest::pipeline::Context&)>;
    Stage stage;
    auto add_stage = [&](const char* name, const char* help, Stage fn) {
        app.add_subcommand(name, help)->callback([&stage, fn] { stage = fn; });
    };
    namespace p = mono2rest::pipeline;
    add_stage("extract", "Build the call graph and the terms manifest", [](const p::Context& ctx) { p::cmd_extract(ctx); });
    add_stage("cluster", "Partition the graph into k clusters", [](const p::Context& ctx) { p::cmd_cluster(ctx); });
    add_stage("restify", "Generate OpenAPI documents per cluster", [](const p::Context& ctx) { p::cmd_restify(ctx); });
    add_stage("evaluate", "Match clusters to a reference decomposition",
              [](const p::Context& ctx) { p::cmd_evaluate(ctx); });
    add_stage("pipeline", "Run every stage", [](const p::Context& ctx) { p::cmd_pipeline(ctx); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(mono2rest::ErrorFamily::usage);
    }

    try {
        options.cfg.embedding_mode = mono2rest::parse_embedding_mode(options.embedding_mode);
        options.cfg.semsim = options.pair_normalized ? mono2rest::clustering::SemSimNormalization::ordered_pairs
                                                     : mono2rest::clustering::SemSimNormalization::literal;
        mono2rest::pipeline::Log log{[](const std::string& m) { spdlog::info("{}", m); },
                                     [](const std::string& m) { spdlog::warn("{}", m); }};
        const mono2rest::pipeline::Context ctx(options.cfg, log);
        stage(ctx);
    } catch (const mono2rest::Error& e) {
        spdlog::error("{}", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
