// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/clustering.hpp"
#include "mono2rest/error.hpp"
#include "mono2rest/evaluation.hpp"
#include "mono2rest/hash.hpp"
#include "mono2rest/restify.hpp"
#include "mono2rest/semantics.hpp"
#include "mono2rest/signature.hpp"
#include "mono2rest/version.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace mono2rest::pipeline {

namespace fs = std::filesystem;

/// Everything a run depends on. Empty paths mean "not supplied".
struct PipelineConfig {
    std::string edges;
    std::string signatures;
    std::string embeddings;
    std::string classifications;
    std::string reference;
    std::string tags;
    std::vector<std::string> app_prefixes;
    EmbeddingMode embedding_mode = EmbeddingMode::name_only;
    bool fallback_embedder = false; // use the built-in embedder even when an embeddings file is given
    clustering::SemSimNormalization semsim = clustering::SemSimNormalization::literal;
    clustering::OptimizerConfig optimizer;
    double group_threshold = 0.8;
    bool expose_roots = false;
    bool optimal_match = false;
    std::string out_dir = "out";
    // upstream artifacts when a stage runs on its own; default to out_dir
    std::string graph_file;
    std::string clustering_file;
};

/// Sinks for progress and warnings; silent by default.
struct Log {
    std::function<void(const std::string&)> info = [](const std::string&) {};
    std::function<void(const std::string&)> warn = [](const std::string&) {};
};

inline constexpr const char* graph_artifact = "graph.json";
inline constexpr const char* callgraph_dot_artifact = "callgraph.dot";
inline constexpr const char* manifest_artifact = "terms-manifest.json";
inline constexpr const char* clustering_artifact = "clustering.json";
inline constexpr const char* stats_artifact = "stats.csv";
inline constexpr const char* clusters_dot_artifact = "clusters.dot";
inline constexpr const char* api_tree_artifact = "api-tree.json";
inline constexpr const char* evaluation_artifact = "evaluation.json";
inline constexpr const char* evaluation_table_artifact = "evaluation.txt";

inline std::string read_text_file(const std::string& path, const char* what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(std::string("cannot read ") + what + " file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json read_json_file(const std::string& path, const char* what)
{
    const auto text = read_text_file(path, what);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string(what) + " file '" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_text_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    out << content;
}

inline void write_json_file(const fs::path& path, const nlohmann::json& doc)
{
    write_text_file(path, doc.dump(2) + "\n");
}

/// Option values plus content digests of the input files. Paths and the
/// output directory are left out so relocating a run keeps its hash.
inline nlohmann::json canonical_config(const PipelineConfig& cfg)
{
    auto digest = [](const std::string& path) -> nlohmann::json {
        if (path.empty()) {
            return nullptr;
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            return nullptr;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return hex64(fnv1a64(ss.str()));
    };
    const auto& o = cfg.optimizer;
    return {{"app_prefixes", cfg.app_prefixes},
            {"embedding_mode", to_string(cfg.embedding_mode)},
            {"fallback_embedder", cfg.fallback_embedder},
            {"semsim_normalization", to_string(cfg.semsim)},
            {"k", o.k},
            {"population", o.population_size},
            {"generations", o.generations},
            {"crossover_rate", o.crossover_rate},
            {"mutation_rate", o.mutation_rate},
            {"reference_point_divisions", o.reference_point_divisions},
            {"seed", o.rng_seed},
            {"group_threshold", cfg.group_threshold},
            {"expose_roots", cfg.expose_roots},
            {"optimal_match", cfg.optimal_match},
            {"inputs",
             {{"edges", digest(cfg.edges)},
              {"signatures", digest(cfg.signatures)},
              {"embeddings", digest(cfg.embeddings)},
              {"classifications", digest(cfg.classifications)},
              {"reference", digest(cfg.reference)},
              {"tags", digest(cfg.tags)}}}};
}

inline std::string config_hash(const PipelineConfig& cfg)
{
    return hex64(fnv1a64(canonical_config(cfg).dump()));
}

/// Shared state of one command: the active embedding provider and the
/// metadata block stamped on every artifact.
class Context {
public:
    Context(PipelineConfig cfg, Log log) : cfg_(std::move(cfg)), log_(std::move(log))
    {
        cfg_.optimizer.validate();
        if (!(cfg_.group_threshold >= -1.0 && cfg_.group_threshold <= 1.0)) {
            throw UsageError("group threshold must lie in [-1, 1]");
        }
        for (const auto* path : {&cfg_.edges, &cfg_.signatures, &cfg_.embeddings, &cfg_.classifications,
                                 &cfg_.reference, &cfg_.tags}) {
            if (!path->empty() && !fs::is_regular_file(*path)) {
                throw InputError("input file '" + *path + "' does not exist");
            }
        }
        if (cfg_.fallback_embedder && !cfg_.embeddings.empty()) {
            log_.warn("ignoring the embeddings file: the built-in embedder was requested");
        } else if (!cfg_.embeddings.empty()) {
            file_provider_ = std::make_unique<FileEmbeddingProvider>(
                FileEmbeddingProvider::from_json(read_json_file(cfg_.embeddings, "embeddings")));
        }
        metadata_ = {{"tool", tool_name},
                     {"version", tool_version},
                     {"config_hash", config_hash(cfg_)},
                     {"seed", cfg_.optimizer.rng_seed},
                     {"embedding_mode", to_string(cfg_.embedding_mode)},
                     {"embedding_provider", provider().id()}};
    }

    const PipelineConfig& config() const noexcept { return cfg_; }
    const Log& log() const noexcept { return log_; }
    const nlohmann::json& metadata() const noexcept { return metadata_; }
    bool has_file_provider() const noexcept { return file_provider_ != nullptr; }

    const EmbeddingProvider& provider() const
    {
        return file_provider_ ? static_cast<const EmbeddingProvider&>(*file_provider_) : fallback_;
    }
    const EmbeddingProvider& fallback() const noexcept { return fallback_; }

    fs::path out(const char* name) const { return fs::path(cfg_.out_dir) / name; }

    std::string graph_path() const { return cfg_.graph_file.empty() ? out(graph_artifact).string() : cfg_.graph_file; }
    std::string clustering_path() const
    {
        return cfg_.clustering_file.empty() ? out(clustering_artifact).string() : cfg_.clustering_file;
    }

    void ensure_out_dir() const
    {
        std::error_code ec;
        fs::create_directories(cfg_.out_dir, ec);
        if (ec) {
            throw InputError("cannot create output directory '" + cfg_.out_dir + "': " + ec.message());
        }
    }

    std::vector<std::string> dot_header() const
    {
        return {std::string(tool_name) + " " + tool_version, "config " + metadata_["config_hash"].get<std::string>(),
                "seed " + std::to_string(cfg_.optimizer.rng_seed),
                "embedding " + metadata_["embedding_mode"].get<std::string>() + " " +
                    metadata_["embedding_provider"].get<std::string>()};
    }

private:
    PipelineConfig cfg_;
    Log log_;
    std::unique_ptr<FileEmbeddingProvider> file_provider_;
    HashedTrigramEmbedder fallback_;
    nlohmann::json metadata_;
};

/// The call graph and the signatures of its nodes, as stored in graph.json.
struct GraphArtifact {
    CallGraph graph;
    std::map<std::string, MethodSignature> signatures;
    std::vector<ParseWarning> warnings;
};

inline nlohmann::json graph_to_json(const GraphArtifact& g, const nlohmann::json& metadata)
{
    const auto isolated = g.graph.isolated();
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < g.graph.size(); ++i) {
        const auto& m = g.graph.nodes[i];
        nlohmann::json node = {{"id", i},
                               {"key", m.key()},
                               {"class", m.class_fqn},
                               {"method", m.method_name},
                               {"params", m.param_types},
                               {"return", m.return_type.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.return_type)},
                               {"isolated", static_cast<bool>(isolated[i])}};
        if (auto it = g.signatures.find(m.key()); it != g.signatures.end()) {
            node["signature"] = {{"visibility", to_string(it->second.visibility)},
                                 {"static", it->second.is_static},
                                 {"display", it->second.display()}};
        } else {
            node["signature"] = nullptr;
        }
        nodes.push_back(std::move(node));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (auto [from, to] : g.graph.edges) {
        edges.push_back({from, to});
    }
    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& w : g.warnings) {
        warnings.push_back({{"line", w.line}, {"text", w.text}});
    }
    return {{"metadata", metadata}, {"nodes", nodes}, {"edges", edges}, {"parse_warnings", warnings}};
}

inline GraphArtifact graph_from_json(const nlohmann::json& doc)
{
    auto bad = [](const std::string& why) { return ParseError("graph file: " + why); };
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() || !doc.contains("edges") ||
        !doc["edges"].is_array()) {
        throw bad("expected 'nodes' and 'edges' arrays");
    }
    GraphArtifact g;
    try {
        for (const auto& node : doc["nodes"]) {
            auto ref = parse_method_key(node.at("key").get<std::string>());
            if (!ref) {
                throw bad("malformed method key '" + node.at("key").get<std::string>() + "'");
            }
            if (node.contains("return") && node["return"].is_string()) {
                ref->return_type = node["return"].get<std::string>();
            }
            if (node.contains("signature") && node["signature"].is_object()) {
                const auto& s = node["signature"];
                MethodSignature sig;
                sig.owner = *ref;
                sig.return_type = ref->return_type.empty() ? "void" : ref->return_type;
                sig.param_types = ref->param_types;
                const auto vis = s.at("visibility").get<std::string>();
                sig.visibility = vis == "public"      ? Visibility::public_
                                 : vis == "protected" ? Visibility::protected_
                                 : vis == "private"   ? Visibility::private_
                                                      : Visibility::package_;
                sig.is_static = s.at("static").get<bool>();
                g.signatures.emplace(ref->key(), std::move(sig));
            }
            g.graph.nodes.push_back(std::move(*ref));
        }
        for (const auto& e : doc["edges"]) {
            const auto from = e.at(0).get<std::size_t>();
            const auto to = e.at(1).get<std::size_t>();
            if (from >= g.graph.size() || to >= g.graph.size()) {
                throw bad("edge endpoint out of range");
            }
            g.graph.edges.emplace_back(from, to);
        }
    } catch (const nlohmann::json::exception& e) {
        throw bad(e.what());
    }
    if (!std::is_sorted(g.graph.nodes.begin(), g.graph.nodes.end())) {
        throw bad("nodes are not in identity-key order");
    }
    std::sort(g.graph.edges.begin(), g.graph.edges.end());
    if (g.graph.size() == 0) {
        throw EmptyGraph("graph file has no nodes");
    }
    return g;
}

namespace detail {

inline std::string join(const std::vector<std::string>& words, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        out += (i > 0 ? sep : "") + words[i];
    }
    return out;
}

/// Terms for a method in the configured mode. In full_context a method
/// without a listed signature is described by its key (parameters known,
/// return type unknown).
inline TermList node_terms(const MethodRef& m, const std::map<std::string, MethodSignature>& signatures,
                           EmbeddingMode mode)
{
    if (mode == EmbeddingMode::name_only) {
        return method_terms(m, nullptr, mode);
    }
    if (auto it = signatures.find(m.key()); it != signatures.end()) {
        return method_terms(m, &it->second, mode);
    }
    MethodSignature from_key;
    from_key.owner = m;
    from_key.param_types = m.param_types;
    from_key.return_type = m.return_type.empty() ? "void" : m.return_type;
    return method_terms(m, &from_key, mode);
}

inline std::size_t count_unsigned(const GraphArtifact& g)
{
    std::size_t n = 0;
    for (const auto& m : g.graph.nodes) {
        n += g.signatures.count(m.key()) == 0 ? 1 : 0;
    }
    return n;
}

inline void check_full_context(const Context& ctx, const GraphArtifact& g)
{
    if (ctx.config().embedding_mode != EmbeddingMode::full_context) {
        return;
    }
    const auto missing = count_unsigned(g);
    if (missing == g.graph.size()) {
        throw MissingSignature("full_context embedding needs a signature listing (--signatures)");
    }
    if (missing > 0) {
        ctx.log().warn(std::to_string(missing) + " methods have no listed signature; their terms come from the key");
    }
}

inline EmbeddingVector embed_key(const Context& ctx, const MethodRef& m,
                                 const std::map<std::string, MethodSignature>& signatures)
{
    if (ctx.has_file_provider()) {
        return ctx.provider().embed(m.key(), std::span<const std::string>{});
    }
    return ctx.provider().embed(node_terms(m, signatures, ctx.config().embedding_mode));
}

} // namespace detail

/// One embedding per graph node from the active provider.
inline std::vector<EmbeddingVector> node_vectors(const Context& ctx, const GraphArtifact& g)
{
    std::vector<EmbeddingVector> out;
    out.reserve(g.graph.size());
    for (const auto& m : g.graph.nodes) {
        out.push_back(detail::embed_key(ctx, m, g.signatures));
    }
    return out;
}

/// Manifest for an external embedder: graph methods, then class names and
/// their tokens (used to group URI segments), then reference-service methods.
inline nlohmann::json terms_manifest(const Context& ctx, const GraphArtifact& g,
                                     const std::vector<evaluation::ReferenceService>& reference)
{
    const auto mode = ctx.config().embedding_mode;
    nlohmann::json out = nlohmann::json::array();
    std::set<std::string> seen;
    auto add = [&](const std::string& key, const std::vector<std::string>& terms, nlohmann::json signature) {
        if (terms.empty() || !seen.insert(key).second) {
            return;
        }
        out.push_back({{"key", key}, {"terms", detail::join(terms, " ")}, {"signature", std::move(signature)}});
    };
    for (const auto& m : g.graph.nodes) {
        auto it = g.signatures.find(m.key());
        add(m.key(), detail::node_terms(m, g.signatures, mode).terms,
            it != g.signatures.end() ? nlohmann::json(it->second.display()) : nlohmann::json(nullptr));
    }
    std::vector<std::string> classes;
    for (const auto& m : g.graph.nodes) {
        auto name = simple_type_name(m.class_fqn);
        if (std::find(classes.begin(), classes.end(), name) == classes.end()) {
            classes.push_back(std::move(name));
        }
    }
    for (const auto& c : classes) {
        add(c, tokenize_identifier(c), nullptr);
    }
    for (const auto& c : classes) {
        for (const auto& t : tokenize_identifier(c)) {
            add(t, {t}, nullptr);
        }
    }
    for (const auto& svc : reference) {
        for (const auto& key : svc.methods) {
            if (auto ref = parse_method_key(key)) {
                add(key, detail::node_terms(*ref, {}, mode).terms, nullptr);
            } else {
                add(key, tokenize_identifier(key), nullptr);
            }
        }
    }
    return out;
}

inline GraphArtifact load_graph(const Context& ctx)
{
    return graph_from_json(read_json_file(ctx.graph_path(), "graph"));
}

/// Extraction: call graph text (+ optional javap listing) to graph.json,
/// callgraph.dot and terms-manifest.json.
inline void cmd_extract(const Context& ctx)
{
    const auto& cfg = ctx.config();
    if (cfg.edges.empty()) {
        throw UsageError("extract needs a call graph file (--edges)");
    }
    if (cfg.app_prefixes.empty()) {
        throw UsageError("extract needs at least one application prefix (--app-prefix)");
    }
    const auto parsed = parse_callgraph_text(read_text_file(cfg.edges, "call graph"));
    GraphArtifact g;
    g.warnings = parsed.warnings;
    ParsedSignatures sigs;
    if (!cfg.signatures.empty()) {
        sigs = parse_javap(read_text_file(cfg.signatures, "signature listing"));
        for (const auto& w : sigs.warnings) {
            ctx.log().warn("signature listing line " + std::to_string(w.line) + ": unrecognized '" + w.text + "'");
        }
    }
    for (const auto& w : parsed.warnings) {
        ctx.log().warn("call graph line " + std::to_string(w.line) + ": unrecognized '" + w.text + "'");
    }
    const auto declared = sigs.declared();
    g.graph = refine_graph(parsed.records, cfg.app_prefixes, declared);
    for (const auto& m : g.graph.nodes) {
        if (auto it = sigs.methods.find(m.key()); it != sigs.methods.end()) {
            g.signatures.emplace(m.key(), it->second);
        }
    }
    detail::check_full_context(ctx, g);

    std::vector<evaluation::ReferenceService> reference;
    if (!cfg.reference.empty()) {
        reference = evaluation::parse_reference(read_json_file(cfg.reference, "reference"));
    }

    ctx.ensure_out_dir();
    write_json_file(ctx.out(graph_artifact), graph_to_json(g, ctx.metadata()));
    write_text_file(ctx.out(callgraph_dot_artifact), export_dot(g.graph, std::nullopt, ctx.dot_header()));
    write_json_file(ctx.out(manifest_artifact), terms_manifest(ctx, g, reference));

    const auto isolated = g.graph.isolated();
    ctx.log().info("extracted " + std::to_string(g.graph.size()) + " methods, " +
                   std::to_string(g.graph.edges.size()) + " calls, " +
                   std::to_string(std::count(isolated.begin(), isolated.end(), true)) + " isolated");
}

/// A decomposition as stored in clustering.json; cluster ids start at 1.
struct ClusteringArtifact {
    clustering::ClusteringSolution solution; // labels are id - 1
};

inline std::string cluster_name(std::size_t id)
{
    return "c" + std::to_string(id);
}

inline ClusteringArtifact clustering_from_json(const nlohmann::json& doc, const CallGraph& graph)
{
    auto bad = [](const std::string& why) { return ParseError("clustering file: " + why); };
    if (!doc.is_object() || !doc.contains("k") || !doc.contains("clusters") || !doc["clusters"].is_array()) {
        throw bad("expected 'k' and a 'clusters' array");
    }
    ClusteringArtifact c;
    c.solution.k = doc["k"].get<std::size_t>();
    constexpr auto unset = static_cast<std::size_t>(-1);
    c.solution.assignment.assign(graph.size(), unset);
    try {
        for (const auto& cl : doc["clusters"]) {
            const auto id = cl.at("id").get<std::size_t>();
            if (id < 1 || id > c.solution.k) {
                throw bad("cluster id " + std::to_string(id) + " outside 1.." + std::to_string(c.solution.k));
            }
            for (const auto& key : cl.at("methods")) {
                auto idx = graph.index_of(key.get<std::string>());
                if (!idx) {
                    throw InputError("clustering names method '" + key.get<std::string>() + "' absent from the graph");
                }
                c.solution.assignment[*idx] = id - 1;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw bad(e.what());
    }
    if (std::find(c.solution.assignment.begin(), c.solution.assignment.end(), unset) != c.solution.assignment.end()) {
        throw InputError("clustering does not cover every graph method");
    }
    if (!c.solution.valid()) {
        throw bad("some cluster is empty");
    }
    return c;
}

inline std::string format_number(double x)
{
    return nlohmann::json(x).dump();
}

/// Clustering: graph.json to clustering.json, stats.csv and clusters.dot.
inline clustering::OptimizerResult cmd_cluster(const Context& ctx)
{
    const auto& cfg = ctx.config();
    const auto g = load_graph(ctx);
    detail::check_full_context(ctx, g);
    const auto vectors = node_vectors(ctx, g);
    const auto sim = build_similarity_matrix(vectors);
    const clustering::Evaluator evaluator(g.graph, sim, cfg.semsim);
    const auto result = clustering::run_optimizer(evaluator, cfg.optimizer);

    const auto& chosen = result.chosen();
    const auto labels = clustering::canonical_labels(chosen.solution.assignment);
    auto objectives_json = [](const clustering::ObjectiveVector& o) {
        return nlohmann::json{{"coupling", o.coupling}, {"cohesion", o.cohesion}, {"semsim", o.semsim}};
    };
    nlohmann::json clusters = nlohmann::json::array();
    for (std::size_t c = 0; c < chosen.solution.k; ++c) {
        nlohmann::json methods = nlohmann::json::array();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == c) {
                methods.push_back(g.graph.nodes[i].key());
            }
        }
        clusters.push_back({{"id", c + 1}, {"name", cluster_name(c + 1)}, {"methods", methods}});
    }
    nlohmann::json front = nlohmann::json::array();
    for (const auto& ind : result.pareto_front) {
        nlohmann::json assignment = nlohmann::json::array();
        for (auto l : clustering::canonical_labels(ind.solution.assignment)) {
            assignment.push_back(l + 1);
        }
        front.push_back({{"objectives", objectives_json(ind.objectives)}, {"assignment", assignment}});
    }
    const auto& o = cfg.optimizer;
    nlohmann::json doc = {
        {"metadata", ctx.metadata()},
        {"k", chosen.solution.k},
        {"objectives", objectives_json(chosen.objectives)},
        {"clusters", clusters},
        {"config",
         {{"k", o.k},
          {"population", o.population_size},
          {"generations", o.generations},
          {"crossover_rate", o.crossover_rate},
          {"mutation_rate", o.mutation_rate},
          {"reference_point_divisions", o.reference_point_divisions},
          {"semsim_normalization", to_string(cfg.semsim)}}},
        {"seed", o.rng_seed},
        {"pareto_front", front},
        {"chosen_index", result.chosen_index}};

    std::ostringstream csv;
    csv << "# tool=" << tool_name << " " << tool_version << "\n";
    csv << "# config_hash=" << ctx.metadata()["config_hash"].get<std::string>() << "\n";
    csv << "# seed=" << o.rng_seed << "\n";
    csv << "# embedding=" << to_string(cfg.embedding_mode) << " " << ctx.provider().id() << "\n";
    csv << "generation,coupling_best,coupling_mean,cohesion_best,cohesion_mean,semsim_best,semsim_mean\n";
    for (const auto& s : result.stats) {
        csv << s.generation << ',' << format_number(s.best.coupling) << ',' << format_number(s.mean.coupling) << ','
            << format_number(s.best.cohesion) << ',' << format_number(s.mean.cohesion) << ','
            << format_number(s.best.semsim) << ',' << format_number(s.mean.semsim) << '\n';
    }

    std::vector<std::size_t> ids(labels.size());
    std::transform(labels.begin(), labels.end(), ids.begin(), [](std::size_t l) { return l + 1; });

    ctx.ensure_out_dir();
    write_json_file(ctx.out(clustering_artifact), doc);
    write_text_file(ctx.out(stats_artifact), csv.str());
    write_text_file(ctx.out(clusters_dot_artifact),
                    export_dot(g.graph, std::span<const std::size_t>(ids), ctx.dot_header()));
    ctx.log().info("clustered " + std::to_string(g.graph.size()) + " methods into " + std::to_string(chosen.solution.k) +
                   " clusters (front of " + std::to_string(result.pareto_front.size()) + ")");
    return result;
}

/// RESTification: clustering.json + graph.json to one OpenAPI document per
/// cluster and api-tree.json.
inline void cmd_restify(const Context& ctx)
{
    const auto& cfg = ctx.config();
    const auto g = load_graph(ctx);
    const auto c = clustering_from_json(read_json_file(ctx.clustering_path(), "clustering"), g.graph);

    std::unique_ptr<restify::HttpClassifier> classifier;
    if (cfg.classifications.empty()) {
        classifier = std::make_unique<restify::LexiconClassifier>();
    } else {
        classifier = std::make_unique<restify::FileClassifier>(
            restify::FileClassifier::from_json(read_json_file(cfg.classifications, "classification")));
    }
    const auto tagger = cfg.tags.empty() ? restify::PosTagger{}
                                         : restify::PosTagger::from_tag_file(read_text_file(cfg.tags, "tag"));

    const auto exposed = restify::select_exposed_methods(g.graph, c.solution, cfg.expose_roots ? &g.signatures : nullptr);
    ctx.ensure_out_dir();
    nlohmann::json trees = nlohmann::json::array();
    for (std::size_t cl = 0; cl < exposed.size(); ++cl) {
        const auto id = cl + 1;
        std::vector<restify::ExposedOperation> ops;
        std::size_t fallbacks = 0;
        for (const auto& e : exposed[cl]) {
            const auto& m = g.graph.nodes[e.node];
            auto it = g.signatures.find(m.key());
            auto cls = restify::classify_http(m, *classifier);
            fallbacks += cls.fell_back ? 1 : 0;
            ops.push_back({m, std::move(cls), it != g.signatures.end() ? &it->second : nullptr, e.reason});
        }
        if (fallbacks > 0) {
            ctx.log().warn(cluster_name(id) + ": " + std::to_string(fallbacks) +
                           " methods missing from the classification file were classified by the lexicon");
        }
        const auto tree = restify::build_api_tree(cluster_name(id), ops, tagger, ctx.provider(), ctx.fallback(),
                                                  cfg.group_threshold);
        if (!ops.empty() && tree.grouping_provider != ctx.provider().id()) {
            ctx.log().warn(cluster_name(id) + ": class names grouped with " + tree.grouping_provider +
                           " because the embeddings file lacks class-name vectors");
        }
        auto meta = ctx.metadata();
        meta["cluster"] = id;
        meta["classifier"] = classifier->id();
        meta["grouping_provider"] = tree.grouping_provider.empty() ? nlohmann::json(nullptr)
                                                                   : nlohmann::json(tree.grouping_provider);
        const auto doc = restify::export_openapi(tree, meta);
        for (const auto& w : doc.warnings) {
            ctx.log().warn(w);
        }
        write_json_file(fs::path(cfg.out_dir) / ("openapi-" + cluster_name(id) + ".json"), doc.document);
        trees.push_back({{"id", id},
                         {"name", cluster_name(id)},
                         {"classifier", classifier->id()},
                         {"classification_fallbacks", fallbacks},
                         {"grouping_provider", meta["grouping_provider"]},
                         {"tree", restify::to_json(tree.root)}});
    }
    write_json_file(ctx.out(api_tree_artifact),
                    {{"metadata", ctx.metadata()}, {"expose_roots", cfg.expose_roots}, {"clusters", trees}});
    ctx.log().info("wrote " + std::to_string(exposed.size()) + " OpenAPI documents");
}

/// Reference embeddings: a method key is embedded like a graph method; any
/// other entry is read as free text.
inline EmbeddingVector reference_vector(const Context& ctx, const std::string& entry)
{
    if (ctx.has_file_provider()) {
        return ctx.provider().embed(entry, std::span<const std::string>{});
    }
    if (auto ref = parse_method_key(entry)) {
        return detail::embed_key(ctx, *ref, {});
    }
    return ctx.provider().embed(entry, tokenize_identifier(entry));
}

/// Evaluation: clustering.json against a reference decomposition.
inline evaluation::MatchResult cmd_evaluate(const Context& ctx)
{
    const auto& cfg = ctx.config();
    if (cfg.reference.empty()) {
        throw UsageError("evaluate needs a reference decomposition (--reference)");
    }
    const auto g = load_graph(ctx);
    const auto c = clustering_from_json(read_json_file(ctx.clustering_path(), "clustering"), g.graph);
    const auto reference = evaluation::parse_reference(read_json_file(cfg.reference, "reference"));

    const auto vectors = node_vectors(ctx, g);
    std::vector<evaluation::ClusterEmbedding> clusters;
    const auto members = c.solution.clusters();
    for (std::size_t cl = 0; cl < members.size(); ++cl) {
        std::vector<EmbeddingVector> mv;
        for (auto i : members[cl]) {
            mv.push_back(vectors[i]);
        }
        clusters.push_back({cl + 1, evaluation::aggregate_embedding(mv)});
    }
    std::vector<evaluation::ServiceEmbedding> services;
    std::vector<MethodRef> reference_methods;
    for (const auto& svc : reference) {
        std::vector<EmbeddingVector> mv;
        for (const auto& entry : svc.methods) {
            mv.push_back(reference_vector(ctx, entry));
            if (auto ref = parse_method_key(entry)) {
                reference_methods.push_back(*ref);
            }
        }
        services.push_back({svc.name, evaluation::aggregate_embedding(mv)});
    }
    const auto match = evaluation::match_clusters(
        clusters, services, cfg.optimal_match ? evaluation::MatchMode::optimal : evaluation::MatchMode::greedy);
    const auto overlap = evaluation::method_overlap_report(g.graph.nodes, reference_methods);

    // agreement on the methods both sides name by full key
    std::vector<std::size_t> ours;
    std::vector<std::size_t> theirs;
    for (std::size_t s = 0; s < reference.size(); ++s) {
        for (const auto& entry : reference[s].methods) {
            if (auto idx = g.graph.index_of(entry)) {
                ours.push_back(c.solution.assignment[*idx]);
                theirs.push_back(s);
            }
        }
    }
    nlohmann::json ari = nullptr;
    if (ours.size() >= 2) {
        ari = evaluation::adjusted_rand_index(ours, theirs);
    }

    ctx.ensure_out_dir();
    write_json_file(ctx.out(evaluation_artifact), {{"metadata", ctx.metadata()},
                                                   {"mode", cfg.optimal_match ? "optimal" : "greedy"},
                                                   {"match", evaluation::to_json(match)},
                                                   {"overlap", evaluation::to_json(overlap)},
                                                   {"shared_methods", ours.size()},
                                                   {"adjusted_rand_index", ari}});
    std::string table = "# " + std::string(tool_name) + " " + tool_version + " config " +
                        ctx.metadata()["config_hash"].get<std::string>() + " seed " +
                        std::to_string(cfg.optimizer.rng_seed) + " embedding " + to_string(cfg.embedding_mode) + " " +
                        ctx.provider().id() + "\n";
    table += evaluation::format_match_table(match);
    table += "methods: " + std::to_string(overlap.common.size()) + " common, " +
             std::to_string(overlap.only_monolith.size()) + " only in monolith, " +
             std::to_string(overlap.only_reference.size()) + " only in reference\n";
    write_text_file(ctx.out(evaluation_table_artifact), table);
    ctx.log().info("matched " + std::to_string(match.pairs.size()) + " clusters to reference services");
    return match;
}

/// Every stage in order; evaluation runs only with a reference.
inline void cmd_pipeline(const Context& ctx)
{
    cmd_extract(ctx);
    cmd_cluster(ctx);
    cmd_restify(ctx);
    if (!ctx.config().reference.empty()) {
        cmd_evaluate(ctx);
    }
}

} // namespace mono2rest::pipeline
