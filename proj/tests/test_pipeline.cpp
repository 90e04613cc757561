// SPDX-License-Identifier: Apache-2.0
#include "mono2rest/pipeline.hpp"
#include "support/fixture.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace mono2rest;
using namespace mono2rest::pipeline;
namespace fs = std::filesystem;

namespace {

nlohmann::json load(const fs::path& p)
{
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

class FixturePipeline : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        out_ = mono2rest::testing::scratch_dir("pipeline-a");
        run(out_);
    }

    static void run(const fs::path& dir)
    {
        const Context ctx(mono2rest::testing::fixture_config(dir), Log{});
        cmd_pipeline(ctx);
    }

    static inline fs::path out_;
};

} // namespace

TEST_F(FixturePipeline, WritesEveryArtifact)
{
    for (const char* name : {graph_artifact, callgraph_dot_artifact, manifest_artifact, clustering_artifact,
                             stats_artifact, clusters_dot_artifact, api_tree_artifact, evaluation_artifact,
                             evaluation_table_artifact, "openapi-c1.json", "openapi-c2.json", "openapi-c3.json"}) {
        EXPECT_TRUE(fs::is_regular_file(out_ / name)) << name;
    }
}

TEST_F(FixturePipeline, JsonArtifactsCarryMetadata)
{
    for (const char* name : {graph_artifact, clustering_artifact, api_tree_artifact, evaluation_artifact}) {
        const auto doc = load(out_ / name);
        ASSERT_TRUE(doc.contains("metadata")) << name;
        const auto& m = doc["metadata"];
        EXPECT_EQ(m["tool"], "mono2rest");
        EXPECT_EQ(m["seed"], 42);
        EXPECT_EQ(m["embedding_mode"], "full_context");
        EXPECT_EQ(m["embedding_provider"], "hashed-trigram-256");
        EXPECT_TRUE(m["config_hash"].is_string());
    }
    EXPECT_TRUE(load(out_ / "openapi-c1.json")["info"].contains("x-mono2rest"));
}

TEST_F(FixturePipeline, ClusteringCoversGraph)
{
    const auto graph = load(out_ / graph_artifact);
    const auto clustering = load(out_ / clustering_artifact);
    EXPECT_EQ(clustering["k"], 3);
    std::size_t members = 0;
    std::size_t id = 1;
    for (const auto& c : clustering["clusters"]) {
        EXPECT_EQ(c["id"], id);
        EXPECT_EQ(c["name"], "c" + std::to_string(id));
        EXPECT_FALSE(c["methods"].empty());
        members += c["methods"].size();
        ++id;
    }
    EXPECT_EQ(members, graph["nodes"].size());
}

TEST_F(FixturePipeline, StatsHeaderAndRows)
{
    std::ifstream in(out_ / stats_artifact);
    std::string line;
    std::size_t comments = 0;
    std::size_t rows = 0;
    std::string header;
    while (std::getline(in, line)) {
        if (line.starts_with("# ")) {
            ++comments;
        } else if (header.empty()) {
            header = line;
        } else {
            ++rows;
        }
    }
    EXPECT_EQ(comments, 4u);
    EXPECT_TRUE(header.starts_with("generation,"));
    EXPECT_EQ(rows, 101u);
}

TEST_F(FixturePipeline, ManifestIsKeyTermsSignatureList)
{
    const auto manifest = load(out_ / manifest_artifact);
    ASSERT_TRUE(manifest.is_array());
    ASSERT_FALSE(manifest.empty());
    bool saw_signature = false;
    bool saw_null = false;
    for (const auto& e : manifest) {
        ASSERT_EQ(e.size(), 3u);
        EXPECT_TRUE(e["key"].is_string());
        EXPECT_TRUE(e["terms"].is_string());
        EXPECT_EQ(e["terms"].get<std::string>().find("  "), std::string::npos);
        saw_signature = saw_signature || e["signature"].is_string();
        saw_null = saw_null || e["signature"].is_null();
    }
    EXPECT_TRUE(saw_signature);
    EXPECT_TRUE(saw_null);
}

TEST_F(FixturePipeline, EvaluationPairsEveryCluster)
{
    const auto eval = load(out_ / evaluation_artifact);
    EXPECT_EQ(eval["match"]["pairs"].size(), 3u);
}

TEST_F(FixturePipeline, RerunIsByteIdentical)
{
    const auto again = mono2rest::testing::scratch_dir("pipeline-b");
    run(again);
    EXPECT_EQ(mono2rest::testing::read_artifacts(out_), mono2rest::testing::read_artifacts(again));
}

TEST_F(FixturePipeline, RestifyFromSavedArtifactsMatches)
{
    const auto dir = mono2rest::testing::scratch_dir("pipeline-restify");
    auto cfg = mono2rest::testing::fixture_config(dir);
    cfg.graph_file = (out_ / graph_artifact).string();
    cfg.clustering_file = (out_ / clustering_artifact).string();
    cmd_restify(Context(cfg, Log{}));
    const auto a = mono2rest::testing::read_artifacts(out_);
    const auto b = mono2rest::testing::read_artifacts(dir);
    EXPECT_EQ(a.at(api_tree_artifact), b.at(api_tree_artifact));
    EXPECT_EQ(a.at("openapi-c2.json"), b.at("openapi-c2.json"));
}

TEST(Pipeline, MissingInputIsInputError)
{
    auto cfg = mono2rest::testing::fixture_config(mono2rest::testing::scratch_dir("pipeline-missing"));
    cfg.edges = (mono2rest::testing::fixture_dir() / "no-such-file.txt").string();
    EXPECT_THROW(Context(cfg, Log{}), InputError);
}

TEST(Pipeline, ExtractNeedsPrefixes)
{
    auto cfg = mono2rest::testing::fixture_config(mono2rest::testing::scratch_dir("pipeline-noprefix"));
    cfg.app_prefixes.clear();
    EXPECT_THROW(cmd_extract(Context(cfg, Log{})), UsageError);
}

TEST(Pipeline, ConfigHashIgnoresOutDirButNotOptions)
{
    auto a = mono2rest::testing::fixture_config("/tmp/x");
    auto b = mono2rest::testing::fixture_config("/tmp/y");
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.optimizer.rng_seed = 7;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Pipeline, GraphJsonRoundTrips)
{
    const auto dir = mono2rest::testing::scratch_dir("pipeline-graph");
    const Context ctx(mono2rest::testing::fixture_config(dir), Log{});
    cmd_extract(ctx);
    const auto g = load_graph(ctx);
    const auto doc = graph_to_json(g, ctx.metadata());
    const auto back = graph_from_json(doc);
    EXPECT_EQ(back.graph.nodes, g.graph.nodes);
    EXPECT_EQ(back.graph.edges, g.graph.edges);
    EXPECT_EQ(back.signatures.size(), g.signatures.size());
    EXPECT_EQ(graph_to_json(back, ctx.metadata()), doc);
}

TEST(Pipeline, FileEmbeddingsAreUsedWhenGiven)
{
    const auto dir = mono2rest::testing::scratch_dir("pipeline-embeddings");
    auto cfg = mono2rest::testing::fixture_config(dir);
    cfg.embedding_mode = EmbeddingMode::name_only;
    cmd_extract(Context(cfg, Log{}));

    // write an embeddings file covering every manifest key with 2-D vectors
    const auto manifest = load(dir / manifest_artifact);
    nlohmann::json vectors = nlohmann::json::object();
    std::size_t i = 0;
    for (const auto& e : manifest) {
        vectors[e["key"].get<std::string>()] = {1.0, static_cast<double>(i++ % 3)};
    }
    const auto emb = dir / "embeddings.json";
    std::ofstream(emb) << nlohmann::json{{"model", "test-model"}, {"dim", 2}, {"vectors", vectors}}.dump();

    cfg.embeddings = emb.string();
    const Context ctx(cfg, Log{});
    cmd_pipeline(ctx);
    EXPECT_EQ(load(dir / clustering_artifact)["metadata"]["embedding_provider"], "file:test-model");
    EXPECT_EQ(load(dir / api_tree_artifact)["metadata"]["embedding_provider"], "file:test-model");

    cfg.fallback_embedder = true;
    EXPECT_EQ(Context(cfg, Log{}).provider().id(), "hashed-trigram-256");
}
