// SPDX-License-Identifier: Apache-2.0
// Pipeline configuration for the bundled synthetic fixture.
#pragma once

#include "mono2rest/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>

namespace mono2rest::testing {

inline std::filesystem::path fixture_dir()
{
    return std::filesystem::path(MONO2REST_FIXTURE_DIR);
}

/// Mirrors fixtures/synthetic/pipeline.toml with absolute input paths.
inline pipeline::PipelineConfig fixture_config(const std::filesystem::path& out_dir)
{
    pipeline::PipelineConfig cfg;
    cfg.edges = (fixture_dir() / "edges.txt").string();
    cfg.signatures = (fixture_dir() / "signatures.javap").string();
    cfg.reference = (fixture_dir() / "reference.json").string();
    cfg.app_prefixes = {"org.petclinic."};
    cfg.embedding_mode = EmbeddingMode::full_context;
    cfg.optimizer.k = 3;
    cfg.optimizer.population_size = 92;
    cfg.optimizer.generations = 100;
    cfg.optimizer.rng_seed = 42;
    cfg.out_dir = out_dir.string();
    return cfg;
}

/// Every regular file under `dir`, keyed by file name.
inline std::map<std::string, std::string> read_artifacts(const std::filesystem::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            std::ifstream in(entry.path(), std::ios::binary);
            out[entry.path().filename().string()] =
                std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        }
    }
    return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("mono2rest-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace mono2rest::testing
