// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/error.hpp"
#include "mono2rest/hash.hpp"
#include "mono2rest/signature.hpp"
#include "mono2rest/tokenize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mono2rest {

enum class EmbeddingMode { name_only, full_context };

inline const char* to_string(EmbeddingMode mode)
{
    return mode == EmbeddingMode::name_only ? "name_only" : "full_context";
}

inline EmbeddingMode parse_embedding_mode(std::string_view s)
{
    if (s == "name_only") {
        return EmbeddingMode::name_only;
    }
    if (s == "full_context") {
        return EmbeddingMode::full_context;
    }
    throw UsageError("unknown embedding mode '" + std::string(s) + "' (expected name_only or full_context)");
}

struct TermList {
    MethodRef method;
    std::vector<std::string> terms;
};

/// Terms describing a method. name_only uses the method name; full_context
/// appends the declaring class and the parameter and return type names, with
/// duplicates removed in order of first appearance. `void` contributes nothing.
inline TermList method_terms(const MethodRef& method, const MethodSignature* signature, EmbeddingMode mode)
{
    TermList out{method, tokenize_identifier(method.method_name)};
    if (mode == EmbeddingMode::name_only) {
        return out;
    }
    if (signature == nullptr) {
        throw MissingSignature("full_context terms need a signature for " + method.key());
    }
    auto append = [&](std::string_view identifier) {
        for (auto& t : tokenize_identifier(identifier)) {
            if (std::find(out.terms.begin(), out.terms.end(), t) == out.terms.end()) {
                out.terms.push_back(std::move(t));
            }
        }
    };
    out.terms.clear();
    append(method.method_name);
    append(simple_type_name(method.class_fqn));
    for (const auto& p : signature->param_types) {
        append(simple_type_name(p));
    }
    if (signature->return_type != "void") {
        append(simple_type_name(signature->return_type));
    }
    return out;
}

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const noexcept { return values.size(); }
    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

inline double l2_norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

/// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero.
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b)
{
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("cannot compare vectors of dimension " + std::to_string(a.dim()) + " and " +
                                std::to_string(b.dim()));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        dot += a.values[i] * b.values[i];
    }
    const double na = l2_norm(a.values);
    const double nb = l2_norm(b.values);
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

/// Source of vectors for term lists. `key` is the identity the vector is
/// stored under (a method key, or a bare word/class name during URI grouping).
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::string id() const = 0;
    virtual std::size_t dim() const = 0;
    virtual bool contains(std::string_view key) const = 0;
    virtual EmbeddingVector embed(std::string_view key, std::span<const std::string> terms) const = 0;

    EmbeddingVector embed(const TermList& t) const { return embed(t.method.key(), t.terms); }
};

/// Deterministic model-free embedder: term frequencies of character trigrams
/// (each term padded with '#') hashed into 256 buckets, L2-normalized.
class HashedTrigramEmbedder final : public EmbeddingProvider {
public:
    static constexpr std::size_t dimension = 256;
    static constexpr std::uint64_t seed = 0x6d6f6e6f32726573ULL;

    using EmbeddingProvider::embed;

    std::string id() const override { return "hashed-trigram-256"; }
    std::size_t dim() const override { return dimension; }
    bool contains(std::string_view) const override { return true; }

    EmbeddingVector embed(std::string_view key, std::span<const std::string> terms) const override
    {
        EmbeddingVector v{std::vector<double>(dimension, 0.0)};
        for (const auto& term : terms) {
            if (term.empty()) {
                continue;
            }
            const std::string padded = "#" + term + "#";
            for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
                v.values[fnv1a64(std::string_view(padded).substr(i, 3), seed) % dimension] += 1.0;
            }
        }
        const double norm = l2_norm(v.values);
        if (norm == 0.0) {
            throw ZeroVector("no terms to embed for '" + std::string(key) + "'");
        }
        for (auto& x : v.values) {
            x /= norm;
        }
        return v;
    }
};

/// Precomputed vectors read from an embeddings file:
/// {"model": str, "dim": int, "vectors": {"<key>": [float, ...]}}.
class FileEmbeddingProvider final : public EmbeddingProvider {
public:
    static FileEmbeddingProvider from_json(const nlohmann::json& doc)
    {
        if (!doc.is_object() || !doc.contains("model") || !doc.contains("dim") || !doc.contains("vectors") ||
            !doc["model"].is_string() || !doc["dim"].is_number_integer() || !doc["vectors"].is_object()) {
            throw ParseError("embeddings file must be an object with string 'model', integer 'dim' and object 'vectors'");
        }
        FileEmbeddingProvider p;
        p.model_ = doc["model"].get<std::string>();
        const auto dim = doc["dim"].get<long long>();
        if (dim <= 0) {
            throw ParseError("embeddings 'dim' must be positive");
        }
        p.dim_ = static_cast<std::size_t>(dim);
        for (const auto& [key, arr] : doc["vectors"].items()) {
            if (!arr.is_array() || arr.size() != p.dim_) {
                throw DimensionMismatch("vector for '" + key + "' does not have dimension " + std::to_string(p.dim_));
            }
            EmbeddingVector v;
            v.values.reserve(p.dim_);
            for (const auto& x : arr) {
                if (!x.is_number() || !std::isfinite(x.get<double>())) {
                    throw ParseError("vector for '" + key + "' has a non-finite component");
                }
                v.values.push_back(x.get<double>());
            }
            p.vectors_.emplace(key, std::move(v));
        }
        return p;
    }

    using EmbeddingProvider::embed;

    std::string id() const override { return "file:" + model_; }
    std::size_t dim() const override { return dim_; }
    const std::string& model() const noexcept { return model_; }
    std::size_t size() const noexcept { return vectors_.size(); }

    bool contains(std::string_view key) const override { return vectors_.find(key) != vectors_.end(); }

    EmbeddingVector embed(std::string_view key, std::span<const std::string>) const override
    {
        auto it = vectors_.find(key);
        if (it == vectors_.end()) {
            throw UnknownMethod("no precomputed embedding for '" + std::string(key) + "'");
        }
        return it->second;
    }

private:
    std::string model_;
    std::size_t dim_ = 0;
    std::map<std::string, EmbeddingVector, std::less<>> vectors_;
};

/// Symmetric table of pairwise cosine similarities.
struct SimilarityMatrix {
    SquareMatrix<double> cells;

    std::size_t size() const noexcept { return cells.n; }
    double operator()(std::size_t i, std::size_t j) const { return cells(i, j); }
};

/// Each unordered pair is computed once and mirrored. The diagonal is 1 for
/// every method, zero vectors included.
inline SimilarityMatrix build_similarity_matrix(std::span<const EmbeddingVector> vectors)
{
    const std::size_t n = vectors.size();
    for (const auto& v : vectors) {
        if (v.dim() != vectors.front().dim()) {
            throw DimensionMismatch("all embedding vectors must share one dimension");
        }
    }
    SimilarityMatrix sim{SquareMatrix<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        sim.cells(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = cosine(vectors[i], vectors[j]);
            sim.cells(i, j) = c;
            sim.cells(j, i) = c;
        }
    }
    return sim;
}

} // namespace mono2rest
