// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/restify/classify.hpp"
#include "mono2rest/restify/exposure.hpp"
#include "mono2rest/restify/pos.hpp"
#include "mono2rest/semantics.hpp"
#include "mono2rest/signature.hpp"
#include "mono2rest/tokenize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <regex>
#include <span>
#include <string>
#include <vector>

namespace mono2rest::restify {

/// An HTTP operation bound to one exposed method.
struct ApiOperation {
    HttpVerb verb = HttpVerb::post;
    std::string method_key;
    double confidence = 0.0;
    ClassificationSource source = ClassificationSource::lexicon;
    bool classifier_fallback = false;
    ExposureReason exposure = ExposureReason::external_caller;
    std::vector<std::string> param_types;
    std::string return_type; // empty when unknown
    std::string summary;     // "return method(params)" when the signature is known, else the key
    bool path_params = false; // parameters travel as /{param1}/... rather than in the body
};

struct ApiNode {
    std::string segment;
    std::vector<ApiNode> children;
    std::vector<ApiOperation> operations;
};

struct ApiTree {
    ApiNode root;
    std::string grouping_provider; // empty until classes are grouped
};

/// Input to tree construction: an exposed method with its verb.
struct ExposedOperation {
    MethodRef method;
    Classification classification;
    const MethodSignature* signature = nullptr;
    ExposureReason exposure = ExposureReason::external_caller;
};

inline bool is_kebab_segment(std::string_view s)
{
    static const std::regex grammar("[a-z0-9]+(-[a-z0-9]+)*");
    return std::regex_match(s.begin(), s.end(), grammar);
}

/// Raw tree: root named after the cluster, one child per declaring class
/// (simple name, first-appearance order), one leaf per method (raw name).
inline ApiTree init_api_tree(std::string cluster_name, std::span<const ExposedOperation> exposed)
{
    ApiTree tree;
    tree.root.segment = std::move(cluster_name);
    std::map<std::string, std::size_t> class_index;
    for (const auto& e : exposed) {
        auto [it, inserted] = class_index.emplace(e.method.class_fqn, tree.root.children.size());
        if (inserted) {
            tree.root.children.push_back({simple_type_name(e.method.class_fqn), {}, {}});
        }
        ApiOperation op;
        op.verb = e.classification.verb;
        op.method_key = e.method.key();
        op.confidence = e.classification.confidence;
        op.source = e.classification.source;
        op.classifier_fallback = e.classification.fell_back;
        op.exposure = e.exposure;
        op.param_types = e.method.param_types;
        op.return_type = e.signature != nullptr ? e.signature->return_type : e.method.return_type;
        op.summary = e.signature != nullptr ? e.signature->display() : op.method_key;
        tree.root.children[it->second].children.push_back({e.method.method_name, {}, {std::move(op)}});
    }
    return tree;
}

/// Replace raw method names on the leaves with their URI segments.
inline void apply_method_segments(ApiTree& tree, const PosTagger& tagger)
{
    for (auto& cls : tree.root.children) {
        for (auto& leaf : cls.children) {
            leaf.segment = method_segment(leaf.segment, tagger);
        }
    }
}

struct ClassGroup {
    std::vector<std::size_t> members; // indices into the class-name list
    std::string segment;
};

namespace detail {

inline std::vector<std::string> class_tokens(const std::string& name)
{
    auto tokens = tokenize_identifier(name);
    if (tokens.empty()) {
        tokens.emplace_back("resource");
    }
    return tokens;
}

} // namespace detail

/// True when `provider` holds vectors for every class name and every token
/// of those names, as grouping needs.
inline bool provider_covers_classes(const EmbeddingProvider& provider, std::span<const std::string> class_names)
{
    for (const auto& name : class_names) {
        if (!provider.contains(name)) {
            return false;
        }
        for (const auto& t : detail::class_tokens(name)) {
            if (!provider.contains(t)) {
                return false;
            }
        }
    }
    return true;
}

/// Single-link grouping of class names by embedding cosine, each group named
/// by the member-name token with the highest mean cosine to the members.
/// Groups are ordered by their first member.
inline std::vector<ClassGroup> group_class_segments(std::span<const std::string> class_names,
                                                    const EmbeddingProvider& provider, double threshold = 0.8)
{
    const std::size_t n = class_names.size();
    std::vector<EmbeddingVector> vectors;
    vectors.reserve(n);
    for (const auto& name : class_names) {
        const auto tokens = detail::class_tokens(name);
        vectors.push_back(provider.embed(name, tokens));
    }

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (cosine(vectors[i], vectors[j]) >= threshold) {
                const auto a = find(i);
                const auto b = find(j);
                parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::vector<ClassGroup> groups;
    std::map<std::size_t, std::size_t> group_of_root;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = group_of_root.emplace(find(i), groups.size());
        if (inserted) {
            groups.emplace_back();
        }
        groups[it->second].members.push_back(i);
    }

    for (auto& g : groups) {
        std::vector<std::string> candidates;
        for (auto m : g.members) {
            for (auto& t : detail::class_tokens(class_names[m])) {
                if (std::find(candidates.begin(), candidates.end(), t) == candidates.end()) {
                    candidates.push_back(std::move(t));
                }
            }
        }
        double best = -2.0;
        for (const auto& t : candidates) {
            const std::vector<std::string> terms{t};
            const auto tv = provider.embed(t, terms);
            double sum = 0.0;
            for (auto m : g.members) {
                sum += cosine(tv, vectors[m]);
            }
            const double mean = sum / static_cast<double>(g.members.size());
            if (mean > best) {
                best = mean;
                g.segment = t;
            }
        }
    }
    return groups;
}

/// Re-parent the method leaves of each class group under one node named by
/// the group's segment. Groups that end up with the same segment share a node.
inline void apply_class_groups(ApiTree& tree, std::span<const ClassGroup> groups)
{
    std::vector<ApiNode> merged;
    for (const auto& g : groups) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const ApiNode& n) { return n.segment == g.segment; });
        if (it == merged.end()) {
            merged.push_back({g.segment, {}, {}});
            it = std::prev(merged.end());
        }
        for (auto m : g.members) {
            auto& leaves = tree.root.children[m].children;
            std::move(leaves.begin(), leaves.end(), std::back_inserter(it->children));
        }
    }
    tree.root.children = std::move(merged);
}

/// Leaves under one parent that share a segment are merged when their verbs
/// differ; a repeated (segment, verb) gets "-2", "-3", ... on the later leaf.
inline void resolve_collisions(ApiNode& parent)
{
    std::vector<ApiNode> out;
    auto has_verb = [](const ApiNode& n, HttpVerb v) {
        return std::any_of(n.operations.begin(), n.operations.end(), [v](const ApiOperation& o) { return o.verb == v; });
    };
    auto place = [&](const std::string& segment, ApiOperation op) {
        for (std::size_t suffix = 1;; ++suffix) {
            const std::string candidate = suffix == 1 ? segment : segment + "-" + std::to_string(suffix);
            auto it = std::find_if(out.begin(), out.end(), [&](const ApiNode& n) { return n.segment == candidate; });
            if (it == out.end()) {
                out.push_back({candidate, {}, {std::move(op)}});
                return;
            }
            if (!has_verb(*it, op.verb)) {
                it->operations.push_back(std::move(op));
                return;
            }
        }
    };
    for (auto& leaf : parent.children) {
        for (auto& op : leaf.operations) {
            place(leaf.segment, std::move(op));
        }
    }
    parent.children = std::move(out);
}

/// Primitive and boxed scalar types plus String.
inline bool is_scalar_type(std::string_view t)
{
    static const std::vector<std::string_view> scalars{
        "int",     "long",    "short",   "byte",    "boolean", "double", "float", "char",
        "java.lang.Integer", "java.lang.Long", "java.lang.Short", "java.lang.Byte", "java.lang.Boolean",
        "java.lang.Double", "java.lang.Float", "java.lang.Character", "java.lang.String"};
    return std::find(scalars.begin(), scalars.end(), t) != scalars.end();
}

/// GET and DELETE operations whose parameters are all scalar take them as
/// path templates.
inline void assign_path_params(ApiNode& node)
{
    for (auto& op : node.operations) {
        op.path_params = (op.verb == HttpVerb::get || op.verb == HttpVerb::del) && !op.param_types.empty() &&
                         std::all_of(op.param_types.begin(), op.param_types.end(),
                                     [](const std::string& t) { return is_scalar_type(t); });
    }
    for (auto& child : node.children) {
        assign_path_params(child);
    }
}

/// Full construction for one cluster. Classes are grouped with `provider`
/// when it covers every class name and token, otherwise with `fallback`.
inline ApiTree build_api_tree(std::string cluster_name, std::span<const ExposedOperation> exposed,
                              const PosTagger& tagger, const EmbeddingProvider& provider,
                              const EmbeddingProvider& fallback, double threshold)
{
    auto tree = init_api_tree(std::move(cluster_name), exposed);
    apply_method_segments(tree, tagger);

    std::vector<std::string> class_names;
    for (const auto& c : tree.root.children) {
        class_names.push_back(c.segment);
    }
    const EmbeddingProvider& grouping = provider_covers_classes(provider, class_names) ? provider : fallback;
    tree.grouping_provider = grouping.id();
    const auto groups = group_class_segments(class_names, grouping, threshold);
    apply_class_groups(tree, groups);

    for (auto& g : tree.root.children) {
        resolve_collisions(g);
    }
    assign_path_params(tree.root);
    return tree;
}

/// All operations in depth-first order.
inline std::vector<const ApiOperation*> tree_operations(const ApiTree& tree)
{
    std::vector<const ApiOperation*> out;
    auto walk = [&](auto&& self, const ApiNode& n) -> void {
        for (const auto& op : n.operations) {
            out.push_back(&op);
        }
        for (const auto& c : n.children) {
            self(self, c);
        }
    };
    walk(walk, tree.root);
    return out;
}

inline nlohmann::json to_json(const ApiOperation& op)
{
    return {{"verb", to_string(op.verb)},
            {"method", op.method_key},
            {"confidence", op.confidence},
            {"source", to_string(op.source)},
            {"classifier_fallback", op.classifier_fallback},
            {"exposure", to_string(op.exposure)},
            {"path_params", op.path_params}};
}

inline nlohmann::json to_json(const ApiNode& node)
{
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : node.operations) {
        ops.push_back(to_json(op));
    }
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : node.children) {
        children.push_back(to_json(c));
    }
    return {{"segment", node.segment}, {"operations", ops}, {"children", children}};
}

} // namespace mono2rest::restify
