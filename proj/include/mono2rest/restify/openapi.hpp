// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/error.hpp"
#include "mono2rest/restify/api_tree.hpp"
#include "mono2rest/tokenize.hpp"
#include "mono2rest/version.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace mono2rest::restify {

namespace detail {

/// Schema for a Java type; non-scalar types become named component schemas.
class SchemaRegistry {
public:
    nlohmann::json schema_for(const std::string& type)
    {
        if (type.size() > 2 && type.ends_with("[]")) {
            return {{"type", "array"}, {"items", schema_for(type.substr(0, type.size() - 2))}};
        }
        if (type.ends_with("...")) {
            return {{"type", "array"}, {"items", schema_for(type.substr(0, type.size() - 3))}};
        }
        if (type == "java.lang.String" || type == "char" || type == "java.lang.Character") {
            return {{"type", "string"}};
        }
        if (type == "int" || type == "short" || type == "byte" || type == "java.lang.Integer" ||
            type == "java.lang.Short" || type == "java.lang.Byte") {
            return {{"type", "integer"}, {"format", "int32"}};
        }
        if (type == "long" || type == "java.lang.Long") {
            return {{"type", "integer"}, {"format", "int64"}};
        }
        if (type == "boolean" || type == "java.lang.Boolean") {
            return {{"type", "boolean"}};
        }
        if (type == "double" || type == "java.lang.Double") {
            return {{"type", "number"}, {"format", "double"}};
        }
        if (type == "float" || type == "java.lang.Float") {
            return {{"type", "number"}, {"format", "float"}};
        }
        return {{"$ref", "#/components/schemas/" + component_name(type)}};
    }

    nlohmann::json components() const
    {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [name, fqn] : names_) {
            out[name] = {{"type", "object"}, {"title", simple_type_name(fqn)}, {"description", fqn}};
        }
        return out;
    }

private:
    std::string component_name(const std::string& fqn)
    {
        std::string erased = fqn.substr(0, fqn.find('<'));
        std::string name = simple_type_name(erased);
        auto sanitize = [](std::string s) {
            for (auto& c : s) {
                if (!mono2rest::detail::is_alnum(c) && c != '.' && c != '-' && c != '_') {
                    c = '_';
                }
            }
            return s;
        };
        name = sanitize(name);
        if (auto it = names_.find(name); it != names_.end() && it->second != erased) {
            name = sanitize(erased);
        }
        names_.emplace(name, erased);
        return name;
    }

    std::map<std::string, std::string> names_; // component name -> erased fqn
};

inline nlohmann::json build_operation(const ApiOperation& op, SchemaRegistry& schemas)
{
    nlohmann::json o;
    o["operationId"] = op.method_key;
    o["summary"] = op.summary.empty() ? op.method_key : op.summary;
    o["x-classification"] = {{"confidence", op.confidence},
                             {"source", to_string(op.source)},
                             {"fallback", op.classifier_fallback}};
    o["x-exposure"] = to_string(op.exposure);
    if (op.path_params) {
        nlohmann::json params = nlohmann::json::array();
        for (std::size_t i = 0; i < op.param_types.size(); ++i) {
            params.push_back({{"name", "param" + std::to_string(i + 1)},
                              {"in", "path"},
                              {"required", true},
                              {"schema", schemas.schema_for(op.param_types[i])}});
        }
        o["parameters"] = params;
    } else if (!op.param_types.empty()) {
        nlohmann::json properties = nlohmann::json::object();
        nlohmann::json required = nlohmann::json::array();
        for (std::size_t i = 0; i < op.param_types.size(); ++i) {
            const auto name = "param" + std::to_string(i + 1);
            properties[name] = schemas.schema_for(op.param_types[i]);
            required.push_back(name);
        }
        o["requestBody"] = {
            {"required", true},
            {"content",
             {{"application/json",
               {{"schema", {{"type", "object"}, {"properties", properties}, {"required", required}}}}}}}};
    }
    nlohmann::json ok = {{"description", "OK"}};
    if (!op.return_type.empty() && op.return_type != "void") {
        ok["content"] = {{"application/json", {{"schema", schemas.schema_for(op.return_type)}}}};
    }
    o["responses"] = {{"200", ok}};
    return o;
}

} // namespace detail

struct OpenApiDocument {
    nlohmann::json document;
    std::vector<std::string> warnings;
};

/// OpenAPI 3.0.3 document for one cluster tree. Paths are `/<root>/<segments>`
/// plus `/{paramN}` templates for path-parameter operations. `metadata` is
/// attached under info.x-mono2rest.
inline OpenApiDocument export_openapi(const ApiTree& tree, const nlohmann::json& metadata = nlohmann::json::object())
{
    OpenApiDocument out;
    detail::SchemaRegistry schemas;
    nlohmann::json paths = nlohmann::json::object();

    auto walk = [&](auto&& self, const ApiNode& node, const std::string& prefix) -> void {
        const std::string path = prefix + "/" + node.segment;
        for (const auto& op : node.operations) {
            std::string full = path;
            if (op.path_params) {
                for (std::size_t i = 0; i < op.param_types.size(); ++i) {
                    full += "/{param" + std::to_string(i + 1) + "}";
                }
            }
            const auto verb = lowercase(op.verb);
            if (paths.contains(full) && paths[full].contains(verb)) {
                throw DuplicatePathVerb("two operations share " + std::string(to_string(op.verb)) + " " + full);
            }
            paths[full][verb] = detail::build_operation(op, schemas);
        }
        for (const auto& child : node.children) {
            self(self, child, path);
        }
    };
    walk(walk, tree.root, "");

    if (paths.empty()) {
        out.warnings.push_back("cluster " + tree.root.segment + " exposes no methods; document has no paths");
    }

    nlohmann::json info = {{"title", tree.root.segment + " API"}, {"version", std::string(tool_version)}};
    if (!metadata.empty()) {
        info["x-mono2rest"] = metadata;
    }
    out.document = {{"openapi", "3.0.3"}, {"info", info}, {"paths", paths}};
    if (auto components = schemas.components(); !components.empty()) {
        out.document["components"] = {{"schemas", components}};
    }
    return out;
}

} // namespace mono2rest::restify
