// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mono2rest {

/// A method of the analyzed program. Identity is the key
/// "class_fqn:method_name(param,param)"; the return type is metadata that may
/// only become known once a signature listing has been read.
struct MethodRef {
    std::string class_fqn;
    std::string method_name;
    std::vector<std::string> param_types;
    std::string return_type; // empty when unknown

    std::string key() const
    {
        std::string k = class_fqn + ":" + method_name + "(";
        for (std::size_t i = 0; i < param_types.size(); ++i) {
            if (i > 0) {
                k += ',';
            }
            k += param_types[i];
        }
        k += ')';
        return k;
    }

    friend bool operator==(const MethodRef& a, const MethodRef& b) { return a.key() == b.key(); }
    friend bool operator<(const MethodRef& a, const MethodRef& b) { return a.key() < b.key(); }
};

inline std::vector<std::string> split_param_list(std::string_view args)
{
    std::vector<std::string> out;
    std::string current;
    int depth = 0;
    for (char c : args) {
        if (c == '<') {
            ++depth;
        } else if (c == '>') {
            --depth;
        }
        if (c == ',' && depth == 0) {
            out.push_back(current);
            current.clear();
            continue;
        }
        if (c != ' ' || depth > 0) {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        out.push_back(current);
    }
    return out;
}

/// Parse a method identity key ("a.Owner:getCity()") back into a MethodRef.
inline std::optional<MethodRef> parse_method_key(std::string_view key)
{
    const auto colon = key.find(':');
    const auto open = key.find('(', colon == std::string_view::npos ? 0 : colon);
    if (colon == std::string_view::npos || open == std::string_view::npos || key.back() != ')') {
        return std::nullopt;
    }
    MethodRef m;
    m.class_fqn = std::string(key.substr(0, colon));
    m.method_name = std::string(key.substr(colon + 1, open - colon - 1));
    m.param_types = split_param_list(key.substr(open + 1, key.size() - open - 2));
    if (m.class_fqn.empty() || m.method_name.empty()) {
        return std::nullopt;
    }
    return m;
}

enum class CallKind { virtual_call, interface_call, special_call, static_call, dynamic_call };

inline std::optional<CallKind> call_kind_from_code(char code)
{
    switch (code) {
    case 'M': return CallKind::virtual_call;
    case 'I': return CallKind::interface_call;
    case 'O': return CallKind::special_call;
    case 'S': return CallKind::static_call;
    case 'D': return CallKind::dynamic_call;
    default: return std::nullopt;
    }
}

inline const char* to_string(CallKind kind)
{
    switch (kind) {
    case CallKind::virtual_call: return "virtual";
    case CallKind::interface_call: return "interface";
    case CallKind::special_call: return "special";
    case CallKind::static_call: return "static";
    case CallKind::dynamic_call: return "dynamic";
    }
    return "unknown";
}

struct CallEdge {
    MethodRef caller;
    MethodRef callee;
    CallKind call_kind = CallKind::virtual_call;

    friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

struct ClassEdge {
    std::string from;
    std::string to;

    friend bool operator==(const ClassEdge&, const ClassEdge&) = default;
};

using RawRecord = std::variant<ClassEdge, CallEdge>;

struct ParseWarning {
    std::size_t line = 0; // 1-based
    std::string text;
};

struct ParsedCallgraph {
    std::vector<RawRecord> records;
    std::vector<ParseWarning> warnings;
};

/// Read java-callgraph output. Malformed lines become warnings; blank lines are ignored.
inline ParsedCallgraph parse_callgraph_text(std::string_view text)
{
    static const std::regex method_line(
        R"(^M:([^:\s]+):([^\s(]+)\(([^)]*)\) \(([MIOSD])\)([^:\s]+):([^\s(]+)\(([^)]*)\)\s*$)");
    static const std::regex class_line(R"(^C:(\S+) (\S+)\s*$)");

    ParsedCallgraph out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }

        std::smatch m;
        if (std::regex_match(line, m, method_line)) {
            CallEdge edge;
            edge.caller = MethodRef{m[1], m[2], split_param_list(m[3].str()), {}};
            edge.call_kind = *call_kind_from_code(m[4].str()[0]);
            edge.callee = MethodRef{m[5], m[6], split_param_list(m[7].str()), {}};
            out.records.emplace_back(std::move(edge));
        } else if (std::regex_match(line, m, class_line)) {
            out.records.emplace_back(ClassEdge{m[1], m[2]});
        } else {
            out.warnings.push_back({line_no, line});
        }
    }
    return out;
}

inline bool is_jdk_class(std::string_view fqn)
{
    for (std::string_view p : {"java.", "javax.", "jdk.", "sun."}) {
        if (fqn.starts_with(p)) {
            return true;
        }
    }
    return false;
}

/// A prefix ending in '.' matches by plain string prefix; otherwise it must
/// name a whole package ("a.b" matches "a.b.C" and "a.b" but not "a.bc.D").
inline bool has_app_prefix(std::string_view fqn, std::span<const std::string> prefixes)
{
    for (const auto& p : prefixes) {
        if (p.empty()) {
            continue;
        }
        if (p.back() == '.') {
            if (fqn.starts_with(p)) {
                return true;
            }
        } else if (fqn == p || (fqn.starts_with(p) && fqn.size() > p.size() && fqn[p.size()] == '.')) {
            return true;
        }
    }
    return false;
}

/// Keep only application method-to-method calls: class edges, JDK calls,
/// calls leaving the application prefixes and recursive self-calls are
/// dropped, duplicates collapse to their first occurrence.
inline std::vector<RawRecord> filter_records(std::span<const RawRecord> records, std::span<const std::string> app_prefixes)
{
    std::vector<RawRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& record : records) {
        const auto* edge = std::get_if<CallEdge>(&record);
        if (edge == nullptr) {
            continue;
        }
        const auto& from = edge->caller.class_fqn;
        const auto& to = edge->callee.class_fqn;
        if (is_jdk_class(from) || is_jdk_class(to)) {
            continue;
        }
        if (!has_app_prefix(from, app_prefixes) || !has_app_prefix(to, app_prefixes)) {
            continue;
        }
        auto caller_key = edge->caller.key();
        auto callee_key = edge->callee.key();
        if (caller_key == callee_key) {
            continue;
        }
        if (seen.emplace(std::move(caller_key), std::move(callee_key)).second) {
            out.push_back(record);
        }
    }
    return out;
}

/// Directed, unweighted method-level call graph. Nodes are sorted by identity
/// key so node ids depend on the node set alone.
struct CallGraph {
    std::vector<MethodRef> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges; // sorted, unique, no self-loops

    std::size_t size() const noexcept { return nodes.size(); }

    std::optional<std::size_t> index_of(const std::string& key) const
    {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), key,
                                   [](const MethodRef& m, const std::string& k) { return m.key() < k; });
        if (it != nodes.end() && it->key() == key) {
            return static_cast<std::size_t>(it - nodes.begin());
        }
        return std::nullopt;
    }

    /// Nodes that neither call nor are called by anything.
    std::vector<bool> isolated() const
    {
        std::vector<bool> flags(nodes.size(), true);
        for (auto [from, to] : edges) {
            flags[from] = false;
            flags[to] = false;
        }
        return flags;
    }
};

/// Assemble a graph from raw records (methods declared in a signature listing
/// may be passed in `declared`; application methods among them become nodes
/// even when they take part in no call, and supply return types).
inline CallGraph refine_graph(std::span<const RawRecord> records, std::span<const std::string> app_prefixes,
                              std::span<const MethodRef> declared = {})
{
    if (app_prefixes.empty()) {
        throw UsageError("at least one application package prefix is required");
    }
    const auto kept = filter_records(records, app_prefixes);

    std::map<std::string, MethodRef> by_key;
    for (const auto& record : kept) {
        const auto& edge = std::get<CallEdge>(record);
        by_key.emplace(edge.caller.key(), edge.caller);
        by_key.emplace(edge.callee.key(), edge.callee);
    }
    for (const auto& m : declared) {
        if (is_jdk_class(m.class_fqn) || !has_app_prefix(m.class_fqn, app_prefixes)) {
            continue;
        }
        auto [it, inserted] = by_key.emplace(m.key(), m);
        if (!inserted && it->second.return_type.empty()) {
            it->second.return_type = m.return_type;
        }
    }
    if (by_key.empty()) {
        throw EmptyGraph("no application methods survived refinement; check the application package prefixes");
    }

    CallGraph graph;
    std::map<std::string, std::size_t> index;
    for (auto& [key, method] : by_key) {
        index.emplace(key, graph.nodes.size());
        graph.nodes.push_back(method);
    }
    for (const auto& record : kept) {
        const auto& edge = std::get<CallEdge>(record);
        graph.edges.emplace_back(index.at(edge.caller.key()), index.at(edge.callee.key()));
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
    return graph;
}

/// Dense row-major square matrix.
template<typename T>
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<T> cells;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size, T fill = T{}) : n(size), cells(size * size, fill) {}

    T& operator()(std::size_t i, std::size_t j) { return cells[i * n + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
};

using AdjacencyMatrix = SquareMatrix<std::uint8_t>;

inline AdjacencyMatrix adjacency_matrix(const CallGraph& graph)
{
    AdjacencyMatrix adj(graph.size(), 0);
    for (auto [from, to] : graph.edges) {
        adj(from, to) = 1;
    }
    return adj;
}

namespace detail {
inline std::string dot_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

inline constexpr const char* cluster_palette[] = {
    "#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#ffff99",
    "#1f78b4", "#33a02c", "#e31a1c", "#ff7f00", "#6a3d9a", "#b15928",
};
} // namespace detail

/// Render the graph as DOT. With an assignment (one cluster id per node),
/// nodes are grouped into filled `cluster_<id>` subgraphs.
inline std::string export_dot(const CallGraph& graph, std::optional<std::span<const std::size_t>> assignment = std::nullopt,
                              std::span<const std::string> header_comments = {})
{
    std::ostringstream os;
    for (const auto& line : header_comments) {
        os << "// " << line << '\n';
    }
    os << "digraph callgraph {\n";
    os << "  node [shape=box, style=filled, fillcolor=white];\n";

    auto node_line = [&](std::size_t i, const char* indent) {
        const auto& m = graph.nodes[i];
        os << indent << "n" << i << " [label=\"" << detail::dot_escape(m.class_fqn.substr(m.class_fqn.rfind('.') + 1))
           << "." << detail::dot_escape(m.method_name) << "\", tooltip=\"" << detail::dot_escape(m.key()) << "\"];\n";
    };

    if (assignment) {
        std::map<std::size_t, std::vector<std::size_t>> members;
        for (std::size_t i = 0; i < graph.size(); ++i) {
            members[(*assignment)[i]].push_back(i);
        }
        constexpr std::size_t palette_size = std::size(detail::cluster_palette);
        for (const auto& [cluster, nodes] : members) {
            os << "  subgraph cluster_" << cluster << " {\n";
            os << "    label=\"c" << cluster << "\";\n";
            os << "    style=filled;\n";
            os << "    color=\"" << detail::cluster_palette[cluster % palette_size] << "\";\n";
            for (auto i : nodes) {
                node_line(i, "    ");
            }
            os << "  }\n";
        }
    } else {
        for (std::size_t i = 0; i < graph.size(); ++i) {
            node_line(i, "  ");
        }
    }
    for (auto [from, to] : graph.edges) {
        os << "  n" << from << " -> n" << to << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace mono2rest
