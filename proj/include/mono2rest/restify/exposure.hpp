// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/clustering/objectives.hpp"
#include "mono2rest/signature.hpp"

#include <map>
#include <string>
#include <vector>

namespace mono2rest::restify {

enum class ExposureReason { external_caller, root };

inline const char* to_string(ExposureReason r)
{
    return r == ExposureReason::external_caller ? "external-caller" : "root";
}

struct ExposedMethod {
    std::size_t node = 0;
    ExposureReason reason = ExposureReason::external_caller;
};

/// Constructors and static initializers ("<init>", "<clinit>").
inline bool is_initializer(const MethodRef& m)
{
    return !m.method_name.empty() && m.method_name.front() == '<';
}

/// Per cluster, in node order: methods called from outside their own cluster.
/// With `signatures`, public methods that nothing in the application calls are
/// added as roots.
inline std::vector<std::vector<ExposedMethod>>
select_exposed_methods(const CallGraph& graph, const clustering::ClusteringSolution& solution,
                       const std::map<std::string, MethodSignature>* signatures = nullptr)
{
    const std::size_t n = graph.size();
    std::vector<bool> external(n, false);
    std::vector<bool> called(n, false);
    for (auto [from, to] : graph.edges) {
        called[to] = true;
        if (solution.assignment[from] != solution.assignment[to]) {
            external[to] = true;
        }
    }
    std::vector<std::vector<ExposedMethod>> out(solution.k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = graph.nodes[i];
        if (is_initializer(m)) {
            continue;
        }
        if (external[i]) {
            out[solution.assignment[i]].push_back({i, ExposureReason::external_caller});
            continue;
        }
        if (signatures != nullptr && !called[i]) {
            auto it = signatures->find(m.key());
            if (it != signatures->end() && it->second.visibility == Visibility::public_) {
                out[solution.assignment[i]].push_back({i, ExposureReason::root});
            }
        }
    }
    return out;
}

} // namespace mono2rest::restify
