// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/error.hpp"
#include "mono2rest/semantics.hpp"
#include "mono2rest/tokenize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace mono2rest::evaluation {

/// Mean of the member vectors, L2-normalized (a zero mean stays zero).
inline EmbeddingVector aggregate_embedding(std::span<const EmbeddingVector> members)
{
    if (members.empty()) {
        throw EmptyCluster("cannot aggregate an empty set of embeddings");
    }
    const std::size_t dim = members.front().dim();
    EmbeddingVector mean{std::vector<double>(dim, 0.0)};
    for (const auto& v : members) {
        if (v.dim() != dim) {
            throw DimensionMismatch("member embeddings differ in dimension");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            mean.values[i] += v.values[i];
        }
    }
    const double norm = l2_norm(mean.values);
    if (norm > 0.0) {
        for (auto& x : mean.values) {
            x /= norm;
        }
    }
    return mean;
}

struct ReferenceService {
    std::string name;
    std::vector<std::string> methods;
};

/// {"services": [{"name": str, "methods": [keys]}]}
inline std::vector<ReferenceService> parse_reference(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("services") || !doc["services"].is_array()) {
        throw ParseError("reference file must be an object with a 'services' array");
    }
    std::vector<ReferenceService> out;
    std::set<std::string> names;
    for (const auto& s : doc["services"]) {
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string() || !s.contains("methods") ||
            !s["methods"].is_array()) {
            throw ParseError("each reference service needs a string 'name' and a 'methods' array");
        }
        ReferenceService svc{s["name"].get<std::string>(), {}};
        for (const auto& m : s["methods"]) {
            if (!m.is_string()) {
                throw ParseError("methods of reference service '" + svc.name + "' must be strings");
            }
            svc.methods.push_back(m.get<std::string>());
        }
        if (svc.methods.empty()) {
            throw ParseError("reference service '" + svc.name + "' lists no methods");
        }
        if (!names.insert(svc.name).second) {
            throw ParseError("reference service '" + svc.name + "' appears twice");
        }
        out.push_back(std::move(svc));
    }
    if (out.empty()) {
        throw ParseError("reference file lists no services");
    }
    return out;
}

struct ClusterEmbedding {
    std::size_t id = 0;
    EmbeddingVector vector;
};

struct ServiceEmbedding {
    std::string name;
    EmbeddingVector vector;
};

enum class MatchMode { greedy, optimal };

struct MatchPair {
    std::size_t cluster_id = 0;
    std::string reference;
    double score = 0.0;
};

struct MatchResult {
    std::vector<MatchPair> pairs; // in selection order (greedy) or by cluster id (optimal)
    std::vector<std::size_t> unmatched_clusters;
    std::vector<std::string> unmatched_references;
    std::vector<std::size_t> cluster_ids;     // rows of `scores`, ascending
    std::vector<std::string> reference_names; // columns of `scores`, ascending
    std::vector<std::vector<double>> scores;
};

namespace detail {

/// Maximum-weight assignment of rows to columns (rows <= columns), Hungarian
/// method on negated scores. Returns the column for each row.
inline std::vector<std::size_t> max_assignment(const std::vector<std::vector<double>>& w, std::size_t cols)
{
    const std::size_t n = w.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(cols + 1, 0.0);
    std::vector<std::size_t> p(cols + 1, 0);
    std::vector<std::size_t> way(cols + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(cols + 1, inf);
        std::vector<bool> used(cols + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= cols; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= cols; ++j) {
        if (p[j] != 0) {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    return row_to_col;
}

} // namespace detail

/// One-to-one assignment of clusters to reference services by cosine of their
/// aggregated embeddings. Greedy mode repeatedly fixes the highest remaining
/// score, ties going to the lower (cluster id, reference name).
inline MatchResult match_clusters(std::vector<ClusterEmbedding> clusters, std::vector<ServiceEmbedding> references,
                                  MatchMode mode = MatchMode::greedy)
{
    if (clusters.empty() || references.empty()) {
        throw UsageError("matching needs at least one cluster and one reference service");
    }
    const std::size_t dim = clusters.front().vector.dim();
    for (const auto& c : clusters) {
        if (c.vector.dim() != dim) {
            throw ProviderMismatch("cluster embeddings differ in dimension");
        }
    }
    for (const auto& r : references) {
        if (r.vector.dim() != dim) {
            throw ProviderMismatch("reference embeddings have dimension " + std::to_string(r.vector.dim()) +
                                   ", clusters have " + std::to_string(dim));
        }
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(references.begin(), references.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

    MatchResult result;
    const std::size_t rows = clusters.size();
    const std::size_t cols = references.size();
    result.scores.assign(rows, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < rows; ++i) {
        result.cluster_ids.push_back(clusters[i].id);
        for (std::size_t j = 0; j < cols; ++j) {
            result.scores[i][j] = cosine(clusters[i].vector, references[j].vector);
        }
    }
    for (const auto& r : references) {
        result.reference_names.push_back(r.name);
    }

    std::vector<bool> row_used(rows, false);
    std::vector<bool> col_used(cols, false);
    if (mode == MatchMode::greedy) {
        for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
            std::size_t bi = rows;
            std::size_t bj = cols;
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < cols && !row_used[i]; ++j) {
                    if (!col_used[j] && (bi == rows || result.scores[i][j] > result.scores[bi][bj])) {
                        bi = i;
                        bj = j;
                    }
                }
            }
            row_used[bi] = true;
            col_used[bj] = true;
            result.pairs.push_back({clusters[bi].id, references[bj].name, result.scores[bi][bj]});
        }
    } else {
        const bool transpose = rows > cols;
        std::vector<std::vector<double>> w = result.scores;
        if (transpose) {
            w.assign(cols, std::vector<double>(rows, 0.0));
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < cols; ++j) {
                    w[j][i] = result.scores[i][j];
                }
            }
        }
        const auto assign = detail::max_assignment(w, transpose ? rows : cols);
        for (std::size_t a = 0; a < assign.size(); ++a) {
            const std::size_t i = transpose ? assign[a] : a;
            const std::size_t j = transpose ? a : assign[a];
            row_used[i] = true;
            col_used[j] = true;
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (!row_used[i]) {
                continue;
            }
            for (std::size_t a = 0; a < assign.size(); ++a) {
                const std::size_t ii = transpose ? assign[a] : a;
                const std::size_t jj = transpose ? a : assign[a];
                if (ii == i) {
                    result.pairs.push_back({clusters[i].id, references[jj].name, result.scores[i][jj]});
                }
            }
        }
    }
    for (std::size_t i = 0; i < rows; ++i) {
        if (!row_used[i]) {
            result.unmatched_clusters.push_back(clusters[i].id);
        }
    }
    for (std::size_t j = 0; j < cols; ++j) {
        if (!col_used[j]) {
            result.unmatched_references.push_back(references[j].name);
        }
    }
    return result;
}

/// Method identity across codebases whose packages differ: "Class.method".
inline std::string cross_codebase_identity(const MethodRef& m)
{
    return simple_type_name(m.class_fqn) + "." + m.method_name;
}

struct OverlapReport {
    std::vector<std::string> common;
    std::vector<std::string> only_monolith;
    std::vector<std::string> only_reference;
};

inline OverlapReport method_overlap_report(std::span<const MethodRef> monolith, std::span<const MethodRef> reference)
{
    std::set<std::string> a;
    std::set<std::string> b;
    for (const auto& m : monolith) {
        a.insert(cross_codebase_identity(m));
    }
    for (const auto& m : reference) {
        b.insert(cross_codebase_identity(m));
    }
    OverlapReport r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.common));
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.only_monolith));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(r.only_reference));
    return r;
}

/// Adjusted Rand index between two labelings of the same items (1 for equal
/// partitions up to relabeling; 1 also when both put everything in one block).
inline double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b)
{
    if (a.size() != b.size()) {
        throw DimensionMismatch("labelings cover different numbers of items");
    }
    const std::size_t n = a.size();
    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> ra;
    std::map<std::size_t, double> rb;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{a[i], b[i]}] += 1.0;
        ra[a[i]] += 1.0;
        rb[b[i]] += 1.0;
    }
    double index = 0.0;
    for (const auto& [key, c] : joint) {
        index += choose2(c);
    }
    double sa = 0.0;
    double sb = 0.0;
    for (const auto& [key, c] : ra) {
        sa += choose2(c);
    }
    for (const auto& [key, c] : rb) {
        sb += choose2(c);
    }
    const double total = choose2(static_cast<double>(n));
    if (total == 0.0) {
        return 1.0;
    }
    const double expected = sa * sb / total;
    const double max_index = 0.5 * (sa + sb);
    if (max_index == expected) {
        return 1.0;
    }
    return (index - expected) / (max_index - expected);
}

inline nlohmann::json to_json(const MatchResult& r)
{
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"cluster", p.cluster_id}, {"reference", p.reference}, {"score", p.score}});
    }
    nlohmann::json matrix = nlohmann::json::array();
    for (std::size_t i = 0; i < r.scores.size(); ++i) {
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t j = 0; j < r.reference_names.size(); ++j) {
            row[r.reference_names[j]] = r.scores[i][j];
        }
        matrix.push_back({{"cluster", r.cluster_ids[i]}, {"scores", row}});
    }
    return {{"pairs", pairs},
            {"unmatched_clusters", r.unmatched_clusters},
            {"unmatched_references", r.unmatched_references},
            {"score_matrix", matrix}};
}

inline nlohmann::json to_json(const OverlapReport& r)
{
    return {{"common", r.common.size()},
            {"only_monolith", r.only_monolith.size()},
            {"only_reference", r.only_reference.size()},
            {"common_methods", r.common},
            {"only_monolith_methods", r.only_monolith},
            {"only_reference_methods", r.only_reference}};
}

/// Plain-text table of the matched pairs followed by leftovers.
inline std::string format_match_table(const MatchResult& r)
{
    std::size_t width = std::string_view("reference").size();
    for (const auto& p : r.pairs) {
        width = std::max(width, p.reference.size());
    }
    std::ostringstream out;
    auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
    out << "cluster  " << pad("reference") << "  score\n";
    for (const auto& p : r.pairs) {
        char score[32];
        std::snprintf(score, sizeof score, "%.4f", p.score);
        std::string id = "c" + std::to_string(p.cluster_id);
        out << id << std::string(9 - std::min<std::size_t>(8, id.size()), ' ') << pad(p.reference) << "  " << score
            << "\n";
    }
    for (auto c : r.unmatched_clusters) {
        out << "unmatched cluster c" << c << "\n";
    }
    for (const auto& s : r.unmatched_references) {
        out << "unmatched reference " << s << "\n";
    }
    return out.str();
}

} // namespace mono2rest::evaluation
