// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include "mono2rest/clustering/brute_force.hpp"
#include "mono2rest/clustering/nsga3.hpp"
#include "mono2rest/evaluation.hpp"
#include "mono2rest/pipeline.hpp"
#include "mono2rest/restify.hpp"
#include "support/fixture.hpp"
#include "support/instances.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mono2rest;
using namespace mono2rest::clustering;

namespace {

constexpr double hypervolume_tolerance = 1e-9;
constexpr double self_match_tolerance = 1e-12;
constexpr double restify_budget_seconds = 5.0;
constexpr double oracle_recovery_required = 0.8;
constexpr int planted_required = 9;
constexpr int convergence_required = 8;
constexpr std::uint64_t seeds = 10;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome formula_fidelity()
{
    CallGraph g;
    g.nodes = testing::numbered_methods({"m1", "m2", "m3", "m4", "m5"});
    g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    const std::vector<std::size_t> a{0, 1, 2, 3};
    const double coupling = coupling_of(a, g);
    const double cohesion = cohesion_of(a, g);

    CallGraph capped;
    capped.nodes = testing::numbered_methods({"m1", "m2", "m3"});
    capped.edges = {{0, 1}, {0, 2}, {1, 2}, {2, 0}};
    const std::vector<std::size_t> all{0, 1, 2};
    const double cap = cohesion_of(all, capped);

    std::ostringstream d;
    d << "coupling=" << coupling << " cohesion=" << cohesion << " capped=" << cap;
    return {coupling == 0.25 && cohesion == 0.75 && cap == 1.0, d.str()};
}

Outcome oracle_equivalence()
{
    std::size_t oracle_points = 0;
    std::size_t recovered = 0;
    std::size_t dominated = 0;
    double worst_instance = 1.0;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        auto inst = testing::random_instance(8, 0.3, seed);
        Evaluator ev(inst.graph, inst.sim);
        const auto oracle = brute_force_pareto(ev, 3);
        OptimizerConfig cfg;
        cfg.k = 3;
        cfg.population_size = 52;
        cfg.generations = 100;
        cfg.rng_seed = seed;
        const auto result = run_optimizer(ev, cfg);

        std::set<Objectives> exact;
        for (const auto& ind : oracle) {
            exact.insert(ind.objectives.minimized());
        }
        std::set<Objectives> found;
        for (const auto& ind : result.pareto_front) {
            found.insert(ind.objectives.minimized());
            for (const auto& o : exact) {
                dominated += dominates(o, ind.objectives.minimized());
            }
        }
        std::size_t hit = 0;
        for (const auto& o : exact) {
            hit += found.count(o);
        }
        oracle_points += exact.size();
        recovered += hit;
        worst_instance = std::min(worst_instance, static_cast<double>(hit) / static_cast<double>(exact.size()));
    }
    const double share = static_cast<double>(recovered) / static_cast<double>(oracle_points);
    std::ostringstream d;
    d << "recovered " << recovered << "/" << oracle_points << " oracle points (worst instance " << worst_instance
      << "), dominated optimizer points " << dominated;
    return {dominated == 0 && share >= oracle_recovery_required, d.str()};
}

struct PlantedRuns {
    int recovered = 0;
    int monotone = 0;
    int settled_by_80 = 0;
    int converged = 0;
    double seconds = 0.0;
};

PlantedRuns planted_runs()
{
    const auto start = std::chrono::steady_clock::now();
    PlantedRuns out;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        auto inst = testing::planted_instance(seed);
        Evaluator ev(inst.graph, inst.sim);
        OptimizerConfig cfg;
        cfg.k = 3;
        cfg.generations = 100;
        cfg.rng_seed = seed;
        const auto result = run_optimizer(ev, cfg);
        out.recovered += evaluation::adjusted_rand_index(result.chosen().solution.assignment, inst.planted) == 1.0;

        const auto& stats = result.stats;
        bool monotone = true;
        for (std::size_t g = 1; g < stats.size(); ++g) {
            monotone = monotone && stats[g].hypervolume >= stats[g - 1].hypervolume;
        }
        const bool settled = stats.size() > 100 && stats[80].hypervolume >= stats[100].hypervolume - hypervolume_tolerance;
        out.monotone += monotone;
        out.settled_by_80 += settled;
        out.converged += monotone && settled;
    }
    out.seconds = seconds_since(start);
    return out;
}

Outcome planted_recovery(const PlantedRuns& runs)
{
    return {runs.recovered >= planted_required,
            "ARI = 1 in " + std::to_string(runs.recovered) + "/" + std::to_string(seeds) + " seeds, " +
                std::to_string(runs.seconds) + " s for all runs"};
}

Outcome convergence(const PlantedRuns& runs)
{
    return {runs.monotone == static_cast<int>(seeds) && runs.converged >= convergence_required,
            "monotone in " + std::to_string(runs.monotone) + "/" + std::to_string(seeds) +
                ", generation-100 hypervolume reached by generation 80 in " + std::to_string(runs.settled_by_80) +
                "/" + std::to_string(seeds)};
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) {
        out.push_back(part);
    }
    return out;
}

Outcome restification()
{
    using namespace mono2rest::restify;
    const auto start = std::chrono::steady_clock::now();
    const PosTagger tagger;
    const LexiconClassifier lexicon;
    HashedTrigramEmbedder embedder;
    std::vector<std::string> failures;

    {
        const MethodRef m{"org.petclinic.owner.Owner", "getCity", {}, ""};
        if (lexicon.classify(m).verb != HttpVerb::get || method_segment("getCity", tagger) != "city") {
            failures.push_back("getCity");
        }
    }

    static const char* verbs[] = {"get", "set", "find", "update", "delete", "remove", "list", "save", "create",
                                  "process", "is", "has", "clear", "add", "show"};
    static const char* others[] = {"Owner", "Pet", "Visit", "City", "New", "For", "By", "All", "Type", "Id",
                                   "HTTP", "Xml", "Name", "v2", "Last", "Vet", "Specialty", "Address"};
    static const char* classes[] = {"a.Owner", "a.OwnerController", "a.Pet", "a.PetType", "a.Visit", "a.VetService"};
    Rng rng(2024);
    std::vector<ExposedOperation> ops;
    std::set<std::string> keys;
    while (ops.size() < 1000) {
        std::string name;
        const std::size_t words = 1 + uniform_index(rng, 4);
        for (std::size_t w = 0; w < words; ++w) {
            std::string word = bernoulli(rng, 0.4) ? verbs[uniform_index(rng, std::size(verbs))]
                                                   : others[uniform_index(rng, std::size(others))];
            if (w == 0) {
                word[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
            } else {
                word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
            }
            name += word;
        }
        std::vector<std::string> params;
        if (bernoulli(rng, 0.4)) {
            params.emplace_back(bernoulli(rng, 0.5) ? "int" : "a.Owner");
        }
        MethodRef m{classes[uniform_index(rng, std::size(classes))], name, params, ""};
        if (!keys.insert(m.key()).second) {
            continue;
        }

        const auto segment = method_segment(name, tagger);
        if (!is_kebab_segment(segment)) {
            failures.push_back("not kebab: " + name + " -> " + segment);
        }
        const auto tokens = tokenize_identifier(name);
        const bool has_non_verb = std::any_of(tokens.begin(), tokens.end(), [&](const auto& t) { return !tagger.is_verb(t); });
        if (tokens.size() > 1 && has_non_verb) {
            for (const auto& part : split(segment, '-')) {
                if (tagger.is_verb(part)) {
                    failures.push_back("verb survived: " + name + " -> " + segment);
                }
            }
        }
        ops.push_back({m, lexicon.classify(m), nullptr, ExposureReason::external_caller});
    }

    const auto tree = build_api_tree("c1", ops, tagger, embedder, embedder, 0.8);
    for (const auto& cls : tree.root.children) {
        if (!is_kebab_segment(cls.segment)) {
            failures.push_back("class segment not kebab: " + cls.segment);
        }
        for (const auto& leaf : cls.children) {
            if (!is_kebab_segment(leaf.segment)) {
                failures.push_back("leaf segment not kebab: " + leaf.segment);
            }
        }
    }
    std::map<std::string, std::size_t> bound;
    try {
        const auto doc = export_openapi(tree).document;
        for (const auto& [path, item] : doc["paths"].items()) {
            for (const auto& [verb, op] : item.items()) {
                ++bound[op["operationId"].get<std::string>()];
            }
        }
    } catch (const DuplicatePathVerb& e) {
        failures.push_back(e.what());
    }
    for (const auto& k : keys) {
        auto it = bound.find(k);
        if (it == bound.end() || it->second != 1) {
            failures.push_back("not bound exactly once: " + k);
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << ops.size() << " names, " << failures.size() << " violations";
    if (!failures.empty()) {
        d << " (first: " << failures.front() << ")";
    }
    d << ", " << elapsed << " s";
    return {failures.empty() && elapsed < restify_budget_seconds, d.str()};
}

Outcome determinism()
{
    const auto a = testing::scratch_dir("acceptance-a");
    const auto b = testing::scratch_dir("acceptance-b");
    for (const auto& dir : {a, b}) {
        const pipeline::Context ctx(testing::fixture_config(dir), pipeline::Log{});
        pipeline::cmd_pipeline(ctx);
    }
    const auto first = testing::read_artifacts(a);
    const auto second = testing::read_artifacts(b);
    std::size_t differing = 0;
    for (const auto& [name, content] : first) {
        auto it = second.find(name);
        differing += it == second.end() || it->second != content;
    }
    const bool same = first.size() == second.size() && differing == 0 && !first.empty();
    return {same, std::to_string(first.size()) + " artifacts, " + std::to_string(differing) + " differ"};
}

Outcome self_match()
{
    Rng rng(99);
    HashedTrigramEmbedder embedder;
    static const char* words[] = {"owner", "pet", "visit", "vet", "city", "type", "name", "date", "specialty",
                                  "find", "save", "list", "address", "birth", "telephone"};
    int mismatches = 0;
    double worst = 1.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const std::size_t k = 2 + uniform_index(rng, 6);
        std::vector<evaluation::ClusterEmbedding> clusters;
        std::vector<evaluation::ServiceEmbedding> services;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<EmbeddingVector> members;
            const std::size_t size = 1 + uniform_index(rng, 5);
            for (std::size_t m = 0; m < size; ++m) {
                const std::vector<std::string> terms{words[uniform_index(rng, std::size(words))],
                                                     words[uniform_index(rng, std::size(words))]};
                members.push_back(embedder.embed("m", terms));
            }
            auto v = evaluation::aggregate_embedding(members);
            clusters.push_back({c + 1, v});
            services.push_back({"s" + std::to_string(c + 1), v});
        }
        // identical aggregates cannot be told apart; such a draw is not a decomposition
        std::set<std::vector<double>> distinct;
        for (const auto& c : clusters) {
            distinct.insert(c.vector.values);
        }
        if (distinct.size() != k) {
            --t;
            continue;
        }
        for (auto mode : {evaluation::MatchMode::greedy, evaluation::MatchMode::optimal}) {
            const auto r = evaluation::match_clusters(clusters, services, mode);
            mismatches += r.pairs.size() != k;
            for (const auto& p : r.pairs) {
                mismatches += p.reference != "s" + std::to_string(p.cluster_id);
                worst = std::min(worst, p.score);
                mismatches += std::abs(p.score - 1.0) > self_match_tolerance;
            }
        }
    }
    std::ostringstream d;
    d << trials << " decompositions, " << mismatches << " mismatches, lowest score " << worst;
    return {mismatches == 0, d.str()};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](const char* name, const std::function<Outcome()>& check) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
        failures += !o.pass;
    };

    report("objective-formula-fidelity", formula_fidelity);
    report("oracle-equivalence", oracle_equivalence);
    PlantedRuns runs;
    bool planted_ok = true;
    std::string planted_error;
    try {
        runs = planted_runs();
    } catch (const std::exception& e) {
        planted_ok = false;
        planted_error = e.what();
    }
    report("planted-partition-recovery", [&] {
        return planted_ok ? planted_recovery(runs) : Outcome{false, "exception: " + planted_error};
    });
    report("convergence-shape", [&] {
        return planted_ok ? convergence(runs) : Outcome{false, "exception: " + planted_error};
    });
    report("restification-rules", restification);
    report("pipeline-determinism", determinism);
    report("evaluation-self-match", self_match);
    return failures;
}
