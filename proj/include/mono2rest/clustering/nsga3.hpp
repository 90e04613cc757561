// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/clustering/objectives.hpp"
#include "mono2rest/clustering/operators.hpp"
#include "mono2rest/clustering/pareto.hpp"
#include "mono2rest/clustering/reference_points.hpp"
#include "mono2rest/error.hpp"
#include "mono2rest/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace mono2rest::clustering {

struct OptimizerConfig {
    std::size_t k = 3;
    std::size_t population_size = 92;
    std::size_t generations = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::size_t reference_point_divisions = 12;
    std::uint64_t rng_seed = 42;

    void validate() const
    {
        if (k < 1) {
            throw UsageError("k must be at least 1");
        }
        if (population_size < 4) {
            throw UsageError("population size must be at least 4");
        }
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) || !(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
            throw UsageError("crossover and mutation rates must lie in [0, 1]");
        }
    }
};

struct Individual {
    ClusteringSolution solution;
    ObjectiveVector objectives;
};

/// Per-generation summary of the population. `best` holds the best value of
/// each objective independently (lowest coupling, highest cohesion and
/// semsim); `hypervolume` is that of front 0 in minimized form.
struct GenerationStats {
    std::size_t generation = 0;
    ObjectiveVector best;
    ObjectiveVector mean;
    double hypervolume = 0.0;
    std::size_t front_size = 0;
};

struct OptimizerResult {
    std::vector<Individual> pareto_front;
    std::size_t chosen_index = 0; // into pareto_front
    std::vector<GenerationStats> stats;
    Objectives hypervolume_reference{}; // componentwise max of generation 0, minimized form

    const Individual& chosen() const { return pareto_front.at(chosen_index); }
};

namespace detail {

// Solves a 3x3 system by Gaussian elimination with partial pivoting.
inline bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, std::array<double, 3>& x)
{
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            return false;
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 3; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 3; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < 3; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return true;
}

} // namespace detail

/// Normalize `points` (minimized form) by the ideal point and the intercepts
/// of the hyperplane through the extreme points. Degenerate hyperplanes fall
/// back to the per-objective maxima; a column with no spread is divided by 1.
inline std::vector<Objectives> normalize_objectives(std::span<const Objectives> points)
{
    constexpr std::size_t m = 3;
    Objectives ideal;
    ideal.fill(std::numeric_limits<double>::infinity());
    Objectives worst;
    worst.fill(-std::numeric_limits<double>::infinity());
    for (const auto& p : points) {
        for (std::size_t j = 0; j < m; ++j) {
            ideal[j] = std::min(ideal[j], p[j]);
            worst[j] = std::max(worst[j], p[j]);
        }
    }
    std::vector<Objectives> translated;
    translated.reserve(points.size());
    for (const auto& p : points) {
        translated.push_back({p[0] - ideal[0], p[1] - ideal[1], p[2] - ideal[2]});
    }

    std::array<std::array<double, 3>, 3> extremes{};
    for (std::size_t axis = 0; axis < m; ++axis) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : translated) {
            double asf = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                asf = std::max(asf, t[j] / (j == axis ? 1.0 : 1e-6));
            }
            if (asf < best) {
                best = asf;
                extremes[axis] = t;
            }
        }
    }

    Objectives intercepts{};
    std::array<double, 3> plane{};
    bool degenerate = !detail::solve3(extremes, {1.0, 1.0, 1.0}, plane);
    for (std::size_t j = 0; j < m && !degenerate; ++j) {
        if (!(plane[j] > 0.0) || !std::isfinite(1.0 / plane[j]) || 1.0 / plane[j] < 1e-6) {
            degenerate = true;
        } else {
            intercepts[j] = 1.0 / plane[j];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (degenerate) {
            intercepts[j] = worst[j] - ideal[j];
        }
        if (!(intercepts[j] > 1e-12)) {
            intercepts[j] = 1.0;
        }
    }

    for (auto& t : translated) {
        for (std::size_t j = 0; j < m; ++j) {
            t[j] /= intercepts[j];
        }
    }
    return translated;
}

/// Distance from `point` to the line through the origin along `direction`.
inline double perpendicular_distance(const Objectives& point, std::span<const double> direction)
{
    double dot = 0.0;
    double norm2 = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
        dot += point[j] * direction[j];
        norm2 += direction[j] * direction[j];
    }
    const double scale = norm2 > 0.0 ? dot / norm2 : 0.0;
    double d2 = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
        const double r = point[j] - scale * direction[j];
        d2 += r * r;
    }
    return std::sqrt(d2);
}

/// NSGA-III environmental selection over minimized objective vectors.
///
/// Whole fronts are taken while they fit. The front that overflows is
/// thinned by niching: members of the already-taken fronts plus that front
/// are normalized and associated to their nearest reference line, then the
/// remaining slots go one at a time to the least crowded niche that still
/// has a candidate (ties: nearest candidate, then lower niche index), taking
/// that niche's nearest candidate (ties: lower index). No randomness is used.
/// Returns indices into `combined`.
inline std::vector<std::size_t> select_next_generation(std::span<const Objectives> combined, std::size_t capacity,
                                                       const std::vector<std::vector<double>>& refs)
{
    const auto fronts = nondominated_sort(combined);
    std::vector<std::size_t> selected;
    const std::vector<std::size_t>* overflow = nullptr;
    for (const auto& front : fronts) {
        if (selected.size() + front.size() <= capacity) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == capacity) {
                return selected;
            }
        } else {
            overflow = &front;
            break;
        }
    }
    if (overflow == nullptr || refs.empty()) {
        return selected;
    }

    std::vector<std::size_t> pool = selected;
    pool.insert(pool.end(), overflow->begin(), overflow->end());
    std::vector<Objectives> pool_points;
    pool_points.reserve(pool.size());
    for (auto i : pool) {
        pool_points.push_back(combined[i]);
    }
    const auto normalized = normalize_objectives(pool_points);

    std::vector<std::size_t> niche(pool.size());
    std::vector<double> distance(pool.size());
    for (std::size_t p = 0; p < pool.size(); ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < refs.size(); ++r) {
            const double d = perpendicular_distance(normalized[p], refs[r]);
            if (d < best) {
                best = d;
                niche[p] = r;
            }
        }
        distance[p] = best;
    }

    std::vector<std::size_t> niche_count(refs.size(), 0);
    for (std::size_t p = 0; p < selected.size(); ++p) {
        ++niche_count[niche[p]];
    }

    // candidates of the overflowing front, by position in `pool`
    const std::size_t first_candidate = selected.size();
    std::vector<bool> taken(pool.size(), false);
    std::size_t slots = capacity - selected.size();
    while (slots > 0) {
        std::size_t best_pos = pool.size();
        for (std::size_t p = first_candidate; p < pool.size(); ++p) {
            if (taken[p]) {
                continue;
            }
            if (best_pos == pool.size()) {
                best_pos = p;
                continue;
            }
            const auto r = niche[p];
            const auto rb = niche[best_pos];
            if (niche_count[r] != niche_count[rb]) {
                if (niche_count[r] < niche_count[rb]) {
                    best_pos = p;
                }
            } else if (distance[p] != distance[best_pos]) {
                if (distance[p] < distance[best_pos]) {
                    best_pos = p;
                }
            } else if (r < rb) {
                best_pos = p;
            }
        }
        if (best_pos == pool.size()) {
            break;
        }
        taken[best_pos] = true;
        ++niche_count[niche[best_pos]];
        selected.push_back(pool[best_pos]);
        --slots;
    }
    return selected;
}

/// Pick one solution from a front: min-max normalize each minimized objective
/// over the front (constant columns become 0) and take the smallest Chebyshev
/// distance to the ideal corner; ties go to the lower index.
inline std::size_t pick_final_solution(std::span<const ObjectiveVector> front)
{
    if (front.empty()) {
        throw UsageError("cannot pick a solution from an empty front");
    }
    Objectives lo;
    lo.fill(std::numeric_limits<double>::infinity());
    Objectives hi;
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& o : front) {
        const auto f = o.minimized();
        for (std::size_t j = 0; j < 3; ++j) {
            lo[j] = std::min(lo[j], f[j]);
            hi[j] = std::max(hi[j], f[j]);
        }
    }
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto f = front[i].minimized();
        double score = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            const double span = hi[j] - lo[j];
            score = std::max(score, span > 0.0 ? (f[j] - lo[j]) / span : 0.0);
        }
        if (score < best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

namespace detail {

inline GenerationStats summarize(std::size_t generation, std::span<const Individual> population,
                                 const Objectives& hv_reference)
{
    GenerationStats s;
    s.generation = generation;
    std::vector<Objectives> points;
    points.reserve(population.size());
    s.best = population.front().objectives;
    for (const auto& ind : population) {
        const auto& o = ind.objectives;
        s.best.coupling = std::min(s.best.coupling, o.coupling);
        s.best.cohesion = std::max(s.best.cohesion, o.cohesion);
        s.best.semsim = std::max(s.best.semsim, o.semsim);
        s.mean.coupling += o.coupling;
        s.mean.cohesion += o.cohesion;
        s.mean.semsim += o.semsim;
        points.push_back(o.minimized());
    }
    const auto n = static_cast<double>(population.size());
    s.mean.coupling /= n;
    s.mean.cohesion /= n;
    s.mean.semsim /= n;

    const auto fronts = nondominated_sort(std::span<const Objectives>(points));
    std::vector<Objectives> front0;
    for (auto i : fronts.front()) {
        front0.push_back(points[i]);
    }
    s.front_size = front0.size();
    s.hypervolume = hypervolume_3d(front0, hv_reference);
    return s;
}

} // namespace detail

/// Multi-objective clustering of the call graph with NSGA-III.
///
/// Objectives are (coupling, -cohesion, -semsim), all minimized. Offspring
/// come from randomly paired parents through cluster-injection crossover and
/// single-method mutation; children whose partition already exists in the
/// population or the brood are redrawn (bounded), so the population keeps
/// distinct partitions while any remain reachable. All randomness flows from
/// one generator seeded with `config.rng_seed`.
inline OptimizerResult run_optimizer(const Evaluator& evaluator, const OptimizerConfig& config)
{
    config.validate();
    const std::size_t n = evaluator.size();
    const std::size_t k = config.k;
    if (n < k) {
        throw InfeasibleK("cannot split " + std::to_string(n) + " methods into " + std::to_string(k) +
                          " non-empty clusters");
    }

    OptimizerResult result;
    Rng rng(config.rng_seed);

    auto make = [&](ClusteringSolution s) {
        auto objectives = evaluator.evaluate(s);
        return Individual{std::move(s), objectives};
    };

    // only one partition exists: everything together, or all singletons
    if (k == 1 || n == k) {
        ClusteringSolution only{std::vector<std::size_t>(n, 0), k};
        if (k == n) {
            std::iota(only.assignment.begin(), only.assignment.end(), 0);
        }
        result.pareto_front.push_back(make(std::move(only)));
        result.hypervolume_reference = result.pareto_front.front().objectives.minimized();
        result.stats.push_back(detail::summarize(0, result.pareto_front, result.hypervolume_reference));
        return result;
    }

    const auto refs = reference_points(3, config.reference_point_divisions);
    const std::size_t pop_size = config.population_size;
    const std::size_t max_attempts = 50 * pop_size;

    std::set<std::vector<std::size_t>> known;
    std::vector<Individual> population;
    population.reserve(pop_size);
    {
        std::size_t attempts = 0;
        while (population.size() < pop_size) {
            auto candidate = std::move(init_population(n, k, 1, rng).front());
            ++attempts;
            if (known.insert(canonical_labels(candidate.assignment)).second || attempts > max_attempts) {
                population.push_back(make(std::move(candidate)));
            }
        }
    }

    Objectives hv_reference;
    hv_reference.fill(-std::numeric_limits<double>::infinity());
    for (const auto& ind : population) {
        const auto f = ind.objectives.minimized();
        for (std::size_t j = 0; j < 3; ++j) {
            hv_reference[j] = std::max(hv_reference[j], f[j]);
        }
    }
    result.hypervolume_reference = hv_reference;
    result.stats.push_back(detail::summarize(0, population, hv_reference));

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        known.clear();
        for (const auto& ind : population) {
            known.insert(canonical_labels(ind.solution.assignment));
        }

        std::vector<Individual> combined = population;
        std::size_t attempts = 0;
        while (combined.size() < 2 * pop_size) {
            const auto& p1 = population[uniform_index(rng, population.size())].solution;
            const auto& p2 = population[uniform_index(rng, population.size())].solution;
            ClusteringSolution child = bernoulli(rng, config.crossover_rate) ? crossover(p1, p2, rng) : p2;
            if (bernoulli(rng, config.mutation_rate)) {
                mutate(child, rng);
            }
            ++attempts;
            if (known.insert(canonical_labels(child.assignment)).second || attempts > max_attempts) {
                combined.push_back(make(std::move(child)));
            }
        }

        std::vector<Objectives> points;
        points.reserve(combined.size());
        for (const auto& ind : combined) {
            points.push_back(ind.objectives.minimized());
        }
        const auto keep = select_next_generation(points, pop_size, refs);

        std::vector<Individual> next;
        next.reserve(keep.size());
        for (auto i : keep) {
            next.push_back(std::move(combined[i]));
        }
        population = std::move(next);
        result.stats.push_back(detail::summarize(gen, population, hv_reference));
    }

    std::vector<Objectives> points;
    for (const auto& ind : population) {
        points.push_back(ind.objectives.minimized());
    }
    const auto front0 = nondominated_sort(std::span<const Objectives>(points)).front();
    std::vector<ObjectiveVector> front_objectives;
    for (auto i : front0) {
        result.pareto_front.push_back(population[i]);
        front_objectives.push_back(population[i].objectives);
    }
    result.chosen_index = pick_final_solution(front_objectives);
    return result;
}

} // namespace mono2rest::clustering
