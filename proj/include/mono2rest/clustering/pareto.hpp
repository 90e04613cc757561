// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace mono2rest::clustering {

/// Pareto dominance for minimization: no worse everywhere, better somewhere.
template<typename Point>
bool dominates(const Point& a, const Point& b)
{
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        if (a[i] < b[i]) {
            strictly = true;
        }
    }
    return strictly;
}

/// Fast non-dominated sort (Deb et al.). Fronts list indices in ascending
/// order; equal points never dominate each other and share a front.
template<typename Point>
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Point> points)
{
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated_by[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(points[j], points[i])) {
                dominated_by[j].push_back(i);
                ++domination_count[i];
            }
        }
    }

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            for (auto j : dominated_by[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

template<typename Point>
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Point>& points)
{
    return nondominated_sort(std::span<const Point>(points));
}

/// Area dominated by 2-D points (minimization) and bounded by `ref`.
inline double hypervolume_2d(std::vector<std::array<double, 2>> pts, const std::array<double, 2>& ref)
{
    std::erase_if(pts, [&](const auto& p) { return !(p[0] < ref[0] && p[1] < ref[1]); });
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double best_y = ref[1];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best_y = std::min(best_y, pts[i][1]);
        const double next_x = i + 1 < pts.size() ? pts[i + 1][0] : ref[0];
        area += (next_x - pts[i][0]) * (ref[1] - best_y);
    }
    return area;
}

/// Volume dominated by 3-D points (minimization) and bounded by `ref`, by
/// slicing along the first axis. Points not strictly better than `ref` in
/// every coordinate contribute nothing.
inline double hypervolume_3d(std::span<const std::array<double, 3>> points, const std::array<double, 3>& ref)
{
    std::vector<std::array<double, 3>> pts;
    for (const auto& p : points) {
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) {
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end());
    double volume = 0.0;
    std::vector<std::array<double, 2>> slice;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slice.push_back({pts[i][1], pts[i][2]});
        const double next_x = i + 1 < pts.size() ? pts[i + 1][0] : ref[0];
        const double width = next_x - pts[i][0];
        if (width > 0.0) {
            volume += width * hypervolume_2d(slice, {ref[1], ref[2]});
        }
    }
    return volume;
}

} // namespace mono2rest::clustering
