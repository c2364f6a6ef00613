#pragma once

// Shared test fixtures: independent brute-force oracles (written plainly, no
// reuse of library scan helpers) and seeded random metric-space generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "metricgeo/metricgeo.hpp"

namespace support {

namespace mg = metricgeo;

// --- oracles -------------------------------------------------------------

// Gromov-product delta, straight from the definition.
inline double naive_delta_gp(const mg::FiniteMetricSpace& X) {
    const std::size_t n = X.size();
    double best = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t w = 0; w < n; ++w) {
                    const double pxz = 0.5 * (X(x, w) + X(z, w) - X(x, z));
                    const double pyz = 0.5 * (X(y, w) + X(z, w) - X(y, z));
                    const double pxy = 0.5 * (X(x, w) + X(y, w) - X(x, y));
                    best = std::max(best, std::min(pxz, pyz) - pxy);
                }
    return best;
}

// Four-point delta: half the (largest - medium) pairing-sum gap.
inline double naive_delta_4pt(const mg::FiniteMetricSpace& X) {
    const std::size_t n = X.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    double s[3] = {X(i, j) + X(k, l), X(i, k) + X(j, l), X(i, l) + X(j, k)};
                    std::sort(s, s + 3);
                    best = std::max(best, 0.5 * (s[2] - s[1]));
                }
    return best;
}

inline double naive_ultra(const mg::FiniteMetricSpace& X) {
    const std::size_t n = X.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                double s[3] = {X(i, j), X(i, k), X(j, k)};
                std::sort(s, s + 3);
                best = std::max(best, s[2] - s[1]);
            }
    return best;
}

// Two-stage sign scan for the omega equation: locate the sign change on a
// coarse grid, then refine on a fine grid inside the located cell.
inline double sign_scan_root(const std::function<double(double)>& f, double lo, double hi,
                             double coarse = 1e-3, double fine = 1e-6) {
    double a = lo, b = hi;
    double prev = f(a);
    for (double t = a + coarse; t < b + coarse; t += coarse) {
        const double tt = std::min(t, b);
        const double cur = f(tt);
        if (prev >= 0.0 && cur <= 0.0) {
            b = tt;
            a = tt - coarse;
            break;
        }
        prev = cur;
        if (tt >= b)
            return b;  // no sign change located; root sits at the boundary
    }
    prev = f(a);
    for (double t = a + fine; t < b + fine; t += fine) {
        const double tt = std::min(t, b);
        const double cur = f(tt);
        if (prev >= 0.0 && cur <= 0.0)
            return tt - 0.5 * fine;
        prev = cur;
        if (tt >= b)
            break;
    }
    return b;
}

// --- random spaces -------------------------------------------------------

inline mg::FiniteMetricSpace from_points(const std::vector<std::vector<double>>& pts,
                                         double snowflake_alpha = 1.0) {
    const std::size_t n = pts.size();
    std::vector<double> table(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < pts[i].size(); ++d)
                s += (pts[i][d] - pts[j][d]) * (pts[i][d] - pts[j][d]);
            double v = std::sqrt(s);
            if (snowflake_alpha != 1.0)
                v = std::pow(v, snowflake_alpha);
            table[i * n + j] = v;
            table[j * n + i] = v;
        }
    return mg::FiniteMetricSpace(n, std::move(table));
}

inline mg::FiniteMetricSpace euclidean_cloud(std::size_t n, std::size_t dim, std::uint64_t seed,
                                             double snowflake_alpha = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& c : p)
            c = coord(rng);
    return from_points(pts, snowflake_alpha);
}

// Random tree metric: node i > 0 attaches to a random earlier node with a
// random edge weight; distances through the tree.
inline mg::FiniteMetricSpace random_tree_metric(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wdist(0.5, 2.0);
    std::vector<std::size_t> parent(n, 0);
    std::vector<double> up(n, 0.0);  // edge weight to parent
    for (std::size_t i = 1; i < n; ++i) {
        parent[i] = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        up[i] = wdist(rng);
    }
    std::vector<double> depth(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        depth[i] = depth[parent[i]] + up[i];
    auto lca_dist = [&](std::size_t a, std::size_t b) {
        std::size_t x = a, y = b;
        double d = 0.0;
        while (x != y) {
            if (depth[x] >= depth[y]) {
                d += up[x];
                x = parent[x];
            } else {
                d += up[y];
                y = parent[y];
            }
        }
        return d;
    };
    std::vector<double> table(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = lca_dist(i, j);
            table[i * n + j] = d;
            table[j * n + i] = d;
        }
    return mg::FiniteMetricSpace(n, std::move(table));
}

// Leaf metric of a star tree: d(i,j) = w_i + w_j with leaf-edge weights in
// [0.5, 1], so every triangle has slack >= 1 (unlike full tree vertex sets,
// whose path triples are exactly tight and admit no additive noise).
inline mg::FiniteMetricSpace star_leaf_metric(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wdist(0.5, 1.0);
    std::vector<double> w(n);
    for (auto& e : w)
        e = wdist(rng);
    std::vector<double> table(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            table[i * n + j] = w[i] + w[j];
            table[j * n + i] = w[i] + w[j];
        }
    return mg::FiniteMetricSpace(n, std::move(table));
}

// A family mix: Euclidean clouds of various dimension, snowflaked clouds,
// and tree metrics, all driven by the seed.
inline mg::FiniteMetricSpace random_metric_space(std::uint64_t seed, std::size_t max_n = 20) {
    std::mt19937_64 rng(seed * 2654435761u + 17);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, max_n)(rng);
    switch (seed % 3) {
        case 0:
            return euclidean_cloud(n, 1 + seed % 5, seed ^ 0x9e3779b9u);
        case 1:
            return euclidean_cloud(n, 2 + seed % 3, seed ^ 0x85ebca6bu, 0.5 + 0.05 * (seed % 10));
        default:
            return random_tree_metric(n, seed ^ 0xc2b2ae35u);
    }
}

}  // namespace support
