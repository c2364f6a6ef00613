#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "metricgeo/errors.hpp"

namespace metricgeo {

inline bool is_triangle_triplet(double a, double b, double c) {
    if (a < 0 || b < 0 || c < 0)
        throw InvalidRange("triangle triplet entries must be nonnegative");
    return a <= b + c && b <= a + c && c <= a + b;
}

// Slack of the worst triangle inequality violation in a square table,
// max over triples of d(i,j) - d(i,k) - d(k,j), clamped at 0.
struct TriangleDefect {
    double defect = 0.0;
    std::array<std::size_t, 3> witness{0, 0, 0};
};

inline TriangleDefect triangle_defect(const std::vector<double>& table, std::size_t n) {
    if (table.size() != n * n)
        throw MetricSpaceError("distance table has wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i * n + i] != 0.0)
            throw MetricSpaceError("distance table has nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j)
            if (table[i * n + j] != table[j * n + i])
                throw MetricSpaceError("distance table is asymmetric at (" + std::to_string(i)
                                       + "," + std::to_string(j) + ")");
    }
    TriangleDefect out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double v = table[i * n + j] - table[i * n + k] - table[k * n + j];
                if (v > out.defect) {
                    out.defect = v;
                    out.witness = {i, j, k};
                }
            }
    return out;
}

// n points with an immutable n x n distance table. Validated on construction:
// zero diagonal, symmetry, positivity off the diagonal, and the triangle
// inequality within a relative tolerance (transformed tables carry
// floating-point error).
class FiniteMetricSpace {
public:
    static constexpr double kTriangleTolScale = 1e-9;

    FiniteMetricSpace(std::size_t n, std::vector<double> dist,
                      std::vector<std::string> labels = {})
        : n_(n), dist_(std::move(dist)), labels_(std::move(labels)) {
        if (n_ == 0)
            throw MetricSpaceError("metric space needs at least one point");
        if (dist_.size() != n_ * n_)
            throw MetricSpaceError("distance table has wrong size");
        if (!labels_.empty() && labels_.size() != n_)
            throw MetricSpaceError("label count does not match point count");
        max_dist_ = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                if (dist_[i * n_ + j] <= 0.0)
                    throw MetricSpaceError("nonpositive distance between distinct points ("
                                           + std::to_string(i) + "," + std::to_string(j) + ")");
                max_dist_ = std::max(max_dist_, dist_[i * n_ + j]);
            }
        const TriangleDefect td = triangle_defect(dist_, n_);  // also checks diag/symmetry
        if (td.defect > triangle_tolerance())
            throw TransformNotMetricError(td.witness, td.defect);
    }

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

    double at(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_)
            throw InvalidRange("point index out of range");
        return dist_[i * n_ + j];
    }

    double max_distance() const { return max_dist_; }
    double triangle_tolerance() const { return kTriangleTolScale * max_dist_; }

    const std::vector<double>& table() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }

    // Metric subspace on a subset of the points (indices need not be sorted).
    FiniteMetricSpace restrict_to(const std::vector<std::size_t>& idx) const {
        const std::size_t m = idx.size();
        std::vector<double> sub(m * m, 0.0);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                sub[a * m + b] = at(idx[a], idx[b]);
        return FiniteMetricSpace(m, std::move(sub));
    }

private:
    std::size_t n_;
    std::vector<double> dist_;
    std::vector<std::string> labels_;
    double max_dist_ = 0.0;
};

}  // namespace metricgeo
