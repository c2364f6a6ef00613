#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "metricgeo/errors.hpp"
#include "metricgeo/hyperbolicity.hpp"
#include "metricgeo/metric_space.hpp"
#include "metricgeo/transform.hpp"

namespace metricgeo {

// A discretization of the Euclidean half line: increasing parameters starting at 0.
struct HalfLineSample {
    GridSpec params;
    std::vector<double> points;
};

inline HalfLineSample sample_halfline(const GridSpec& grid) {
    return {grid, grid.points()};
}

// dist(i, j) = phi(|t_i - t_j|), validated as a metric.
inline FiniteMetricSpace transformed_halfline_space(const HalfLineSample& sample,
                                                    const TransformSpec& phi) {
    const std::size_t n = sample.points.size();
    std::vector<double> table(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = phi(std::abs(sample.points[i] - sample.points[j]));
            table[i * n + j] = v;
            table[j * n + i] = v;
        }
    return FiniteMetricSpace(n, std::move(table));
}

struct SweepEntry {
    double t_max;
    double delta;
    double ultra_defect;
};

// Per schedule grid: brute-force FourPoint delta and the ultrametric defect of
// the transformed half-line sample.
inline std::vector<SweepEntry> delta_sweep(const TransformSpec& phi,
                                           const std::vector<GridSpec>& schedule,
                                           unsigned workers = 1) {
    std::vector<SweepEntry> out;
    out.reserve(schedule.size());
    for (const auto& grid : schedule) {
        const auto X = transformed_halfline_space(sample_halfline(grid), phi);
        out.push_back({grid.t_max,
                       hyperbolicity_delta(X, HyperbolicityMethod::FourPoint, workers).delta,
                       ultrametric_defect(X).defect});
    }
    return out;
}

struct MidpointDefect {
    double defect;
    std::size_t best_midpoint;
};

// The smallest k for which some point witnesses the k-rough midpoint property
// for the pair: min over z of max{d(x,z), d(z,y)} - d(x,y)/2.
inline MidpointDefect rough_midpoint_defect(const FiniteMetricSpace& X, std::size_t x,
                                            std::size_t y) {
    if (x >= X.size() || y >= X.size())
        throw InvalidRange("point index out of range");
    MidpointDefect out{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t z = 0; z < X.size(); ++z) {
        const double v = std::max(X(x, z), X(z, y)) - 0.5 * X(x, y);
        if (v < out.defect) {
            out.defect = v;
            out.best_midpoint = z;
        }
    }
    return out;
}

// k-hat of a candidate rough isometric embedding of half-line parameters:
// max over pairs of | d(image_i, image_j) - |t_i - t_j| |.
inline double rough_isometry_defect(const std::vector<double>& params,
                                    const FiniteMetricSpace& X,
                                    const std::vector<std::size_t>& images) {
    if (params.size() != images.size())
        throw InvalidRange("parameter and image lists must have equal length");
    double k_hat = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i)
        for (std::size_t j = i + 1; j < params.size(); ++j)
            k_hat = std::max(k_hat, std::abs(X.at(images[i], images[j])
                                             - std::abs(params[i] - params[j])));
    return k_hat;
}

// dist' = lambda * dist + uniform noise in [-k, k], symmetrized by averaging the
// two oriented draws, re-validated; retries with fresh noise before giving up.
inline FiniteMetricSpace perturbed_similarity(const FiniteMetricSpace& X, double lambda,
                                              double k, std::uint64_t seed,
                                              int max_retries = 100) {
    if (!(lambda > 0.0) || k < 0.0)
        throw InvalidRange("perturbed_similarity needs lambda > 0 and k >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-k, k);
    const std::size_t n = X.size();
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<double> table(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double u = 0.5 * (noise(rng) + noise(rng));
                const double v = lambda * X(i, j) + u;
                table[i * n + j] = v;
                table[j * n + i] = v;
            }
        try {
            return FiniteMetricSpace(n, std::move(table), X.labels());
        } catch (const MetricSpaceError&) {
        } catch (const TransformNotMetricError&) {
        }
    }
    throw CannotPerturb("noise level k is too large for this space; triangle inequality "
                        "kept failing after retries");
}

struct EmbedCheck {
    double k_hat;            // rough-isometry defect of the noisy embedding
    double measured_defect;  // defect of the transformed embedding
    double bound;            // phi(k_hat) + eta_hat
};

// Plants the sample on a noisy planar copy (a k-rough isometric embedding by
// construction), transforms both sides, and compares the transformed embedding
// defect against phi(k_hat) + eta_hat.
inline EmbedCheck embed_halfline_check(const TransformSpec& phi, double k, double eta_hat,
                                       const HalfLineSample& sample, std::uint64_t seed) {
    if (k < 0.0 || eta_hat < 0.0)
        throw InvalidRange("embed_halfline_check needs k >= 0 and eta_hat >= 0");
    const std::size_t n = sample.points.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> off(0.0, 0.5 * k);
    std::vector<double> offsets(n, 0.0);
    if (k > 0.0)
        for (auto& e : offsets)
            e = off(rng);
    std::vector<double> table(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::hypot(sample.points[i] - sample.points[j],
                                        offsets[i] - offsets[j]);
            table[i * n + j] = v;
            table[j * n + i] = v;
        }
    const FiniteMetricSpace Y(n, std::move(table));
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i)
        identity[i] = i;
    const double k_hat = rough_isometry_defect(sample.points, Y, identity);

    const FiniteMetricSpace Y_phi = apply_transform(Y, phi);
    double measured = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            measured = std::max(measured,
                                std::abs(Y_phi(i, j)
                                         - phi(std::abs(sample.points[i] - sample.points[j]))));
    return {k_hat, measured, phi(k_hat) + eta_hat};
}

}  // namespace metricgeo
