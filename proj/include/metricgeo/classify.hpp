#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "metricgeo/concave.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/transform.hpp"

namespace metricgeo {

enum class Verdict { ApproximateDilation, LogLike, Neither, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::ApproximateDilation: return "ApproximateDilation";
        case Verdict::LogLike: return "LogLike";
        case Verdict::Neither: return "Neither";
        default: return "Inconclusive";
    }
}

struct ClassifyThresholds {
    double lambda_min = 1e-6;      // separates the lambda > 0 branch from lambda = 0
    double plateau_rel = 1e-3;     // relative plateau tolerance on evidence curves
    double plateau_abs = 1e-9;     // absolute tolerance when a curve sits near 0
    double unbounded_min = 10.0;   // phi(T_max) must exceed this
    double lambda_horizon = 1e12;  // secant horizon for lambda-hat (>= schedule max)
    double grid_t_min = 1e-3;      // smallest positive grid point for sup curves
};

struct ClassificationReport {
    double eta_hat = 0.0;
    double lambda_hat = 0.0;
    std::vector<std::pair<double, double>> dilation_residual;  // (T, sup_{t<=T} |phi(t)-lambda*t|)
    std::vector<std::pair<double, double>> doubling_gap;       // (T, sup_{t<=T} phi(2t)-phi(t))
    std::pair<double, double> unboundedness_witness{0.0, 0.0};
    Verdict verdict = Verdict::Inconclusive;
    ClassifyThresholds thresholds_used;
};

inline std::vector<double> default_t_schedule() { return {1e2, 1e3, 1e4, 1e5, 1e6}; }

// The midconcavity budget eta/2 + delta a transform must satisfy when its
// transformed half line is delta-hyperbolic.
inline double midconcavity_from_hyperbolicity_bound(double eta_hat, double delta) {
    if (eta_hat < 0.0 || delta < 0.0)
        throw InvalidRange("midconcavity budget needs nonnegative inputs");
    return 0.5 * eta_hat + delta;
}

namespace detail {

inline bool curve_plateaus(const std::vector<std::pair<double, double>>& curve,
                           const ClassifyThresholds& th) {
    if (curve.size() < 2)
        return false;
    const double last = curve[curve.size() - 1].second;
    const double prev = curve[curve.size() - 2].second;
    const double diff = std::abs(last - prev);
    return diff < th.plateau_abs
           || diff < th.plateau_rel * std::max(std::abs(last), std::abs(prev));
}

inline bool curve_grows(const std::vector<std::pair<double, double>>& curve,
                        const ClassifyThresholds& th) {
    if (curve.size() < 2)
        return false;
    const double last = curve[curve.size() - 1].second;
    const double prev = curve[curve.size() - 2].second;
    return last - prev >= th.plateau_abs
           && last - prev >= th.plateau_rel * std::max(std::abs(last), std::abs(prev));
}

}  // namespace detail

// The decision procedure for the dichotomy: fills the evidence curves over the
// T-schedule and decides ApproximateDilation / LogLike / Neither, or
// Inconclusive whenever plateau detection is ambiguous at the largest T.
inline ClassificationReport classify_transform(const TransformSpec& phi,
                                               std::vector<double> T_schedule = {},
                                               int grid_per_decade = 256,
                                               ClassifyThresholds thresholds = {}) {
    if (T_schedule.empty())
        T_schedule = default_t_schedule();
    std::sort(T_schedule.begin(), T_schedule.end());
    const double T_max = T_schedule.back();

    ClassificationReport rep;
    rep.thresholds_used = thresholds;
    rep.unboundedness_witness = {T_max, phi(T_max)};
    if (!(phi(T_max) > thresholds.unbounded_min))
        throw BoundedTransform("phi(" + std::to_string(T_max) + ") = "
                               + std::to_string(phi(T_max))
                               + " is below the unboundedness threshold");

    // geometric evaluation grid, grid_per_decade points per decade, plus 0
    std::vector<double> grid{0.0};
    const double ratio = std::pow(10.0, 1.0 / grid_per_decade);
    for (double t = thresholds.grid_t_min; t < T_max * (1.0 - 1e-12); t *= ratio)
        grid.push_back(t);
    grid.push_back(T_max);

    // eta-hat via running max of phi along the grid
    {
        double run_max = 0.0;
        for (double t : grid) {
            const double v = phi(t);
            rep.eta_hat = std::max(rep.eta_hat, run_max - v);
            run_max = std::max(run_max, v);
        }
    }

    // lambda-hat from a secant at a horizon far beyond the schedule, so that the
    // O(1/T) secant error cannot tilt the residual curve over the schedule range
    rep.lambda_hat =
        lambda_estimate(phi, std::max(T_max, thresholds.lambda_horizon)).lambda_hat;

    // evidence curves; the grid is scanned once per schedule entry
    for (double T : T_schedule) {
        double resid = 0.0, gap = 0.0;
        for (double t : grid) {
            if (t > T * (1.0 + 1e-12))
                break;
            resid = std::max(resid, std::abs(phi(t) - rep.lambda_hat * t));
            gap = std::max(gap, phi(2.0 * t) - phi(t));
        }
        rep.dilation_residual.emplace_back(T, resid);
        rep.doubling_gap.emplace_back(T, gap);
    }

    const bool dil_plateau = rep.lambda_hat > thresholds.lambda_min
                             && detail::curve_plateaus(rep.dilation_residual, thresholds);
    const bool log_plateau = detail::curve_plateaus(rep.doubling_gap, thresholds);
    if (dil_plateau && !log_plateau) {
        rep.verdict = Verdict::ApproximateDilation;
    } else if (log_plateau && !dil_plateau) {
        rep.verdict = Verdict::LogLike;
    } else if (!dil_plateau && !log_plateau
               && detail::curve_grows(rep.dilation_residual, thresholds)
               && detail::curve_grows(rep.doubling_gap, thresholds)) {
        rep.verdict = Verdict::Neither;
    } else {
        rep.verdict = Verdict::Inconclusive;
    }
    return rep;
}

}  // namespace metricgeo
