#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "metricgeo/errors.hpp"
#include "metricgeo/transform.hpp"

namespace metricgeo {

enum class Side { Left, Right };

struct DerivativeEstimate {
    double value;
    Side side;
    double t;
    double h_used;
};

// One-sided secant estimate with h halved from h0 until successive estimates
// differ by < 1e-8 or h < 1e-12. Refuses t = 0, where the right derivative may
// be infinite.
inline DerivativeEstimate one_sided_derivative(const TransformSpec& phi, double t, Side side,
                                               double h0 = 1e-3) {
    if (!(t > 0.0))
        throw InvalidRange("one-sided derivative needs t > 0");
    if (!(h0 > 0.0))
        throw InvalidRange("h0 must be positive");
    double h = side == Side::Left ? std::min(h0, 0.5 * t) : h0;
    const double ft = phi(t);
    auto secant = [&](double hh) {
        return side == Side::Right ? (phi(t + hh) - ft) / hh : (ft - phi(t - hh)) / hh;
    };
    double est = secant(h);
    while (h >= 1e-12) {
        h *= 0.5;
        const double next = secant(h);
        const bool settled = std::abs(next - est) < 1e-8;
        est = next;
        if (settled)
            break;
    }
    return {est, side, t, h};
}

struct LambdaEstimate {
    double lambda_hat;
    double T_used;
    std::vector<std::pair<double, double>> secant_sequence;  // (T, slope), increasing T
};

// Secant slope (phi(2T) - phi(T)) / T at T = T_max, with the sequence over
// T_max / 2^k recorded. For concave phi this upper-bounds the limiting slope.
inline LambdaEstimate lambda_estimate(const TransformSpec& phi, double T_max) {
    if (!(T_max > 0.0))
        throw InvalidRange("lambda_estimate needs T_max > 0");
    LambdaEstimate out;
    out.T_used = T_max;
    std::vector<std::pair<double, double>> seq;
    double T = T_max;
    for (int k = 0; k < 32 && T > 1e-6; ++k, T *= 0.5)
        seq.emplace_back(T, (phi(2.0 * T) - phi(T)) / T);
    std::reverse(seq.begin(), seq.end());
    out.secant_sequence = std::move(seq);
    out.lambda_hat = std::max(0.0, (phi(2.0 * T_max) - phi(T_max)) / T_max);
    return out;
}

namespace detail {

// Bisect a decreasing function on [lo, hi] with f(lo) >= 0 >= f(hi); terminates
// on bracket width <= tol * max(1, hi).
template <typename F>
inline double bisect_decreasing(F f, double lo, double hi, double tol, const char* what) {
    const double slack = 1e-12 * std::max(1.0, std::abs(f(lo)) + std::abs(f(hi)));
    if (f(lo) < -slack || f(hi) > slack)
        throw BracketFailure(std::string(what) + ": sign conditions failed on bracket");
    const double width = tol * std::max(1.0, hi);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;  // bracket at floating-point resolution
        if (f(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// The unique solution of phi(x) - phi(y) + phi(y-w) - phi(w-x) = 0 in
// [x, min{(x+y)/2, 2x}], for phi in the unbounded strictly-increasing concave
// class. Equals x exactly when phi is a dilation.
inline double omega(const TransformSpec& phi, double x, double y, double tol = 1e-10) {
    if (!(x >= 0.0) || !(x < y))
        throw InvalidRange("omega needs 0 <= x < y");
    if (x == 0.0)
        return 0.0;
    const double hi = std::min(0.5 * (x + y), 2.0 * x);
    auto f = [&](double z) { return phi(x) - phi(y) + phi(y - z) - phi(z - x); };
    return detail::bisect_decreasing(f, x, hi, tol, "omega");
}

// The unique solution of phi(x) - phi(w-x) = lambda * w in [x, 2x]. For
// lambda = 0 the equation forces w = 2x directly (phi is one-to-one).
inline double omega_hat(const TransformSpec& phi, double x, double lambda, double tol = 1e-10) {
    if (!(x >= 0.0) || lambda < 0.0)
        throw InvalidRange("omega_hat needs x >= 0 and lambda >= 0");
    if (lambda == 0.0)
        return 2.0 * x;
    if (x == 0.0)
        return 0.0;
    auto g = [&](double w) { return phi(x) - phi(w - x) - lambda * w; };
    return detail::bisect_decreasing(g, x, 2.0 * x, tol, "omega_hat");
}

// phi(w) - phi(w-x) - lambda*x at w = omega_hat(x). Any delta making the
// transformed half line delta-hyperbolic satisfies delta >= result / 2. For
// lambda = 0 this reduces to the doubling gap phi(2x) - phi(x).
inline double hyp_condition_defect(const TransformSpec& phi, double x, double lambda) {
    if (lambda == 0.0)
        return phi(2.0 * x) - phi(x);
    const double w = omega_hat(phi, x, lambda, 1e-12);
    return phi(w) - phi(w - x) - lambda * x;
}

// max over grid pairs of phi(x)/2 + phi(y)/2 - phi((x+y)/2), clamped at 0.
// Midpoints are evaluated exactly, not snapped to the grid.
inline PairDefect midconcavity_defect(const TransformSpec& phi, const GridSpec& grid) {
    const auto pts = grid.points();
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        vals[i] = phi(pts[i]);
    PairDefect out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double v =
                0.5 * vals[i] + 0.5 * vals[j] - phi(0.5 * (pts[i] + pts[j]));
            if (v > out.defect) {
                out.defect = v;
                out.witness = {pts[i], pts[j]};
            }
        }
    return out;
}

// Piecewise-linear function through a sorted knot list; end slopes extend
// beyond the first/last knot.
class PiecewiseLinear {
public:
    explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots)
        : knots_(std::move(knots)) {
        if (knots_.size() < 2)
            throw InvalidRange("piecewise-linear function needs at least 2 knots");
    }

    double operator()(double t) const {
        std::size_t hi = 1;
        if (t >= knots_.back().first) {
            hi = knots_.size() - 1;
        } else {
            while (knots_[hi].first < t)
                ++hi;
        }
        const auto& [t0, v0] = knots_[hi - 1];
        const auto& [t1, v1] = knots_[hi];
        return v0 + (t - t0) * (v1 - v0) / (t1 - t0);
    }

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

// Upper concave envelope (upper hull) of the points: the least concave
// majorant interpolating on hull knots.
inline PiecewiseLinear least_concave_majorant(
    const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw InvalidRange("least_concave_majorant needs at least 2 points");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i].first < points[i + 1].first))
            throw InvalidRange("least_concave_majorant needs strictly increasing t-values");
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : points) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // drop b if it lies on or below the chord a--p
            const double cross = (b.first - a.first) * (p.second - a.second)
                                 - (b.second - a.second) * (p.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return PiecewiseLinear(std::move(hull));
}

// The cap construction: find a = phi^{-1}(eps/2), take the tangent-like line of
// slope phi'_+(a) through (a, eps/2) on [0, a), keep phi on [a, inf), then shift
// so the result vanishes at 0. The unshifted cap satisfies
// phi <= cap <= phi + eps/2; the shift costs at most another eps/2.
inline TransformSpec cap_construction(const TransformSpec& phi, double eps) {
    if (!(eps > 0.0))
        throw InvalidRange("cap_construction needs eps > 0");
    if (std::holds_alternative<Dilation>(phi.node()))
        return phi;  // already linear, the cap is phi itself
    const double target = 0.5 * eps;
    double hi = 1.0;
    while (phi(hi) < target) {
        hi *= 2.0;
        if (hi > 1e18)
            throw BoundedTransform("transform never reaches eps/2; no preimage for the cap");
    }
    double lo = 0.0;
    while (hi - lo > 1e-14 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (phi(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    const double a = 0.5 * (lo + hi);
    const double slope = one_sided_derivative(phi, a, Side::Right, std::max(1e-6, 1e-3 * a)).value;
    return cap_transform(phi, a, slope, target);
}

}  // namespace metricgeo
