#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace metricgeo {

struct MetricSpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transform produced a table that is not a metric; carries the offending triple.
struct TransformNotMetricError : std::runtime_error {
    std::array<std::size_t, 3> witness;
    double violation;
    TransformNotMetricError(std::array<std::size_t, 3> w, double v)
        : std::runtime_error("transform is not a metric on this space; triangle violation "
                             + std::to_string(v) + " at triple (" + std::to_string(w[0]) + ","
                             + std::to_string(w[1]) + "," + std::to_string(w[2]) + ")"),
          witness(w), violation(v) {}
};

struct InvalidRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Sign conditions for a bisection bracket failed; the function is outside the
// concave class the root construction assumes.
struct BracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundedTransform : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CannotPerturb : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace metricgeo
