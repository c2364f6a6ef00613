#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "metricgeo/metric_space.hpp"

namespace metricgeo {

enum class HyperbolicityMethod { GromovProduct, FourPoint };

struct HyperbolicityReport {
    double delta = 0.0;
    std::array<std::size_t, 4> witness{0, 0, 0, 0};
    HyperbolicityMethod method = HyperbolicityMethod::FourPoint;
};

struct UltrametricReport {
    double defect = 0.0;
    std::array<std::size_t, 3> witness{0, 0, 0};
};

inline double gromov_product(const FiniteMetricSpace& X, std::size_t x, std::size_t y,
                             std::size_t w) {
    if (x >= X.size() || y >= X.size() || w >= X.size())
        throw InvalidRange("point index out of range");
    return 0.5 * (X(x, w) + X(y, w) - X(x, y));
}

// Defect of the Gromov-product inequality at one ordered quadruple, clamped at 0.
inline double gromov_quadruple_value(const FiniteMetricSpace& X, std::size_t x, std::size_t y,
                                     std::size_t z, std::size_t w) {
    const double pxz = 0.5 * (X(x, w) + X(z, w) - X(x, z));
    const double pyz = 0.5 * (X(y, w) + X(z, w) - X(y, z));
    const double pxy = 0.5 * (X(x, w) + X(y, w) - X(x, y));
    const double v = std::min(pxz, pyz) - pxy;
    return v > 0.0 ? v : 0.0;
}

// (L - M) / 2 over the three pairing sums of an unordered quadruple, clamped at 0.
inline double four_point_value(const FiniteMetricSpace& X, std::size_t i, std::size_t j,
                               std::size_t k, std::size_t l) {
    const double s1 = X(i, j) + X(k, l);
    const double s2 = X(i, k) + X(j, l);
    const double s3 = X(i, l) + X(j, k);
    const double hi = std::max(s1, std::max(s2, s3));
    const double lo = std::min(s1, std::min(s2, s3));
    const double mid = s1 + s2 + s3 - hi - lo;
    const double v = 0.5 * (hi - mid);
    return v > 0.0 ? v : 0.0;
}

inline double ultrametric_triple_value(const FiniteMetricSpace& X, std::size_t i, std::size_t j,
                                       std::size_t k) {
    const double a = X(i, j), b = X(i, k), c = X(j, k);
    const double hi = std::max(a, std::max(b, c));
    const double lo = std::min(a, std::min(b, c));
    const double mid = a + b + c - hi - lo;
    const double v = hi - mid;
    return v > 0.0 ? v : 0.0;
}

namespace detail {

struct Best4 {
    double value = 0.0;
    std::array<std::size_t, 4> witness{0, 0, 0, 0};
    // Strictly greater wins; on ties the earlier (lexicographically smaller) witness is kept
    // by never replacing on equality.
    void offer(double v, std::array<std::size_t, 4> w) {
        if (v > value) {
            value = v;
            witness = w;
        }
    }
};

// Split [0, n) into `workers` contiguous chunks and reduce in chunk order, so the
// result is identical for every worker count.
template <typename ChunkFn>
inline Best4 deterministic_scan(std::size_t n, unsigned workers, ChunkFn chunk) {
    if (workers < 1) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n ? n : 1));
    std::vector<Best4> parts(workers);
    if (workers == 1) {
        chunk(std::size_t{0}, n, parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t step = (n + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t lo = std::min<std::size_t>(t * step, n);
            const std::size_t hi = std::min<std::size_t>(lo + step, n);
            pool.emplace_back([&, lo, hi, t] { chunk(lo, hi, parts[t]); });
        }
        for (auto& th : pool) th.join();
    }
    Best4 out = parts[0];
    for (unsigned t = 1; t < workers; ++t)
        out.offer(parts[t].value, parts[t].witness);
    return out;
}

}  // namespace detail

// GromovProduct: full ordered enumeration of quadruples (x,y,z,w), matching the
// definition's quantifier structure. FourPoint: unordered combinations with all
// three pairings. Witness is the lexicographically smallest attaining tuple.
inline HyperbolicityReport hyperbolicity_delta(const FiniteMetricSpace& X,
                                               HyperbolicityMethod method,
                                               unsigned workers = 1) {
    const std::size_t n = X.size();
    HyperbolicityReport rep;
    rep.method = method;
    if (method == HyperbolicityMethod::GromovProduct) {
        const auto best = detail::deterministic_scan(
            n, workers, [&](std::size_t lo, std::size_t hi, detail::Best4& acc) {
                for (std::size_t x = lo; x < hi; ++x)
                    for (std::size_t y = 0; y < n; ++y)
                        for (std::size_t z = 0; z < n; ++z)
                            for (std::size_t w = 0; w < n; ++w)
                                acc.offer(gromov_quadruple_value(X, x, y, z, w), {x, y, z, w});
            });
        rep.delta = best.value;
        rep.witness = best.witness;
    } else {
        const auto best = detail::deterministic_scan(
            n, workers, [&](std::size_t lo, std::size_t hi, detail::Best4& acc) {
                for (std::size_t i = lo; i < hi; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        for (std::size_t k = j + 1; k < n; ++k)
                            for (std::size_t l = k + 1; l < n; ++l)
                                acc.offer(four_point_value(X, i, j, k, l), {i, j, k, l});
            });
        rep.delta = best.value;
        rep.witness = best.witness;
    }
    return rep;
}

// Smallest delta such that d(x,y) <= max{d(x,z), d(y,z)} + delta for all triples,
// i.e. the max over triples of (largest - medium) pairwise distance.
inline UltrametricReport ultrametric_defect(const FiniteMetricSpace& X) {
    const std::size_t n = X.size();
    UltrametricReport rep;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const double v = ultrametric_triple_value(X, i, j, k);
                if (v > rep.defect) {
                    rep.defect = v;
                    rep.witness = {i, j, k};
                }
            }
    return rep;
}

// Defects of the two quantities related by the sums lemma on a symmetric 4x4 table:
// triple_defect over all (i,j,k) of a_ij - max{a_ik, a_kj}, and pair_defect = L - M
// over the three pairing sums. The lemma asserts pair_defect <= 2 max(0, triple_defect).
struct SumsLemmaDefects {
    double triple_defect;
    double pair_defect;
};

using Table4 = std::array<std::array<double, 4>, 4>;

inline SumsLemmaDefects sums_lemma_defects(const Table4& A) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (A[i][j] != A[j][i])
                throw MetricSpaceError("sums_lemma_defects requires a symmetric table");
    double triple = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                triple = std::max(triple, A[i][j] - std::max(A[i][k], A[k][j]));
    const double s1 = A[0][1] + A[2][3];
    const double s2 = A[0][2] + A[1][3];
    const double s3 = A[0][3] + A[1][2];
    const double hi = std::max(s1, std::max(s2, s3));
    const double lo = std::min(s1, std::min(s2, s3));
    const double mid = s1 + s2 + s3 - hi - lo;
    return {triple, hi - mid};
}

}  // namespace metricgeo
