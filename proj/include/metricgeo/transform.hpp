#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "metricgeo/errors.hpp"
#include "metricgeo/metric_space.hpp"

namespace metricgeo {

class TransformSpec;

// phi(t) = lambda * t
struct Dilation {
    double lambda;
};

// phi(t) = t^alpha, 0 < alpha <= 1
struct Snowflake {
    double alpha;
};

// phi(t) = c * log(1 + t/c)
struct LogOnePlus {
    double scale = 1.0;
};

// phi(t) = a*t + b*|sin t|; a metric transform iff a >= b
struct AffineSine {
    double a;
    double b;
};

// phi(t) = lambda*t + beta*min(t, cap); the approximate-dilation form lambda*t + f(t)
struct LinearPlusCap {
    double lambda;
    double beta;
    double cap;
};

// Piecewise-linear interpolation of (knot, value) samples, linear extrapolation
// with tail_slope beyond the last knot.
struct Tabulated {
    std::vector<double> knots;   // strictly increasing, knots[0] == 0
    std::vector<double> values;  // values[0] == 0
    double tail_slope = 0.0;
};

// factor * base(t)
struct Scaled {
    double factor;
    std::shared_ptr<const TransformSpec> base;
};

// Cap construction: the line slope*(x - a) + level on [0, a), base on [a, inf),
// the whole thing shifted down by `shift` so it vanishes at 0.
struct Capped {
    double a;
    double slope;
    double level;
    double shift;
    std::shared_ptr<const TransformSpec> base;
};

class TransformSpec {
public:
    using Node = std::variant<Dilation, Snowflake, LogOnePlus, AffineSine, LinearPlusCap,
                              Tabulated, Scaled, Capped>;

    TransformSpec(Node node) : node_(std::move(node)) { validate(); }
    TransformSpec(Dilation d) : node_(d) { validate(); }
    TransformSpec(Snowflake s) : node_(s) { validate(); }
    TransformSpec(LogOnePlus l) : node_(l) { validate(); }
    TransformSpec(AffineSine s) : node_(s) { validate(); }
    TransformSpec(LinearPlusCap l) : node_(l) { validate(); }
    TransformSpec(Tabulated t) : node_(std::move(t)) { validate(); }

    double operator()(double t) const {
        if (t < 0.0)
            throw InvalidRange("transforms are defined on [0, infinity)");
        return eval_unchecked(t);
    }

    const Node& node() const { return node_; }

    // Catalog kinds known to be concave on [0, infinity).
    bool concave() const {
        return std::visit(
            [](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Dilation> || std::is_same_v<T, Snowflake>
                              || std::is_same_v<T, LogOnePlus>
                              || std::is_same_v<T, LinearPlusCap>) {
                    return true;
                } else if constexpr (std::is_same_v<T, AffineSine>) {
                    return n.b == 0.0;
                } else if constexpr (std::is_same_v<T, Tabulated>) {
                    return tabulated_concave(n);
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return n.base->concave();
                } else {  // Capped
                    return n.base->concave();
                }
            },
            node_);
    }

    // Kinds the catalog certifies as metric transforms (AffineSine only when a >= b;
    // Tabulated only heuristically, from concavity + monotonicity of the samples).
    bool known_metric_transform() const {
        return std::visit(
            [](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AffineSine>) {
                    return n.a >= n.b;
                } else if constexpr (std::is_same_v<T, Tabulated>) {
                    return tabulated_concave(n) && std::is_sorted(n.values.begin(), n.values.end())
                           && n.tail_slope >= 0.0;
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return n.base->known_metric_transform();
                } else if constexpr (std::is_same_v<T, Capped>) {
                    return n.base->known_metric_transform();
                } else {
                    (void)n;
                    return true;
                }
            },
            node_);
    }

    std::string text() const {
        std::ostringstream os;
        os.precision(17);
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Dilation>) {
                    os << "dilation:" << n.lambda;
                } else if constexpr (std::is_same_v<T, Snowflake>) {
                    os << "snowflake:" << n.alpha;
                } else if constexpr (std::is_same_v<T, LogOnePlus>) {
                    os << "log1p:" << n.scale;
                } else if constexpr (std::is_same_v<T, AffineSine>) {
                    os << "affinesine:" << n.a << "," << n.b;
                } else if constexpr (std::is_same_v<T, LinearPlusCap>) {
                    os << "lincap:" << n.lambda << "," << n.beta << "," << n.cap;
                } else if constexpr (std::is_same_v<T, Tabulated>) {
                    os << "tab:<" << n.knots.size() << " knots>";
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    os << "scaled:" << n.factor << "*(" << n.base->text() << ")";
                } else {
                    os << "capped(" << n.base->text() << ")";
                }
            },
            node_);
        return os.str();
    }

    // Compact text grammar used by the CLI: dilation:2, snowflake:0.5, log1p:1.0,
    // affinesine:2,1, lincap:2,1,5, tab:@knots.csv (rows `t,phi`).
    static TransformSpec parse(std::string_view s);

    static TransformSpec scaled(double factor, TransformSpec base) {
        if (!(factor > 0.0))
            throw InvalidRange("scale factor must be positive");
        return TransformSpec(Node(Scaled{factor, std::make_shared<TransformSpec>(std::move(base))}));
    }

private:
    friend TransformSpec cap_transform(const TransformSpec&, double, double, double);

    double eval_unchecked(double t) const {
        return std::visit(
            [t](const auto& n) -> double {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Dilation>) {
                    return n.lambda * t;
                } else if constexpr (std::is_same_v<T, Snowflake>) {
                    return std::pow(t, n.alpha);
                } else if constexpr (std::is_same_v<T, LogOnePlus>) {
                    return n.scale * std::log1p(t / n.scale);
                } else if constexpr (std::is_same_v<T, AffineSine>) {
                    return n.a * t + n.b * std::abs(std::sin(t));
                } else if constexpr (std::is_same_v<T, LinearPlusCap>) {
                    return n.lambda * t + n.beta * std::min(t, n.cap);
                } else if constexpr (std::is_same_v<T, Tabulated>) {
                    return eval_tabulated(n, t);
                } else if constexpr (std::is_same_v<T, Scaled>) {
                    return n.factor * (*n.base)(t);
                } else {  // Capped
                    const double raw =
                        t >= n.a ? (*n.base)(t) : n.slope * (t - n.a) + n.level;
                    return raw - n.shift;
                }
            },
            node_);
    }

    static double eval_tabulated(const Tabulated& tab, double t) {
        const auto& k = tab.knots;
        const auto& v = tab.values;
        if (t >= k.back())
            return v.back() + tab.tail_slope * (t - k.back());
        const auto it = std::upper_bound(k.begin(), k.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - k.begin());
        const std::size_t lo = hi - 1;
        const double w = (t - k[lo]) / (k[hi] - k[lo]);
        return v[lo] + w * (v[hi] - v[lo]);
    }

    static bool tabulated_concave(const Tabulated& tab) {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < tab.knots.size(); ++i) {
            const double s =
                (tab.values[i + 1] - tab.values[i]) / (tab.knots[i + 1] - tab.knots[i]);
            if (s > prev * (1 + 1e-12) + 1e-12)
                return false;
            prev = s;
        }
        return tab.tail_slope <= prev * (1 + 1e-12) + 1e-12;
    }

    void validate() const {
        std::visit(
            [](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Dilation>) {
                    if (!(n.lambda > 0.0))
                        throw InvalidRange("dilation factor must be positive");
                } else if constexpr (std::is_same_v<T, Snowflake>) {
                    if (!(n.alpha > 0.0 && n.alpha <= 1.0))
                        throw InvalidRange("snowflake exponent must lie in (0, 1]");
                } else if constexpr (std::is_same_v<T, LogOnePlus>) {
                    if (!(n.scale > 0.0))
                        throw InvalidRange("log1p scale must be positive");
                } else if constexpr (std::is_same_v<T, AffineSine>) {
                    if (n.a < 0.0 || n.b < 0.0)
                        throw InvalidRange("affinesine coefficients must be nonnegative");
                } else if constexpr (std::is_same_v<T, LinearPlusCap>) {
                    if (!(n.lambda > 0.0) || n.beta < 0.0 || !(n.cap > 0.0))
                        throw InvalidRange("lincap requires lambda > 0, beta >= 0, cap > 0");
                } else if constexpr (std::is_same_v<T, Tabulated>) {
                    if (tab_bad(n))
                        throw InvalidRange(
                            "tabulated transform needs strictly increasing knots from 0, "
                            "nonnegative values with value(0) = 0, nonnegative tail slope");
                } else {
                    (void)n;
                }
            },
            node_);
    }

    static bool tab_bad(const Tabulated& n) {
        if (n.knots.size() < 2 || n.knots.size() != n.values.size())
            return true;
        if (n.knots.front() != 0.0 || n.values.front() != 0.0 || n.tail_slope < 0.0)
            return true;
        for (std::size_t i = 0; i + 1 < n.knots.size(); ++i)
            if (!(n.knots[i] < n.knots[i + 1]))
                return true;
        for (double v : n.values)
            if (v < 0.0)
                return true;
        return false;
    }

    Node node_;
};

// internal: build a Capped node (used by cap_construction in concave.hpp)
inline TransformSpec cap_transform(const TransformSpec& base, double a, double slope,
                                   double level) {
    const double shift = level - slope * a;  // raw value at 0
    return TransformSpec(TransformSpec::Node(
        Capped{a, slope, level, shift, std::make_shared<TransformSpec>(base)}));
}

// --- grids --------------------------------------------------------------

struct GridSpec {
    enum class Spacing { Uniform, Geometric };

    double t_max;
    std::size_t count;  // total number of points, including 0
    Spacing spacing = Spacing::Uniform;
    double t_min = 0.0;  // first positive point when Geometric

    static GridSpec uniform(double t_max, std::size_t count) {
        return {t_max, count, Spacing::Uniform, 0.0};
    }
    static GridSpec geometric(double t_min, double t_max, std::size_t count) {
        return {t_max, count, Spacing::Geometric, t_min};
    }

    std::vector<double> points() const {
        if (!(t_max > 0.0) || count < 2)
            throw InvalidRange("grid needs t_max > 0 and at least 2 points");
        std::vector<double> p;
        p.reserve(count);
        if (spacing == Spacing::Uniform) {
            for (std::size_t i = 0; i < count; ++i)
                p.push_back(t_max * static_cast<double>(i) / static_cast<double>(count - 1));
        } else {
            if (!(t_min > 0.0) || t_min > t_max)
                throw InvalidRange("geometric grid needs 0 < t_min <= t_max");
            p.push_back(0.0);
            if (count == 2) {
                p.push_back(t_max);
            } else {
                const double ratio =
                    std::pow(t_max / t_min, 1.0 / static_cast<double>(count - 2));
                double t = t_min;
                for (std::size_t i = 1; i + 1 < count; ++i, t *= ratio)
                    p.push_back(t);
                p.push_back(t_max);  // endpoint exact
            }
        }
        return p;
    }
};

// --- operations ---------------------------------------------------------

inline FiniteMetricSpace apply_transform(const FiniteMetricSpace& X, const TransformSpec& phi) {
    const std::size_t n = X.size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = phi(X(i, j));
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    // The metric-space constructor re-validates the table and throws
    // TransformNotMetricError with the witness triple on a violation.
    return FiniteMetricSpace(n, std::move(out), X.labels());
}

struct PairDefect {
    double defect = 0.0;
    std::pair<double, double> witness{0.0, 0.0};
};

// max over grid pairs (t, s) of phi(t+s) - phi(t) - phi(s), clamped at 0
inline PairDefect subadditivity_defect(const TransformSpec& phi, const GridSpec& grid) {
    const auto pts = grid.points();
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        vals[i] = phi(pts[i]);
    PairDefect out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i; j < pts.size(); ++j) {
            const double v = phi(pts[i] + pts[j]) - vals[i] - vals[j];
            if (v > out.defect) {
                out.defect = v;
                out.witness = {pts[i], pts[j]};
            }
        }
    return out;
}

// eta-hat: max over grid pairs t <= s of phi(t) - phi(s), clamped at 0
inline PairDefect nondecreasing_defect(const TransformSpec& phi, const GridSpec& grid) {
    const auto pts = grid.points();
    PairDefect out;
    double run_max = -std::numeric_limits<double>::infinity();
    double run_arg = 0.0;
    for (double t : pts) {
        const double v = phi(t);
        if (run_max - v > out.defect) {
            out.defect = run_max - v;
            out.witness = {run_arg, t};
        }
        if (v > run_max) {
            run_max = v;
            run_arg = t;
        }
    }
    return out;
}

struct TripletCheck {
    double violation = 0.0;
    std::array<double, 3> witness{0.0, 0.0, 0.0};
};

// Draws random triangle triplets (a, b uniform on [0, 10], c uniform on
// [|a-b|, a+b]) and reports the worst triangle violation of the images.
// Zero is a sampled certificate of consistency with phi being a metric transform.
inline TripletCheck triplet_preservation_check(const TransformSpec& phi, std::size_t samples,
                                               std::uint64_t seed) {
    if (samples < 1)
        throw InvalidRange("need at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> side(0.0, 10.0);
    TripletCheck out;
    for (std::size_t s = 0; s < samples; ++s) {
        const double a = side(rng);
        const double b = side(rng);
        const double c =
            std::uniform_real_distribution<double>(std::abs(a - b), a + b)(rng);
        const double fa = phi(a), fb = phi(b), fc = phi(c);
        const double v =
            std::max({fa - fb - fc, fb - fa - fc, fc - fa - fb, 0.0});
        if (v > out.violation) {
            out.violation = v;
            out.witness = {a, b, c};
        }
    }
    return out;
}

// --- text-form parsing --------------------------------------------------

namespace detail {

inline double parse_num(std::string_view s) {
    std::string buf(s);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(buf, &pos);
    } catch (const std::exception&) {
        throw InvalidRange("bad number in transform spec: '" + buf + "'");
    }
    if (pos != buf.size())
        throw InvalidRange("bad number in transform spec: '" + buf + "'");
    return v;
}

inline std::vector<double> parse_nums(std::string_view s) {
    std::vector<double> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        out.push_back(parse_num(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

Tabulated load_knot_csv(const std::string& path);  // defined in io.hpp

}  // namespace detail

inline TransformSpec TransformSpec::parse(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos)
        throw InvalidRange("transform spec needs the form kind:params");
    const std::string_view kind = s.substr(0, colon);
    const std::string_view rest = s.substr(colon + 1);
    if (kind == "dilation") {
        return TransformSpec(Dilation{detail::parse_num(rest)});
    } else if (kind == "snowflake") {
        return TransformSpec(Snowflake{detail::parse_num(rest)});
    } else if (kind == "log1p") {
        return TransformSpec(LogOnePlus{detail::parse_num(rest)});
    } else if (kind == "affinesine") {
        const auto v = detail::parse_nums(rest);
        if (v.size() != 2)
            throw InvalidRange("affinesine takes two parameters");
        return TransformSpec(AffineSine{v[0], v[1]});
    } else if (kind == "lincap") {
        const auto v = detail::parse_nums(rest);
        if (v.size() != 3)
            throw InvalidRange("lincap takes three parameters");
        return TransformSpec(LinearPlusCap{v[0], v[1], v[2]});
    } else if (kind == "tab") {
        if (rest.empty() || rest[0] != '@')
            throw InvalidRange("tab spec takes @file.csv");
        return TransformSpec(detail::load_knot_csv(std::string(rest.substr(1))));
    }
    throw InvalidRange("unknown transform kind '" + std::string(kind) + "'");
}

}  // namespace metricgeo
