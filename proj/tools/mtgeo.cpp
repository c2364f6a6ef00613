// mtgeo: command-line front end for the metric-transform geometry library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metricgeo/metricgeo.hpp"

namespace mg = metricgeo;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string out_dir = ".";
    std::string format = "json";  // json|csv|both
    std::uint64_t seed = 0;
    bool svg = false;
    unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--format", c.format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    cmd->add_flag("--svg", c.svg, "emit SVG charts alongside curves");
    cmd->add_option("--workers", c.workers, "worker threads for brute-force scans")
        ->capture_default_str();
}

bool wants_json(const CommonOpts& c) { return c.format != "csv"; }
bool wants_csv(const CommonOpts& c) { return c.format != "json"; }

void write_text(const std::string& dir, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream os(path);
    if (!os)
        throw mg::MetricSpaceError("cannot write " + path.string());
    os << body;
}

// geom:tmin,tmax,n  or  uniform:tmax,n
mg::GridSpec parse_grid(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw mg::InvalidRange("grid spec needs the form geom:tmin,tmax,n or uniform:tmax,n");
    const std::string kind = s.substr(0, colon);
    const auto nums = mg::detail::parse_nums(s.substr(colon + 1));
    if (kind == "geom" && nums.size() == 3)
        return mg::GridSpec::geometric(nums[0], nums[1], static_cast<std::size_t>(nums[2]));
    if (kind == "uniform" && nums.size() == 2)
        return mg::GridSpec::uniform(nums[0], static_cast<std::size_t>(nums[1]));
    throw mg::InvalidRange("bad grid spec '" + s + "'");
}

std::vector<double> parse_schedule(const std::string& s) {
    auto v = mg::detail::parse_nums(s);
    if (v.empty())
        throw mg::InvalidRange("empty schedule");
    return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json error_json(const std::string& kind, const std::string& message) {
    return {{"error", kind}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric transforms, Gromov hyperbolicity and ultrametricity defects"};
    app.require_subcommand(1);

    std::string transform_text, grid_text, schedule_text, space_path, points_path, method_text;
    std::string val_grid_text, sweep_schedule_text, mid_schedule_text;
    double x_arg = 0, y_arg = 0, lambda_arg = 0, tol_arg = 1e-10, T_max = 1e6;
    std::size_t n_points = 48, samples = 10000;
    double t_min = 1.0;
    int density = 256;

    CommonOpts c_classify, c_delta, c_ultra, c_omega, c_omegahat, c_dich, c_mid, c_fit, c_val;

    auto* cmd_classify = app.add_subcommand("classify", "dichotomy verdict for a transform");
    cmd_classify->add_option("--transform", transform_text)->required();
    cmd_classify->add_option("--Tmax", T_max, "largest schedule entry")->capture_default_str();
    cmd_classify->add_option("--schedule", schedule_text, "comma list of T values");
    cmd_classify->add_option("--density", density, "grid points per decade")
        ->capture_default_str();
    add_common(cmd_classify, c_classify);

    auto* cmd_delta = app.add_subcommand("delta", "hyperbolicity delta of a transformed "
                                                  "half-line sample or a distance table");
    cmd_delta->add_option("--transform", transform_text);
    cmd_delta->add_option("--grid", grid_text, "half-line sample grid");
    cmd_delta->add_option("--space", space_path, "distance table CSV (i,j,d)");
    cmd_delta->add_option("--method", method_text, "gp|4pt")->default_val("4pt");
    add_common(cmd_delta, c_delta);

    auto* cmd_ultra = app.add_subcommand("ultra", "ultrametric defect");
    cmd_ultra->add_option("--transform", transform_text);
    cmd_ultra->add_option("--grid", grid_text);
    cmd_ultra->add_option("--space", space_path);
    add_common(cmd_ultra, c_ultra);

    auto* cmd_omega = app.add_subcommand("omega", "equalizing point omega(x,y)");
    cmd_omega->add_option("--transform", transform_text)->required();
    cmd_omega->add_option("--x", x_arg)->required();
    cmd_omega->add_option("--y", y_arg)->required();
    cmd_omega->add_option("--tol", tol_arg)->capture_default_str();
    add_common(cmd_omega, c_omega);

    auto* cmd_omegahat = app.add_subcommand("omegahat", "limit point omega-hat(x)");
    cmd_omegahat->add_option("--transform", transform_text)->required();
    cmd_omegahat->add_option("--x", x_arg)->required();
    cmd_omegahat->add_option("--lambda", lambda_arg)->required();
    cmd_omegahat->add_option("--tol", tol_arg)->capture_default_str();
    add_common(cmd_omegahat, c_omegahat);

    auto* cmd_dich = app.add_subcommand("dichotomy", "delta / ultrametric-defect sweep over "
                                                     "growing half-line samples");
    cmd_dich->add_option("--transform", transform_text)->required();
    cmd_dich->add_option("--schedule", sweep_schedule_text)->default_val("1e2,1e4,1e6");
    cmd_dich->add_option("--n", n_points, "points per sample")->capture_default_str();
    cmd_dich->add_option("--tmin", t_min, "first positive sample point")->capture_default_str();
    add_common(cmd_dich, c_dich);

    auto* cmd_mid = app.add_subcommand("midpoint", "rough-midpoint defect of the extreme pair "
                                                   "across a sweep");
    cmd_mid->add_option("--transform", transform_text)->required();
    cmd_mid->add_option("--schedule", mid_schedule_text)->default_val("1e2,1e4,1e6");
    cmd_mid->add_option("--n", n_points)->capture_default_str();
    cmd_mid->add_option("--tmin", t_min)->capture_default_str();
    add_common(cmd_mid, c_mid);

    auto* cmd_fit = app.add_subcommand("fit-concave", "least concave majorant of sampled points");
    cmd_fit->add_option("--points", points_path, "CSV of t,phi samples")->required();
    add_common(cmd_fit, c_fit);

    auto* cmd_val = app.add_subcommand("validate", "metric-transform diagnostics for a spec");
    cmd_val->add_option("--transform", transform_text)->required();
    cmd_val->add_option("--grid", val_grid_text)->default_val("geom:1e-3,1e3,192");
    cmd_val->add_option("--samples", samples, "random triplet samples")->capture_default_str();
    add_common(cmd_val, c_val);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_classify->parsed()) {
            const auto& c = c_classify;
            const auto phi = mg::TransformSpec::parse(transform_text);
            std::vector<double> schedule;
            if (!schedule_text.empty()) {
                schedule = parse_schedule(schedule_text);
            } else {
                for (double T = 1e2; T <= T_max * (1 + 1e-9); T *= 10)
                    schedule.push_back(T);
                if (schedule.empty())
                    schedule.push_back(T_max);
            }
            const auto rep = mg::classify_transform(phi, schedule, density);
            const auto j = mg::to_json(rep);
            std::cout << dump(j);
            if (wants_json(c))
                write_text(c.out_dir, "classify.json", dump(j));
            if (wants_csv(c)) {
                std::ostringstream r, g;
                mg::save_curve_csv(rep.dilation_residual, r);
                mg::save_curve_csv(rep.doubling_gap, g);
                write_text(c.out_dir, "classify_dilation_residual.csv", r.str());
                write_text(c.out_dir, "classify_doubling_gap.csv", g.str());
            }
            if (c.svg) {
                std::ostringstream s;
                mg::save_svg_chart(rep.doubling_gap, true, "doubling gap", s);
                write_text(c.out_dir, "classify_doubling_gap.svg", s.str());
            }
            return 0;
        }

        if (cmd_delta->parsed() || cmd_ultra->parsed()) {
            const auto& c = cmd_delta->parsed() ? c_delta : c_ultra;
            std::optional<mg::FiniteMetricSpace> X;
            if (!space_path.empty()) {
                X = mg::load_distance_csv_file(space_path);
            } else if (!transform_text.empty() && !grid_text.empty()) {
                const auto phi = mg::TransformSpec::parse(transform_text);
                X = mg::transformed_halfline_space(mg::sample_halfline(parse_grid(grid_text)),
                                                  phi);
            } else {
                throw mg::InvalidRange("need either --space or --transform with --grid");
            }
            json j;
            std::string name;
            if (cmd_delta->parsed()) {
                const auto method = method_text == "gp" ? mg::HyperbolicityMethod::GromovProduct
                                                        : mg::HyperbolicityMethod::FourPoint;
                j = mg::to_json(mg::hyperbolicity_delta(*X, method, c.workers));
                name = "delta.json";
            } else {
                j = mg::to_json(mg::ultrametric_defect(*X));
                name = "ultra.json";
            }
            std::cout << dump(j);
            if (wants_json(c))
                write_text(c.out_dir, name, dump(j));
            return 0;
        }

        if (cmd_omega->parsed() || cmd_omegahat->parsed()) {
            const auto& c = cmd_omega->parsed() ? c_omega : c_omegahat;
            const auto phi = mg::TransformSpec::parse(transform_text);
            json j;
            std::string name;
            if (cmd_omega->parsed()) {
                j = {{"x", x_arg}, {"y", y_arg}, {"omega", mg::omega(phi, x_arg, y_arg, tol_arg)}};
                name = "omega.json";
            } else {
                j = {{"x", x_arg},
                     {"lambda", lambda_arg},
                     {"omega_hat", mg::omega_hat(phi, x_arg, lambda_arg, tol_arg)}};
                name = "omegahat.json";
            }
            std::cout << dump(j);
            if (wants_json(c))
                write_text(c.out_dir, name, dump(j));
            return 0;
        }

        if (cmd_dich->parsed()) {
            const auto& c = c_dich;
            const auto phi = mg::TransformSpec::parse(transform_text);
            std::vector<mg::GridSpec> grids;
            for (double T : parse_schedule(sweep_schedule_text))
                grids.push_back(mg::GridSpec::geometric(t_min, T, n_points));
            const auto sweep = mg::delta_sweep(phi, grids, c.workers);
            std::cout << dump(mg::to_json(sweep));
            if (wants_json(c))
                write_text(c.out_dir, "dichotomy.json", dump(mg::to_json(sweep)));
            if (wants_csv(c)) {
                std::ostringstream os;
                mg::save_sweep_csv(sweep, os);
                write_text(c.out_dir, "dichotomy.csv", os.str());
            }
            if (c.svg) {
                std::vector<std::pair<double, double>> curve;
                for (const auto& e : sweep)
                    curve.emplace_back(e.t_max, e.delta);
                std::ostringstream os;
                mg::save_svg_chart(curve, true, "delta vs T", os);
                write_text(c.out_dir, "dichotomy.svg", os.str());
            }
            return 0;
        }

        if (cmd_mid->parsed()) {
            const auto& c = c_mid;
            const auto phi = mg::TransformSpec::parse(transform_text);
            std::vector<std::pair<double, double>> curve;
            for (double T : parse_schedule(mid_schedule_text)) {
                const auto X = mg::transformed_halfline_space(
                    mg::sample_halfline(mg::GridSpec::geometric(t_min, T, n_points)), phi);
                curve.emplace_back(T, mg::rough_midpoint_defect(X, 0, X.size() - 1).defect);
            }
            json j = json::array();
            for (const auto& [T, v] : curve)
                j.push_back({{"T", T}, {"midpoint_defect", v}});
            std::cout << dump(j);
            if (wants_json(c))
                write_text(c.out_dir, "midpoint.json", dump(j));
            if (wants_csv(c)) {
                std::ostringstream os;
                mg::save_curve_csv(curve, os);
                write_text(c.out_dir, "midpoint.csv", os.str());
            }
            return 0;
        }

        if (cmd_fit->parsed()) {
            const auto& c = c_fit;
            const auto tab = mg::detail::load_knot_csv(points_path);
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < tab.knots.size(); ++i)
                pts.emplace_back(tab.knots[i], tab.values[i]);
            const auto env = mg::least_concave_majorant(pts);
            std::ostringstream os;
            mg::save_knot_csv(env.knots(), os);
            write_text(c.out_dir, "envelope.csv", os.str());
            std::cout << os.str();
            return 0;
        }

        if (cmd_val->parsed()) {
            const auto& c = c_val;
            const auto phi = mg::TransformSpec::parse(transform_text);
            const auto grid = parse_grid(val_grid_text);
            const auto sub = mg::subadditivity_defect(phi, grid);
            const auto nd = mg::nondecreasing_defect(phi, grid);
            const auto trip = mg::triplet_preservation_check(phi, samples, c.seed);
            json j = {{"transform", transform_text},
                      {"subadditivity_defect",
                       {{"value", sub.defect}, {"witness", {sub.witness.first, sub.witness.second}}}},
                      {"nondecreasing_defect",
                       {{"value", nd.defect}, {"witness", {nd.witness.first, nd.witness.second}}}},
                      {"triplet_violation",
                       {{"value", trip.violation}, {"witness", trip.witness}}}};
            bool ok = sub.defect <= 0.0 && nd.defect <= 0.0 && trip.violation <= 0.0;
            // also apply the transform to a desk-scale half-line sample
            try {
                const auto small =
                    mg::GridSpec::geometric(std::max(grid.t_min, 1e-3), grid.t_max, 48);
                const auto X = mg::transformed_halfline_space(mg::sample_halfline(small), phi);
                j["apply"] = {{"ok", true}, {"n", X.size()}};
            } catch (const mg::TransformNotMetricError& e) {
                j["apply"] = {{"ok", false}, {"witness", e.witness}, {"violation", e.violation}};
                ok = false;
            }
            j["valid"] = ok;
            std::cout << dump(j);
            if (wants_json(c))
                write_text(c.out_dir, "validate.json", dump(j));
            if (!ok) {
                std::cerr << dump(error_json("transform-validation-failed", transform_text));
                return 2;
            }
            return 0;
        }
    } catch (const mg::TransformNotMetricError& e) {
        json j = error_json("transform-not-metric", e.what());
        j["witness"] = e.witness;
        std::cerr << dump(j);
        return 2;
    } catch (const mg::InvalidRange& e) {
        std::cerr << dump(error_json("usage", e.what()));
        return 1;
    } catch (const std::exception& e) {
        std::cerr << dump(error_json("failure", e.what()));
        return 2;
    }
    return 1;
}
