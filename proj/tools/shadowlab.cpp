// shadowlab: command-line driver for the shadowing / stochastic-stability experiments.
//
//   shadowlab simulate|shadow|stationary|sweep|birkhoff --config <path> [--seed N] [--out <path>]
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 bound violation.

#include "shadowlab/config.hpp"
#include "shadowlab/error.hpp"
#include "shadowlab/experiments.hpp"
#include "shadowlab/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace shadowlab;

namespace {

constexpr const char* version = "0.1.0";

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string input;
    std::string pseudo_out;
    std::string plot_script;
};

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw usage_error("cannot write '" + path + "'");
    return f;
}

// results.csv -> results_<suffix>.csv
std::string sibling(const std::string& path, const std::string& suffix)
{
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + suffix + p.extension().string())).string();
}

void write_meta(const std::string& out_path, const std::string& command, const std::string& config_text,
                const ExperimentConfig& cfg, nlohmann::ordered_json summary)
{
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["config_hash"] = "fnv1a64:" + hex64(fnv1a64(config_text));
    meta["seed"] = cfg.seed;
    meta["map"] = cfg.map.name();
    meta["kernel"] = to_string(cfg.shape);
    meta["versions"] = {{"shadowlab", version},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)},
                        {"compiler", __VERSION__}};
    meta["summary"] = std::move(summary);
    open_out(out_path + ".meta.json") << meta.dump(2) << '\n';
}

void write_plot_script(const std::string& path, const std::string& command, const std::string& csv)
{
    std::ofstream f = open_out(path);
    f << "# plotting helper for shadowlab " << command << " output\n"
      << "import pandas as pd\nimport matplotlib.pyplot as plt\n\n"
      << "df = pd.read_csv(" << nlohmann::json(csv).dump() << ")\n";
    if (command == "sweep") {
        f << "ax = df.plot(x='epsilon', y=['w1', 'max_normalized_gap'], logx=True, logy=True, marker='o')\n";
    } else if (command == "birkhoff") {
        f << "ax = df.plot(x='n', y=['deterministic_gap', 'random_gap'], logx=True, logy=True, marker='o')\n";
    } else if (command == "stationary") {
        f << "ax = df.plot(x='cell_index', y='mass')\n";
    } else if (command == "shadow") {
        f << "ax = df.plot(x='index', y='deviation')\n";
    } else {
        f << "ax = df.plot(x='index', y='gap')\n";
    }
    f << "plt.savefig(" << nlohmann::json(csv + ".png").dump() << ")\n";
}

int run(const std::string& command, const Options& opt)
{
    std::ifstream cf(opt.config_path, std::ios::binary);
    if (!cf) throw usage_error("cannot open config '" + opt.config_path + "'");
    std::stringstream buf;
    buf << cf.rdbuf();
    const std::string config_text = buf.str();
    ExperimentConfig cfg = parse_config_text(config_text);
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.input.empty()) cfg.shadow_input = opt.input;
    const std::string out = opt.out.empty() ? cfg.output : opt.out;
    int code = 0;
    nlohmann::ordered_json summary;

    if (command == "simulate") {
        const SimulationReport r = run_simulate(cfg);
        auto f = open_out(out);
        write_simulation_csv(f, cfg.map, r);
        if (!opt.pseudo_out.empty()) {
            auto p = open_out(opt.pseudo_out);
            write_pseudo_orbit(p, r.orbit.points);
        }
        summary = {{"epsilon", cfg.epsilon()}, {"max_gap", r.check.max_gap}, {"valid", r.check.valid}};
        std::cout << "max_gap=" << format_double(r.check.max_gap) << " valid=" << (r.check.valid ? "true" : "false")
                  << '\n';
        if (!r.check.valid) code = 2;
    } else if (command == "shadow") {
        const ShadowReport r = run_shadow_demo(cfg);
        auto f = open_out(out);
        write_shadow_csv(f, r);
        auto c = open_out(sibling(out, "comparison"));
        write_comparison_csv(c, r);
        summary = {{"max_gap", r.pseudo_check.max_gap},
                   {"shadow_distance", r.certificate.shadow_distance},
                   {"consistency", r.certificate.consistency},
                   {"target_epsilon", r.target_epsilon},
                   {"certificate", r.certificate.pass},
                   {"degraded", r.shadow.degraded},
                   {"inequality_holds", r.inequality_holds}};
        std::cout << "shadow_distance=" << format_double(r.certificate.shadow_distance)
                  << " consistency=" << format_double(r.certificate.consistency)
                  << " target_epsilon=" << format_double(r.target_epsilon)
                  << " certificate=" << (r.certificate.pass ? "pass" : "fail")
                  << (r.shadow.degraded ? " degraded" : "")
                  << " inequality=" << (r.inequality_holds ? "holds" : "violated") << '\n';
        if (!r.certificate.pass) code = 2;
        else if (!r.inequality_holds) code = 3;
    } else if (command == "stationary") {
        const CrossValidationReport r = cross_validate(cfg.map, cfg.kernel(cfg.epsilon()), cross_validation_settings(cfg));
        auto f = open_out(out);
        write_grid_csv(f, r.ulam.density);
        auto c = open_out(sibling(out, "crossval"));
        write_cross_validation_csv(c, r);
        summary = {{"epsilon", cfg.epsilon()},
                   {"ulam_residual", r.ulam.residual},
                   {"ulam_iterations", r.ulam.iterations},
                   {"median_w1", r.median_w1},
                   {"median_dictionary_gap", r.median_dict_gap},
                   {"budget", r.budget},
                   {"agree", r.agree}};
        std::cout << "residual=" << format_double(r.ulam.residual) << " median_w1=" << format_double(r.median_w1)
                  << " median_gap=" << format_double(r.median_dict_gap) << " budget=" << format_double(r.budget)
                  << " agree=" << (r.agree ? "true" : "false") << '\n';
    } else if (command == "sweep") {
        const SweepResult r = run_sweep(cfg);
        auto f = open_out(out);
        write_sweep_csv(f, r);
        auto o = open_out(sibling(out, "observables"));
        write_sweep_observables_csv(o, r);
        summary = {{"reference", r.reference}, {"rows", r.rows.size()}, {"all_bounds_ok", r.all_bounds_ok()}};
        if (r.error) summary["error"] = *r.error;
        for (const auto& row : r.rows) {
            std::cout << "epsilon=" << format_double(row.epsilon) << " w1=" << format_double(row.w1)
                      << " gap=" << format_double(row.max_normalized_gap)
                      << " bound_ok=" << (row.bound_ok ? "true" : "false") << '\n';
        }
        if (r.error) {
            std::cerr << "shadowlab: sweep stopped early: " << *r.error << '\n';
            code = 2;
        } else if (!r.all_bounds_ok()) {
            code = 3;
        }
    } else if (command == "birkhoff") {
        const BirkhoffReport r = run_birkhoff(cfg);
        auto f = open_out(out);
        write_birkhoff_csv(f, r);
        summary = {{"epsilon", r.epsilon},
                   {"deterministic_slope", r.deterministic_slope},
                   {"random_slope", r.random_slope},
                   {"deterministic_n0", r.deterministic_n0 ? nlohmann::ordered_json(*r.deterministic_n0) : nullptr},
                   {"random_n0", r.random_n0 ? nlohmann::ordered_json(*r.random_n0) : nullptr}};
        std::cout << "deterministic_slope=" << format_double(r.deterministic_slope)
                  << " random_slope=" << format_double(r.random_slope) << '\n';
    }

    write_meta(out, command, config_text, cfg, summary);
    if (!opt.plot_script.empty()) write_plot_script(opt.plot_script, command, out);
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"shadowlab: shadowing and stochastic-stability experiments"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed = 0;
    for (const char* name : {"simulate", "shadow", "stationary", "sweep", "birkhoff"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "experiment config (INI)")->required();
        sub->add_option("--seed", seed, "override run.seed");
        sub->add_option("--out", opt.out, "output CSV (default: output.path from the config)");
        sub->add_option("--plot-script", opt.plot_script, "also write a matplotlib script for the output");
        if (std::string(name) == "shadow") sub->add_option("--input", opt.input, "pseudo-orbit file to shadow");
        if (std::string(name) == "simulate") sub->add_option("--pseudo-out", opt.pseudo_out, "also write the orbit as a pseudo-orbit file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0) opt.seed = seed;

    try {
        return run(sub->get_name(), opt);
    } catch (const usage_error& e) {
        std::cerr << "shadowlab: " << e.what() << '\n';
        return 1;
    } catch (const bound_violation& e) {
        std::cerr << "shadowlab: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "shadowlab: " << e.what() << '\n';
        return 2;
    }
}
