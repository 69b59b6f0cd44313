// Copyright 2026 The stirap-lambda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// stirap: command-line driver. Exit status 0 on success, 1 on numerical or
// I/O failure, 2 on bad arguments.

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stirap/experiments.hpp"
#include "stirap/integrator.hpp"
#include "stirap/io.hpp"
#include "stirap/verify.hpp"

namespace {

using namespace stirap;

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

/// Raw option storage; turned into a RunConfig after parsing.
struct Options {
    std::string sequence = "ci";
    std::string model = "microscopic";
    double gamma = 0.0;
    double alpha = 1.0;
    double n_photons = 0.0;
    std::optional<double> gamma1;
    std::optional<double> gamma3;
    double omega0 = 25.0;
    double tau = 1.5;
    double delta = 1.0;

    double t_start = -6.0;
    double t_end = 6.0;
    std::string step_mode = "adaptive";
    double step = 1e-3;
    double rtol = 1e-9;
    double atol = 1e-11;
    int samples = 600;

    std::vector<double> gammas;
    double gamma_min = 1e-2;
    double gamma_max = 1e2;
    int gamma_points = 40;
    std::vector<double> alphas;
    double alpha_min = 0.2;
    double alpha_max = 5.0;
    int alpha_points = 9;
    std::vector<double> ns;
    double n_min = 1e-2;
    double n_max = 1e3;
    int n_points = 26;
    unsigned jobs = 0;

    std::string output;
    std::string format = "csv";
    std::string gnuplot_script;
    std::uint64_t seed = 20260101;
};

void add_physics(CLI::App* app, Options& o)
{
    app->add_option("--sequence", o.sequence, "Pulse order: ci|counterintuitive|i|intuitive")
        ->capture_default_str();
    app->add_option("--omega0", o.omega0, "Peak Rabi frequency (1/T)")->capture_default_str();
    app->add_option("--tau", o.tau, "Pulse delay (T)")->capture_default_str();
    app->add_option("--delta", o.delta, "One-photon detuning (1/T)")->capture_default_str();
}

void add_integrator(CLI::App* app, Options& o)
{
    app->add_option("--t-start", o.t_start, "Start time (T)")->capture_default_str();
    app->add_option("--t-end", o.t_end, "End time (T)")->capture_default_str();
    app->add_option("--step-mode", o.step_mode, "fixed (RK4) or adaptive (Dormand-Prince)")
        ->check(CLI::IsMember({"fixed", "adaptive"}))
        ->capture_default_str();
    app->add_option("--step", o.step, "Fixed step, or initial adaptive step (T)")
        ->capture_default_str();
    app->add_option("--rtol", o.rtol, "Adaptive relative tolerance")->capture_default_str();
    app->add_option("--atol", o.atol, "Adaptive absolute tolerance")->capture_default_str();
    app->add_option("--samples", o.samples, "Uniform output samples")->capture_default_str();
}

void add_output(CLI::App* app, Options& o)
{
    app->add_option("-o,--output", o.output, "Output file (default: stdout)");
    app->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app->add_option("--gnuplot-script", o.gnuplot_script,
                    "Also write a gnuplot script for the CSV output to this path");
}

void add_gamma_grid(CLI::App* app, Options& o)
{
    app->add_option("--gammas", o.gammas, "Explicit gamma values (overrides the grid)")
        ->delimiter(',');
    app->add_option("--gamma-min", o.gamma_min)->capture_default_str();
    app->add_option("--gamma-max", o.gamma_max)->capture_default_str();
    app->add_option("--gamma-points", o.gamma_points, "Log-spaced gamma points")
        ->capture_default_str();
}

void add_sweep_common(CLI::App* app, Options& o)
{
    app->add_option("--model", o.model, "microscopic|phenomenological|both")
        ->check(CLI::IsMember({"microscopic", "micro", "phenomenological", "phen", "both"}))
        ->capture_default_str();
    app->add_option("--jobs", o.jobs, "Worker threads (0: one per core)")
        ->envname("STIRAP_JOBS")
        ->capture_default_str();
}

ModelSelection selection_of(const std::string& s)
{
    if (s == "both") {
        return ModelSelection::Both;
    }
    return parse_model_kind(s) == ModelKind::Microscopic ? ModelSelection::Microscopic
                                                         : ModelSelection::Phenomenological;
}

std::vector<double> grid_or(const std::vector<double>& explicit_values, double lo, double hi,
                            int points)
{
    if (!explicit_values.empty()) {
        return explicit_values;
    }
    if (lo > 0.0 && hi > 0.0) {
        return log_space(lo, hi, points);
    }
    return linear_space(lo, hi, points);
}

RunConfig build_config(const Options& o)
{
    RunConfig c;
    c.schedule.omega0 = o.omega0;
    c.schedule.tau = o.tau;
    c.schedule.delta = o.delta;
    c.schedule.sequence = parse_sequence(o.sequence);
    c.bath = {o.gamma, o.alpha, o.n_photons};
    c.gamma1 = o.gamma1;
    c.gamma3 = o.gamma3;
    c.integrator.t_start = o.t_start;
    c.integrator.t_end = o.t_end;
    c.integrator.step_mode = o.step_mode == "fixed" ? StepMode::Fixed : StepMode::Adaptive;
    c.integrator.step = o.step;
    c.integrator.rel_tol = o.rtol;
    c.integrator.abs_tol = o.atol;
    c.integrator.samples = o.samples;
    if (o.model != "both") {
        c.model = parse_model_kind(o.model);
    }

    SweepSpec& s = c.sweep;
    s.sequence = c.schedule.sequence;
    s.models = selection_of(o.model);
    s.omega0 = o.omega0;
    s.tau = o.tau;
    s.delta = o.delta;
    s.integrator = c.integrator;
    s.jobs = o.jobs;
    s.gammas = grid_or(o.gammas, o.gamma_min, o.gamma_max, o.gamma_points);
    s.alphas = {o.alpha};
    s.n_photons = {o.n_photons};

    c.output_path = o.output;
    c.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    return c;
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        write_text(text, path);
    }
}

void emit_gnuplot(const Options& o, const std::string& script)
{
    if (o.gnuplot_script.empty()) {
        return;
    }
    write_text(script, o.gnuplot_script);
}

using Job = std::function<int()>;

// Each prepare_* validates the full configuration and returns the compute
// step. Anything thrown while preparing is a usage error.

Job prepare_simulate(const Options& o)
{
    if (o.model == "both") {
        throw std::invalid_argument("simulate takes a single model");
    }
    RunConfig c = build_config(o);
    c.validate();
    if (!o.gnuplot_script.empty() && (o.output.empty() || o.format != "csv")) {
        throw std::invalid_argument("--gnuplot-script needs --output and --format csv");
    }
    return [c, o] {
        const EvolveResult r =
            evolve(c.simulation_model(), c.schedule, pure_state(1), c.integrator);
        emit(c.format == OutputFormat::Csv ? trajectory_to_csv(r.trajectory)
                                           : trajectory_to_json(r.trajectory),
             c.output_path);
        emit_gnuplot(o, trajectory_gnuplot_script(o.output));
        std::cerr << "P3 = " << format_number(efficiency(r.final_state))
                  << ", steps = " << r.diagnostics.steps
                  << ", max trace error = " << r.diagnostics.max_trace_error
                  << ", min eigenvalue = " << r.diagnostics.min_eigenvalue << '\n';
        return 0;
    };
}

enum class SweepKind { Gamma, GammaAlpha, GammaN };

Job prepare_sweep(const Options& o, SweepKind kind)
{
    RunConfig c = build_config(o);
    if (kind == SweepKind::GammaAlpha) {
        c.sweep.alphas = grid_or(o.alphas, o.alpha_min, o.alpha_max, o.alpha_points);
    }
    if (kind == SweepKind::GammaN) {
        c.sweep.n_photons = grid_or(o.ns, o.n_min, o.n_max, o.n_points);
    }
    c.validate();
    if (!o.gnuplot_script.empty() && (o.output.empty() || o.format != "csv")) {
        throw std::invalid_argument("--gnuplot-script needs --output and --format csv");
    }
    return [c, o, kind] {
        std::vector<EfficiencyRecord> records;
        switch (kind) {
        case SweepKind::Gamma: records = sweep_gamma(c.sweep); break;
        case SweepKind::GammaAlpha: records = sweep_gamma_alpha(c.sweep); break;
        case SweepKind::GammaN: records = sweep_gamma_n(c.sweep); break;
        }
        emit(format_records(records, c.format), c.output_path);
        emit_gnuplot(o, records_gnuplot_script(
                            o.output, "P3 vs gamma, " + std::string(to_string(c.sweep.sequence))));
        return 0;
    };
}

std::string comparison_csv(const ModelComparison& cmp)
{
    std::ostringstream os;
    os << "gamma,alpha,n_photons,p3_microscopic,p3_phenomenological,gap\n";
    for (const ComparisonRow& row : cmp.rows) {
        os << format_number(row.gamma) << ',' << format_number(row.alpha) << ','
           << format_number(row.n_photons) << ',' << format_number(row.p3_microscopic) << ','
           << format_number(row.p3_phenomenological) << ',' << format_number(row.gap()) << '\n';
    }
    return os.str();
}

std::string comparison_json(const ModelComparison& cmp)
{
    nlohmann::ordered_json j;
    j["sequence"] = to_string(cmp.sequence);
    j["max_gap"] = round_significant(cmp.max_gap);
    j["min_gap"] = round_significant(cmp.min_gap);
    j["max_abs_gap"] = round_significant(cmp.max_abs_gap);
    j["gamma_at_max_abs_gap"] = round_significant(cmp.gamma_at_max_abs_gap);
    j["crossovers"] = nlohmann::json::array();
    for (double g : cmp.crossovers) {
        j["crossovers"].push_back(round_significant(g));
    }
    j["rows"] = nlohmann::json::array();
    for (const ComparisonRow& row : cmp.rows) {
        j["rows"].push_back(nlohmann::ordered_json{
            {"gamma", round_significant(row.gamma)},
            {"alpha", round_significant(row.alpha)},
            {"n_photons", round_significant(row.n_photons)},
            {"p3_microscopic", round_significant(row.p3_microscopic)},
            {"p3_phenomenological", round_significant(row.p3_phenomenological)},
            {"gap", round_significant(row.gap())},
        });
    }
    return j.dump(2) + "\n";
}

std::string comparison_gnuplot_script(const std::string& csv_path)
{
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set logscale x\n"
       << "set xlabel 'gamma T'\n"
       << "set ylabel 'P3 (final)'\n"
       << "plot '" << csv_path << "' using 1:4 with linespoints, \\\n"
       << "     '" << csv_path << "' using 1:5 with linespoints, \\\n"
       << "     '" << csv_path << "' using 1:6 with lines\n";
    return os.str();
}

Job prepare_compare(const Options& o)
{
    RunConfig c = build_config(o);
    c.sweep.models = ModelSelection::Both;
    c.validate();
    if (!o.gnuplot_script.empty() && (o.output.empty() || o.format != "csv")) {
        throw std::invalid_argument("--gnuplot-script needs --output and --format csv");
    }
    return [c, o] {
        const ModelComparison cmp = compare_models(c.sweep);
        emit(c.format == OutputFormat::Csv ? comparison_csv(cmp) : comparison_json(cmp),
             c.output_path);
        emit_gnuplot(o, comparison_gnuplot_script(o.output));
        std::cerr << "max gap (micro - phen) " << format_number(cmp.max_gap)
                  << ", min gap " << format_number(cmp.min_gap) << ", max |gap| "
                  << format_number(cmp.max_abs_gap) << " at gamma "
                  << format_number(cmp.gamma_at_max_abs_gap) << ", crossovers "
                  << cmp.crossovers.size() << '\n';
        return 0;
    };
}

Job prepare_verify(const Options& o)
{
    return [seed = o.seed] {
        bool ok = true;
        for (const CheckResult& r : run_verification(seed)) {
            std::printf("%s  %-58s worst %.3e  tol %.1e\n", r.passed ? "PASS" : "FAIL",
                        r.name.c_str(), r.worst, r.tolerance);
            ok = ok && r.passed;
        }
        return ok ? 0 : kExitNumerical;
    };
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Population transfer in a driven three-level lambda system with a bosonic bath"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "Single run, writes the trajectory");
    add_physics(simulate, o);
    simulate->add_option("--model", o.model, "microscopic|phenomenological")
        ->check(CLI::IsMember({"microscopic", "micro", "phenomenological", "phen"}))
        ->capture_default_str();
    simulate->add_option("--gamma", o.gamma, "Bath decay rate (1/T)")->capture_default_str();
    simulate->add_option("--alpha", o.alpha, "Ratio of the 3-2 to the 1-2 decay rate")
        ->capture_default_str();
    simulate->add_option("--n-photons", o.n_photons, "Thermal photon number")
        ->capture_default_str();
    simulate->add_option("--gamma1", o.gamma1, "Phenomenological 2->1 rate (default: gamma)");
    simulate->add_option("--gamma3", o.gamma3,
                         "Phenomenological 2->3 rate (default: alpha*gamma)");
    add_integrator(simulate, o);
    add_output(simulate, o);

    auto* sweep_g = app.add_subcommand("sweep-gamma", "P3 over a gamma grid");
    auto* sweep_ga = app.add_subcommand("sweep-gamma-alpha", "P3 over a gamma x alpha grid");
    auto* sweep_gn = app.add_subcommand("sweep-gamma-n", "P3 over a gamma x N grid");
    auto* compare = app.add_subcommand("compare", "Microscopic against phenomenological");
    for (CLI::App* sub : {sweep_g, sweep_ga, sweep_gn, compare}) {
        add_physics(sub, o);
        add_gamma_grid(sub, o);
        add_integrator(sub, o);
        add_output(sub, o);
        if (sub != sweep_gn) {
            sub->add_option("--n-photons", o.n_photons, "Thermal photon number")
                ->capture_default_str();
        }
        if (sub != sweep_ga) {
            sub->add_option("--alpha", o.alpha, "Ratio of the 3-2 to the 1-2 decay rate")
                ->capture_default_str();
        }
    }
    for (CLI::App* sub : {sweep_g, sweep_ga, sweep_gn}) {
        add_sweep_common(sub, o);
    }
    compare->add_option("--jobs", o.jobs, "Worker threads (0: one per core)")
        ->envname("STIRAP_JOBS")
        ->capture_default_str();

    sweep_ga->add_option("--alphas", o.alphas, "Explicit alpha values")->delimiter(',');
    sweep_ga->add_option("--alpha-min", o.alpha_min)->capture_default_str();
    sweep_ga->add_option("--alpha-max", o.alpha_max)->capture_default_str();
    sweep_ga->add_option("--alpha-points", o.alpha_points, "Log-spaced alpha points")
        ->capture_default_str();
    sweep_gn->add_option("--ns", o.ns, "Explicit N values")->delimiter(',');
    sweep_gn->add_option("--n-min", o.n_min)->capture_default_str();
    sweep_gn->add_option("--n-max", o.n_max)->capture_default_str();
    sweep_gn->add_option("--n-points", o.n_points, "Log-spaced N points")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run the built-in consistency checks");
    verify->add_option("--seed", o.seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << '\n' << app.help();
        return kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    Job job;
    try {
        if (active == simulate) {
            job = prepare_simulate(o);
        } else if (active == sweep_g) {
            job = prepare_sweep(o, SweepKind::Gamma);
        } else if (active == sweep_ga) {
            job = prepare_sweep(o, SweepKind::GammaAlpha);
        } else if (active == sweep_gn) {
            job = prepare_sweep(o, SweepKind::GammaN);
        } else if (active == compare) {
            job = prepare_compare(o);
        } else {
            job = prepare_verify(o);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n\n" << active->help();
        return kExitUsage;
    }

    try {
        return job();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
