// Command-line front end for the inverse-square-root level-crossing
// two-state model: closed-form and numeric time evolution, survey-figure
// data, parameter scans, and the acceptance suite.

#include <complex>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ivsqrt/cli.hpp"

namespace {

using ivsqrt::cli::RunConfig;

std::complex<double> parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

void add_field_options(CLI::App* app, RunConfig& rc) {
    app->add_option("--u0", rc.cfg.U0, "Rabi frequency U0 (> 0)");
    app->add_option("--d0", rc.cfg.Delta0, "asymptotic detuning Delta0");
    app->add_option("--d1", rc.cfg.Delta1, "inverse-sqrt detuning coefficient Delta1");
}

void add_output_options(CLI::App* app, RunConfig& rc) {
    app->add_option("-o,--output", rc.output_path, "output file (stdout if omitted)");
    app->add_option("--format", rc.format, "output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, RunConfig::Format>{
                {"csv", RunConfig::Format::csv}, {"json", RunConfig::Format::json}}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inverse-square-root level-crossing two-state model toolkit"};
    app.require_subcommand(1);

    RunConfig rc;
    try {
        rc.policy = ivsqrt::EvalPolicy::from_env();
    } catch (const ivsqrt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ivsqrt::cli::kExitBadConfig;
    }

    std::string a1_text = "1", a2_text = "0";

    auto* solve = app.add_subcommand("solve", "time evolution of one configuration");
    add_field_options(solve, rc);
    solve->add_option("--a1", a1_text, "initial a1, 're' or 're,im'");
    solve->add_option("--a2", a2_text, "initial a2, 're' or 're,im'");
    solve->add_option("--t-max", rc.t_max, "end time");
    solve->add_option("--dt-out", rc.dt_out, "output step");
    solve->add_option("--method", rc.method, "analytic | ode | both")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, RunConfig::Method>{
                {"analytic", RunConfig::Method::analytic},
                {"ode", RunConfig::Method::ode},
                {"both", RunConfig::Method::both}}));
    add_output_options(solve, rc);

    auto* figure = app.add_subcommand("figure", "emit survey-figure data");
    figure->add_option("--id", rc.figure_id, "figure id (1..4)")->required();
    figure->add_option("--d0-min", rc.fig2_d0_min, "population map Delta0 lower bound");
    figure->add_option("--d0-max", rc.fig2_d0_max, "population map Delta0 upper bound");
    figure->add_option("--d0-steps", rc.fig2_d0_steps, "population map Delta0 cells");
    figure->add_option("--d1-min", rc.fig2_d1_min, "population map Delta1 lower bound");
    figure->add_option("--d1-max", rc.fig2_d1_max, "population map Delta1 upper bound");
    figure->add_option("--d1-steps", rc.fig2_d1_steps, "population map Delta1 cells");
    figure->add_flag("--serial", rc.serial, "disable the parallel sweep kernel");
    add_output_options(figure, rc);

    auto* scan = app.add_subcommand("scan", "parameter scan over (U0, Delta0, Delta1)");
    auto add_axis = [&](const std::string& name, ivsqrt::cli::AxisSpec& axis,
                        double dflt) {
        axis.lo = axis.hi = dflt;
        scan->add_option("--" + name + "-min", axis.lo);
        scan->add_option("--" + name + "-max", axis.hi);
        scan->add_option("--" + name + "-steps", axis.steps);
        scan->add_flag("--" + name + "-log", axis.log);
    };
    add_axis("u0", rc.u0_axis, 1.0);
    add_axis("d0", rc.d0_axis, 4.0);
    add_axis("d1", rc.d1_axis, -5.0);
    scan->add_flag("--serial", rc.serial, "disable the parallel sweep kernel");
    add_output_options(scan, rc);

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_flag("--list", rc.verify_list, "list criteria without running");
    verify->add_option("-o,--output", rc.output_path, "also write a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ivsqrt::cli::kExitBadConfig;
    }

    try {
        rc.initial = {parse_complex(a1_text), parse_complex(a2_text)};
    } catch (const std::exception&) {
        std::cerr << "error: cannot parse --a1/--a2 (use 're' or 're,im')\n";
        return ivsqrt::cli::kExitBadConfig;
    }

    if (solve->parsed())
        rc.command = RunConfig::Command::solve;
    else if (figure->parsed())
        rc.command = RunConfig::Command::figure;
    else if (scan->parsed())
        rc.command = RunConfig::Command::scan;
    else
        rc.command = RunConfig::Command::verify;

    return ivsqrt::cli::run(rc);
}
