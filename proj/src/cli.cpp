#include "ivsqrt/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ivsqrt/heun.hpp"
#include "ivsqrt/ode_oracle.hpp"
#include "ivsqrt/sweep.hpp"
#include "ivsqrt/verification.hpp"

namespace ivsqrt::cli {

namespace {

constexpr const char* kToolVersion = "ivsqrt 1.0.0";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void meta(const std::string& key, const std::string& value) {
        metadata.emplace_back(key, value);
    }
    void meta(const std::string& key, double value) {
        metadata.emplace_back(key, format_double(value));
    }
};

void write_csv(const Table& table, std::ostream& os) {
    os << "# " << kToolVersion << "\n";
    for (const auto& [k, v] : table.metadata)
        os << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << "\n";
    }
}

void write_json(const Table& table, std::ostream& os) {
    nlohmann::ordered_json doc;
    doc["tool"] = kToolVersion;
    nlohmann::ordered_json meta;
    for (const auto& [k, v] : table.metadata)
        meta[k] = v;
    doc["metadata"] = meta;
    doc["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row)
            r.push_back(v); // shortest round-trip form; deterministic
        rows.push_back(std::move(r));
    }
    doc["data"] = std::move(rows);
    os << doc.dump(2) << "\n";
}

int emit(const Table& table, const RunConfig& rc) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!rc.output_path.empty()) {
        file.open(rc.output_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open output file " << rc.output_path << "\n";
            return kExitBadConfig;
        }
        os = &file;
    }
    if (rc.format == RunConfig::Format::csv)
        write_csv(table, *os);
    else
        write_json(table, *os);
    if (!rc.output_path.empty())
        std::cout << "wrote " << rc.output_path << " (" << table.rows.size()
                  << " rows)\n";
    return kExitOk;
}

std::vector<double> axis_values(const AxisSpec& axis) {
    if (axis.steps <= 1)
        return {axis.lo};
    return axis.log ? sweep::logspace(axis.lo, axis.hi, axis.steps)
                    : sweep::linspace(axis.lo, axis.hi, axis.steps);
}

void echo_field(Table& table, const FieldConfig& cfg) {
    table.meta("u0", cfg.U0);
    table.meta("delta0", cfg.Delta0);
    table.meta("delta1", cfg.Delta1);
}

sweep::ExecMode mode_of(const RunConfig& rc) {
    return rc.serial ? sweep::ExecMode::serial : sweep::ExecMode::parallel;
}

} // namespace

int cmd_solve(const RunConfig& rc) {
    // The grid starts at the matching time next to the singular origin, so
    // the output step must clear it.
    if (!(rc.dt_out > 10.0 * kMatchTime) || !(rc.t_max > kMatchTime)) {
        std::cerr << "error: solve requires dt_out > 1e-5 and t_max > 0\n";
        return kExitBadConfig;
    }
    try {
        rc.cfg.validate();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }

    // Index-based grid; a point closer than dt_out/2 to t_max would leave a
    // degenerate final segment, so t_max itself takes its place.
    std::vector<double> grid = {kMatchTime};
    for (std::size_t k = 1; k * rc.dt_out < rc.t_max - 0.5 * rc.dt_out; ++k)
        grid.push_back(double(k) * rc.dt_out);
    grid.push_back(rc.t_max);

    const bool want_analytic = rc.method != RunConfig::Method::ode;
    const bool want_ode = rc.method != RunConfig::Method::analytic;

    try {
        std::vector<AmplitudePair> analytic, numeric;
        if (want_analytic) {
            const auto coeffs = solve_ivp_coefficients(rc.initial, rc.cfg, rc.policy);
            analytic.resize(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                analytic[i] = amplitudes(grid[i], coeffs, rc.cfg, rc.policy);
        }
        if (want_ode) {
            oracle::IntegrationSpec spec;
            spec.t_start = grid.front();
            spec.t_end = grid.back();
            spec.output_grid = grid;
            numeric = oracle::integrate_two_state(rc.cfg, rc.initial, spec).states;
        }

        Table table;
        table.meta("command", "solve");
        echo_field(table, rc.cfg);
        table.meta("a1_0_re", rc.initial.a1.real());
        table.meta("a1_0_im", rc.initial.a1.imag());
        table.meta("a2_0_re", rc.initial.a2.real());
        table.meta("a2_0_im", rc.initial.a2.imag());
        table.meta("t_max", rc.t_max);
        table.meta("dt_out", rc.dt_out);
        table.meta("method", rc.method == RunConfig::Method::analytic ? "analytic"
                             : rc.method == RunConfig::Method::ode    ? "ode"
                                                                      : "both");
        table.columns = {"t", "re_a1", "im_a1", "re_a2", "im_a2", "p1", "p2", "norm"};
        const bool diff_col = rc.method == RunConfig::Method::both;
        if (diff_col)
            table.columns.push_back("abs_diff_a2");

        double max_diff = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const AmplitudePair& a = want_analytic ? analytic[i] : numeric[i];
            std::vector<double> row = {grid[i],
                                       a.a1.real(), a.a1.imag(),
                                       a.a2.real(), a.a2.imag(),
                                       std::norm(a.a1), std::norm(a.a2),
                                       a.norm()};
            if (diff_col) {
                const double d = std::abs(analytic[i].a2 - numeric[i].a2);
                max_diff = std::max(max_diff, d);
                row.push_back(d);
            }
            table.rows.push_back(std::move(row));
        }
        if (diff_col) {
            table.meta("max_abs_diff_a2", max_diff);
            std::cout << "max_abs_diff_a2 = " << format_double(max_diff) << "\n";
        }
        return emit(table, rc);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}

namespace {

int figure_detuning(const RunConfig& rc) {
    // Detuning curves at Delta0 = 4 for the survey family of Delta1 values,
    // the constant Rabi line, and the resonance-crossing markers.
    Table table;
    table.meta("command", "figure");
    table.meta("figure", 1);
    table.meta("kind_legend", "0 = detuning curve, 1 = rabi line, 2 = crossing marker");
    table.columns = {"kind", "delta1", "t", "value"};

    const double d0 = 4.0, u0 = 1.0;
    const auto tgrid = sweep::linspace(0.01, 8.0, 400);
    for (double d1 : {5.0, 3.0, 1.0, 0.0, -1.0, -3.0, -5.0}) {
        const FieldConfig cfg{u0, d0, d1};
        for (double t : tgrid)
            table.rows.push_back({0.0, d1, t, detuning(t, cfg)});
        if (const auto t0 = crossing_time(cfg))
            table.rows.push_back({2.0, d1, *t0, 0.0});
    }
    for (double t : tgrid)
        table.rows.push_back({1.0, 0.0, t, u0});
    return emit(table, rc);
}

int figure_population_map(const RunConfig& rc) {
    Table table;
    table.meta("command", "figure");
    table.meta("figure", 2);
    table.meta("u0", 1.0);
    table.columns = {"delta0", "delta1", "p1_0"};

    const auto d0s = sweep::linspace(rc.fig2_d0_min, rc.fig2_d0_max, rc.fig2_d0_steps);
    const auto d1s = sweep::linspace(rc.fig2_d1_min, rc.fig2_d1_max, rc.fig2_d1_steps);
    const std::size_t n = d0s.size() * d1s.size();
    const auto policy = rc.policy;
    const auto cells = sweep::map_cells<double>(
        n,
        [&](std::size_t i) {
            const double d0 = d0s[i / d1s.size()];
            const double d1 = d1s[i % d1s.size()];
            return scattering_a2_at_zero({1.0, d0, d1}, policy).p1;
        },
        mode_of(rc));
    for (std::size_t i = 0; i < n; ++i)
        table.rows.push_back({d0s[i / d1s.size()], d1s[i % d1s.size()], cells[i]});
    return emit(table, rc);
}

int figure_control_params(const RunConfig& rc) {
    Table table;
    table.meta("command", "figure");
    table.meta("figure", 3);
    table.meta("delta0", 4.0);
    table.meta("delta1", -5.0);
    table.columns = {"u0",         "nu0",          "xi0",         "nu0_small_u0",
                     "nu0_large_u0", "xi0_small_u0", "xi0_large_u0"};
    const double d0 = 4.0, d1 = -5.0;
    for (double u0 : sweep::logspace(1e-2, 1e3, 201)) {
        const auto dp = dimensionless_params({u0, d0, d1});
        const double nu0_small = 2.0 * d1 * d1 * u0 * u0 / (d0 * d0 * d0);
        const double nu0_large = d1 * d1 / (4.0 * u0);
        const double xi0_small = d1 / std::sqrt(2.0 * d0);
        const double xi0_large = d0 * d1 / (4.0 * std::pow(u0, 1.5));
        table.rows.push_back({u0, dp.nu0, dp.xi0, nu0_small, nu0_large, xi0_small,
                              xi0_large});
    }
    return emit(table, rc);
}

int figure_population_vs_field(const RunConfig& rc) {
    Table table;
    table.meta("command", "figure");
    table.meta("figure", 4);
    table.meta("delta0", 4.0);
    table.meta("delta1", -5.0);
    table.columns = {"u0", "p2_exact", "p2_weak_approx", "p2_strong_approx"};
    const auto u0s = sweep::logspace(1e-2, 1e3, 201);
    const auto policy = rc.policy;
    const auto cells = sweep::map_cells<std::array<double, 3>>(
        u0s.size(),
        [&](std::size_t i) -> std::array<double, 3> {
            const FieldConfig cfg{u0s[i], 4.0, -5.0};
            return {scattering_a2_at_zero(cfg, policy).p2,
                    std::norm(approx_weak_field(cfg)),
                    std::norm(approx_strong_field(cfg))};
        },
        mode_of(rc));
    for (std::size_t i = 0; i < u0s.size(); ++i)
        table.rows.push_back({u0s[i], cells[i][0], cells[i][1], cells[i][2]});
    return emit(table, rc);
}

} // namespace

int cmd_figure(const RunConfig& rc) {
    try {
        switch (rc.figure_id) {
        case 1: return figure_detuning(rc);
        case 2: return figure_population_map(rc);
        case 3: return figure_control_params(rc);
        case 4: return figure_population_vs_field(rc);
        default:
            std::cerr << "error: figure id must be 1..4\n";
            return kExitBadConfig;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}

int cmd_scan(const RunConfig& rc) {
    const auto u0s = axis_values(rc.u0_axis);
    const auto d0s = axis_values(rc.d0_axis);
    const auto d1s = axis_values(rc.d1_axis);
    for (double d0 : d0s)
        if (!(d0 > 0.0)) {
            std::cerr << "error: scan requires Delta0 > 0 cells\n";
            return kExitBadConfig;
        }
    for (double u0 : u0s)
        if (!(u0 > 0.0)) {
            std::cerr << "error: scan requires U0 > 0 cells\n";
            return kExitBadConfig;
        }

    Table table;
    table.meta("command", "scan");
    table.meta("cells", double(u0s.size() * d0s.size() * d1s.size()));
    table.columns = {"u0",  "delta0", "delta1", "has_crossing", "t_crossing",
                     "lz",  "R",      "lambda1", "lambda2",      "nu0",
                     "xi0", "C1",     "p1_0",    "p2_0"};

    const std::size_t n = u0s.size() * d0s.size() * d1s.size();
    const auto policy = rc.policy;
    try {
        const auto cells = sweep::map_cells<std::vector<double>>(
            n,
            [&](std::size_t i) {
                const std::size_t iu = i / (d0s.size() * d1s.size());
                const std::size_t id0 = (i / d1s.size()) % d0s.size();
                const std::size_t id1 = i % d1s.size();
                const FieldConfig cfg{u0s[iu], d0s[id0], d1s[id1]};
                const auto d = derive(cfg);
                const auto sc = scattering_a2_at_zero(cfg, policy);
                return std::vector<double>{
                    cfg.U0, cfg.Delta0, cfg.Delta1,
                    d.t0.has_value() ? 1.0 : 0.0, d.t0.value_or(0.0),
                    d.Lambda.magnitude, d.R, d.lambda1, d.lambda2,
                    d.nu0, d.xi0, d.C1, sc.p1, sc.p2};
            },
            mode_of(rc));
        for (const auto& row : cells)
            table.rows.push_back(row);
        return emit(table, rc);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}

int cmd_verify(const RunConfig& rc) {
    if (rc.verify_list) {
        const auto names = verify::criteria_names();
        for (std::size_t i = 0; i < names.size(); ++i)
            std::cout << (i + 1) << ": " << names[i] << "\n";
        return kExitOk;
    }
    const auto results = verify::run_acceptance(rc.policy);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.name
                  << " -- " << r.detail << "\n";
        all = all && r.passed;
    }
    if (!rc.output_path.empty()) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& r : results)
            doc.push_back({{"id", r.id},
                           {"name", r.name},
                           {"passed", r.passed},
                           {"detail", r.detail}});
        std::ofstream file(rc.output_path, std::ios::binary);
        file << doc.dump(2) << "\n";
        std::cout << "wrote " << rc.output_path << "\n";
    }
    std::cout << (all ? "all criteria passed" : "ACCEPTANCE FAILURE") << "\n";
    return all ? kExitOk : kExitVerifyFailed;
}

int run(const RunConfig& rc) {
    switch (rc.command) {
    case RunConfig::Command::solve: return cmd_solve(rc);
    case RunConfig::Command::figure: return cmd_figure(rc);
    case RunConfig::Command::scan: return cmd_scan(rc);
    case RunConfig::Command::verify: return cmd_verify(rc);
    }
    return kExitBadConfig;
}

} // namespace ivsqrt::cli
