#pragma once

#include <cstddef>
#include <string>

#include "ivsqrt/closed_form.hpp"
#include "ivsqrt/field_model.hpp"
#include "ivsqrt/types.hpp"

namespace ivsqrt::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitSolverFailure = 3;

struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 1; // 1 = fixed at lo
    bool log = false;
};

struct RunConfig {
    enum class Command { solve, figure, scan, verify };
    enum class Method { analytic, ode, both };
    enum class Format { csv, json };

    Command command = Command::solve;
    FieldConfig cfg{};
    AmplitudePair initial{1.0, 0.0};
    double t_max = 20.0;
    double dt_out = 0.05;
    Method method = Method::both;
    int figure_id = 1;
    AxisSpec u0_axis{1.0, 1.0, 1, false};
    AxisSpec d0_axis{4.0, 4.0, 1, false};
    AxisSpec d1_axis{-5.0, -5.0, 1, false};
    std::string output_path;
    Format format = Format::csv;
    bool verify_list = false;
    bool serial = false; // force the serial sweep reference path
    EvalPolicy policy{};

    // Grid bounds for the population-map figure (id 2); the defaults cover
    // Delta0 in [0.25, 8], Delta1 in [-8, 8].
    double fig2_d0_min = 0.25, fig2_d0_max = 8.0;
    double fig2_d1_min = -8.0, fig2_d1_max = 8.0;
    std::size_t fig2_d0_steps = 32, fig2_d1_steps = 33;
};

// Time evolution for one configuration; emits columns
//   t, re_a1, im_a1, re_a2, im_a2, p1, p2, norm [, abs_diff_a2]
// with abs_diff_a2 present for method = both. Initial conditions are imposed
// at t = kMatchTime and the grid then advances in dt_out steps to t_max.
int cmd_solve(const RunConfig& rc);

// Data behind the four survey figures (detuning curves and crossing markers;
// the start-population map; the two control parameters vs U0; the exact
// start population against both field-strength approximations).
int cmd_figure(const RunConfig& rc);

// Parameter scan over (U0, Delta0, Delta1) cells; per cell the derived
// scalars and the start-of-interaction populations.
int cmd_scan(const RunConfig& rc);

// Runs the acceptance suite (or lists it with verify_list) and reports one
// pass/fail line per criterion.
int cmd_verify(const RunConfig& rc);

// Dispatch on rc.command.
int run(const RunConfig& rc);

} // namespace ivsqrt::cli
