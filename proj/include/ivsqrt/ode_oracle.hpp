#pragma once

#include <vector>

#include "ivsqrt/closed_form.hpp"
#include "ivsqrt/field_model.hpp"
#include "ivsqrt/types.hpp"

namespace ivsqrt::oracle {

// Controls one adaptive integration of the coupled two-state system.
// The default variable is s = sqrt(t), which removes the sqrt-singularity of
// the phase at t = 0; raw_time integrates in t directly and then requires
// t_start > 0.
struct IntegrationSpec {
    double t_start = 0.0;
    double t_end = 20.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 10'000'000;
    std::vector<double> output_grid; // monotone increasing, within [t_start, t_end]
    enum class Variable { sqrt_time, raw_time };
    Variable variable = Variable::sqrt_time;
    bool allow_unnormalized = false; // opt out of the |a|^2 = 1 precondition

    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<AmplitudePair> states;
    double norm_drift = 0.0;     // max deviation of |a1|^2+|a2|^2 from its start
    double error_estimate = 0.0; // sum of accepted local error norms
    long steps_taken = 0;
};

// Adaptive Dormand-Prince 5(4) integration of
//   da1/ds = -2 i s U0 e^{-i delta(s^2)} a2,
//   da2/ds = -2 i s U0 e^{+i delta(s^2)} a1,   delta(s^2) = Delta0 s^2 + 2 Delta1 s,
// with PI step control and dense output at the requested grid points.
Trajectory integrate_two_state(const FieldConfig& cfg, const AmplitudePair& initial,
                               const IntegrationSpec& spec);

// Frames for point-to-point transport. The quasienergy_stripped frame factors
// the asymptotic e^{-i lambda t} phases out analytically, leaving a bounded
// slowly-decaying coupling; useful for long-range transports.
enum class TransportFrame { amplitude, quasienergy_stripped };

// Carries (a1, a2) from t_from to t_to (either direction; both >= 0).
AmplitudePair transport(const FieldConfig& cfg, const AmplitudePair& state,
                        double t_from, double t_to, double rel_tol = 1e-10,
                        double abs_tol = 1e-12,
                        TransportFrame frame = TransportFrame::amplitude);

// Relative residual of the second-order form of the two-state equation,
//   a2'' - i delta_t(t) a2' + U0^2 a2 = 0,
// for a candidate solution's analytic derivatives at t > 0:
//   |a2'' - i delta_t a2' + U0^2 a2| / (|a2''| + |delta_t a2'| + |U0^2 a2|).
double second_order_residual(ComplexScalar a2_value, ComplexScalar a2_d1,
                             ComplexScalar a2_d2, double t, const FieldConfig& cfg);

} // namespace ivsqrt::oracle
