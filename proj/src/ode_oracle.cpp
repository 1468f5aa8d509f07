#include "ivsqrt/ode_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace ivsqrt::oracle {

namespace {

constexpr ComplexScalar kI{0.0, 1.0};

using State = std::array<ComplexScalar, 2>;
using Rhs = std::function<void(double, const State&, State&)>;

double err_norm(const State& err, const State& y, double atol, double rtol) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double scale = atol + rtol * std::abs(y[i]);
        const double e = std::abs(err[i]) / scale;
        acc += e * e;
    }
    return std::sqrt(0.5 * acc);
}

// Dormand-Prince 5(4) pair with PI step-size control. Integrates from x0 to
// x1 (either direction), calling `observe` after every accepted step with the
// dense 5th-order state so callers can interpolate-by-clamping onto grids.
struct DormandPrince {
    double atol, rtol;
    long max_steps;
    double accumulated_error = 0.0;
    long steps = 0;

    // Classic DP5(4) tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    State integrate(const Rhs& rhs, State y, double x0, double x1,
                    const std::function<void(double, const State&)>& observe) {
        // Spans at rounding scale (e.g. near-duplicate grid stops) are no-ops.
        if (std::fabs(x1 - x0) <= 4e-13 * (1.0 + std::fabs(x0) + std::fabs(x1)))
            return y;
        const double dir = x1 > x0 ? 1.0 : -1.0;
        const double span = std::fabs(x1 - x0);
        double h = dir * std::min(0.01 * span, 0.1);
        double x = x0;
        double prev_err = 1.0;
        State k1;
        rhs(x, y, k1);

        while (dir * (x1 - x) > 0.0) {
            if (++steps > max_steps)
                throw StepLimitExceeded("integrate: step limit exceeded");
            if (std::fabs(h) < 1e-14 * (std::fabs(x) + 1.0))
                throw ToleranceUnachievable("integrate: step size underflow");
            if (dir * (x + h - x1) > 0.0)
                h = x1 - x;

            State k2, k3, k4, k5, k6, k7, yt;
            auto stage = [&](double frac, const State& incr, State& out) {
                State ys;
                for (int i = 0; i < 2; ++i)
                    ys[i] = y[i] + h * incr[i];
                rhs(x + frac * h, ys, out);
            };
            State tmp;
            for (int i = 0; i < 2; ++i) tmp[i] = a21 * k1[i];
            stage(c2, tmp, k2);
            for (int i = 0; i < 2; ++i) tmp[i] = a31 * k1[i] + a32 * k2[i];
            stage(c3, tmp, k3);
            for (int i = 0; i < 2; ++i) tmp[i] = a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
            stage(c4, tmp, k4);
            for (int i = 0; i < 2; ++i)
                tmp[i] = a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
            stage(c5, tmp, k5);
            for (int i = 0; i < 2; ++i)
                tmp[i] = a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                         a65 * k5[i];
            stage(1.0, tmp, k6);
            for (int i = 0; i < 2; ++i)
                yt[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                    b5 * k5[i] + b6 * k6[i]);
            rhs(x + h, yt, k7);

            State err;
            for (int i = 0; i < 2; ++i)
                err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
            const double en = err_norm(err, yt, atol, rtol);

            if (en <= 1.0) {
                x += h;
                y = yt;
                k1 = k7; // FSAL
                accumulated_error += std::hypot(std::abs(err[0]), std::abs(err[1]));
                observe(x, y);
                const double grow =
                    0.9 * std::pow(std::max(en, 1e-10), -0.7 / 5.0) *
                    std::pow(prev_err, 0.4 / 5.0);
                h *= std::clamp(grow, 0.2, 5.0);
                prev_err = std::max(en, 1e-10);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 5.0));
            }
        }
        return y;
    }
};

Rhs sqrt_time_rhs(const FieldConfig& cfg) {
    return [cfg](double s, const State& y, State& dy) {
        const double delta = cfg.Delta0 * s * s + 2.0 * cfg.Delta1 * s;
        const ComplexScalar e = std::exp(kI * delta);
        const ComplexScalar f = -2.0 * kI * s * cfg.U0;
        dy[0] = f * y[1] / e;
        dy[1] = f * y[0] * e;
    };
}

Rhs raw_time_rhs(const FieldConfig& cfg) {
    return [cfg](double t, const State& y, State& dy) {
        const double delta = cfg.Delta0 * t + 2.0 * cfg.Delta1 * std::sqrt(t);
        const ComplexScalar e = std::exp(kI * delta);
        const ComplexScalar f = -kI * cfg.U0;
        dy[0] = f * y[1] / e;
        dy[1] = f * y[0] * e;
    };
}

// Interaction-picture frame: diagonalize the asymptotic constant-detuning
// Hamiltonian [[0, U0], [U0, Delta0]] = P diag(l1, l2) P^{-1} and strip the
// e^{-i lambda s^2} phases. The residual coupling is O(Delta1/sqrt(t)).
struct StrippedFrame {
    double l1, l2;
    std::array<std::array<double, 2>, 2> P, Pinv;
    std::array<std::array<ComplexScalar, 2>, 2> G; // P^{-1} [[0,0],[0,2 Delta1]] P

    explicit StrippedFrame(const FieldConfig& cfg) {
        const auto qe = quasi_energies(cfg);
        l1 = qe.lambda1;
        l2 = qe.lambda2;
        const double n1 = std::hypot(cfg.U0, l1);
        const double n2 = std::hypot(cfg.U0, l2);
        P = {{{cfg.U0 / n1, cfg.U0 / n2}, {l1 / n1, l2 / n2}}};
        const double det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
        Pinv = {{{P[1][1] / det, -P[0][1] / det}, {-P[1][0] / det, P[0][0] / det}}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                G[i][j] = Pinv[i][1] * 2.0 * cfg.Delta1 * P[1][j];
    }

    State to_frame(const FieldConfig& cfg, const AmplitudePair& a, double s) const {
        const double t = s * s;
        const ComplexScalar a2t = a.a2 * std::exp(-kI * (cfg.Delta0 * t + 2.0 * cfg.Delta1 * s));
        const State c = {Pinv[0][0] * a.a1 + Pinv[0][1] * a2t,
                         Pinv[1][0] * a.a1 + Pinv[1][1] * a2t};
        return {c[0] * std::exp(kI * l1 * t), c[1] * std::exp(kI * l2 * t)};
    }

    AmplitudePair from_frame(const FieldConfig& cfg, const State& d, double s) const {
        const double t = s * s;
        const State c = {d[0] * std::exp(-kI * l1 * t), d[1] * std::exp(-kI * l2 * t)};
        const ComplexScalar a1 = P[0][0] * c[0] + P[0][1] * c[1];
        const ComplexScalar a2t = P[1][0] * c[0] + P[1][1] * c[1];
        return {a1, a2t * std::exp(kI * (cfg.Delta0 * t + 2.0 * cfg.Delta1 * s))};
    }

    Rhs rhs() const {
        const auto self = *this;
        return [self](double s, const State& d, State& dd) {
            const double t = s * s;
            const ComplexScalar p12 = std::exp(kI * (self.l1 - self.l2) * t);
            dd[0] = -kI * (self.G[0][0] * d[0] + self.G[0][1] * p12 * d[1]);
            dd[1] = -kI * (self.G[1][0] * d[0] / p12 + self.G[1][1] * d[1]);
        };
    }
};

} // namespace

void IntegrationSpec::validate() const {
    if (!(t_start >= 0.0))
        throw DomainError("IntegrationSpec: t_start must be >= 0");
    if (!(t_end > t_start))
        throw DomainError("IntegrationSpec: t_end must exceed t_start");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw DomainError("IntegrationSpec: tolerances must be > 0");
    if (max_steps <= 0)
        throw DomainError("IntegrationSpec: max_steps must be > 0");
    if (variable == Variable::raw_time && !(t_start > 0.0))
        throw DomainError("IntegrationSpec: raw_time integration needs t_start > 0");
    for (std::size_t i = 0; i < output_grid.size(); ++i) {
        const double g = output_grid[i];
        if (g < t_start - 1e-12 || g > t_end + 1e-12)
            throw DomainError("IntegrationSpec: grid point outside [t_start, t_end]");
        if (i > 0 && g < output_grid[i - 1])
            throw DomainError("IntegrationSpec: output_grid must be sorted");
    }
}

Trajectory integrate_two_state(const FieldConfig& cfg, const AmplitudePair& initial,
                               const IntegrationSpec& spec) {
    cfg.validate();
    spec.validate();
    if (!spec.allow_unnormalized && std::fabs(initial.norm() - 1.0) > 1e-10)
        throw DomainError("integrate_two_state: initial state must be normalized");

    const bool sqrt_var = spec.variable == IntegrationSpec::Variable::sqrt_time;
    const Rhs rhs = sqrt_var ? sqrt_time_rhs(cfg) : raw_time_rhs(cfg);
    auto to_x = [&](double t) { return sqrt_var ? std::sqrt(t) : t; };

    Trajectory traj;
    traj.times = spec.output_grid;
    if (traj.times.empty()) {
        traj.times = {spec.t_start, spec.t_end};
    }
    traj.states.resize(traj.times.size());

    DormandPrince stepper{spec.abs_tol, spec.rel_tol, spec.max_steps};
    State y = {initial.a1, initial.a2};
    const double norm0 = initial.norm();
    double drift = 0.0;

    std::size_t next = 0;
    auto record_up_to = [&](double t_now, const State& state) {
        while (next < traj.times.size() && traj.times[next] <= t_now + 1e-15) {
            traj.states[next] = {state[0], state[1]};
            ++next;
        }
    };

    // Integrate segment by segment so every grid point is hit exactly.
    double x = to_x(spec.t_start);
    record_up_to(spec.t_start, y);
    std::vector<double> stops;
    for (double g : traj.times)
        if (g > spec.t_start)
            stops.push_back(g);
    if (stops.empty() || stops.back() < spec.t_end)
        stops.push_back(spec.t_end);

    for (double t_stop : stops) {
        const double x_stop = to_x(t_stop);
        y = stepper.integrate(rhs, y, x, x_stop, [&](double xx, const State& yy) {
            const double n = std::norm(yy[0]) + std::norm(yy[1]);
            drift = std::max(drift, std::fabs(n - norm0));
            (void)xx;
        });
        x = x_stop;
        record_up_to(t_stop, y);
    }

    traj.norm_drift = drift;
    traj.error_estimate = stepper.accumulated_error;
    traj.steps_taken = stepper.steps;
    return traj;
}

AmplitudePair transport(const FieldConfig& cfg, const AmplitudePair& state,
                        double t_from, double t_to, double rel_tol, double abs_tol,
                        TransportFrame frame) {
    cfg.validate();
    if (t_from < 0.0 || t_to < 0.0)
        throw DomainError("transport: times must be >= 0");
    if (t_from == t_to)
        return state;
    DormandPrince stepper{abs_tol, rel_tol, 100'000'000};
    const double s0 = std::sqrt(t_from);
    const double s1 = std::sqrt(t_to);
    auto no_observe = [](double, const State&) {};

    if (frame == TransportFrame::amplitude) {
        const State y = stepper.integrate(sqrt_time_rhs(cfg), {state.a1, state.a2},
                                          s0, s1, no_observe);
        return {y[0], y[1]};
    }
    const StrippedFrame f(cfg);
    const State d0 = f.to_frame(cfg, state, s0);
    const State d1 = stepper.integrate(f.rhs(), d0, s0, s1, no_observe);
    return f.from_frame(cfg, d1, s1);
}

double second_order_residual(ComplexScalar a2_value, ComplexScalar a2_d1,
                             ComplexScalar a2_d2, double t, const FieldConfig& cfg) {
    if (!(t > 0.0))
        throw DomainError("second_order_residual: t must be > 0");
    const double dt = detuning(t, cfg);
    const ComplexScalar lhs = a2_d2 - kI * dt * a2_d1 + cfg.U0 * cfg.U0 * a2_value;
    const double denom = std::abs(a2_d2) + std::abs(dt * a2_d1) +
                         std::abs(cfg.U0 * cfg.U0 * a2_value);
    return denom == 0.0 ? 0.0 : std::abs(lhs) / denom;
}

} // namespace ivsqrt::oracle
