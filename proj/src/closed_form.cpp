#include "ivsqrt/closed_form.hpp"

#include <array>
#include <cmath>

#include "ivsqrt/specfun.hpp"

namespace ivsqrt {

namespace {

constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
constexpr ComplexScalar kI{0.0, 1.0};

using specfun::hermite_h;

double branch_sign(AlphaBranch b) { return b == AlphaBranch::minus ? -1.0 : 1.0; }

} // namespace

double AmplitudePair::norm() const { return std::norm(a1) + std::norm(a2); }

FundamentalParams fundamental_params_branch(const FieldConfig& cfg, int S,
                                            AlphaBranch branch) {
    cfg.validate();
    if (S != 1 && S != -1)
        throw DomainError("fundamental_params: S must be +1 or -1");
    const double sgn = branch_sign(branch);
    const double twoR = std::sqrt(4.0 * cfg.U0 * cfg.U0 + cfg.Delta0 * cfg.Delta0);

    FundamentalParams p;
    p.alpha0 = kI * cfg.Delta1 * (1.0 + sgn * cfg.Delta0 / twoR);
    p.alpha1 = 0.0;
    p.alpha2 = kI * (cfg.Delta0 + sgn * twoR);
    p.gamma = -1.0;
    p.delta = 2.0 * (p.alpha0 - kI * cfg.Delta1);
    p.epsilon = 2.0 * (p.alpha2 - kI * cfg.Delta0);
    p.alpha = p.alpha0 * (p.alpha0 - 2.0 * kI * cfg.Delta1);
    p.q = p.alpha0;
    p.S = S;
    p.y_scale = double(S) * std::sqrt(-0.5 * p.epsilon);
    p.y_shift = p.delta / p.epsilon;
    // The mixing coefficient diverges when Delta1 = 0 (alpha = alpha0 = 0);
    // the evaluation then uses the solution normalized by it.
    p.A = p.alpha == ComplexScalar(0.0) ? ComplexScalar(0.0)
                                        : p.y_scale * (p.delta - p.q) / p.alpha;
    return p;
}

FundamentalParams fundamental_params(const FieldConfig& cfg, int S) {
    return fundamental_params_branch(cfg, S, AlphaBranch::minus);
}

namespace {

// Shared assembly for the Hermite-form solution and its jet. The Hermite
// combination is G(y) = A H_m(y) + H_{m-1}(y); when Delta1 = 0 the mixing
// coefficient diverges, so the solution is returned normalized by it, which
// degenerates to the single term H_m(y) (a pure quasi-energy exponential).
struct HermiteFormEval {
    ComplexScalar prefactor;  // e^{alpha0 sqrt(t) + alpha2 t / 2}
    ComplexScalar g;          // d/dt log prefactor
    ComplexScalar dg;         // its derivative
    ComplexScalar y, dy, ddy; // argument and its t-derivatives
    ComplexScalar G, Gy, Gyy; // combination and y-derivatives
};

HermiteFormEval eval_hermite_form(double t, const FundamentalParams& p,
                                  const EvalPolicy& policy, int depth) {
    if (t < 0.0)
        throw DomainError("a2_fundamental_hermite: t must be >= 0");
    HermiteFormEval e;
    const double st = std::sqrt(t);
    e.prefactor = std::exp(p.alpha0 * st + 0.5 * p.alpha2 * t);
    if (t > 0.0) {
        e.g = 0.5 * p.alpha0 / st + 0.5 * p.alpha2;
        e.dg = -0.25 * p.alpha0 / (t * st);
        e.dy = 0.5 * p.y_scale / st;
        e.ddy = -0.25 * p.y_scale / (t * st);
    } else {
        e.g = e.dg = e.dy = e.ddy = 0.0; // jet callers require t > 0
    }
    e.y = p.y_scale * (st + p.y_shift);

    const ComplexScalar m = -p.alpha / p.epsilon;
    const bool degenerate = p.alpha == ComplexScalar(0.0);
    std::array<ComplexScalar, 4> h{}; // H_{m}, H_{m-1}, H_{m-2}, H_{m-3}
    for (int k = 0; k < (depth >= 1 ? 4 : 2); ++k)
        h[k] = hermite_h(m - double(k), e.y, policy);

    if (degenerate) {
        e.G = h[0];
        e.Gy = 2.0 * m * h[1];
        e.Gyy = 4.0 * m * (m - 1.0) * h[2];
    } else {
        e.G = p.A * h[0] + h[1];
        e.Gy = 2.0 * m * p.A * h[1] + 2.0 * (m - 1.0) * h[2];
        e.Gyy = 4.0 * m * (m - 1.0) * p.A * h[2] +
                4.0 * (m - 1.0) * (m - 2.0) * h[3];
    }
    return e;
}

} // namespace

ComplexScalar a2_fundamental_hermite(double t, const FundamentalParams& params,
                                     const EvalPolicy& policy) {
    const auto e = eval_hermite_form(t, params, policy, 0);
    return e.prefactor * e.G;
}

Jet2 a2_fundamental_hermite_jet(double t, const FundamentalParams& params,
                                const EvalPolicy& policy) {
    if (!(t > 0.0))
        throw DomainError("a2_fundamental_hermite_jet: t must be > 0");
    const auto e = eval_hermite_form(t, params, policy, 1);
    const ComplexScalar Gt = e.Gy * e.dy;
    const ComplexScalar Gtt = e.Gyy * e.dy * e.dy + e.Gy * e.ddy;
    Jet2 jet;
    jet.f = e.prefactor * e.G;
    jet.df = e.prefactor * (e.g * e.G + Gt);
    jet.ddf = e.prefactor * ((e.g * e.g + e.dg) * e.G + 2.0 * e.g * Gt + Gtt);
    return jet;
}

namespace {

struct QuasiForm {
    ComplexScalar nu;    // Hermite order
    ComplexScalar s;     // argument scale sqrt(i (Delta0 - 2 lambda))
    ComplexScalar shift; // argument shift Delta1 Delta0 / (Delta0 - 2 lambda)^2
    ComplexScalar c;     // mixing coefficient of H_{nu-1}
    double lambda;
    double phase_rate; // Delta1 / (lambda - Delta0/2), sqrt(t) phase coefficient
};

QuasiForm quasi_form(const FieldConfig& cfg, double lambda) {
    cfg.validate();
    if (cfg.Delta1 == 0.0)
        throw DomainError(
            "a2_fundamental_quasienergy: Delta1 = 0 is singular here; use rabi_solution");
    const auto qe = quasi_energies(cfg);
    const double tol = 1e-9 * (std::fabs(qe.lambda1) + std::fabs(qe.lambda2) + 1.0);
    if (std::fabs(lambda - qe.lambda1) > tol && std::fabs(lambda - qe.lambda2) > tol)
        throw DomainError("a2_fundamental_quasienergy: lambda must be a quasi-energy");
    QuasiForm f;
    const double d = cfg.Delta0 - 2.0 * lambda; // = -+ 2R
    f.nu = -2.0 * kI * cfg.Delta1 * cfg.Delta1 * cfg.U0 * cfg.U0 / (d * d * d);
    f.s = std::sqrt(kI * d);
    f.shift = cfg.Delta1 * cfg.Delta0 / (d * d);
    const ComplexScalar beta = kI * d / (cfg.Delta1 * (cfg.Delta0 - lambda));
    f.c = beta * f.nu * f.s;
    f.lambda = lambda;
    f.phase_rate = cfg.Delta1 / (lambda - 0.5 * cfg.Delta0);
    return f;
}

} // namespace

ComplexScalar a2_fundamental_quasienergy(double t, const FieldConfig& cfg,
                                         double lambda,
                                         const EvalPolicy& policy) {
    if (t < 0.0)
        throw DomainError("a2_fundamental_quasienergy: t must be >= 0");
    const auto f = quasi_form(cfg, lambda);
    const double st = std::sqrt(t);
    const ComplexScalar y = f.s * (st + f.shift);
    const ComplexScalar phase = std::exp(kI * lambda * (t + f.phase_rate * st));
    return phase * (hermite_h(f.nu, y, policy) + f.c * hermite_h(f.nu - 1.0, y, policy));
}

Jet2 a2_fundamental_quasienergy_jet(double t, const FieldConfig& cfg,
                                    double lambda, const EvalPolicy& policy) {
    if (!(t > 0.0))
        throw DomainError("a2_fundamental_quasienergy_jet: t must be > 0");
    const auto f = quasi_form(cfg, lambda);
    const double st = std::sqrt(t);
    const ComplexScalar y = f.s * (st + f.shift);
    const ComplexScalar dy = 0.5 * f.s / st;
    const ComplexScalar ddy = -0.25 * f.s / (t * st);

    const ComplexScalar h0 = hermite_h(f.nu, y, policy);
    const ComplexScalar h1 = hermite_h(f.nu - 1.0, y, policy);
    const ComplexScalar h2 = hermite_h(f.nu - 2.0, y, policy);
    const ComplexScalar h3 = hermite_h(f.nu - 3.0, y, policy);

    const ComplexScalar W = h0 + f.c * h1;
    const ComplexScalar Wy = 2.0 * f.nu * h1 + f.c * 2.0 * (f.nu - 1.0) * h2;
    const ComplexScalar Wyy = 4.0 * f.nu * (f.nu - 1.0) * h2 +
                              f.c * 4.0 * (f.nu - 1.0) * (f.nu - 2.0) * h3;

    const ComplexScalar il = kI * f.lambda;
    const ComplexScalar dphi = il * (1.0 + 0.5 * f.phase_rate / st);
    const ComplexScalar ddphi = il * (-0.25 * f.phase_rate / (t * st));
    const ComplexScalar E = std::exp(il * (t + f.phase_rate * st));

    Jet2 jet;
    jet.f = E * W;
    jet.df = E * (dphi * W + Wy * dy);
    jet.ddf = E * ((ddphi + dphi * dphi) * W + 2.0 * dphi * Wy * dy +
                   Wyy * dy * dy + Wy * ddy);
    return jet;
}

BranchPairing pair_branches(const FieldConfig& cfg, const EvalPolicy& policy) {
    const auto qe = quasi_energies(cfg);
    const std::array<double, 5> probe_t = {0.5, 1.3, 2.2, 3.6, 5.0};

    BranchPairing out{};
    for (int which = 0; which < 2; ++which) {
        const double lambda = which == 0 ? qe.lambda1 : qe.lambda2;
        std::array<ComplexScalar, 5> quasi;
        for (std::size_t i = 0; i < probe_t.size(); ++i)
            quasi[i] = a2_fundamental_quasienergy(probe_t[i], cfg, lambda, policy);

        double best_spread = 1e300;
        AlphaBranch best_branch = AlphaBranch::minus;
        int best_S = 1;
        ComplexScalar best_ratio = 0.0;
        for (AlphaBranch branch : {AlphaBranch::minus, AlphaBranch::plus}) {
            for (int S : {1, -1}) {
                const auto params = fundamental_params_branch(cfg, S, branch);
                ComplexScalar mean = 0.0;
                std::array<ComplexScalar, 5> ratio;
                for (std::size_t i = 0; i < probe_t.size(); ++i) {
                    ratio[i] = a2_fundamental_hermite(probe_t[i], params, policy) / quasi[i];
                    mean += ratio[i];
                }
                mean /= double(probe_t.size());
                double spread = 0.0;
                for (const auto& r : ratio)
                    spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
                if (spread < best_spread) {
                    best_spread = spread;
                    best_branch = branch;
                    best_S = S;
                    best_ratio = mean;
                }
            }
        }
        if (which == 0) {
            out.branch_lambda1 = best_branch;
            out.S_lambda1 = best_S;
            out.ratio_lambda1 = best_ratio;
            out.spread_lambda1 = best_spread;
        } else {
            out.branch_lambda2 = best_branch;
            out.S_lambda2 = best_S;
            out.ratio_lambda2 = best_ratio;
            out.spread_lambda2 = best_spread;
        }
    }
    return out;
}

ComplexScalar a2_general(double t, const SolutionCoefficients& coeffs,
                         const FieldConfig& cfg, const EvalPolicy& policy) {
    cfg.validate();
    if (cfg.Delta1 == 0.0)
        return rabi_solution(t, coeffs, cfg.U0, cfg.Delta0).a2;
    const auto qe = quasi_energies(cfg);
    return coeffs.C1 * a2_fundamental_quasienergy(t, cfg, qe.lambda1, policy) +
           coeffs.C2 * a2_fundamental_quasienergy(t, cfg, qe.lambda2, policy);
}

Jet2 a2_general_jet(double t, const SolutionCoefficients& coeffs,
                    const FieldConfig& cfg, const EvalPolicy& policy) {
    cfg.validate();
    if (cfg.Delta1 == 0.0)
        return rabi_a2_jet(t, coeffs, cfg.U0, cfg.Delta0);
    const auto qe = quasi_energies(cfg);
    const Jet2 j1 = a2_fundamental_quasienergy_jet(t, cfg, qe.lambda1, policy);
    const Jet2 j2 = a2_fundamental_quasienergy_jet(t, cfg, qe.lambda2, policy);
    return {coeffs.C1 * j1.f + coeffs.C2 * j2.f,
            coeffs.C1 * j1.df + coeffs.C2 * j2.df,
            coeffs.C1 * j1.ddf + coeffs.C2 * j2.ddf};
}

ComplexScalar a1_from_a2(double t, ComplexScalar a2_deriv, const FieldConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0))
        throw DomainError("a1_from_a2: t must be > 0 (use limit_at_zero)");
    return kI * a2_deriv / (cfg.U0 * std::exp(kI * phase(t, cfg)));
}

AmplitudePair amplitudes(double t, const SolutionCoefficients& coeffs,
                         const FieldConfig& cfg, const EvalPolicy& policy) {
    if (cfg.Delta1 == 0.0)
        return rabi_solution(t, coeffs, cfg.U0, cfg.Delta0);
    const Jet2 jet = a2_general_jet(t, coeffs, cfg, policy);
    return {a1_from_a2(t, jet.df, cfg), jet.f};
}

SolutionCoefficients solve_ivp_coefficients(const AmplitudePair& initial,
                                            const FieldConfig& cfg,
                                            const EvalPolicy& policy,
                                            bool allow_unnormalized) {
    cfg.validate();
    if (!allow_unnormalized && std::fabs(initial.norm() - 1.0) > 1e-10)
        throw DomainError("solve_ivp_coefficients: initial state must be normalized");

    ComplexScalar u1, u2, v1, v2;
    if (cfg.Delta1 == 0.0) {
        const auto qe = quasi_energies(cfg);
        u1 = u2 = 1.0;
        v1 = -qe.lambda1 / cfg.U0;
        v2 = -qe.lambda2 / cfg.U0;
    } else {
        const auto qe = quasi_energies(cfg);
        const Jet2 j1 = a2_fundamental_quasienergy_jet(kMatchTime, cfg, qe.lambda1, policy);
        const Jet2 j2 = a2_fundamental_quasienergy_jet(kMatchTime, cfg, qe.lambda2, policy);
        u1 = j1.f;
        u2 = j2.f;
        v1 = a1_from_a2(kMatchTime, j1.df, cfg);
        v2 = a1_from_a2(kMatchTime, j2.df, cfg);
    }

    // [u1 u2; v1 v2] [C1; C2] = [a2; a1]
    const ComplexScalar det = u1 * v2 - u2 * v1;
    const double scale = std::abs(u1) + std::abs(u2) + std::abs(v1) + std::abs(v2);
    if (std::abs(det) * 1e12 < scale * scale)
        throw SingularMatch("solve_ivp_coefficients: matching system is singular");
    return {(initial.a2 * v2 - initial.a1 * u2) / det,
            (initial.a1 * u1 - initial.a2 * v1) / det};
}

AmplitudePair limit_at_zero(const SolutionCoefficients& coeffs,
                            const FieldConfig& cfg, const EvalPolicy& policy) {
    return amplitudes(kMatchTime, coeffs, cfg, policy);
}

ScatteringAtZero scattering_a2_at_zero(const FieldConfig& cfg,
                                       const EvalPolicy& policy) {
    cfg.validate();
    if (!(cfg.Delta0 > 0.0))
        throw ConventionError("scattering_a2_at_zero: requires Delta0 > 0");
    const auto dp = dimensionless_params(cfg);
    const double C1 = c1_normalization(cfg);
    // The root pairs with the upper quasi-energy only for Delta1 < 0; the
    // opposite sign of Delta1 needs the other square-root branch (checked
    // against oracle transport of the upper-branch solution).
    const double root_sign = cfg.Delta1 <= 0.0 ? 1.0 : -1.0;
    const ComplexScalar root = std::sqrt(dp.xi * dp.xi - 2.0 * dp.nu);
    const ComplexScalar coeff = -dp.xi + root_sign * root;
    const ComplexScalar a2_0 =
        C1 * (hermite_h(dp.nu, dp.xi, policy) +
              coeff * hermite_h(dp.nu - 1.0, dp.xi, policy));
    ScatteringAtZero out;
    out.a2_0 = a2_0;
    out.p2 = std::norm(a2_0);
    out.p1 = 1.0 - out.p2;
    return out;
}

ComplexScalar approx_weak_field(const FieldConfig& cfg) {
    cfg.validate();
    if (!(cfg.Delta0 > 0.0))
        throw ConventionError("approx_weak_field: requires Delta0 > 0");
    const auto dp = dimensionless_params(cfg);
    const double C1 = c1_normalization(cfg);
    const ComplexScalar xi2 = dp.xi * dp.xi;
    const ComplexScalar factor = std::sqrt(xi2) - dp.xi;
    return C1 * (1.0 + 0.5 * kSqrtPi * factor * std::exp(xi2) *
                           specfun::erfc_complex(dp.xi));
}

ComplexScalar approx_strong_field(const FieldConfig& cfg) {
    cfg.validate();
    if (!(cfg.Delta0 > 0.0))
        throw ConventionError("approx_strong_field: requires Delta0 > 0");
    const auto dp = dimensionless_params(cfg);
    const double C1 = c1_normalization(cfg);
    const ComplexScalar nu = dp.nu;
    return C1 * kSqrtPi * std::pow(ComplexScalar(2.0), nu) *
           (std::sqrt(-nu) / (std::sqrt(2.0) * specfun::gamma_complex(1.0 - 0.5 * nu)) +
            specfun::recip_gamma(0.5 * (1.0 - nu)));
}

AmplitudePair rabi_solution(double t, const SolutionCoefficients& coeffs,
                            double U0, double Delta0) {
    const double R = std::sqrt(0.25 * Delta0 * Delta0 + U0 * U0);
    const double l1 = 0.5 * Delta0 + R;
    const double l2 = 0.5 * Delta0 - R;
    AmplitudePair out;
    out.a2 = coeffs.C1 * std::exp(kI * l1 * t) + coeffs.C2 * std::exp(kI * l2 * t);
    out.a1 = -coeffs.C1 * (l1 / U0) * std::exp(kI * (l1 - Delta0) * t) -
             coeffs.C2 * (l2 / U0) * std::exp(kI * (l2 - Delta0) * t);
    return out;
}

Jet2 rabi_a2_jet(double t, const SolutionCoefficients& coeffs, double U0,
                 double Delta0) {
    const double R = std::sqrt(0.25 * Delta0 * Delta0 + U0 * U0);
    const double l1 = 0.5 * Delta0 + R;
    const double l2 = 0.5 * Delta0 - R;
    const ComplexScalar e1 = coeffs.C1 * std::exp(kI * l1 * t);
    const ComplexScalar e2 = coeffs.C2 * std::exp(kI * l2 * t);
    return {e1 + e2, kI * (l1 * e1 + l2 * e2), -(l1 * l1 * e1 + l2 * l2 * e2)};
}

} // namespace ivsqrt
