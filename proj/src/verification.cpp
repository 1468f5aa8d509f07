#include "ivsqrt/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ivsqrt/closed_form.hpp"
#include "ivsqrt/field_model.hpp"
#include "ivsqrt/heun.hpp"
#include "ivsqrt/ode_oracle.hpp"
#include "ivsqrt/specfun.hpp"
#include "ivsqrt/sweep.hpp"

namespace ivsqrt::verify {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
const FieldConfig kFig1{1.0, 4.0, -5.0};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// Shared random-config draw: Delta0 in [1,6], Delta1 in [-6,6] away from 0,
// U0 in [0.3,3].
std::vector<FieldConfig> random_configs(unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d0(1.0, 6.0);
    std::uniform_real_distribution<double> d1(-6.0, 6.0);
    std::uniform_real_distribution<double> u0(0.3, 3.0);
    std::vector<FieldConfig> out;
    while (static_cast<int>(out.size()) < count) {
        FieldConfig cfg{u0(rng), d0(rng), d1(rng)};
        if (std::fabs(cfg.Delta1) < 0.1)
            continue;
        out.push_back(cfg);
    }
    return out;
}

struct TrajectoryComparison {
    double max_a2_diff = 0.0;
    double max_norm_dev_analytic = 0.0;
    double oracle_norm_drift = 0.0;
};

// Shared engine for criteria 1 and 9: analytic trajectory from an
// initial-value match vs the adaptive integration, from kMatchTime to 20.
TrajectoryComparison compare_with_oracle(const FieldConfig& cfg,
                                         const EvalPolicy& policy) {
    const AmplitudePair initial{1.0, 0.0};
    const auto coeffs = solve_ivp_coefficients(initial, cfg, policy);

    oracle::IntegrationSpec spec;
    spec.t_start = kMatchTime;
    spec.t_end = 20.0;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-12;
    spec.output_grid = sweep::linspace(kMatchTime, 20.0, 201);
    const auto traj = oracle::integrate_two_state(cfg, initial, spec);

    TrajectoryComparison out;
    out.oracle_norm_drift = traj.norm_drift;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const AmplitudePair analytic = amplitudes(t, coeffs, cfg, policy);
        out.max_a2_diff = std::max(out.max_a2_diff,
                                   std::abs(analytic.a2 - traj.states[i].a2));
        out.max_norm_dev_analytic =
            std::max(out.max_norm_dev_analytic, std::fabs(analytic.norm() - 1.0));
    }
    return out;
}

CriterionResult criterion_oracle_equivalence(const EvalPolicy& policy) {
    CriterionResult r{1, "oracle equivalence of the analytic solution", false, ""};
    double worst = 0.0;
    auto configs = random_configs(20260811u, 10);
    configs.insert(configs.begin(), kFig1);
    for (const auto& cfg : configs)
        worst = std::max(worst, compare_with_oracle(cfg, policy).max_a2_diff);
    r.passed = worst <= 1e-6;
    r.detail = "max |a2_analytic - a2_ode| = " + fmt(worst) +
               " over 11 configs, t in [0,20] (tol 1e-6)";
    return r;
}

CriterionResult criterion_ode_residual(const EvalPolicy& policy) {
    CriterionResult r{2, "second-order equation residual of both closed forms", false, ""};
    std::mt19937 rng(31337u);
    std::uniform_real_distribution<double> tdraw(0.0, 1.0);
    double worst = 0.0;
    for (const auto& cfg : random_configs(777u, 10)) {
        const auto qe = quasi_energies(cfg);
        const auto pp = fundamental_params(cfg, +1);
        const auto pm = fundamental_params(cfg, -1);
        for (int i = 0; i < 50; ++i) {
            const double t = std::max(20.0 * tdraw(rng), 1e-4);
            for (const Jet2& jet :
                 {a2_fundamental_hermite_jet(t, pp, policy),
                  a2_fundamental_hermite_jet(t, pm, policy),
                  a2_fundamental_quasienergy_jet(t, cfg, qe.lambda1, policy),
                  a2_fundamental_quasienergy_jet(t, cfg, qe.lambda2, policy)}) {
                worst = std::max(worst, oracle::second_order_residual(
                                            jet.f, jet.df, jet.ddf, t, cfg));
            }
        }
    }
    r.passed = worst <= 1e-8;
    r.detail = "max relative residual = " + fmt(worst) +
               " over 10 configs x 50 t x 4 forms (tol 1e-8)";
    return r;
}

CriterionResult criterion_equivalences(const EvalPolicy& policy) {
    CriterionResult r{3, "representation and constant equivalences", false, ""};

    double worst_spread = 0.0;
    auto configs = random_configs(424242u, 3);
    configs.insert(configs.begin(), kFig1);
    for (const auto& cfg : configs) {
        const auto pairing = pair_branches(cfg, policy);
        worst_spread = std::max({worst_spread, pairing.spread_lambda1,
                                 pairing.spread_lambda2});
    }

    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> d0(0.5, 8.0);
    std::uniform_real_distribution<double> d1(-8.0, 8.0);
    std::uniform_real_distribution<double> u0(0.1, 10.0);
    double worst_c1 = 0.0;
    int done = 0;
    while (done < 100) {
        FieldConfig cfg{u0(rng), d0(rng), d1(rng)};
        if (std::fabs(cfg.Delta1) < 1e-3)
            continue;
        ++done;
        const double a = c1_normalization(cfg);
        const double b = c1_normalization_dimensionless(cfg);
        worst_c1 = std::max(worst_c1, std::fabs(a - b) / a);
    }

    const double c1_a = c1_normalization(kFig1);
    const double c1_b = c1_normalization_dimensionless(kFig1);
    const bool desk = std::fabs(c1_a - 0.14811) < 1e-5 && std::fabs(c1_b - 0.14811) < 1e-5;

    r.passed = worst_spread <= 1e-8 && worst_c1 <= 1e-10 && desk;
    r.detail = "branch-ratio spread = " + fmt(worst_spread) +
               " (tol 1e-8); C1 form disagreement = " + fmt(worst_c1) +
               " (tol 1e-10); C1(1,4,-5) = " + fmt(c1_a) + " vs 0.14811";
    return r;
}

CriterionResult criterion_series_termination(const EvalPolicy& policy) {
    CriterionResult r{4, "Hermite-series termination on the second term", false, ""};
    double worst_tail = 0.0;
    bool perturbed_breaks = true;
    for (const auto& cfg : random_configs(515151u, 50)) {
        const auto bp = heun::biconfluent_params(heun::model_class_config(cfg));
        const auto series = heun::hermite_series_coeffs(bp, +1, 8);
        const double head = std::max(std::abs(series.coefficients[0]),
                                     std::abs(series.coefficients[1]));
        worst_tail = std::max(worst_tail,
                              std::max(std::abs(series.coefficients[2]),
                                       std::abs(series.coefficients[3])) / head);
        auto bp_bad = bp;
        bp_bad.q += 0.1;
        const auto broken = heun::hermite_series_coeffs(bp_bad, +1, 4);
        if (std::abs(broken.coefficients[2]) <= 1e-6 * head ||
            heun::termination_check(bp_bad, 1))
            perturbed_breaks = false;
    }

    double worst_match = 0.0;
    const auto bp = heun::biconfluent_params(heun::model_class_config(kFig1));
    for (int s0 : {+1, -1}) {
        const auto series = heun::hermite_series_coeffs(bp, s0, 8);
        const auto params = fundamental_params(kFig1, s0);
        for (double t : {0.25, 1.0, 4.0}) {
            const ComplexScalar via_series =
                heun::solution_from_series(series, bp, std::sqrt(t), policy);
            const ComplexScalar via_closed =
                a2_fundamental_hermite(t, params, policy);
            worst_match = std::max(worst_match, std::abs(via_series - via_closed) /
                                                    std::abs(via_closed));
        }
    }

    r.passed = worst_tail <= 1e-12 && perturbed_breaks && worst_match <= 1e-10;
    r.detail = "max |c2|,|c3| / head = " + fmt(worst_tail) +
               " (tol 1e-12); q+0.1 breaks termination: " +
               (perturbed_breaks ? "yes" : "NO") +
               "; series vs closed form = " + fmt(worst_match) + " (tol 1e-10)";
    return r;
}

CriterionResult criterion_asymptotics(const EvalPolicy& policy) {
    CriterionResult r{5, "large-t asymptote constancy and prefactor", false, ""};
    const auto tgrid = sweep::logspace(1e3, 1e4, 25);

    // Constancy of the stripped modulus. The subleading correction of the
    // upper branch decays like |Delta1 lambda1 / (4R^2)| / sqrt(t); the probe
    // configs keep that coefficient small enough for the 1% window.
    const std::vector<FieldConfig> constancy_cfgs = {
        {1.0, 4.0, -1.0}, {1.0, 6.0, -2.0}, {0.6, 5.0, -1.5}};
    double worst_flatness = 0.0;
    for (const auto& cfg : constancy_cfgs) {
        const auto qe = quasi_energies(cfg);
        for (double lambda : {qe.lambda1, qe.lambda2}) {
            double lo = 1e300, hi = 0.0, mean = 0.0;
            for (double t : tgrid) {
                const double m = std::abs(a2_fundamental_quasienergy(t, cfg, lambda, policy));
                lo = std::min(lo, m);
                hi = std::max(hi, m);
                mean += m;
            }
            mean /= double(tgrid.size());
            worst_flatness = std::max(worst_flatness,
                                      std::max(hi - mean, mean - lo) / mean);
        }
    }

    // Prefactor disambiguation on the lower branch at the canonical config:
    // the plateau modulus decides between exp(pi nu0 / 4) and exp(pi nu0).
    const auto qe = quasi_energies(kFig1);
    const auto dp = dimensionless_params(kFig1);
    double plateau = 0.0;
    for (double t : tgrid)
        plateau += std::abs(a2_fundamental_quasienergy(t, kFig1, qe.lambda2, policy));
    plateau /= double(tgrid.size());
    const double quarter = std::exp(kPi * dp.nu0 / 4.0);
    const double full = std::exp(kPi * dp.nu0);
    const double dev_quarter = std::fabs(plateau / quarter - 1.0);
    const double dev_full = std::fabs(plateau / full - 1.0);

    r.passed = worst_flatness <= 0.01 && dev_quarter <= 0.01 && dev_full > 0.5;
    r.detail = "stripped-modulus flatness = " + fmt(worst_flatness) +
               " (tol 0.01); lambda2 plateau/exp(pi nu0/4) - 1 = " + fmt(dev_quarter) +
               ", plateau/exp(pi nu0) - 1 = " + fmt(dev_full) +
               " -> quarter-exponent prefactor confirmed for both branches";
    return r;
}

CriterionResult criterion_scattering(const EvalPolicy& policy) {
    CriterionResult r{6, "start-of-interaction population and field-strength limits", false, ""};

    double min_p2 = 1e300;
    for (double u0 : sweep::logspace(0.1, 100.0, 50))
        min_p2 = std::min(min_p2,
                          scattering_a2_at_zero({u0, 4.0, -5.0}, policy).p2);

    auto weak_err = [&](double u0) {
        const auto exact = scattering_a2_at_zero({u0, 4.0, -5.0}, policy);
        const double approx = std::norm(approx_weak_field({u0, 4.0, -5.0}));
        return std::fabs(exact.p2 - approx);
    };
    auto strong_err = [&](double u0) {
        const auto exact = scattering_a2_at_zero({u0, 4.0, -5.0}, policy);
        const double approx = std::norm(approx_strong_field({u0, 4.0, -5.0}));
        return std::fabs(exact.p2 - approx);
    };
    const std::vector<double> weak_grid = {0.2, 0.1, 0.05, 0.02};
    const std::vector<double> strong_grid = {20.0, 50.0, 100.0, 200.0};
    std::vector<double> weak_errors, strong_errors;
    for (double u : weak_grid)
        weak_errors.push_back(weak_err(u));
    for (double u : strong_grid)
        strong_errors.push_back(strong_err(u));
    const bool weak_monotone = std::is_sorted(weak_errors.rbegin(), weak_errors.rend());
    const bool strong_monotone =
        std::is_sorted(strong_errors.begin(), strong_errors.end(),
                       std::greater<double>());

    r.passed = min_p2 > 0.0 && weak_errors.back() <= 1e-3 &&
               strong_errors[2] <= 1e-2 && weak_monotone && strong_monotone;
    r.detail = "min p2(0) = " + fmt(min_p2) + " on U0 in [0.1,100]; weak err @0.02 = " +
               fmt(weak_errors.back()) + " (tol 1e-3, monotone: " +
               (weak_monotone ? "yes" : "NO") + "); strong err @100 = " +
               fmt(strong_errors[2]) + " (tol 1e-2, monotone: " +
               (strong_monotone ? "yes" : "NO") + ")";
    return r;
}

CriterionResult criterion_noncrossing_population(const EvalPolicy& policy) {
    CriterionResult r{7, "non-crossing quadrant keeps the first level populated", false, ""};
    const auto d0s = sweep::linspace(1.0, 8.0, 15);
    const auto d1s = sweep::linspace(1.0, 8.0, 15);
    double min_p1 = 1e300;
    for (double d0 : d0s)
        for (double d1 : d1s)
            min_p1 = std::min(min_p1,
                              scattering_a2_at_zero({1.0, d0, d1}, policy).p1);
    r.passed = min_p1 >= 0.8;
    r.detail = "min p1(0) = " + fmt(min_p1) +
               " on Delta0,Delta1 in [1,8]^2 at U0 = 1 (threshold 0.8)";
    return r;
}

CriterionResult criterion_kernel(const EvalPolicy& policy) {
    CriterionResult r{8, "special-function kernel identities", false, ""};
    std::mt19937 rng(2718u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto rand_c = [&](double scale) {
        return ComplexScalar(scale * unit(rng), scale * unit(rng));
    };

    // Integer orders against the classical polynomials.
    double worst_poly = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ComplexScalar z = rand_c(3.0 / std::sqrt(2.0));
        ComplexScalar hm1 = 0.0, h0 = 1.0;
        for (int n = 0; n <= 8; ++n) {
            const ComplexScalar impl = specfun::hermite_h(double(n), z, policy);
            worst_poly = std::max(worst_poly,
                                  std::abs(impl - h0) / std::max(std::abs(h0), 1.0));
            const ComplexScalar h1 = 2.0 * z * h0 - 2.0 * double(n) * hm1;
            hm1 = h0;
            h0 = h1;
        }
    }

    // Three-point recurrence at random complex order.
    double worst_rec = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ComplexScalar nu = rand_c(3.0 / std::sqrt(2.0));
        const ComplexScalar z = rand_c(4.0 / std::sqrt(2.0));
        const ComplexScalar up = specfun::hermite_h(nu + 1.0, z, policy);
        const ComplexScalar mid = specfun::hermite_h(nu, z, policy);
        const ComplexScalar dn = specfun::hermite_h(nu - 1.0, z, policy);
        worst_rec = std::max(worst_rec, std::abs(up - 2.0 * z * mid + 2.0 * nu * dn) /
                                            std::max(std::abs(up), 1.0));
    }

    // Derivative identity against an extrapolated central difference.
    double worst_der = 0.0;
    for (int i = 0; i < 30; ++i) {
        const ComplexScalar nu = rand_c(2.0);
        const ComplexScalar z = rand_c(2.0);
        const double h = 1e-3;
        auto f = [&](ComplexScalar x) { return specfun::hermite_h(nu, x, policy); };
        const ComplexScalar d1 = (f(z + h) - f(z - h)) / (2.0 * h);
        const ComplexScalar d2 = (f(z + 0.5 * h) - f(z - 0.5 * h)) / h;
        const ComplexScalar fd = (4.0 * d2 - d1) / 3.0; // Richardson step
        const ComplexScalar impl = specfun::hermite_h_derivative(nu, z, policy);
        worst_der = std::max(worst_der,
                             std::abs(impl - fd) / std::max(std::abs(fd), 1.0));
    }

    // Constant-detuning closed form against the integrator.
    const FieldConfig rabi_cfg{1.0, 4.0, 0.0};
    const auto coeffs = solve_ivp_coefficients({1.0, 0.0}, rabi_cfg, policy);
    oracle::IntegrationSpec spec;
    spec.t_start = 0.0;
    spec.t_end = 20.0;
    spec.output_grid = sweep::linspace(0.0, 20.0, 101);
    const auto traj = oracle::integrate_two_state(rabi_cfg, {1.0, 0.0}, spec);
    double worst_rabi = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto exact = rabi_solution(traj.times[i], coeffs, 1.0, 4.0);
        worst_rabi = std::max({worst_rabi, std::abs(exact.a2 - traj.states[i].a2),
                               std::abs(exact.a1 - traj.states[i].a1)});
    }

    r.passed = worst_poly <= 1e-10 && worst_rec <= 1e-9 && worst_der <= 1e-6 &&
               worst_rabi <= 1e-8;
    r.detail = "integer-order dev = " + fmt(worst_poly) +
               " (1e-10); recurrence = " + fmt(worst_rec) +
               " (1e-9); derivative vs FD = " + fmt(worst_der) +
               " (1e-6); Rabi vs oracle = " + fmt(worst_rabi) + " (1e-8)";
    return r;
}

CriterionResult criterion_conservation(const EvalPolicy& policy) {
    CriterionResult r{9, "norm conservation along analytic and numeric trajectories",
                      false, ""};
    double worst_analytic = 0.0, worst_oracle = 0.0;
    auto configs = random_configs(20260811u, 10);
    configs.insert(configs.begin(), kFig1);
    for (const auto& cfg : configs) {
        const auto cmp = compare_with_oracle(cfg, policy);
        worst_analytic = std::max(worst_analytic, cmp.max_norm_dev_analytic);
        worst_oracle = std::max(worst_oracle, cmp.oracle_norm_drift);
    }
    r.passed = worst_analytic <= 1e-8 && worst_oracle <= 10.0 * 1e-10;
    r.detail = "analytic norm deviation = " + fmt(worst_analytic) +
               " (tol 1e-8); oracle drift = " + fmt(worst_oracle) +
               " (tol 10 x rel_tol = 1e-9)";
    return r;
}

} // namespace

std::vector<std::string> criteria_names() {
    return {
        "oracle equivalence of the analytic solution",
        "second-order equation residual of both closed forms",
        "representation and constant equivalences",
        "Hermite-series termination on the second term",
        "large-t asymptote constancy and prefactor",
        "start-of-interaction population and field-strength limits",
        "non-crossing quadrant keeps the first level populated",
        "special-function kernel identities",
        "norm conservation along analytic and numeric trajectories",
    };
}

std::vector<CriterionResult> run_acceptance(const EvalPolicy& policy) {
    policy.validate();
    using Criterion = CriterionResult (*)(const EvalPolicy&);
    const Criterion criteria[] = {
        criterion_oracle_equivalence, criterion_ode_residual,
        criterion_equivalences,       criterion_series_termination,
        criterion_asymptotics,        criterion_scattering,
        criterion_noncrossing_population, criterion_kernel,
        criterion_conservation};
    const auto names = criteria_names();
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        try {
            out.push_back(criteria[i](policy));
        } catch (const std::exception& e) {
            // A throwing criterion is a failure, not a crash; a degraded
            // policy can push evaluations outside their validated range.
            out.push_back({int(i) + 1, names[i], false,
                           std::string("exception: ") + e.what()});
        }
    }
    return out;
}

} // namespace ivsqrt::verify
