#pragma once

#include "ivsqrt/field_model.hpp"
#include "ivsqrt/types.hpp"

namespace ivsqrt {

// Probability amplitudes of the two states at one time point.
struct AmplitudePair {
    ComplexScalar a1;
    ComplexScalar a2;
    double norm() const; // |a1|^2 + |a2|^2
};

// Weights of the lambda1- and lambda2-branch fundamental solutions.
struct SolutionCoefficients {
    ComplexScalar C1;
    ComplexScalar C2;
};

// Root choice for the exponent pair (alpha0, alpha2). The minus branch is
// the conventional one; the plus branch generates the other quasi-energy
// family.
enum class AlphaBranch { minus, plus };

enum class QuasiBranch { lambda1, lambda2 };

// Parameters of the Hermite-form fundamental solution
//   a2F(t) = e^{alpha0 sqrt(t) + alpha2 t/2} (A H_m(y) + H_{m-1}(y)),
//   m = -alpha/epsilon,  y = S sqrt(-epsilon/2) (sqrt(t) + delta/epsilon),
//   A = S sqrt(-epsilon/2) (delta - q) / alpha.
// For this model class alpha1 = 0, gamma = -1 and q = alpha0 identically.
struct FundamentalParams {
    ComplexScalar alpha0;
    ComplexScalar alpha1; // always 0 here
    ComplexScalar alpha2;
    ComplexScalar gamma; // always -1 here
    ComplexScalar delta;
    ComplexScalar epsilon;
    ComplexScalar alpha;
    ComplexScalar q;
    int S = 1; // +1 or -1
    ComplexScalar A;
    ComplexScalar y_scale; // S sqrt(-epsilon/2)
    ComplexScalar y_shift; // delta/epsilon
};

// Minus-sign exponents for both alphas (the conventional choice).
FundamentalParams fundamental_params(const FieldConfig& cfg, int S);

// Explicit exponent-branch control; needed to realize both quasi-energy
// families in Hermite form.
FundamentalParams fundamental_params_branch(const FieldConfig& cfg, int S,
                                            AlphaBranch branch);

// Value and first two t-derivatives of a solution at one point.
struct Jet2 {
    ComplexScalar f;
    ComplexScalar df;
    ComplexScalar ddf;
};

// Hermite-form fundamental solution and its analytic derivatives.
ComplexScalar a2_fundamental_hermite(double t, const FundamentalParams& params,
                                     const EvalPolicy& policy = {});
Jet2 a2_fundamental_hermite_jet(double t, const FundamentalParams& params,
                                const EvalPolicy& policy = {});

// Quasi-energy form of the fundamental solution,
//   a2F = e^{i lambda (t + Delta1 sqrt(t)/(lambda - Delta0/2))}
//         (F + i sqrt(t) (Delta0-2 lambda)/(Delta1 (Delta0-lambda)) dF/dt),
// with F a Hermite function of order i Delta1^2 U0^2 * (-2)/(Delta0-2 lambda)^3.
// lambda must be one of the two quasi-energies; Delta1 = 0 is rejected
// (DomainError) because of the 1/Delta1 factor - use rabi_solution there.
ComplexScalar a2_fundamental_quasienergy(double t, const FieldConfig& cfg,
                                         double lambda,
                                         const EvalPolicy& policy = {});
Jet2 a2_fundamental_quasienergy_jet(double t, const FieldConfig& cfg,
                                    double lambda,
                                    const EvalPolicy& policy = {});

// Numerically determined correspondence between the Hermite-form solutions
// (exponent branch, S) and the quasi-energy branches: the combination whose
// pointwise ratio to the quasi-energy form is constant in t. The convention
// is deliberately not hard-coded; this measures it.
struct BranchPairing {
    AlphaBranch branch_lambda1;
    int S_lambda1;
    ComplexScalar ratio_lambda1; // a2_hermite / a2_quasienergy, constant
    double spread_lambda1;       // relative spread of that ratio over the probe grid
    AlphaBranch branch_lambda2;
    int S_lambda2;
    ComplexScalar ratio_lambda2;
    double spread_lambda2;
};
BranchPairing pair_branches(const FieldConfig& cfg, const EvalPolicy& policy = {});

// General solution C1 a2F|_lambda1 + C2 a2F|_lambda2. A Delta1 = 0 input is
// routed to the constant-detuning (Rabi) closed form, which is regular there.
ComplexScalar a2_general(double t, const SolutionCoefficients& coeffs,
                         const FieldConfig& cfg, const EvalPolicy& policy = {});
Jet2 a2_general_jet(double t, const SolutionCoefficients& coeffs,
                    const FieldConfig& cfg, const EvalPolicy& policy = {});

// a1 = i a2' / (U0 e^{i delta(t)}), delta(t) the accumulated phase.
// t = 0 is rejected; use limit_at_zero.
ComplexScalar a1_from_a2(double t, ComplexScalar a2_deriv, const FieldConfig& cfg);

// Both amplitudes of the general solution at t > 0.
AmplitudePair amplitudes(double t, const SolutionCoefficients& coeffs,
                         const FieldConfig& cfg, const EvalPolicy& policy = {});

// Matching time for initial-value problems. Amplitudes are matched here
// rather than at the singular point t = 0.
inline constexpr double kMatchTime = 1e-6;

// Coefficients (C1, C2) such that the general solution reproduces `initial`
// at t = kMatchTime. The initial state must be normalized to 1 within 1e-10
// unless allow_unnormalized (linearity probes) is set. Throws SingularMatch
// if the 2x2 match is numerically singular.
SolutionCoefficients solve_ivp_coefficients(const AmplitudePair& initial,
                                            const FieldConfig& cfg,
                                            const EvalPolicy& policy = {},
                                            bool allow_unnormalized = false);

// Finite t -> 0 limit of the amplitudes, evaluated at kMatchTime.
AmplitudePair limit_at_zero(const SolutionCoefficients& coeffs,
                            const FieldConfig& cfg,
                            const EvalPolicy& policy = {});

// Amplitude of the second state at the start of the interaction for the
// solution that ends purely in the upper quasi-energy state, together with
// the level populations it implies. Requires Delta0 > 0.
struct ScatteringAtZero {
    ComplexScalar a2_0;
    double p1;
    double p2;
};
ScatteringAtZero scattering_a2_at_zero(const FieldConfig& cfg,
                                       const EvalPolicy& policy = {});

// Weak-field (U0 -> 0) closed-form approximation of that amplitude.
ComplexScalar approx_weak_field(const FieldConfig& cfg);

// Strong-field (U0 -> infinity) zero-order approximation.
ComplexScalar approx_strong_field(const FieldConfig& cfg);

// Constant-detuning (Rabi) solution:
//   a2 = C1 e^{i lambda1 t} + C2 e^{i lambda2 t},
//   a1 = -C1 (lambda1/U0) e^{i(lambda1-Delta0)t} - C2 (lambda2/U0) e^{i(lambda2-Delta0)t}.
AmplitudePair rabi_solution(double t, const SolutionCoefficients& coeffs,
                            double U0, double Delta0);
Jet2 rabi_a2_jet(double t, const SolutionCoefficients& coeffs, double U0,
                 double Delta0);

} // namespace ivsqrt
