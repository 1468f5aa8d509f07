#pragma once

#include <vector>

#include "ivsqrt/field_model.hpp"
#include "ivsqrt/types.hpp"

namespace ivsqrt::heun {

// One member of the family of field configurations U = U0* z^k dz/dt,
// delta_t = (d1/z + d0 + d2 z) dz/dt reducible to the bi-confluent Heun
// equation. Only the k = 1 class is executable here.
struct ClassConfig {
    double k = 1.0;
    ComplexScalar U0_star;
    ComplexScalar d0;
    ComplexScalar d1;
    ComplexScalar d2;
};

// The k = 1 member realizing the inverse-square-root model through z = sqrt(t):
// U0* = 2 U0, d0 = 2 Delta1, d1 = 0, d2 = 2 Delta0.
ClassConfig model_class_config(const FieldConfig& cfg);

// Bi-confluent Heun equation coefficients and the pre-factor exponents of the
// solution ansatz z^{alpha1} e^{alpha0 z + alpha2 z^2 / 2} H_B(z).
struct BiconfluentParams {
    ComplexScalar gamma;
    ComplexScalar delta;
    ComplexScalar epsilon;
    ComplexScalar alpha;
    ComplexScalar q;
    ComplexScalar alpha0;
    ComplexScalar alpha1;
    ComplexScalar alpha2;
};

// Constructs the parameters for the k = 1 class with the model's exponent
// branch (alpha1 = 0, minus roots for alpha0 and alpha2).
// Throws UnsupportedClass for k != 1.
BiconfluentParams biconfluent_params(const ClassConfig& cc);

// Coefficients of the Hermite-function expansion
//   H_B = sum_n c_n H_{n + gamma - alpha/epsilon}( s0 (z + delta/epsilon) ),
// s0 = s0_sign * sqrt(-epsilon/2), c_0 = 1, obeying the three-term recurrence
//   R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2} = 0.
struct HermiteSeries {
    std::vector<ComplexScalar> coefficients;
    int s0_sign = 1;
    ComplexScalar shift;      // delta/epsilon
    ComplexScalar order_base; // gamma - alpha/epsilon; term n has order n + order_base
};
HermiteSeries hermite_series_coeffs(const BiconfluentParams& bp, int s0_sign,
                                    int n_max);

// True iff the expansion terminates after index N: the exponent condition
// gamma = -N together with the degree-(N+1) accessory condition on q.
// N = 0 and N = 1 use the closed conditions; higher N evaluates the
// recurrence numerically.
bool termination_check(const BiconfluentParams& bp, int N);

// Classification of a (k, d1, gamma) combination by whether series
// termination constrains the field parameters.
enum class Solvability {
    exactly_solvable_new_model,       // gamma = -1, k = 1, d1 = 0
    exactly_solvable_hypergeometric,  // gamma = 0, k = 0, d1 = 0
    conditionally_integrable,         // termination ties field parameters together
    non_terminating,
};
Solvability exact_solvability_check(const ClassConfig& cc, ComplexScalar gamma);

// Value of H_B at z by the Hermite-term sum. Terminating series are summed
// exactly; otherwise the tail estimate must fall below policy.rel_tol or a
// TruncationError is thrown.
ComplexScalar hb_series_eval(const HermiteSeries& series,
                             const BiconfluentParams& bp, ComplexScalar z,
                             const EvalPolicy& policy = {});

// Full solution assembly z^{alpha1} e^{alpha0 z + alpha2 z^2/2} H_B(z).
// At z = sqrt(t) this reproduces the Hermite-form fundamental solution of
// the two-state problem with S matched to s0_sign.
ComplexScalar solution_from_series(const HermiteSeries& series,
                                   const BiconfluentParams& bp, ComplexScalar z,
                                   const EvalPolicy& policy = {});

} // namespace ivsqrt::heun
