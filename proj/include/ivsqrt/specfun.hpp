#pragma once

#include "ivsqrt/types.hpp"

namespace ivsqrt::specfun {

// Euler gamma function. Lanczos approximation on re(z) >= 0.5, reflection
// formula otherwise. Throws PoleError at non-positive integers.
ComplexScalar gamma_complex(ComplexScalar z);

// 1/Gamma(z). Entire; returns exactly 0 at the non-positive integers.
ComplexScalar recip_gamma(ComplexScalar z);

// Complementary error function, analytically continued to complex z.
// Taylor series for |z| <= 4, rational Faddeeva-style approximation beyond.
ComplexScalar erfc_complex(ComplexScalar z);

// Confluent hypergeometric M(a, b, z) by Taylor series; the Kummer
// transformation M(a,b,z) = e^z M(b-a, b, -z) is applied for re(z) < 0.
// The sum is accumulated in compensated double-double arithmetic so that the
// cancellation of oscillatory arguments does not limit the result.
ComplexScalar kummer_m(ComplexScalar a, ComplexScalar b, ComplexScalar z,
                       const EvalPolicy& policy = {});

// Hermite function of arbitrary complex order and argument,
//   H_nu(z) = 2^nu sqrt(pi) [ M(-nu/2, 1/2, z^2) / Gamma((1-nu)/2)
//                             - 2 z M((1-nu)/2, 3/2, z^2) / Gamma(-nu/2) ],
// switching to the large-argument expansion (with the sector-correct
// exponential term for re(z) < 0) once |z^2| exceeds
// policy.asymptotic_threshold. All fractional powers are principal-branch.
//
// Accuracy note: in the exponential-dominant sector |arg z| < pi/4 the two
// Kummer terms cancel by a factor ~e^{re(z^2)}, and below the threshold the
// result is limited to roughly 1e-16 * e^{re(z^2)} relative error by the
// gamma coefficients. On oscillatory arguments (re(z^2) <= 0, where this
// model lives) the kernel holds ~1e-13 throughout.
ComplexScalar hermite_h(ComplexScalar nu, ComplexScalar z,
                        const EvalPolicy& policy = {});

// d/dz H_nu(z) = 2 nu H_{nu-1}(z).
ComplexScalar hermite_h_derivative(ComplexScalar nu, ComplexScalar z,
                                   const EvalPolicy& policy = {});

// Both evaluation routes at the same point, regardless of the threshold.
// Used to probe continuity across the series/asymptotic crossover; each
// member is only trustworthy on its own side of the threshold.
struct HermitePair {
    ComplexScalar series;
    ComplexScalar asymptotic;
};
HermitePair hermite_h_both(ComplexScalar nu, ComplexScalar z,
                           const EvalPolicy& policy = {});

// True when |z^2| falls within ~15% of the crossover threshold, where the
// two routes meet and a cautious caller may want to cross-check them.
bool in_crossover_band(ComplexScalar z, const EvalPolicy& policy = {});

} // namespace ivsqrt::specfun
