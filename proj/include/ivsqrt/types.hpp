#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ivsqrt {

// Universal numeric currency of every formula in this library.
using ComplexScalar = std::complex<double>;

inline constexpr ComplexScalar kImagUnit{0.0, 1.0};

// Tunables for the series/asymptotic special-function kernel.
// asymptotic_threshold acts on |z^2| for the Hermite-function evaluation.
struct EvalPolicy {
    double rel_tol = 1e-12;
    int max_terms = 1000;
    double asymptotic_threshold = 30.0;

    void validate() const;

    // Parses "rel_tol=1e-14,max_terms=500,asymptotic_threshold=25" from the
    // named environment variable; unset fields keep their defaults.
    static EvalPolicy from_env(const char* var = "IVSQRT_EVAL_POLICY");
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define IVSQRT_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                          \
        explicit Name(const std::string& what) : Error(what) {}    \
    }

IVSQRT_DEFINE_ERROR(DomainError);          // argument outside an operation's domain
IVSQRT_DEFINE_ERROR(PoleError);            // gamma evaluated at a non-positive integer
IVSQRT_DEFINE_ERROR(ParameterPole);        // series parameter lands on a pole
IVSQRT_DEFINE_ERROR(NoConvergence);        // series exceeded max_terms before rel_tol
IVSQRT_DEFINE_ERROR(OverflowError);        // result not representable in double
IVSQRT_DEFINE_ERROR(ConventionError);      // Delta0 <= 0 where the scattering convention requires Delta0 > 0
IVSQRT_DEFINE_ERROR(SingularMatch);        // ill-conditioned initial-value match
IVSQRT_DEFINE_ERROR(UnsupportedClass);     // class index other than k = 1
IVSQRT_DEFINE_ERROR(DegenerateRecurrence); // vanishing leading recurrence coefficient
IVSQRT_DEFINE_ERROR(TruncationError);      // non-terminating series truncated above tolerance
IVSQRT_DEFINE_ERROR(StepLimitExceeded);    // integrator ran out of steps
IVSQRT_DEFINE_ERROR(ToleranceUnachievable); // integrator step size underflowed

#undef IVSQRT_DEFINE_ERROR

} // namespace ivsqrt
