#pragma once

#include <optional>

#include "ivsqrt/types.hpp"

namespace ivsqrt {

// Constant-amplitude driving field whose detuning falls off as the inverse
// square root of time: delta_t(t) = Delta0 + Delta1 / sqrt(t).
struct FieldConfig {
    double U0 = 1.0;     // Rabi frequency, > 0
    double Delta0 = 4.0; // asymptotic detuning
    double Delta1 = -5.0; // inverse-square-root detuning coefficient

    void validate() const; // throws DomainError on non-finite or U0 <= 0
};

// Instantaneous detuning Delta0 + Delta1/sqrt(t); t must be positive.
double detuning(double t, const FieldConfig& cfg);

// Accumulated phase delta(t) = Delta0 t + 2 Delta1 sqrt(t), gauge delta(0)=0.
double phase(double t, const FieldConfig& cfg);

// Resonance-crossing time Delta1^2/Delta0^2; present iff Delta0*Delta1 < 0.
std::optional<double> crossing_time(const FieldConfig& cfg);

// Effective Landau-Zener parameter of the locally linearized crossing,
// |Lambda| = |U0^2 Delta1^2 / (4 Delta0^3)|, with the sign reported
// separately and uninterpreted. slope is the local linearization rate
// Delta0^3 / (2 Delta1^2) of the detuning at the crossing.
struct LzParameter {
    double magnitude = 0.0;
    bool negative = false;
    double slope = 0.0;
};
LzParameter lz_parameter(const FieldConfig& cfg);

// Quasi-energies of the asymptotic constant-detuning problem.
struct QuasiEnergies {
    double lambda1; // Delta0/2 + R
    double lambda2; // Delta0/2 - R
    double R;       // sqrt(Delta0^2/4 + U0^2)
};
QuasiEnergies quasi_energies(const FieldConfig& cfg);

// The two real control parameters of the t = 0 amplitude, and their complex
// carriers: nu = i nu0, xi = (1 - i) xi0.
struct DimensionlessParams {
    double nu0; // U0^2 Delta1^2 / (4 R^3), always > 0
    double xi0; // Delta0 Delta1 / (4 R^(3/2))
    ComplexScalar nu;
    ComplexScalar xi;
};
DimensionlessParams dimensionless_params(const FieldConfig& cfg);

// Normalization constant of the solution that ends purely in the upper
// quasi-energy state. Requires Delta0 > 0 (ConventionError otherwise).
// Computed from the quasi-energy form; an equivalent expression in
// (nu0, xi0) is exposed for cross-checking.
double c1_normalization(const FieldConfig& cfg);
double c1_normalization_dimensionless(const FieldConfig& cfg);

// Everything derivable from a FieldConfig alone. Requires Delta0 > 0
// because C1 carries the scattering convention.
struct DerivedParams {
    std::optional<double> t0;
    LzParameter Lambda;
    double R = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double nu0 = 0.0;
    double xi0 = 0.0;
    ComplexScalar nu;
    ComplexScalar xi;
    double C1 = 0.0;
};
DerivedParams derive(const FieldConfig& cfg);

} // namespace ivsqrt
