#include "ivsqrt/field_model.hpp"

#include <cmath>

namespace ivsqrt {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

void FieldConfig::validate() const {
    if (!std::isfinite(U0) || !std::isfinite(Delta0) || !std::isfinite(Delta1))
        throw DomainError("FieldConfig: parameters must be finite");
    if (!(U0 > 0.0))
        throw DomainError("FieldConfig: U0 must be > 0");
}

double detuning(double t, const FieldConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0))
        throw DomainError("detuning: t must be > 0");
    return cfg.Delta0 + cfg.Delta1 / std::sqrt(t);
}

double phase(double t, const FieldConfig& cfg) {
    cfg.validate();
    if (t < 0.0)
        throw DomainError("phase: t must be >= 0");
    return cfg.Delta0 * t + 2.0 * cfg.Delta1 * std::sqrt(t);
}

std::optional<double> crossing_time(const FieldConfig& cfg) {
    cfg.validate();
    if (cfg.Delta0 * cfg.Delta1 < 0.0) {
        const double r = cfg.Delta1 / cfg.Delta0;
        return r * r;
    }
    return std::nullopt;
}

LzParameter lz_parameter(const FieldConfig& cfg) {
    cfg.validate();
    if (cfg.Delta0 == 0.0)
        throw DomainError("lz_parameter: Delta0 must be nonzero");
    const double lambda = cfg.U0 * cfg.U0 * cfg.Delta1 * cfg.Delta1 /
                          (4.0 * cfg.Delta0 * cfg.Delta0 * cfg.Delta0);
    LzParameter out;
    out.magnitude = std::fabs(lambda);
    out.negative = lambda < 0.0;
    out.slope = cfg.Delta1 == 0.0
                    ? 0.0
                    : cfg.Delta0 * cfg.Delta0 * cfg.Delta0 /
                          (2.0 * cfg.Delta1 * cfg.Delta1);
    return out;
}

QuasiEnergies quasi_energies(const FieldConfig& cfg) {
    cfg.validate();
    const double R = std::sqrt(0.25 * cfg.Delta0 * cfg.Delta0 + cfg.U0 * cfg.U0);
    return {0.5 * cfg.Delta0 + R, 0.5 * cfg.Delta0 - R, R};
}

DimensionlessParams dimensionless_params(const FieldConfig& cfg) {
    const auto qe = quasi_energies(cfg);
    const double R = qe.R;
    DimensionlessParams out;
    out.nu0 = cfg.U0 * cfg.U0 * cfg.Delta1 * cfg.Delta1 / (4.0 * R * R * R);
    out.xi0 = cfg.Delta0 * cfg.Delta1 / (4.0 * std::pow(R, 1.5));
    out.nu = ComplexScalar(0.0, out.nu0);
    out.xi = ComplexScalar(out.xi0, -out.xi0);
    return out;
}

double c1_normalization(const FieldConfig& cfg) {
    cfg.validate();
    if (!(cfg.Delta0 > 0.0))
        throw ConventionError("c1_normalization: requires Delta0 > 0");
    const auto qe = quasi_energies(cfg);
    const double expo = kPi * cfg.Delta1 * cfg.Delta1 * cfg.U0 * cfg.U0 /
                        (16.0 * qe.R * qe.R * qe.R);
    return cfg.U0 / std::sqrt(cfg.U0 * cfg.U0 + qe.lambda1 * qe.lambda1) *
           std::exp(-expo);
}

double c1_normalization_dimensionless(const FieldConfig& cfg) {
    cfg.validate();
    if (!(cfg.Delta0 > 0.0))
        throw ConventionError("c1_normalization_dimensionless: requires Delta0 > 0");
    const auto dp = dimensionless_params(cfg);
    // The xi0 term enters with -|xi0|: the upper quasi-energy normalization
    // involves U0^2/(U0^2+lambda1^2) for either sign of Delta1, which the
    // signed form only reproduces for Delta1 < 0.
    const double ratio = std::fabs(dp.xi0) / std::sqrt(dp.nu0 + dp.xi0 * dp.xi0);
    return std::exp(-kPi * dp.nu0 / 4.0) / std::sqrt(2.0) *
           std::sqrt(1.0 - ratio);
}

DerivedParams derive(const FieldConfig& cfg) {
    DerivedParams out;
    out.t0 = crossing_time(cfg);
    out.Lambda = lz_parameter(cfg);
    const auto qe = quasi_energies(cfg);
    out.R = qe.R;
    out.lambda1 = qe.lambda1;
    out.lambda2 = qe.lambda2;
    const auto dp = dimensionless_params(cfg);
    out.nu0 = dp.nu0;
    out.xi0 = dp.xi0;
    out.nu = dp.nu;
    out.xi = dp.xi;
    out.C1 = c1_normalization(cfg);
    return out;
}

} // namespace ivsqrt
