#include "ivsqrt/heun.hpp"

#include <cmath>

#include "ivsqrt/specfun.hpp"

namespace ivsqrt::heun {

namespace {

constexpr ComplexScalar kI{0.0, 1.0};

bool near_integer(ComplexScalar z, double tol = 1e-9) {
    return std::fabs(z.imag()) <= tol &&
           std::fabs(z.real() - std::round(z.real())) <= tol;
}

// Recurrence coefficients. The signs in Q_n track the choice
// s0 = s0_sign * sqrt(-epsilon/2).
struct Recurrence {
    ComplexScalar sq;  // sqrt(-epsilon)
    ComplexScalar R(const BiconfluentParams& bp, int n) const {
        return std::sqrt(2.0) / sq * double(n) *
               (-bp.alpha + (bp.gamma + double(n)) * bp.epsilon);
    }
    ComplexScalar Q(const BiconfluentParams& bp, int n, int s0_sign) const {
        return -double(s0_sign) * (bp.q + (bp.gamma + double(n)) * bp.delta);
    }
    ComplexScalar P(const BiconfluentParams& bp, int n) const {
        return (bp.gamma + double(n)) * bp.epsilon / (std::sqrt(2.0) * sq);
    }
};

std::vector<ComplexScalar> run_recurrence(const BiconfluentParams& bp,
                                          int s0_sign, int n_max) {
    if (bp.epsilon == ComplexScalar(0.0))
        throw DomainError("hermite_series_coeffs: epsilon must be nonzero");
    if (n_max < 2)
        throw DomainError("hermite_series_coeffs: n_max must be >= 2");
    if (s0_sign != 1 && s0_sign != -1)
        throw DomainError("hermite_series_coeffs: s0_sign must be +1 or -1");

    const Recurrence rec{std::sqrt(-bp.epsilon)};
    std::vector<ComplexScalar> c(static_cast<std::size_t>(n_max) + 1);
    c[0] = 1.0;

    double peak = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        const ComplexScalar rn = rec.R(bp, n);
        const ComplexScalar qn = rec.Q(bp, n - 1, s0_sign);
        const ComplexScalar pn = n >= 2 ? rec.P(bp, n - 2) : ComplexScalar(0.0);
        const ComplexScalar rhs =
            -(qn * c[n - 1] + (n >= 2 ? pn * c[n - 2] : ComplexScalar(0.0)));
        const double rn_scale =
            std::abs(bp.alpha) + std::abs(bp.gamma + double(n)) * std::abs(bp.epsilon);
        if (std::abs(-bp.alpha + (bp.gamma + double(n)) * bp.epsilon) <=
            1e-13 * rn_scale) {
            // A vanishing leading coefficient is harmless only once the
            // series has already terminated (the row reads 0 = 0 with a zero
            // tail); with live neighbors the coefficient is undetermined.
            const bool tail_zero =
                std::abs(c[n - 1]) <= 1e-12 * peak &&
                (n < 2 || std::abs(c[n - 2]) <= 1e-12 * peak);
            if (tail_zero && std::abs(rhs) <= 1e-12 * peak) {
                for (int m = n; m <= n_max; ++m)
                    c[m] = 0.0;
                break;
            }
            throw DegenerateRecurrence(
                "hermite_series_coeffs: vanishing leading coefficient at n = " +
                std::to_string(n));
        }
        c[n] = rhs / rn;
        peak = std::max(peak, std::abs(c[n]));
    }
    return c;
}

} // namespace

ClassConfig model_class_config(const FieldConfig& cfg) {
    cfg.validate();
    ClassConfig cc;
    cc.k = 1.0;
    cc.U0_star = 2.0 * cfg.U0;
    cc.d0 = 2.0 * cfg.Delta1;
    cc.d1 = 0.0;
    cc.d2 = 2.0 * cfg.Delta0;
    return cc;
}

BiconfluentParams biconfluent_params(const ClassConfig& cc) {
    if (cc.k != 1.0)
        throw UnsupportedClass("biconfluent_params: only the k = 1 class is executable");

    // Q(z) = U0*^2 z^{2k+2} = U0*^2 z^4: the only surviving derivative at the
    // origin is Q''''(0)/4! = U0*^2.
    const ComplexScalar u2 = cc.U0_star * cc.U0_star;

    BiconfluentParams bp;
    // alpha1 solves alpha1^2 - alpha1 (1 + k + i d1) + Q(0) = 0; the model
    // branch is the root alpha1 = 0 (Q(0) = 0).
    bp.alpha1 = 0.0;
    // alpha2 solves alpha2^2 - i alpha2 d2 + Q''''(0)/4! = 0 (minus root),
    // written so the physical case (real d2, real U0*) stays exactly
    // imaginary: alpha2 = i (d2 - sqrt(d2^2 + 4 U0*^2)) / 2.
    bp.alpha2 = 0.5 * kI * (cc.d2 - std::sqrt(cc.d2 * cc.d2 + 4.0 * u2));
    bp.epsilon = 2.0 * bp.alpha2 - kI * cc.d2;
    // alpha0 epsilon - i alpha2 d0 + Q'''(0)/3! = 0 with Q'''(0) = 0.
    bp.alpha0 = kI * bp.alpha2 * cc.d0 / bp.epsilon;
    bp.gamma = 2.0 * bp.alpha1 - kI * cc.d1 - cc.k;
    bp.delta = 2.0 * bp.alpha0 - kI * cc.d0;
    bp.alpha = bp.alpha0 * (bp.alpha0 - kI * cc.d0) +
               bp.alpha1 * (2.0 * bp.alpha2 - kI * cc.d2) +
               bp.alpha2 * (1.0 - cc.k - kI * cc.d1);
    bp.q = bp.alpha0 * (cc.k + kI * cc.d1) -
           bp.alpha1 * (2.0 * bp.alpha0 - kI * cc.d0);
    return bp;
}

HermiteSeries hermite_series_coeffs(const BiconfluentParams& bp, int s0_sign,
                                    int n_max) {
    HermiteSeries out;
    out.coefficients = run_recurrence(bp, s0_sign, n_max);
    out.s0_sign = s0_sign;
    out.shift = bp.delta / bp.epsilon;
    out.order_base = bp.gamma - bp.alpha / bp.epsilon;
    return out;
}

bool termination_check(const BiconfluentParams& bp, int N) {
    if (N < 0)
        throw DomainError("termination_check: N must be >= 0");
    const double scale = std::abs(bp.q) + std::abs(bp.delta) + std::abs(bp.alpha) + 1.0;
    if (std::abs(bp.gamma + double(N)) > 1e-10)
        return false;
    if (N == 0)
        return std::abs(bp.q) <= 1e-12 * scale;
    if (N == 1)
        return std::abs(bp.q * bp.q - bp.delta * bp.q + bp.alpha) <=
               1e-12 * scale * scale;
    // Higher N: evaluate the accessory condition c_{N+1} = 0 numerically.
    try {
        const auto c = run_recurrence(bp, 1, N + 2);
        double peak = 0.0;
        for (int n = 0; n <= N; ++n)
            peak = std::max(peak, std::abs(c[n]));
        return std::abs(c[N + 1]) <= 1e-10 * peak && peak > 0.0;
    } catch (const DegenerateRecurrence&) {
        return false;
    }
}

Solvability exact_solvability_check(const ClassConfig& cc, ComplexScalar gamma) {
    // Termination requires gamma to be a non-positive integer.
    if (!near_integer(gamma) || gamma.real() > 0.5)
        return Solvability::non_terminating;
    const int g = static_cast<int>(std::round(gamma.real()));
    if (g > 0)
        return Solvability::non_terminating;

    // Q(0) = U0*^2 at k = -1, zero for every other class; a nonzero Q(0)
    // couples the amplitude parameter into the exponent equation.
    const bool q0_zero = cc.k != -1.0;
    const bool d1_zero = std::abs(cc.d1) == 0.0;

    if (q0_zero && d1_zero) {
        const ComplexScalar lhs = (gamma + cc.k) * (gamma - cc.k - 2.0);
        if (std::abs(lhs) <= 1e-12) {
            if (g == 0 && cc.k == 0.0)
                return Solvability::exactly_solvable_hypergeometric;
            if (g == -1 && cc.k == 1.0)
                return Solvability::exactly_solvable_new_model;
        }
        return Solvability::non_terminating;
    }
    // Nonzero d1 (or k = -1): the exponent equation ties the detuning and
    // amplitude parameters together; solvable only on that constraint
    // surface.
    return Solvability::conditionally_integrable;
}

ComplexScalar hb_series_eval(const HermiteSeries& series,
                             const BiconfluentParams& bp, ComplexScalar z,
                             const EvalPolicy& policy) {
    policy.validate();
    const ComplexScalar s0 =
        double(series.s0_sign) * std::sqrt(-0.5 * bp.epsilon);
    const ComplexScalar arg = s0 * (z + series.shift);

    double peak = 0.0;
    for (const auto& c : series.coefficients)
        peak = std::max(peak, std::abs(c));

    // Terminating series end in an exact zero tail; otherwise require the
    // trailing coefficients to have dropped below tolerance.
    const auto& c = series.coefficients;
    std::size_t last = c.size();
    while (last > 0 && std::abs(c[last - 1]) <= 1e-300)
        --last;
    if (last == c.size()) {
        const double tail = std::abs(c.back());
        if (tail > policy.rel_tol * peak)
            throw TruncationError("hb_series_eval: series tail above tolerance");
    }

    ComplexScalar sum = 0.0;
    for (std::size_t n = 0; n < last; ++n) {
        if (std::abs(c[n]) == 0.0)
            continue;
        sum += c[n] * specfun::hermite_h(series.order_base + double(n), arg, policy);
    }
    return sum;
}

ComplexScalar solution_from_series(const HermiteSeries& series,
                                   const BiconfluentParams& bp, ComplexScalar z,
                                   const EvalPolicy& policy) {
    const ComplexScalar hb = hb_series_eval(series, bp, z, policy);
    ComplexScalar prefactor = std::exp(bp.alpha0 * z + 0.5 * bp.alpha2 * z * z);
    if (bp.alpha1 != ComplexScalar(0.0))
        prefactor *= std::pow(z, bp.alpha1);
    return prefactor * hb;
}

} // namespace ivsqrt::heun
