#include "ivsqrt/specfun.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <vector>

namespace ivsqrt {

void EvalPolicy::validate() const {
    if (!(rel_tol > 0.0))
        throw DomainError("EvalPolicy.rel_tol must be > 0");
    if (max_terms < 10)
        throw DomainError("EvalPolicy.max_terms must be >= 10");
    if (!(asymptotic_threshold > 0.0))
        throw DomainError("EvalPolicy.asymptotic_threshold must be > 0");
}

EvalPolicy EvalPolicy::from_env(const char* var) {
    EvalPolicy policy;
    const char* raw = std::getenv(var);
    if (raw == nullptr)
        return policy;
    std::string text(raw);
    for (char& c : text)
        if (c == ';')
            c = ',';
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw DomainError("malformed " + std::string(var) + " entry: " + item);
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "rel_tol")
                policy.rel_tol = std::stod(value);
            else if (key == "max_terms")
                policy.max_terms = std::stoi(value);
            else if (key == "asymptotic_threshold")
                policy.asymptotic_threshold = std::stod(value);
            else
                throw DomainError("unknown " + std::string(var) + " key: " + key);
        } catch (const std::logic_error&) {
            throw DomainError("malformed " + std::string(var) + " value: " + item);
        }
    }
    policy.validate();
    return policy;
}

} // namespace ivsqrt

namespace ivsqrt::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;

bool is_nonpositive_integer(ComplexScalar z) {
    return z.imag() == 0.0 && z.real() <= 0.0 &&
           z.real() == std::floor(z.real());
}

// ---------------------------------------------------------------------------
// Double-double arithmetic (Dekker/Knuth error-free transforms). Only what the
// Kummer series needs: the oscillatory sums cancel by factors up to ~e^30 and
// plain double accumulation would surrender half the mantissa.
// ---------------------------------------------------------------------------

struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_from(double a) { return {a, 0.0}; }

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    const dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul_d(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, dd b) {
    const double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul_d(b, q1));
    const double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul_d(b, q2));
    const double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return dd_add(q, dd_from(q3));
}

struct cdd {
    dd re, im;
};

inline cdd cdd_from(ComplexScalar z) { return {dd_from(z.real()), dd_from(z.imag())}; }

inline ComplexScalar cdd_to_complex(cdd z) {
    return {z.re.hi + z.re.lo, z.im.hi + z.im.lo};
}

inline cdd cdd_add(cdd a, cdd b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline cdd cdd_mul(cdd a, cdd b) {
    return {dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
            dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}

inline cdd cdd_div(cdd a, cdd b) {
    const dd den = dd_add(dd_mul(b.re, b.re), dd_mul(b.im, b.im));
    const cdd num = {dd_add(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
                     dd_sub(dd_mul(a.im, b.re), dd_mul(a.re, b.im))};
    return {dd_div(num.re, den), dd_div(num.im, den)};
}

inline double cdd_abs_estimate(cdd z) { return std::hypot(z.re.hi, z.im.hi); }

// Exact complex + integer in double-double components.
inline cdd cdd_shift(ComplexScalar a, int n) {
    return {two_sum(a.real(), static_cast<double>(n)), dd_from(a.imag())};
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

// Godfrey's Lanczos coefficients, g = 607/128, relative error ~1e-15 on the
// right half-plane.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosC = {
    0.99999999999999709182,   57.156235665862923517,
    -59.597960355475491248,   14.136097974741747174,
    -0.49191381609762019978,  3.3994649984811888699e-5,
    4.6523628927048575665e-5, -9.8374475304879564677e-5,
    1.5808870322491248884e-4, -2.1026444172410488319e-4,
    2.1743961811521264320e-4, -1.6431810653676389022e-4,
    8.4418223983852743293e-5, -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
};

ComplexScalar lanczos_sum(ComplexScalar z) {
    // z >= 0.5 half-plane; series in 1/(z-1+k).
    ComplexScalar x = kLanczosC[0];
    for (std::size_t k = 1; k < kLanczosC.size(); ++k)
        x += kLanczosC[k] / (z + static_cast<double>(k - 1));
    return x;
}

ComplexScalar gamma_right_half(ComplexScalar z) {
    // Valid for re(z) >= 0.5.
    const ComplexScalar x = lanczos_sum(z);
    const ComplexScalar t = z + (kLanczosG - 0.5);
    return std::sqrt(2.0 * kPi) * std::pow(t, z - 0.5) * std::exp(-t) * x;
}

// ---------------------------------------------------------------------------
// Kummer series
// ---------------------------------------------------------------------------

cdd kummer_series_dd(ComplexScalar a, ComplexScalar b, ComplexScalar z,
                     const EvalPolicy& policy) {
    cdd sum = cdd_from(1.0);
    cdd term = cdd_from(1.0);
    const cdd zc = cdd_from(z);
    double prev_mag = 1.0;
    int small_streak = 0;
    for (int n = 0; n < policy.max_terms; ++n) {
        const cdd numer = cdd_mul(term, cdd_mul(zc, cdd_shift(a, n)));
        const cdd denom = cdd_mul(cdd_shift(b, n), cdd_from(double(n + 1)));
        term = cdd_div(numer, denom);
        sum = cdd_add(sum, term);
        const double mag = cdd_abs_estimate(term);
        if (mag == 0.0)
            return sum; // naturally terminating (polynomial) case
        const double sum_mag = cdd_abs_estimate(sum);
        if (mag <= prev_mag && mag <= 0.1 * policy.rel_tol * sum_mag) {
            if (++small_streak >= 2)
                return sum;
        } else {
            small_streak = 0;
        }
        prev_mag = mag;
    }
    throw NoConvergence("kummer_m: max_terms reached before rel_tol");
}

cdd kummer_dd(ComplexScalar a, ComplexScalar b, ComplexScalar z,
              const EvalPolicy& policy) {
    if (is_nonpositive_integer(b))
        throw ParameterPole("kummer_m: b is a non-positive integer");
    if (z.real() < 0.0) {
        // Kummer transformation keeps the summed argument in the
        // non-cancelling half-plane.
        const cdd m = kummer_series_dd(b - a, b, -z, policy);
        const ComplexScalar scale = std::exp(z);
        return cdd_mul(cdd_from(scale), m);
    }
    return kummer_series_dd(a, b, z, policy);
}

// ---------------------------------------------------------------------------
// Hermite function
// ---------------------------------------------------------------------------

ComplexScalar hermite_series_path(ComplexScalar nu, ComplexScalar z,
                                  const EvalPolicy& policy) {
    const ComplexScalar w = z * z;
    const cdd m1 = kummer_dd(-0.5 * nu, ComplexScalar(0.5), w, policy);
    const cdd m2 = kummer_dd(0.5 * (1.0 - nu), ComplexScalar(1.5), w, policy);
    const ComplexScalar front = std::pow(ComplexScalar(2.0), nu) * kSqrtPi;
    const ComplexScalar c1 = front * recip_gamma(0.5 * (1.0 - nu));
    const ComplexScalar c2 = front * (-2.0 * z) * recip_gamma(-0.5 * nu);
    // The two Kummer terms cancel; combine them before leaving double-double.
    const cdd total = cdd_add(cdd_mul(cdd_from(c1), m1), cdd_mul(cdd_from(c2), m2));
    return cdd_to_complex(total);
}

// Truncates at the smallest term, hard cap 20 terms.
constexpr int kAsymptoticCap = 20;

// sum_k (-1)^k (-nu)_{2k} / (k! (4w)^k)
ComplexScalar asymptotic_sum_main(ComplexScalar nu, ComplexScalar w) {
    ComplexScalar sum = 1.0, term = 1.0;
    double best = 1.0;
    for (int k = 0; k < kAsymptoticCap; ++k) {
        const double dk = k;
        term *= -(-nu + 2.0 * dk) * (-nu + 2.0 * dk + 1.0) /
                ((dk + 1.0) * 4.0 * w);
        const double mag = std::abs(term);
        if (mag > best)
            break;
        best = mag;
        sum += term;
    }
    return sum;
}

// sum_k (1+nu)_{2k} / (k! (4w)^k)
ComplexScalar asymptotic_sum_recessive(ComplexScalar nu, ComplexScalar w) {
    ComplexScalar sum = 1.0, term = 1.0;
    double best = 1.0;
    for (int k = 0; k < kAsymptoticCap; ++k) {
        const double dk = k;
        term *= (1.0 + nu + 2.0 * dk) * (2.0 + nu + 2.0 * dk) /
                ((dk + 1.0) * 4.0 * w);
        const double mag = std::abs(term);
        if (mag > best)
            break;
        best = mag;
        sum += term;
    }
    return sum;
}

// Large-|z^2| evaluation. For re(z) > 0 the function is purely algebraic,
//   H_nu(z) ~ (2z)^nu Sigma1(w).
// Continuing across re(z) = 0 picks up a Stokes factor on the algebraic part
// and an exponential term:
//   H_nu(z) ~ e^{-i sigma pi nu} 2^nu w^{nu/2} Sigma1(w)
//             + sqrt(pi)/Gamma(-nu) e^w w^{-(nu+1)/2} Sigma2(w),
// sigma = sign(im w); on the negative real axis the Stokes average cos(pi nu)
// applies. Principal branches throughout.
ComplexScalar hermite_asymptotic_path(ComplexScalar nu, ComplexScalar z) {
    const ComplexScalar w = z * z;
    const ComplexScalar ws = std::sqrt(w);
    const bool reflected = std::abs(z + ws) < std::abs(z - ws);

    const ComplexScalar sigma1 = asymptotic_sum_main(nu, w);
    const ComplexScalar algebraic =
        std::pow(ComplexScalar(2.0), nu) * std::pow(w, 0.5 * nu) * sigma1;
    if (!reflected)
        return algebraic;

    ComplexScalar stokes;
    if (w.imag() == 0.0) {
        stokes = std::cos(kPi * nu);
    } else {
        const double sigma = w.imag() > 0.0 ? 1.0 : -1.0;
        stokes = std::exp(ComplexScalar(0.0, -sigma * kPi) * nu);
    }
    const ComplexScalar sigma2 = asymptotic_sum_recessive(nu, w);
    const ComplexScalar exponential = kSqrtPi * recip_gamma(-nu) * std::exp(w) *
                                      std::pow(w, -0.5 * (nu + 1.0)) * sigma2;
    return stokes * algebraic + exponential;
}

void check_finite(ComplexScalar v, const char* who) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw OverflowError(std::string(who) + ": result overflows double precision");
}

} // namespace

ComplexScalar gamma_complex(ComplexScalar z) {
    if (is_nonpositive_integer(z))
        throw PoleError("gamma_complex: pole at non-positive integer");
    ComplexScalar result;
    if (z.real() < 0.5) {
        result = kPi / (std::sin(kPi * z) * gamma_right_half(1.0 - z));
    } else {
        result = gamma_right_half(z);
    }
    check_finite(result, "gamma_complex");
    return result;
}

ComplexScalar recip_gamma(ComplexScalar z) {
    if (is_nonpositive_integer(z))
        return {0.0, 0.0};
    ComplexScalar result;
    if (z.real() < 0.5) {
        result = std::sin(kPi * z) * gamma_right_half(1.0 - z) / kPi;
    } else {
        result = 1.0 / gamma_right_half(z);
    }
    check_finite(result, "recip_gamma");
    return result;
}

ComplexScalar erfc_complex(ComplexScalar z) {
    if (z.real() < 0.0)
        return 2.0 - erfc_complex(-z);

    ComplexScalar result;
    if (std::abs(z) <= 4.0) {
        // erf Taylor series; worst cancellation at |z| = 4 stays below ~1e-11.
        const ComplexScalar w = z * z;
        ComplexScalar sum = 0.0, term = z;
        for (int n = 0; n < 200; ++n) {
            sum += term / (2.0 * n + 1.0);
            term *= -w / double(n + 1);
            if (std::abs(term) < 1e-20 * (1.0 + std::abs(sum)))
                break;
        }
        result = 1.0 - (2.0 / kSqrtPi) * sum;
    } else {
        // Weideman's rational approximation of the Faddeeva function w(u)
        // for im(u) >= 0, applied at u = i z (re(z) >= 0 here):
        // erfc(z) = e^{-z^2} w(iz).
        constexpr int N = 40;
        static const std::vector<double> coeff = [] {
            const int M = 2 * N;
            const double L = std::sqrt(N / std::sqrt(2.0));
            std::vector<double> a(N);
            for (int n = 1; n <= N; ++n) {
                double acc = 0.0;
                for (int j = -M; j < M; ++j) {
                    const double theta = j * kPi / M;
                    if (std::abs(std::abs(theta) - kPi) < 1e-15)
                        continue; // f vanishes at the endpoints
                    const double t = L * std::tan(0.5 * theta);
                    const double f = std::exp(-t * t) * (L * L + t * t);
                    acc += f * std::cos(n * theta);
                }
                a[n - 1] = acc / (2.0 * M);
            }
            return a;
        }();
        const double L = std::sqrt(N / std::sqrt(2.0));
        const ComplexScalar u = kImagUnit * z;
        const ComplexScalar d = L - kImagUnit * u;
        const ComplexScalar big_z = (L + kImagUnit * u) / d;
        ComplexScalar p = 0.0;
        for (int n = N - 1; n >= 0; --n)
            p = p * big_z + coeff[n];
        const ComplexScalar faddeeva = 2.0 * p / (d * d) + (1.0 / kSqrtPi) / d;
        result = std::exp(-z * z) * faddeeva;
    }
    check_finite(result, "erfc_complex");
    return result;
}

ComplexScalar kummer_m(ComplexScalar a, ComplexScalar b, ComplexScalar z,
                       const EvalPolicy& policy) {
    policy.validate();
    const ComplexScalar result = cdd_to_complex(kummer_dd(a, b, z, policy));
    check_finite(result, "kummer_m");
    return result;
}

ComplexScalar hermite_h(ComplexScalar nu, ComplexScalar z,
                        const EvalPolicy& policy) {
    policy.validate();
    const double w_mag = std::norm(z);
    const ComplexScalar result = w_mag >= policy.asymptotic_threshold
                                     ? hermite_asymptotic_path(nu, z)
                                     : hermite_series_path(nu, z, policy);
    check_finite(result, "hermite_h");
    return result;
}

ComplexScalar hermite_h_derivative(ComplexScalar nu, ComplexScalar z,
                                   const EvalPolicy& policy) {
    if (nu == ComplexScalar(0.0))
        return {0.0, 0.0};
    return 2.0 * nu * hermite_h(nu - 1.0, z, policy);
}

HermitePair hermite_h_both(ComplexScalar nu, ComplexScalar z,
                           const EvalPolicy& policy) {
    policy.validate();
    return {hermite_series_path(nu, z, policy), hermite_asymptotic_path(nu, z)};
}

bool in_crossover_band(ComplexScalar z, const EvalPolicy& policy) {
    const double w_mag = std::norm(z);
    return w_mag >= policy.asymptotic_threshold / 1.15 &&
           w_mag <= policy.asymptotic_threshold * 1.15;
}

} // namespace ivsqrt::specfun
