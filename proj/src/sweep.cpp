#include "ivsqrt/sweep.hpp"

#include <cmath>

namespace ivsqrt::sweep {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0)
        throw DomainError("linspace: n must be >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + step * double(i);
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo))
        throw DomainError("logspace: need 0 < lo < hi");
    std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
    for (double& x : out)
        x = std::exp(x);
    out.back() = hi;
    if (n > 1)
        out.front() = lo;
    return out;
}

} // namespace ivsqrt::sweep
