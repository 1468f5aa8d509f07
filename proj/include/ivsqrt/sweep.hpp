#pragma once

#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "ivsqrt/types.hpp"

namespace ivsqrt::sweep {

// Execution strategy for grid sweeps. Cells are independent, so the parallel
// kernel must produce bit-identical results to the serial reference; tests
// compare the two.
enum class ExecMode { serial, parallel };

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Evaluates fn(i) for i in [0, n) into a vector. Exceptions thrown by cells
// are captured and rethrown after the loop completes.
template <typename T, typename Fn>
std::vector<T> map_cells(std::size_t n, Fn&& fn, ExecMode mode = ExecMode::parallel) {
    std::vector<T> out(n);
    if (mode == ExecMode::serial) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = fn(i);
        return out;
    }
    std::exception_ptr failure = nullptr;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#if defined(_OPENMP)
#pragma omp critical(ivsqrt_sweep_failure)
#endif
            {
                if (!failure)
                    failure = std::current_exception();
            }
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

// Evenly spaced grid including both endpoints (single point when n == 1).
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Logarithmically spaced grid, lo > 0, hi > lo.
std::vector<double> logspace(double lo, double hi, std::size_t n);

} // namespace ivsqrt::sweep
