// Benchmark of the grid-sweep kernel: serial reference vs OpenMP-parallel
// execution of the start-of-interaction population map, plus a bitwise
// agreement check between the two paths.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ivsqrt/closed_form.hpp"
#include "ivsqrt/sweep.hpp"

using namespace ivsqrt;

namespace {

double run_grid(std::size_t n_d0, std::size_t n_d1, sweep::ExecMode mode,
                std::vector<double>& out) {
    const auto d0s = sweep::linspace(0.5, 8.0, n_d0);
    const auto d1s = sweep::linspace(-8.0, 8.0, n_d1);
    const auto start = std::chrono::steady_clock::now();
    out = sweep::map_cells<double>(
        d0s.size() * d1s.size(),
        [&](std::size_t i) {
            const double d0 = d0s[i / d1s.size()];
            double d1 = d1s[i % d1s.size()];
            if (d1 == 0.0)
                d1 = 1e-3;
            return scattering_a2_at_zero({1.0, d0, d1}).p1;
        },
        mode);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n = 96;
    int repeats = 3;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--grid" && i + 1 < argc)
            n = std::stoul(argv[++i]);
        else if (arg == "--repeats" && i + 1 < argc)
            repeats = std::stoi(argv[++i]);
        else {
            std::printf("usage: %s [--grid N] [--repeats K]\n", argv[0]);
            return 2;
        }
    }

    std::printf("population-map sweep, %zux%zu cells, %d repeat(s), %d thread(s)\n",
                n, n, repeats, sweep::max_threads());

    std::vector<double> serial_out, parallel_out;
    double t_serial = 1e300, t_parallel = 1e300;
    for (int r = 0; r < repeats; ++r) {
        t_serial = std::min(t_serial, run_grid(n, n, sweep::ExecMode::serial, serial_out));
        t_parallel =
            std::min(t_parallel, run_grid(n, n, sweep::ExecMode::parallel, parallel_out));
    }

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < serial_out.size(); ++i)
        if (serial_out[i] != parallel_out[i])
            ++mismatches;

    std::printf("serial:   %.3f s\n", t_serial);
    std::printf("parallel: %.3f s\n", t_parallel);
    std::printf("speedup:  %.2fx\n", t_serial / t_parallel);
    std::printf("bitwise mismatches: %zu of %zu cells\n", mismatches, serial_out.size());
    return mismatches == 0 ? 0 : 1;
}
