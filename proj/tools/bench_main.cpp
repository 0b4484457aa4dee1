// Timing comparison of the OpenMP kernels against their serial reference
// implementations, on the bundled problems.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gregus/reference.hpp"
#include "gregus/registry.hpp"

namespace {

template <class F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-34s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        gregus::Problem p = gregus::make_example("ex2_6");
        gregus::SweepOptions sw = p.sampling.sweep;
        double s = time_ms([&] {
            gregus::serial::sweep_verify(p.A, p.B, p.S, p.T, p.domain, p.q, p.constants,
                                         gregus::InequalityForm::quadratic_2_1_1, sw);
        });
        double par = time_ms([&] {
            gregus::sweep_verify(p.A, p.B, p.S, p.T, p.domain, p.q, p.constants,
                                 gregus::InequalityForm::quadratic_2_1_1, sw);
        });
        row("inequality pair sweep (1D)", s, par);
    }
    {
        gregus::Problem p = gregus::make_example("two_disks");
        double s = time_ms([&] { gregus::serial::is_convex(p.domain, p.sampling.geometry); });
        double par = time_ms([&] { gregus::is_convex(p.domain, p.sampling.geometry); });
        row("convexity pair scan (2D)", s, par);
    }
    {
        gregus::Problem p = gregus::make_example("two_disks");
        double s = time_ms(
            [&] { gregus::serial::is_q_starshaped(p.domain, p.q, p.sampling.geometry); });
        double par =
            time_ms([&] { gregus::is_q_starshaped(p.domain, p.q, p.sampling.geometry); });
        row("starshape segment scan (2D)", s, par);
    }
    {
        gregus::Problem p = gregus::make_example("two_disks");
        gregus::Point u(1.0, 2.0);
        double s = time_ms(
            [&] { gregus::serial::best_approximants(p.domain, u, p.sampling.geometry); });
        double par =
            time_ms([&] { gregus::best_approximants(p.domain, u, p.sampling.geometry); });
        row("best-approximant grid scan (2D)", s, par);
    }
    {
        gregus::Problem p = gregus::make_example("ex2_6");
        double s = time_ms([&] {
            for (double k : {0.5, 0.75, 0.9})
                gregus::serial::inner_solve(p.A, p.B, p.S, p.T, p.domain, p.q, k,
                                            p.sampling.geometry, 1e-9);
        });
        double par = time_ms([&] {
            for (double k : {0.5, 0.75, 0.9})
                gregus::inner_solve(p.A, p.B, p.S, p.T, p.domain, p.q, k, p.sampling.geometry,
                                    1e-9);
        });
        row("inner residual scan (1D, 3 solves)", s, par);
    }
    return 0;
}
