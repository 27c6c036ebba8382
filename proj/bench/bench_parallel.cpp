// Benchmark: serial reference vs the OpenMP batch path for each parallel
// kernel. Entries are independent, so the outputs must match exactly; the
// max |difference| column asserts that alongside the timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "brach/analysis.hpp"
#include "brach/media.hpp"
#include "brach/parallel.hpp"
#include "brach/quadrature.hpp"
#include "brach/solver.hpp"
#include "brach/verification.hpp"

using namespace brach;
using clk = std::chrono::steady_clock;

namespace {

double ms(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

// interleaved best-of-4 so clock drift hits both sides evenly
template <typename FS, typename FP>
std::pair<double, double> timed_pair(FS&& serial, FP&& parallel) {
    double bs = 1e300, bp = 1e300;
    for (int rep = 0; rep < 4; ++rep) {
        auto t0 = clk::now();
        serial();
        bs = std::min(bs, ms(t0, clk::now()));
        t0 = clk::now();
        parallel();
        bp = std::min(bp, ms(t0, clk::now()));
    }
    return {bs, bp};
}

void row(const char* name, std::pair<double, double> t, double max_diff) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx %10.2g\n", name, t.first, t.second,
                t.first / t.second, max_diff);
}

}  // namespace

#ifdef _OPENMP
#include <omp.h>
#endif

int main() {
    const int jobs = par::recommended_jobs();
#ifdef _OPENMP
    std::printf("threads: %d, processors online: %d\n", jobs, omp_get_num_procs());
#else
    std::printf("built without OpenMP; the parallel path falls back to serial\n");
#endif
    // spin the thread team up before timing anything
    par::map_batch(1024, [](std::size_t i) { return std::sqrt(static_cast<double>(i)); }, jobs);
    std::printf("%-28s %13s %13s %9s %10s\n", "kernel", "serial", "parallel", "speedup",
                "max |diff|");

    // 1. per-interval quadrature batch (the solver's sampling kernel)
    {
        const SurfacePatch plane = make_vertical_plane();
        const Potential uni = uniform_potential();
        SolverConfig cfg;
        cfg.C = 1.0 / std::sqrt(2.0);
        const auto rate = free_rate(plane, uni, {0.0, 0.0}, cfg);
        const std::size_t n = 20000;
        auto job = [&](std::size_t i) {
            const double a = -2.0 * i / n;
            const double b = -2.0 * (i + 1) / n;
            return quad::sqrt_endpoints(rate, a, b, i == 0, i + 1 == n, 1e-13).value;
        };
        std::vector<double> s, p;
        const auto t = timed_pair([&] { s = par::map_batch_serial(n, job); },
                                  [&] { p = par::map_batch(n, job, jobs); });
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(s[i] - p[i]));
        row("interval quadratures", t, d);
    }

    // 2. sector sweep table over a turning-radius grid
    {
        const std::size_t n = 256;
        auto job = [&](std::size_t i) {
            const double c0 = 0.9 * std::pow(10.0, -4.0 * static_cast<double>(i) / (n - 1));
            return sector_angle(1.0, c0).theta;
        };
        std::vector<double> s, p;
        const auto t = timed_pair([&] { s = par::map_batch_serial(n, job); },
                                  [&] { p = par::map_batch(n, job, jobs); });
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(s[i] - p[i]));
        row("sector sweep table", t, d);
    }

    // 3. minimality probe trials
    {
        const SurfacePatch plane = make_vertical_plane();
        const Potential uni = uniform_potential();
        SolverConfig cfg;
        cfg.C = 1.0 / std::sqrt(2.0);
        const CurveSolution sol = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);
        ProbeReport a, b;
        const auto t =
            timed_pair([&] { a = minimality_probe(plane, uni, sol, 256, 0.05, 7, 1); },
                       [&] { b = minimality_probe(plane, uni, sol, 256, 0.05, 7, jobs); });
        double d = 0.0;
        for (std::size_t i = 0; i < a.gaps.size(); ++i)
            d = std::max(d, std::abs(a.gaps[i] - b.gaps[i]));
        row("probe trials (256)", t, d);
    }

    // 4. lattice edge weights inside the grid oracle
    {
        const SurfacePatch plane = make_vertical_plane();
        const Potential uni = uniform_potential();
        GridSpec s1;
        s1.rect = {0.0, 3.14159265358979, -2.5, 0.0};
        s1.nu = s1.nv = 600;
        GridSpec sN = s1;
        sN.jobs = jobs;
        GridResult a, b;
        const auto t = timed_pair(
            [&] { a = grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {3.14159265358979, -2.0}, s1); },
            [&] { b = grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {3.14159265358979, -2.0}, sN); });
        row("grid oracle 600x600", t, std::abs(a.time - b.time));
    }

    return 0;
}
