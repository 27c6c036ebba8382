#include <cmath>
#include <stdexcept>

#include "brach/parallel.hpp"
#include "brach/quadrature.hpp"
#include "brach/verification.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brach;

TEST_CASE("parallel batches match the serial reference bit for bit") {
    auto job = [](std::size_t i) {
        const double a = 0.01 * i;
        return quad::gauss_kronrod([a](double x) { return std::sin(a + x * x); }, 0.0, 1.0, 1e-10)
            .value;
    };
    const auto serial = par::map_batch_serial(500, job);
    const auto par1 = par::map_batch(500, job, 1);
    const auto par4 = par::map_batch(500, job, 4);
    const auto par0 = par::map_batch(500, job, 0);
    REQUIRE(serial.size() == 500);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i] == par1[i]);
        CHECK(serial[i] == par4[i]);
        CHECK(serial[i] == par0[i]);
    }
}

TEST_CASE("exceptions from parallel jobs propagate") {
    auto job = [](std::size_t i) -> double {
        if (i == 37) throw std::runtime_error("boom");
        return static_cast<double>(i);
    };
    CHECK_THROWS_AS(par::map_batch(100, job, 4), std::runtime_error);
    CHECK_THROWS_AS(par::map_batch(100, job, 1), std::runtime_error);
}

TEST_CASE("grid oracle is jobs-invariant") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    GridSpec s1;
    s1.rect = {0.0, oracles::pi, -2.5, 0.0};
    s1.nu = s1.nv = 80;
    s1.jobs = 1;
    GridSpec s4 = s1;
    s4.jobs = 4;
    const GridResult a = grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {oracles::pi, -2.0}, s1);
    const GridResult b = grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {oracles::pi, -2.0}, s4);
    CHECK(a.time == b.time);
    REQUIRE(a.path.points.size() == b.path.points.size());
}

TEST_CASE("solver sampling is jobs-invariant") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    SolverConfig c1;
    c1.C = 1.0 / std::sqrt(2.0);
    c1.jobs = 1;
    SolverConfig c4 = c1;
    c4.jobs = 4;
    const CurveSolution a = solve_theorem1(plane, uni, {0.0, 0.0}, c1);
    const CurveSolution b = solve_theorem1(plane, uni, {0.0, 0.0}, c4);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].u == b.samples[i].u);
        CHECK(a.samples[i].v == b.samples[i].v);
        CHECK(a.samples[i].time == b.samples[i].time);
    }
}
