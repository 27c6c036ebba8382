#include <cmath>

#include "brach/errors.hpp"
#include "brach/verification.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brach;

namespace {

DiscreteCurve vertical_drop(double u, double depth, int n) {
    DiscreteCurve c;
    for (int i = 0; i <= n; ++i) c.points.push_back({u, -depth * i / n});
    return c;
}

DiscreteCurve cycloid_polyline(double R, int segments) {
    const oracles::Cycloid cyc{R};
    DiscreteCurve c;
    for (int i = 0; i <= segments; ++i) {
        const double phi = oracles::pi * i / segments;
        c.points.push_back({cyc.x(phi), cyc.z(phi)});
    }
    return c;
}

// a smooth test path strictly below the start level
DiscreteCurve smooth_path(int segments) {
    DiscreteCurve c;
    for (int i = 0; i <= segments; ++i) {
        const double t = static_cast<double>(i) / segments;
        c.points.push_back({2.0 * t, -1.0 - 0.8 * std::sin(oracles::pi * t)});
    }
    return c;
}

CurveSolution straight_chord(double uB, double vB, int n) {
    CurveSolution sol;
    sol.meta.reduction_case = 1;
    sol.meta.V0 = 0.0;
    sol.meta.surface = "plane";
    sol.meta.field = "uniform";
    const double len = std::hypot(uB, vB);
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        sol.samples.push_back({t * len, t * uB, t * vB, Vec3{t * uB, 0.0, t * vB}, 0.0});
    }
    return sol;
}

}  // namespace

TEST_CASE("travel time of straight vertical drops is exact") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    for (const double h : {0.5, 2.0, 10.0}) {
        // a single segment and a refined polyline must both be exact
        CHECK(travel_time(plane, uni, 0.0, vertical_drop(0.3, h, 1)) ==
              doctest::Approx(std::sqrt(2.0 * h)).epsilon(1e-12));
        CHECK(travel_time(plane, uni, 0.0, vertical_drop(0.3, h, 1000)) ==
              doctest::Approx(std::sqrt(2.0 * h)).epsilon(1e-12));
    }
}

TEST_CASE("cycloid cusp-to-bottom time is pi at R = 1") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    const double T = travel_time(plane, uni, 0.0, cycloid_polyline(1.0, 100000));
    CHECK(T == doctest::Approx(oracles::pi).epsilon(1e-6));
}

TEST_CASE("composite rule converges at second order") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    const double t1 = travel_time(plane, uni, 0.0, smooth_path(250));
    const double t2 = travel_time(plane, uni, 0.0, smooth_path(500));
    const double t3 = travel_time(plane, uni, 0.0, smooth_path(1000));
    CHECK(std::abs(t2 - t3) < std::abs(t1 - t2) / 3.5);
}

TEST_CASE("travel time validates its polyline") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();

    DiscreteCurve above;
    above.points = {{0.0, 0.0}, {1.0, 0.5}, {2.0, -1.0}};  // interior above the level
    CHECK_THROWS_AS(travel_time(plane, uni, 0.0, above), Error);

    DiscreteCurve dup;
    dup.points = {{0.0, 0.0}, {0.0, 0.0}, {1.0, -1.0}};
    CHECK_THROWS_AS(travel_time(plane, uni, 0.0, dup), Error);

    DiscreteCurve single;
    single.points = {{0.0, 0.0}};
    CHECK_THROWS_AS(travel_time(plane, uni, 0.0, single), Error);
}

TEST_CASE("solver total time agrees with the independent functional") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    SolverConfig cfg;
    cfg.C = 1.0 / std::sqrt(2.0);
    cfg.samples = 4096;
    const CurveSolution sol = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);
    const double functional = travel_time(plane, uni, 0.0, as_discrete(sol));
    CHECK(functional == doctest::Approx(sol.total_time).epsilon(1e-6));
}

TEST_CASE("minimality probe") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    SolverConfig cfg;
    cfg.C = 1.0 / std::sqrt(2.0);
    const CurveSolution sol = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);

    SUBCASE("solution survives 100 seeded trials") {
        const ProbeReport rep = minimality_probe(plane, uni, sol, 100, 0.05, 7);
        CHECK(rep.passed);
        CHECK(rep.min_gap > 0.0);
        CHECK(rep.trials == 100);
        CHECK(rep.seed == 7);
    }

    SUBCASE("zero amplitude leaves the time unchanged") {
        const ProbeReport rep = minimality_probe(plane, uni, sol, 10, 0.0, 3);
        CHECK(rep.min_gap == 0.0);
        CHECK(rep.max_gap == 0.0);
    }

    SUBCASE("straight chord fails as the negative control") {
        const CurveSolution chord = straight_chord(oracles::pi, -2.0, 400);
        const ProbeReport rep = minimality_probe(plane, uni, chord, 100, 0.05, 7);
        CHECK_FALSE(rep.passed);
        CHECK(rep.min_gap < -1e-9);
    }

    SUBCASE("deterministic for a fixed seed, independent of jobs") {
        const ProbeReport a = minimality_probe(plane, uni, sol, 32, 0.05, 11, 1);
        const ProbeReport b = minimality_probe(plane, uni, sol, 32, 0.05, 11, 4);
        REQUIRE(a.gaps.size() == b.gaps.size());
        for (std::size_t i = 0; i < a.gaps.size(); ++i) CHECK(a.gaps[i] == b.gaps[i]);
        const ProbeReport c = minimality_probe(plane, uni, sol, 32, 0.05, 12, 1);
        bool all_equal = true;
        for (std::size_t i = 0; i < a.gaps.size(); ++i)
            all_equal = all_equal && a.gaps[i] == c.gaps[i];
        CHECK_FALSE(all_equal);  // a different seed draws different bumps
    }
}

TEST_CASE("grid oracle") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();

    SUBCASE("vertical target: the lattice column is the optimal path") {
        GridSpec spec;
        spec.rect = {-0.5, 0.5, -2.2, 0.0};
        spec.nu = 41;
        spec.nv = 89;
        const GridResult r = grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {0.0, -2.0}, spec);
        CHECK(r.time == doctest::Approx(2.0).epsilon(0.01));
        for (const ChartPoint& p : r.path.points) CHECK(std::abs(p.u) < 1e-12);
    }

    SUBCASE("cycloid target within tolerance, never materially below the truth") {
        GridSpec spec;
        spec.rect = {0.0, oracles::pi, -2.5, 0.0};
        spec.nu = 200;
        spec.nv = 200;
        const GridResult r =
            grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {oracles::pi, -2.0}, spec);
        CHECK(r.time == doctest::Approx(oracles::pi).epsilon(0.025));
        CHECK(r.time >= oracles::pi - 1e-3);  // lattice paths are admissible curves
        CHECK(r.path.points.front().u == doctest::Approx(0.0));
        CHECK(r.path.points.back().u == doctest::Approx(oracles::pi));
    }

    SUBCASE("refining the lattice cannot lengthen the optimum") {
        // resolutions chosen so B is an exact lattice node at every level and
        // each lattice's nodes are a superset of the previous one's
        GridSpec coarse;
        coarse.rect = {0.0, oracles::pi, -2.5, 0.0};
        coarse.nu = coarse.nv = 61;
        GridSpec fine = coarse;
        fine.nu = fine.nv = 121;
        GridSpec finest = coarse;
        finest.nu = finest.nv = 241;
        const double t0 =
            grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {oracles::pi, -2.0}, coarse).time;
        const double t1 =
            grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {oracles::pi, -2.0}, fine).time;
        const double t2 =
            grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {oracles::pi, -2.0}, finest).time;
        CHECK(t1 <= t0 + 1e-9);
        CHECK(t2 <= t1 + 1e-9);
    }

    SUBCASE("targets at or above the start level are unreachable") {
        GridSpec spec;
        spec.rect = {-1.0, 1.0, -1.0, 1.0};
        spec.nu = spec.nv = 21;
        CHECK_THROWS_AS(grid_oracle(plane, uni, 0.0, {0.0, 0.0}, {0.5, 0.5}, spec), Error);
    }
}
