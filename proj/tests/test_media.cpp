#include <cmath>

#include "brach/errors.hpp"
#include "brach/media.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brach;

TEST_CASE("uniform potential") {
    const Potential p = uniform_potential();
    CHECK(p.V(5.0, -2.0) == -2.0);
    CHECK(p.V(0.0, 0.0) == 0.0);
    CHECK(p.symmetry == Symmetry::independent_of_u);
    for (double u = -4.0; u <= 4.0; u += 0.5)
        CHECK(std::abs(p.V(u, 1.0) - p.V(0.0, 1.0)) < 1e-12);
}

TEST_CASE("central power potential") {
    const Potential p1 = central_power_potential(1.0);
    CHECK(p1.V(2.0, 0.3) == doctest::Approx(-0.5).epsilon(1e-15));
    const Potential p2 = central_power_potential(2.0);
    CHECK(p2.V(1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(p2.V(1e9, 0.0)) < 1e-8);  // power law decays to zero
    CHECK(p1.symmetry == Symmetry::independent_of_v);
    CHECK(p1.central_exponent == 1.0);
    CHECK_THROWS_AS(central_power_potential(0.0), Error);
    CHECK_THROWS_AS(central_power_potential(-2.0), Error);
}

TEST_CASE("classical index") {
    const Potential uni = uniform_potential();
    const Medium m = classical_index(uni, 0.0);
    CHECK(m.n(3.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.n(3.0, -4.0) == doctest::Approx(0.5).epsilon(1e-15));  // 1/sqrt(4)
    CHECK(m.speed(3.0, -2.0) == doctest::Approx(2.0).epsilon(1e-15));  // sqrt(2 * 2)

    const Medium mc = classical_index(central_power_potential(1.0), -1.0);
    CHECK(mc.n(0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-15));  // V0 - V = -1 + 2

    // n^2 (V0 - V) = 1 wherever V < V0
    for (double v = -5.0; v < -0.1; v += 0.3) {
        const double n = m.n(0.0, v);
        CHECK(n * n * (0.0 - v) == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(m.n(0.0, 0.0), Error);   // on the start level
    CHECK_THROWS_AS(m.n(0.0, 1.0), Error);   // above it
}

TEST_CASE("relativistic index") {
    const Potential uni = uniform_potential();

    SUBCASE("hand value at c = 10, v = -100") {
        const Medium m = relativistic_index(uni, 0.0, 10.0);
        const double n = m.n(0.0, -100.0);
        CHECK(1.0 / (n * n) == doctest::Approx(0.75).epsilon(1e-12));
        // defining identity (1/n)^2 = y (y + 2c^2) / (y + c^2)^2 on a grid
        for (double v = -50.0; v < -1.0; v += 3.7) {
            const double y = -v;
            const double lhs = 1.0 / std::pow(m.n(0.0, v), 2);
            const double rhs = y * (y + 200.0) / std::pow(y + 100.0, 2);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }

    SUBCASE("speed bound and monotonicity") {
        const Medium m = relativistic_index(uni, 0.0, 10.0);
        double prev = 0.0;
        for (double v = -0.5; v > -400.0; v -= 7.0) {
            const double s = m.speed(0.0, v);
            CHECK(s < 10.0);          // strictly below c
            CHECK(1.0 / m.n(0.0, v) < 1.0);  // index exceeds one
            CHECK(s > prev);          // faster as V drops
            prev = s;
        }
    }

    SUBCASE("Newtonian limit: reciprocal-speed ratio tends to 1") {
        const Medium big = relativistic_index(uni, 0.0, 1e8);
        const Medium cl = classical_index(uni, 0.0);
        for (double v = -9.0; v < -0.5; v += 0.7)
            CHECK(big.speed(0.0, v) / cl.speed(0.0, v) == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("O(1/c^2) convergence rate (Richardson pair)") {
        const Medium m3 = relativistic_index(uni, 0.0, 1e3);
        const Medium m4 = relativistic_index(uni, 0.0, 1e4);
        const Medium cl = classical_index(uni, 0.0);
        const double v = -4.0;
        const double d3 = std::abs(m3.speed(0.0, v) / cl.speed(0.0, v) - 1.0);
        const double d4 = std::abs(m4.speed(0.0, v) / cl.speed(0.0, v) - 1.0);
        CHECK(d3 / d4 > 50.0);
        CHECK(d3 / d4 < 200.0);  // ~100 for an O(1/c^2) rate
    }

    CHECK_THROWS_AS(relativistic_index(uni, 0.0, 0.0), Error);
    const Medium m = relativistic_index(uni, 0.0, 10.0);
    CHECK_THROWS_AS(m.n(0.0, 0.5), Error);
}

TEST_CASE("field keywords") {
    const SurfacePatch plane = make_vertical_plane();
    const SurfacePatch cone = make_cone();

    const FieldSpec uni = parse_field("uniform", plane);
    CHECK(uni.potential.V(2.0, -3.0) == -3.0);
    CHECK_FALSE(uni.relativistic_c.has_value());

    const FieldSpec coneuni = parse_field("uniform", cone);
    CHECK(coneuni.potential.V(1.5, 0.3) == doctest::Approx(1.5).epsilon(1e-15));  // V = g(u) = u
    CHECK(coneuni.potential.symmetry == Symmetry::independent_of_v);

    const FieldSpec cen = parse_field("central:2", plane);
    CHECK(cen.potential.V(2.0, 0.0) == doctest::Approx(-0.25).epsilon(1e-15));

    const FieldSpec rel = parse_field("relativistic:10", plane);
    CHECK(rel.relativistic_c == 10.0);

    CHECK_THROWS_AS(parse_field("magnetic", plane), Error);
    CHECK_THROWS_AS(parse_field("central:0", plane), Error);
    CHECK_THROWS_AS(parse_field("relativistic:-1", plane), Error);
    CHECK_THROWS_AS(parse_field("uniform", make_polar_plane()), Error);
}
