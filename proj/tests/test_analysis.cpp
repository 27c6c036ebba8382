#include <cmath>

#include "brach/analysis.hpp"
#include "brach/errors.hpp"
#include "brach/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brach;

namespace {

// independent oracle: raw quadrature of the untransformed sweep integral
// theta = -int_{c0}^{1} sqrt((1-w^n)/(w^2 (w^(n+2) D - (1-w^n)))) dw via the
// double-exponential rule (no substitution machinery shared with the library)
double sector_theta_raw(double n, double c0) {
    const double D = std::pow(c0, -n - 2.0) - std::pow(c0, -2.0);
    auto f = [&](double w) {
        const double num = 1.0 - std::pow(w, n);
        const double den = w * w * (std::pow(w, n + 2.0) * D - num);
        if (den <= 0.0 || num < 0.0) return 0.0;
        return std::sqrt(num / den);
    };
    return -quad::tanh_sinh(f, c0, 1.0, 1e-13).value;
}

}  // namespace

TEST_CASE("sector angle against the raw-integral oracle") {
    for (const double n : {1.0, 2.0, 4.0}) {
        for (const double c0 : {0.5, 0.1, 0.01}) {
            const SectorReport rep = sector_angle(n, c0);
            const double raw = sector_theta_raw(n, c0);
            CHECK(rep.theta == doctest::Approx(raw).epsilon(1e-6));
            CHECK(rep.theta < 0.0);  // fourth-quadrant sweep convention
            CHECK(rep.max_angle == doctest::Approx(2.0 * std::abs(rep.theta)));
            CHECK(rep.D == doctest::Approx(std::pow(c0, -n - 2) - std::pow(c0, -2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sector angle limits and bounds") {
    SUBCASE("n = 1: sweep approaches pi/3, max polar angle 2 pi/3") {
        const SectorReport rep = sector_angle(1.0, 1e-4);
        CHECK(std::abs(rep.theta) == doctest::Approx(oracles::pi / 3.0).epsilon(1e-2));
        CHECK(rep.max_angle == doctest::Approx(2.0 * oracles::pi / 3.0).epsilon(1e-2));
        CHECK(rep.theta_limit == doctest::Approx(oracles::pi / 3.0));
    }
    SUBCASE("n = 2: forbidden sector central angle is pi") {
        CHECK(sector_angle(2.0, 0.01).sector_central_angle == doctest::Approx(oracles::pi));
    }
    SUBCASE("n = 4: limit pi/6") {
        const SectorReport rep = sector_angle(4.0, 1e-4);
        CHECK(std::abs(rep.theta) == doctest::Approx(oracles::pi / 6.0).epsilon(1e-2));
    }
    SUBCASE("turning immediately sweeps nothing") {
        CHECK(std::abs(sector_angle(1.0, 1.0 - 1e-9).theta) < 1e-4);
    }
    SUBCASE("strict domination bound |theta| < pi/(n+2)") {
        for (const double n : {0.5, 1.0, 2.0, 4.0, 7.0})
            for (const double c0 : {0.9, 0.5, 0.1, 1e-3, 1e-5})
                CHECK(std::abs(sector_angle(n, c0).theta) < oracles::pi / (n + 2.0) + 1e-12);
    }
    SUBCASE("monotone in c0: more room to fall sweeps more angle") {
        double prev = std::abs(sector_angle(1.0, 0.9).theta);
        for (const double c0 : {0.7, 0.5, 0.3, 0.1, 0.03}) {
            const double cur = std::abs(sector_angle(1.0, c0).theta);
            CHECK(cur > prev);
            prev = cur;
        }
    }
    CHECK_THROWS_AS(sector_angle(1.0, 0.0), Error);
    CHECK_THROWS_AS(sector_angle(1.0, 1.0), Error);
    CHECK_THROWS_AS(sector_angle(-1.0, 0.5), Error);
}

TEST_CASE("sector limit convergence sequences") {
    const std::vector<double> seq{0.5, 0.1, 0.01, 1e-4};
    const auto rows = sector_limit_convergence(1.0, seq);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].second > rows[i - 1].second);
    CHECK(rows.back().second == doctest::Approx(oracles::pi / 3.0).epsilon(1e-2));
    for (const auto& [c0, th] : rows) CHECK(th < oracles::pi / 3.0 + 1e-12);

    const std::vector<double> bad{0.1, 0.5};
    CHECK_THROWS_AS(sector_limit_convergence(1.0, bad), Error);
}

TEST_CASE("intersection comparison") {
    const SurfacePatch plane = make_vertical_plane();
    const Potential uni = uniform_potential();
    SolverConfig cfg;
    cfg.C = 1.0 / std::sqrt(2.0);

    SUBCASE("identical curves coincide with zero gap") {
        const CurveSolution a = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);
        const CurveSolution b = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);
        const IntersectionReport rep = compare_intersecting(a, b);
        CHECK(rep.coincident);
        CHECK(rep.gap == 0.0);
    }

    SUBCASE("mirror branches meet only at the start") {
        SolverConfig minus = cfg;
        minus.branch = Branch::minus;
        const CurveSolution right = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);
        const CurveSolution left = solve_theorem1(plane, uni, {0.0, 0.0}, minus);
        CHECK_THROWS_AS(compare_intersecting(right, left), Error);
    }

    SUBCASE("hyperboloid spirals intersect across a winding") {
        const SurfacePatch hyp = make_hyperboloid();
        const Potential pot = height_potential(hyp);
        SolverConfig c1;
        c1.C = 1.405;
        c1.samples = 700;
        c1.max_windings = 3;
        SolverConfig c2 = c1;
        c2.C = 1.4142;
        const CurveSolution a = solve_theorem1(hyp, pot, {0.0, 0.0}, c1);
        const CurveSolution b = solve_theorem1(hyp, pot, {0.0, 0.0}, c2);
        const IntersectionReport rep = compare_intersecting(a, b);
        REQUIRE(!rep.points.empty());
        CHECK(std::abs(rep.gap) > 0.0);

        // antisymmetry: swapping the curves negates the gap and the winner
        const IntersectionReport swapped = compare_intersecting(b, a);
        CHECK(swapped.gap == doctest::Approx(-rep.gap).epsilon(1e-12));
        CHECK(swapped.winner == 1 - rep.winner);
    }

    SUBCASE("different problems are rejected") {
        const CurveSolution a = solve_theorem1(plane, uni, {0.0, 0.0}, cfg);
        const SurfacePatch cone = make_cone();
        const Potential hp = height_potential(cone);
        SolverConfig c2;
        c2.C = 0.35;
        const CurveSolution b = solve_theorem1(cone, hp, {1.0, 0.0}, c2);
        CHECK_THROWS_AS(compare_intersecting(a, b), Error);
    }
}

TEST_CASE("Frenet frames") {
    SUBCASE("planar cycloid has vanishing raw torsion") {
        const SurfacePatch plane = make_vertical_plane();
        const Potential uni = uniform_potential();
        SolverConfig cfg;
        cfg.C = 1.0 / std::sqrt(2.0);
        cfg.samples = 600;
        const FrenetData fd = frenet_profile(solve_theorem1(plane, uni, {0.0, 0.0}, cfg));
        CHECK(fd.max_abs_torsion < 1e-6);
        CHECK(fd.max_abs_torsion_smoothed < 1e-6);
        // frames are orthonormal by construction
        for (const FrenetSample& s : fd.samples) {
            if (s.degenerate) continue;
            CHECK(std::abs(norm(s.tangent) - 1.0) < 1e-9);
            CHECK(std::abs(norm(s.normal) - 1.0) < 1e-9);
            CHECK(std::abs(norm(s.binormal) - 1.0) < 1e-9);
            CHECK(std::abs(dot(s.tangent, s.normal)) < 1e-9);
            CHECK(std::abs(dot(s.tangent, s.binormal)) < 1e-9);
            CHECK(std::abs(dot(s.normal, s.binormal)) < 1e-9);
        }
    }

    SUBCASE("helix fixture reproduces the textbook closed forms") {
        const double a = 1.0, b = 0.5;
        const auto pts = oracles::helix_points(a, b, 800);
        const FrenetData fd = frenet_profile(pts);
        const double kappa_ref = a / (a * a + b * b);
        const double tau_ref = b / (a * a + b * b);
        for (std::size_t i = 40; i + 40 < fd.samples.size(); i += 25) {
            CHECK(fd.samples[i].curvature == doctest::Approx(kappa_ref).epsilon(1e-4));
            CHECK(fd.samples[i].torsion == doctest::Approx(tau_ref).epsilon(1e-4));
        }
    }

    SUBCASE("central-field meridian is torsion-free") {
        const SurfacePatch polar = make_polar_plane();
        const Potential cen = central_power_potential(1.0);
        SolverConfig cfg;
        cfg.C = 1.0;
        cfg.branch = Branch::minus;
        const FrenetData fd = frenet_profile(solve_theorem1(polar, cen, {1.0, 0.0}, cfg));
        CHECK(fd.max_abs_torsion < 1e-6);
    }

    SUBCASE("degenerate curvature is flagged, not fatal") {
        std::vector<Vec3> line;
        for (int i = 0; i < 30; ++i) line.push_back({0.1 * i, 0.2 * i, 0.0});
        const FrenetData fd = frenet_profile(line);
        for (const auto& s : fd.samples) CHECK(s.degenerate);
    }

    SUBCASE("needs at least 7 samples") {
        std::vector<Vec3> few = {{0, 0, 0}, {1, 0, 0}, {2, 1, 0}, {3, 1, 1}};
        CHECK_THROWS_AS(frenet_profile(few), Error);
    }
}

TEST_CASE("planarity check") {
    SUBCASE("plane-chart curves are exactly planar") {
        const SurfacePatch plane = make_vertical_plane();
        const Potential uni = uniform_potential();
        SolverConfig cfg;
        cfg.C = 1.0 / std::sqrt(2.0);
        const PlaneFit fit = planarity_check(solve_theorem1(plane, uni, {0.0, 0.0}, cfg));
        CHECK(fit.max_deviation < 1e-12);
    }

    SUBCASE("rigidly rotated central-field curve stays planar through the origin") {
        const SurfacePatch polar = make_polar_plane();
        const Potential cen = central_power_potential(1.0);
        SolverConfig cfg;
        cfg.C = 1.0;
        cfg.branch = Branch::minus;
        const CurveSolution curve = solve_theorem1(polar, cen, {1.0, 0.0}, cfg);
        const auto rot = oracles::random_rotation(20260808);
        std::vector<Vec3> pts;
        for (const Sample& s : curve.samples) pts.push_back(rot.apply(s.point));
        const PlaneFit fit = planarity_check(pts);
        CHECK(fit.max_deviation < 1e-8);
        CHECK(fit.origin_distance < 1e-8);
    }

    SUBCASE("helix is the negative control") {
        const auto pts = oracles::helix_points(1.0, 0.5, 400);
        const PlaneFit fit = planarity_check(pts);
        CHECK(fit.max_deviation > 1e-3);
    }
}

TEST_CASE("mirror branches on the cylinder meet on the far side at equal times") {
    // the two branches wrap opposite ways around the chart and collide where
    // each has swept half a turn; by symmetry neither is faster there
    const SurfacePatch cyl = make_cylinder();
    const Potential pot = height_potential(cyl);
    SolverConfig plus;
    plus.C = 0.5;  // half-arch sweep pi/(2 C^2) = 2 pi exceeds the half turn
    SolverConfig minus = plus;
    minus.branch = Branch::minus;
    const CurveSolution a =
        continue_past_turning(solve_theorem1(cyl, pot, {1.0, 0.0}, plus), plus);
    const CurveSolution b =
        continue_past_turning(solve_theorem1(cyl, pot, {1.0, 0.0}, minus), minus);
    const IntersectionReport rep = compare_intersecting(a, b);
    REQUIRE(!rep.points.empty());
    const Intersection& first = rep.points.front();
    CHECK(first.winding_shift != 0);
    CHECK(std::abs(std::abs(first.v) - oracles::pi) < 1e-6);
    CHECK(std::abs(rep.gap) < 1e-9);
}
