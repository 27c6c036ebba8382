#pragma once

#include <span>
#include <vector>

#include "brach/solver.hpp"

namespace brach {

/// Swept polar angle to the turning radius in a central field V = -u^-n,
/// plus the limiting geometry of the forbidden sector.
struct SectorReport {
    double n_exp = 0.0;
    double c0 = 0.0;
    double theta = 0.0;        // signed sweep to the turning point (negative branch)
    double theta_limit = 0.0;  // pi / (n_exp + 2), the c0 -> 0 magnitude
    double max_angle = 0.0;    // 2 |theta|, by mirror symmetry
    double sector_central_angle = 0.0;  // 2 pi n / (n + 2)
    double D = 0.0;            // recovered from c0
};

/// Start radius normalized to 1; requires 0 < c0 < 1.
SectorReport sector_angle(double n_exp, double c0, double quad_tol = 1e-12);

/// |theta| over a strictly decreasing c0 sequence; monotone increasing toward
/// pi/(n_exp+2) and bounded by it.
std::vector<std::pair<double, double>> sector_limit_convergence(double n_exp,
                                                                std::span<const double> c0_seq,
                                                                double quad_tol = 1e-12);

struct Intersection {
    double u = 0.0, v = 0.0;  // chart coordinates (curve A's winding)
    double time_a = 0.0, time_b = 0.0;
    int winding_shift = 0;  // multiples of the chart period applied to B
};

struct IntersectionReport {
    bool coincident = false;
    std::vector<Intersection> points;  // ordered by time along curve A
    int winner = 0;                    // 0: A first at the crossing, 1: B
    double gap = 0.0;                  // time_b - time_a at the first crossing
};

/// Transversal crossings of two sampled curves sharing surface and start,
/// winding-aware on periodic charts. Raises NoIntersection when none exist
/// beyond the shared start point.
IntersectionReport compare_intersecting(const CurveSolution& a, const CurveSolution& b,
                                        double chart_tol = 1e-7);

struct FrenetSample {
    double s = 0.0;
    Vec3 tangent, normal, binormal;
    double curvature = 0.0;
    double torsion = 0.0;           // raw finite-difference value
    double torsion_smoothed = 0.0;  // 5-point moving average of the frames
    bool degenerate = false;        // curvature below 1e-10; torsion undefined
};

struct FrenetData {
    std::vector<FrenetSample> samples;
    double max_abs_torsion = 0.0;           // over non-degenerate samples
    double max_abs_torsion_smoothed = 0.0;  // idem, smoothed frames
    double residual_tangent = 0.0;          // max |T' - kappa N|
    double residual_binormal = 0.0;         // max |B' + tau N|
};

/// Discrete Frenet frames by 4th-order finite differences in the chord-length
/// parameter. Needs at least 7 points.
FrenetData frenet_profile(std::span<const Vec3> points);
FrenetData frenet_profile(const CurveSolution& curve);

struct PlaneFit {
    Vec3 point;   // centroid of the samples
    Vec3 normal;  // unit
    double max_deviation = 0.0;     // largest orthogonal distance of a sample
    double origin_distance = 0.0;   // distance of the origin from the plane
};

/// Least-squares plane through the embedded samples.
PlaneFit planarity_check(std::span<const Vec3> points);
PlaneFit planarity_check(const CurveSolution& curve);

/// Reduced Euler-Lagrange first-integral residual dF/dfree' - C at each
/// interior sample, with the free-coordinate slope taken from 4th-order
/// finite differences of the samples themselves.
std::vector<double> first_integral_residual(const CurveSolution& curve,
                                            const SurfacePatch& surface, const Potential& pot);

}  // namespace brach
