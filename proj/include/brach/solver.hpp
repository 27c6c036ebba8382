#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brach/geometry.hpp"
#include "brach/media.hpp"

namespace brach {

enum class Branch { plus, minus };

/// March direction of the independent coordinate. `automatic` follows the
/// falling direction (potential decreasing); constant-index media need an
/// explicit choice.
enum class March { automatic, increasing, decreasing };

struct SolverConfig {
    double C = 1.0;  // integration constant; >= 0, direction lives in `branch`
    Branch branch = Branch::plus;
    double quad_tol = 1e-10;  // absolute quadrature tolerance per sample interval
    double root_tol = 1e-12;  // turning-point root tolerance
    int max_windings = 8;     // free-coordinate travel cap, in full turns
    int samples = 1024;       // base sample intervals per arc
    March direction = March::automatic;
    int jobs = 1;             // parallel batch width; 1 = serial

    /// D = 1/C^2 (infinite when C = 0).
    double D() const;
    void validate() const;
};

struct StopRule {
    std::optional<double> target_independent;  // stop when the marching coordinate gets here
    std::optional<double> span;                // |indep - start| cap for non-turning curves
};

struct TurningPoint {
    double c0 = 0.0;     // independent-coordinate value where the denominator vanishes
    double param = 0.0;  // curve parameter at which it occurs
};

struct Sample {
    double param;  // accumulated independent-coordinate travel, strictly increasing
    double u, v;
    Vec3 point;
    double time;  // seconds from release, strictly increasing
};

namespace detail {
struct Problem;
}

struct CurveMeta {
    std::string surface;
    std::string field;
    double C = 0.0;
    Branch branch = Branch::plus;
    double V0 = 0.0;
    int theorem = 1;         // 1: potential route, 3: medium route
    int reduction_case = 1;  // 1: curve x(u(v), v), 2: curve x(u, v(u))
    std::optional<double> v_period;  // winding charts: period of v
    bool truncated = false;  // winding/span cap fired before a natural end
    bool hit_boundary = false;
    bool continued = false;  // extends past the turning point
    std::shared_ptr<const detail::Problem> problem;
};

struct CurveSolution {
    std::vector<Sample> samples;
    std::optional<TurningPoint> turning;
    double total_time = 0.0;
    CurveMeta meta;
};

/// Least-time curve from rest at A under the reduced Euler-Lagrange first
/// integral; adaptive quadrature with exact square-root regularization at the
/// rest and turning singularities.
CurveSolution solve_theorem1(const SurfacePatch& surface, const Potential& pot, ChartPoint A,
                             const SolverConfig& cfg, const StopRule& stop = {});

/// Light-ray path in a medium of index n via the eikonal reduction; with a
/// classical medium this reproduces solve_theorem1 sample for sample.
CurveSolution solve_theorem3(const SurfacePatch& surface, const Medium& medium, ChartPoint A,
                             const SolverConfig& cfg, const StopRule& stop = {});

std::optional<TurningPoint> find_turning_point(const SurfacePatch& surface, const Potential& pot,
                                               ChartPoint A, const SolverConfig& cfg);
std::optional<TurningPoint> find_turning_point(const SurfacePatch& surface, const Medium& medium,
                                               ChartPoint A, const SolverConfig& cfg);

/// Extends a curve beyond its turning point with the branch sign reversed;
/// central-field extensions mirror the incoming arc across the turning ray.
/// Runs until the start level is reached again, or `stop` fires.
CurveSolution continue_past_turning(const CurveSolution& curve, const SolverConfig& cfg,
                                    const StopRule& stop = {});

struct ShootResult {
    SolverConfig config;
    CurveSolution curve;
};

/// Finds C (and branch) so the curve from A passes within shoot_tol of B in
/// chart coordinates. Targets beyond the turning point use the continued arc.
ShootResult shoot(const SurfacePatch& surface, const Potential& pot, ChartPoint A, ChartPoint B,
                  const SolverConfig& cfg_template, double shoot_tol = 1e-8);
ShootResult shoot(const SurfacePatch& surface, const Medium& medium, ChartPoint A, ChartPoint B,
                  const SolverConfig& cfg_template, double shoot_tol = 1e-8);

/// |d free / d indep| along the solution as a function of the independent
/// coordinate (diagnostic; lets tests compare against closed-form integrands).
std::function<double(double)> free_rate(const SurfacePatch& surface, const Potential& pot,
                                        ChartPoint A, const SolverConfig& cfg);
std::function<double(double)> free_rate(const SurfacePatch& surface, const Medium& medium,
                                        ChartPoint A, const SolverConfig& cfg);

}  // namespace brach
