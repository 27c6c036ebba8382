#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "brach/vec3.hpp"

namespace brach {

/// Open rectangle in chart coordinates; +-infinity marks an unbounded side.
struct Domain {
    double u_min, u_max, v_min, v_max;
    bool contains(double u, double v) const {
        return u > u_min && u < u_max && v > v_min && v < v_max;
    }
};

struct ChartPoint {
    double u = 0.0;
    double v = 0.0;
};

/// Orthogonal coordinate patch x(u, v) with metric ds^2 = E du^2 + G dv^2.
/// Immutable after construction; all evaluations are pure.
class SurfacePatch {
  public:
    using Scalar2 = std::function<double(double, double)>;
    using Embedding = std::function<Vec3(double, double)>;

    SurfacePatch(std::string name, Scalar2 E, Scalar2 G, Embedding embed, Domain domain,
                 std::optional<double> v_period = {});

    double E(double u, double v) const;
    double G(double u, double v) const;
    Vec3 embed(double u, double v) const;

    const Domain& domain() const { return domain_; }
    std::optional<double> v_period() const { return v_period_; }
    const std::string& name() const { return name_; }

    void require_inside(double u, double v) const;

  private:
    std::string name_;
    Scalar2 E_, G_;
    Embedding embed_;
    Domain domain_;
    std::optional<double> v_period_;
};

/// Radius/height profile of a surface of revolution. Derivatives may be left
/// empty; central differences with step 1e-6 * max(1, |u|) are used instead.
struct RevolutionProfile {
    std::function<double(double)> h;  // radius, must stay > 0
    std::function<double(double)> g;  // height
    std::function<double(double)> dh;
    std::function<double(double)> dg;
    double u_min = -std::numeric_limits<double>::infinity();
    double u_max = std::numeric_limits<double>::infinity();
};

SurfacePatch make_vertical_plane();
SurfacePatch make_surface_of_revolution(const RevolutionProfile& profile,
                                        const std::string& name = "revolution");
SurfacePatch make_polar_plane();

// the shipped revolution charts
SurfacePatch make_cone();         // h(u) = g(u) = u, u > 0
SurfacePatch make_hyperboloid();  // h = cosh u, g = sinh u
SurfacePatch make_cylinder();     // h = 1, g = u

/// CLI/config keyword grammar:
///   plane | cone | hyperboloid | cylinder | polar | revolution:<h-expr>:<g-expr>
SurfacePatch parse_surface(const std::string& keyword);

}  // namespace brach
