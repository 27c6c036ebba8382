#include "brach/geometry.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "brach/errors.hpp"
#include "brach/expr.hpp"
#include "brach/numeric.hpp"

namespace brach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::function<double(double)> central_difference(std::function<double(double)> f) {
    return [f = std::move(f)](double u) {
        const double h = 1e-6 * std::max(1.0, std::abs(u));
        return (f(u + h) - f(u - h)) / (2 * h);
    };
}

}  // namespace

SurfacePatch::SurfacePatch(std::string name, Scalar2 E, Scalar2 G, Embedding embed, Domain domain,
                           std::optional<double> v_period)
    : name_(std::move(name)),
      E_(std::move(E)),
      G_(std::move(G)),
      embed_(std::move(embed)),
      domain_(domain),
      v_period_(v_period) {}

void SurfacePatch::require_inside(double u, double v) const {
    if (!domain_.contains(u, v)) {
        std::ostringstream os;
        os << name_ << ": (" << u << ", " << v << ") is outside the open chart domain";
        raise(Errc::domain_error, os.str());
    }
}

double SurfacePatch::E(double u, double v) const {
    require_inside(u, v);
    return E_(u, v);
}

double SurfacePatch::G(double u, double v) const {
    require_inside(u, v);
    return G_(u, v);
}

Vec3 SurfacePatch::embed(double u, double v) const {
    require_inside(u, v);
    return embed_(u, v);
}

SurfacePatch make_vertical_plane() {
    return SurfacePatch(
        "plane", [](double, double) { return 1.0; }, [](double, double) { return 1.0; },
        [](double u, double v) { return Vec3{u, 0.0, v}; }, Domain{-kInf, kInf, -kInf, kInf});
}

SurfacePatch make_surface_of_revolution(const RevolutionProfile& profile,
                                        const std::string& name) {
    auto h = profile.h;
    auto g = profile.g;
    auto dh = profile.dh ? profile.dh : central_difference(h);
    auto dg = profile.dg ? profile.dg : central_difference(g);

    auto radius = [h, name](double u) {
        const double r = h(u);
        if (!(r > 0.0))
            raise(Errc::non_positive_radius,
                  name + ": h(" + std::to_string(u) + ") = " + std::to_string(r));
        return r;
    };

    // spot-check the radius over a finite declared range
    if (std::isfinite(profile.u_min) && std::isfinite(profile.u_max)) {
        const int n = 64;
        for (int i = 0; i <= n; ++i) {
            const double t = (i + 0.5) / (n + 1);
            radius(profile.u_min + t * (profile.u_max - profile.u_min));
        }
    }

    return SurfacePatch(
        name,
        [dh, dg](double u, double) {
            const double a = dh(u), b = dg(u);
            return a * a + b * b;
        },
        [radius](double u, double) {
            const double r = radius(u);
            return r * r;
        },
        [radius, g](double u, double v) {
            // v is an unbounded winding coordinate; cos/sin reduce it mod 2*pi
            const double r = radius(u);
            return Vec3{r * std::cos(v), r * std::sin(v), g(u)};
        },
        Domain{profile.u_min, profile.u_max, -kInf, kInf}, 2 * numeric::pi);
}

SurfacePatch make_polar_plane() {
    return SurfacePatch(
        "polar", [](double, double) { return 1.0; },
        [](double u, double) { return u * u; },
        [](double u, double v) { return Vec3{u * std::cos(v), u * std::sin(v), 0.0}; },
        Domain{0.0, kInf, -numeric::pi, numeric::pi});
}

SurfacePatch make_cone() {
    RevolutionProfile p;
    p.h = [](double u) { return u; };
    p.g = [](double u) { return u; };
    p.dh = [](double) { return 1.0; };
    p.dg = [](double) { return 1.0; };
    p.u_min = 0.0;
    p.u_max = kInf;
    return make_surface_of_revolution(p, "cone");
}

SurfacePatch make_hyperboloid() {
    RevolutionProfile p;
    p.h = [](double u) { return std::cosh(u); };
    p.g = [](double u) { return std::sinh(u); };
    p.dh = [](double u) { return std::sinh(u); };
    p.dg = [](double u) { return std::cosh(u); };
    return make_surface_of_revolution(p, "hyperboloid");
}

SurfacePatch make_cylinder() {
    RevolutionProfile p;
    p.h = [](double) { return 1.0; };
    p.g = [](double u) { return u; };
    p.dh = [](double) { return 0.0; };
    p.dg = [](double) { return 1.0; };
    return make_surface_of_revolution(p, "cylinder");
}

SurfacePatch parse_surface(const std::string& keyword) {
    if (keyword == "plane") return make_vertical_plane();
    if (keyword == "cone") return make_cone();
    if (keyword == "hyperboloid") return make_hyperboloid();
    if (keyword == "cylinder") return make_cylinder();
    if (keyword == "polar") return make_polar_plane();
    if (keyword.rfind("revolution:", 0) == 0) {
        const std::string rest = keyword.substr(11);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            raise(Errc::parse_error, "revolution surface needs two expressions: " + keyword);
        RevolutionProfile p;
        p.h = expr::parse_unary(rest.substr(0, colon));
        p.g = expr::parse_unary(rest.substr(colon + 1));
        return make_surface_of_revolution(p, keyword);
    }
    raise(Errc::parse_error, "unknown surface keyword '" + keyword + "'");
}

}  // namespace brach
