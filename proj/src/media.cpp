#include "brach/media.hpp"

#include <charconv>
#include <cmath>

#include "brach/errors.hpp"

namespace brach {

namespace {

std::string terse(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, r.ptr);
}

double depth_below_start(double V, double V0, const std::string& who) {
    const double y = V0 - V;
    if (!(y > 0.0))
        raise(Errc::start_level_singularity,
              who + ": index evaluated at V >= V0 (V = " + std::to_string(V) + ")");
    return y;
}

}  // namespace

Potential uniform_potential() {
    return Potential{[](double, double v) { return v; }, Symmetry::independent_of_u, {},
                     "uniform"};
}

Potential central_power_potential(double n_exp) {
    if (!(n_exp > 0.0))
        raise(Errc::non_positive_exponent,
              "central_power_potential: n_exp = " + std::to_string(n_exp));
    return Potential{[n_exp](double u, double) { return -std::pow(u, -n_exp); },
                     Symmetry::independent_of_v, n_exp, "central:" + terse(n_exp)};
}

Potential height_potential(const SurfacePatch& surface) {
    return Potential{[surface](double u, double v) { return surface.embed(u, v).z; },
                     Symmetry::independent_of_v, {}, "uniform"};
}

Medium classical_index(const Potential& pot, double V0) {
    auto V = pot.V;
    return Medium{
        [V, V0](double u, double v) {
            return 1.0 / std::sqrt(depth_below_start(V(u, v), V0, "classical_index"));
        },
        [V, V0](double u, double v) {
            return std::sqrt(2.0 * depth_below_start(V(u, v), V0, "classical_index"));
        },
        MediumKind::classical,
        pot.symmetry,
        V0,
        0.0,
        "classical(" + pot.name + ")"};
}

Medium relativistic_index(const Potential& pot, double V0, double c) {
    if (!(c > 0.0))
        raise(Errc::config_error, "relativistic_index: c must be positive");
    auto V = pot.V;
    const double c2 = c * c;
    auto inv_n = [V, V0, c2](double u, double v) {
        const double y = depth_below_start(V(u, v), V0, "relativistic_index");
        return std::sqrt(y * (y + 2 * c2)) / (y + c2);
    };
    return Medium{[inv_n](double u, double v) { return 1.0 / inv_n(u, v); },
                  [inv_n, c](double u, double v) { return c * inv_n(u, v); },
                  MediumKind::relativistic,
                  pot.symmetry,
                  V0,
                  c,
                  "relativistic(" + pot.name + ", c=" + terse(c) + ")"};
}

Medium custom_medium(std::function<double(double, double)> n, Symmetry symmetry,
                     std::string name) {
    auto n_copy = n;
    return Medium{std::move(n),
                  [n_copy](double u, double v) { return 1.0 / n_copy(u, v); },
                  MediumKind::custom,
                  symmetry,
                  0.0,
                  0.0,
                  std::move(name)};
}

FieldSpec parse_field(const std::string& keyword, const SurfacePatch& surface) {
    auto uniform_for_surface = [&]() -> Potential {
        if (surface.name() == "plane") return uniform_potential();
        if (surface.name() == "polar")
            raise(Errc::config_error,
                  "uniform field on the polar chart is degenerate (flat height)");
        return height_potential(surface);
    };

    if (keyword == "uniform") return FieldSpec{uniform_for_surface(), {}, keyword};
    if (keyword.rfind("central:", 0) == 0) {
        const double n_exp = std::strtod(keyword.c_str() + 8, nullptr);
        return FieldSpec{central_power_potential(n_exp), {}, keyword};
    }
    if (keyword.rfind("relativistic:", 0) == 0) {
        const double c = std::strtod(keyword.c_str() + 13, nullptr);
        if (!(c > 0.0)) raise(Errc::config_error, "relativistic field needs c > 0: " + keyword);
        return FieldSpec{uniform_for_surface(), c, keyword};
    }
    raise(Errc::parse_error, "unknown field keyword '" + keyword + "'");
}

}  // namespace brach
