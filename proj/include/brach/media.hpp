#pragma once

#include <functional>
#include <optional>
#include <string>

#include "brach/geometry.hpp"

namespace brach {

/// Which of the two reduction hypotheses holds: all field/metric data
/// independent of u, or independent of v.
enum class Symmetry { independent_of_u, independent_of_v };

/// Potential energy per unit mass over a chart. Pure and immutable.
struct Potential {
    std::function<double(double, double)> V;
    Symmetry symmetry;
    std::optional<double> central_exponent;  // set for V = -u^-n central fields
    std::string name;
};

/// V(u, v) = v, the unit-weight uniform field on the vertical plane chart.
Potential uniform_potential();

/// V(u, v) = -u^-n_exp on the polar chart (u = radius). Requires n_exp > 0.
Potential central_power_potential(double n_exp);

/// V = z-coordinate of the embedding: uniform gravity on a revolution chart,
/// where the height is g(u).
Potential height_potential(const SurfacePatch& surface);

enum class MediumKind { classical, relativistic, custom };

/// Refractive index over a chart, plus the physical particle speed it encodes.
/// `n` fixes the ray shape (invariant under constant rescaling); `speed` fixes
/// the clock along the ray.
struct Medium {
    std::function<double(double, double)> n;
    std::function<double(double, double)> speed;
    MediumKind kind;
    Symmetry symmetry;
    double V0 = 0.0;
    double light_speed = 0.0;  // relativistic kind only
    std::string name;
};

/// n = (V0 - V)^(-1/2); light rays in this medium are the classical
/// least-time curves. Evaluation where V >= V0 raises StartLevelSingularity.
Medium classical_index(const Potential& pot, double V0);

/// (1/n)^2 = (V0-V)(V0-V+2c^2)/(V0-V+c^2)^2: a charged particle at
/// relativistic speed in a uniform electric field. Requires c > 0.
Medium relativistic_index(const Potential& pot, double V0, double c);

/// Arbitrary user index (experimental); speed is taken as 1/n (c = 1).
Medium custom_medium(std::function<double(double, double)> n, Symmetry symmetry,
                     std::string name = "custom");

/// Parsed CLI/config field keyword: uniform | central:<n> | relativistic:<c>.
/// `uniform` maps to V = v on the plane and to the embedding height on
/// revolution charts. relativistic carries the c parameter; the medium itself
/// is built once V0 is known.
struct FieldSpec {
    Potential potential;
    std::optional<double> relativistic_c;
    std::string keyword;
};

FieldSpec parse_field(const std::string& keyword, const SurfacePatch& surface);

}  // namespace brach
