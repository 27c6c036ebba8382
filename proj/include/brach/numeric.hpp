#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "brach/vec3.hpp"

namespace brach::numeric {

/// 4th-order central difference df/dx; step is scaled by max(1, |x|).
double derivative(const std::function<double(double)>& f, double x, double step = 1e-3);

/// Fornberg weights for the m-th derivative at x0 given arbitrary distinct nodes.
/// Returns one weight per node.
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

/// Derivative of sampled data y(x) at index i, using a window of `width` nodes
/// (4th order for width 5 on smooth data).
double sampled_derivative(std::span<const double> xs, std::span<const double> ys, std::size_t i,
                          int width = 5);

/// Root of f in [a, b] with f(a), f(b) of opposite sign. Bisection with secant
/// acceleration; |interval| <= tol on return.
double bracketed_root(const std::function<double(double)>& f, double a, double b, double tol);

/// Deterministic low-discrepancy sequence in (0,1)^2 (Halton bases 2, 3).
std::vector<std::pair<double, double>> halton2(int count);

struct SymEigen3 {
    std::array<double, 3> values;  // ascending
    std::array<Vec3, 3> vectors;   // unit, matching values
};

/// Jacobi eigen-decomposition of a symmetric 3x3 given as xx,xy,xz,yy,yz,zz.
SymEigen3 sym_eigen3(const std::array<double, 6>& packed);

inline constexpr double pi = 3.14159265358979323846;

}  // namespace brach::numeric
