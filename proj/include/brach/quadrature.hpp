#pragma once

#include <functional>

namespace brach::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    long evaluations = 0;
};

/// Adaptive Gauss-Kronrod 7/15 on [a, b] to absolute tolerance. The integrand
/// is never evaluated at the interval endpoints.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol);

/// tanh-sinh (double exponential) rule on [a, b]; converges for integrable
/// endpoint singularities without substitution. Used as the fallback route.
Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double abs_tol);

/// Integrate f over [a, b] when f may blow up like 1/sqrt(distance-to-endpoint)
/// at a flagged end. Each flagged end is regularized exactly by x = end -/+ t^2
/// before handing the smooth remainder to gauss_kronrod.
Result sqrt_endpoints(const std::function<double(double)>& f, double a, double b, bool singular_a,
                      bool singular_b, double abs_tol);

}  // namespace brach::quad
