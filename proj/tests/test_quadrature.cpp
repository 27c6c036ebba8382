#include <cmath>

#include "brach/numeric.hpp"
#include "brach/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace brach;

TEST_CASE("gauss_kronrod on smooth integrands") {
    auto sin_f = [](double x) { return std::sin(x); };
    CHECK(quad::gauss_kronrod(sin_f, 0.0, oracles::pi, 1e-12).value == doctest::Approx(2.0).epsilon(1e-13));

    auto osc = [](double x) { return std::cos(20.0 * x); };
    CHECK(quad::gauss_kronrod(osc, 0.0, 1.0, 1e-12).value ==
          doctest::Approx(std::sin(20.0) / 20.0).epsilon(1e-12));

    auto expf = [](double x) { return std::exp(x); };
    CHECK(quad::gauss_kronrod(expf, 0.0, 1.0, 1e-12).value ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));

    // reversed bounds flip the sign
    CHECK(quad::gauss_kronrod(sin_f, oracles::pi, 0.0, 1e-12).value ==
          doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("sqrt_endpoints removes inverse square-root singularities") {
    auto left = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK(quad::sqrt_endpoints(left, 0.0, 1.0, true, false, 1e-12).value ==
          doctest::Approx(2.0).epsilon(1e-12));

    auto right = [](double x) { return 1.0 / std::sqrt(1.0 - x); };
    CHECK(quad::sqrt_endpoints(right, 0.0, 1.0, false, true, 1e-12).value ==
          doctest::Approx(2.0).epsilon(1e-12));

    auto both = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
    CHECK(quad::sqrt_endpoints(both, 0.0, 1.0, true, true, 1e-12).value ==
          doctest::Approx(oracles::pi).epsilon(1e-12));

    // smooth case degrades to plain adaptive quadrature
    auto smooth = [](double x) { return x * x; };
    CHECK(quad::sqrt_endpoints(smooth, 0.0, 2.0, false, false, 1e-12).value ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("tanh_sinh handles endpoint singularities without substitution") {
    auto circ = [](double x) { return 1.0 / std::sqrt(1.0 - x * x); };
    CHECK(quad::tanh_sinh(circ, 0.0, 1.0, 1e-12).value ==
          doctest::Approx(oracles::pi / 2.0).epsilon(5e-8));

    auto logf = [](double x) { return std::log(x); };
    CHECK(quad::tanh_sinh(logf, 0.0, 1.0, 1e-12).value == doctest::Approx(-1.0).epsilon(2e-10));

    auto sin_f = [](double x) { return std::sin(x); };
    CHECK(quad::tanh_sinh(sin_f, 0.0, oracles::pi, 1e-12).value ==
          doctest::Approx(2.0).epsilon(2e-10));
}

TEST_CASE("numeric helpers") {
    // Fornberg weights reproduce 4th-order derivatives on nonuniform nodes
    const std::vector<double> xs = {0.0, 0.013, 0.021, 0.034, 0.045, 0.058, 0.066};
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::sin(3.0 * xs[i]);
    for (std::size_t i = 2; i + 2 < xs.size(); ++i) {
        const double d = numeric::sampled_derivative(xs, ys, i);
        CHECK(d == doctest::Approx(3.0 * std::cos(3.0 * xs[i])).epsilon(1e-6));
    }

    const double r = numeric::bracketed_root([](double w) { return w * w * w + w - 1.0; }, 0.0,
                                             1.0, 1e-14);
    CHECK(r == doctest::Approx(0.6823278038280193).epsilon(1e-12));

    const auto eig = numeric::sym_eigen3({2.0, 0.0, 0.0, 3.0, 0.0, 5.0});
    CHECK(eig.values[0] == doctest::Approx(2.0));
    CHECK(eig.values[2] == doctest::Approx(5.0));
    CHECK(std::abs(eig.vectors[0].x) == doctest::Approx(1.0));
}
