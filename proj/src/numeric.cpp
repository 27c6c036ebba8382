#include "brach/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "brach/errors.hpp"

namespace brach::numeric {

double derivative(const std::function<double(double)>& f, double x, double step) {
    const double h = step * std::max(1.0, std::abs(x));
    // 5-point stencil, O(h^4)
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
    // B. Fornberg, Math. Comp. 51 (1988). Weights for derivatives 0..order at x0;
    // only the requested order is returned.
    const int n = static_cast<int>(nodes.size()) - 1;
    const int m = order;
    std::vector<double> c((n + 1) * (m + 1), 0.0);
    auto at = [&](int i, int j) -> double& { return c[i * (m + 1) + j]; };

    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    at(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
                at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
            at(j, 0) = c4 * at(j, 0) / c3;
        }
        c1 = c2;
    }

    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = at(static_cast<int>(i), m);
    return w;
}

double sampled_derivative(std::span<const double> xs, std::span<const double> ys, std::size_t i,
                          int width) {
    const std::size_t n = xs.size();
    if (n < 2) raise(Errc::domain_error, "sampled_derivative needs at least two samples");
    const std::size_t w = std::min<std::size_t>(width, n);
    std::size_t lo = (i >= w / 2) ? i - w / 2 : 0;
    lo = std::min(lo, n - w);
    const auto weights = fd_weights(xs[i], xs.subspan(lo, w), 1);
    double d = 0.0;
    for (std::size_t k = 0; k < w; ++k) d += weights[k] * ys[lo + k];
    return d;
}

double bracketed_root(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) raise(Errc::no_bracket, "bracketed_root: endpoints have equal sign");

    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        // secant proposal on odd iterations; forced bisection on even ones keeps
        // the bracket halving even when the secant creeps along one side
        double m = 0.5 * (a + b);
        const double denom = fb - fa;
        if (it % 2 == 1 && denom != 0.0) {
            const double s = b - fb * (b - a) / denom;
            if (s > a + 0.25 * tol && s < b - 0.25 * tol) m = s;
        }
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return 0.5 * (a + b);
}

std::vector<std::pair<double, double>> halton2(int count) {
    auto radical = [](int index, int base) {
        double f = 1.0, r = 0.0;
        while (index > 0) {
            f /= base;
            r += f * (index % base);
            index /= base;
        }
        return r;
    };
    std::vector<std::pair<double, double>> pts;
    pts.reserve(count);
    for (int i = 1; i <= count; ++i) pts.emplace_back(radical(i, 2), radical(i, 3));
    return pts;
}

SymEigen3 sym_eigen3(const std::array<double, 6>& packed) {
    double a[3][3] = {{packed[0], packed[1], packed[2]},
                      {packed[1], packed[3], packed[4]},
                      {packed[2], packed[4], packed[5]}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15 * (std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + 1e-300))
            break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a[i][i] < a[j][j]; });
    SymEigen3 out;
    for (int k = 0; k < 3; ++k) {
        out.values[k] = a[idx[k]][idx[k]];
        out.vectors[k] = normalized(Vec3{v[0][idx[k]], v[1][idx[k]], v[2][idx[k]]});
    }
    return out;
}

}  // namespace brach::numeric
