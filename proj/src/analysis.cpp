#include "brach/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brach/errors.hpp"
#include "brach/numeric.hpp"
#include "brach/quadrature.hpp"

namespace brach {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---- forbidden sector --------------------------------------------------------

SectorReport sector_angle(double n_exp, double c0, double quad_tol) {
    if (!(n_exp > 0.0)) raise(Errc::non_positive_exponent, "sector_angle: n_exp must be > 0");
    if (!(c0 > 0.0 && c0 < 1.0))
        raise(Errc::domain_error, "sector_angle: c0 must lie in (0, 1), got " + std::to_string(c0));

    SectorReport rep;
    rep.n_exp = n_exp;
    rep.c0 = c0;
    rep.theta_limit = numeric::pi / (n_exp + 2.0);
    rep.sector_central_angle = 2.0 * numeric::pi * n_exp / (n_exp + 2.0);
    rep.D = std::pow(c0, -n_exp - 2.0) - std::pow(c0, -2.0);

    // regularized form: theta = -2/(n+2) * int_{c0^((n+2)/2)}^{1} dx / sqrt(A(x) - x^2),
    // A(x) = (1 - c0^n) / (1 - c0^n x^(-2n/(n+2)))
    const double cn = std::pow(c0, n_exp);
    const double x0 = std::pow(c0, 0.5 * (n_exp + 2.0));
    const double expo = -2.0 * n_exp / (n_exp + 2.0);
    auto integrand = [&](double x) {
        const double den_a = 1.0 - cn * std::pow(x, expo);
        if (den_a <= 0.0) return 0.0;  // at the analytic lower endpoint
        const double a = (1.0 - cn) / den_a;
        const double d = a - x * x;
        if (d <= 0.0) return kInf;
        return 1.0 / std::sqrt(d);
    };
    const auto q = quad::sqrt_endpoints(integrand, x0, 1.0, true, true, quad_tol);
    rep.theta = -2.0 / (n_exp + 2.0) * q.value;
    rep.max_angle = 2.0 * std::abs(rep.theta);
    return rep;
}

std::vector<std::pair<double, double>> sector_limit_convergence(double n_exp,
                                                                std::span<const double> c0_seq,
                                                                double quad_tol) {
    for (std::size_t i = 1; i < c0_seq.size(); ++i)
        if (!(c0_seq[i] < c0_seq[i - 1]))
            raise(Errc::domain_error, "sector_limit_convergence: c0 sequence must strictly decrease");
    std::vector<std::pair<double, double>> out;
    out.reserve(c0_seq.size());
    for (const double c0 : c0_seq)
        out.emplace_back(c0, std::abs(sector_angle(n_exp, c0, quad_tol).theta));
    return out;
}

// ---- intersections -----------------------------------------------------------

IntersectionReport compare_intersecting(const CurveSolution& a, const CurveSolution& b,
                                        double chart_tol) {
    if (a.meta.surface != b.meta.surface || a.meta.field != b.meta.field)
        raise(Errc::config_error, "compare_intersecting: curves must share surface and field");
    if (a.samples.empty() || b.samples.empty())
        raise(Errc::config_error, "compare_intersecting: empty curve");
    const Sample& a0 = a.samples.front();
    const Sample& b0 = b.samples.front();
    if (std::abs(a0.u - b0.u) > 1e-12 || std::abs(a0.v - b0.v) > 1e-12)
        raise(Errc::config_error, "compare_intersecting: curves must share their start point");

    IntersectionReport rep;

    if (a.samples.size() == b.samples.size()) {
        bool same = true;
        for (std::size_t i = 0; i < a.samples.size() && same; ++i)
            same = std::abs(a.samples[i].u - b.samples[i].u) <= 1e-12 &&
                   std::abs(a.samples[i].v - b.samples[i].v) <= 1e-12;
        if (same) {
            rep.coincident = true;  // intersection everywhere, zero gap
            rep.winner = 0;
            rep.gap = 0.0;
            return rep;
        }
    }

    // winding shifts to try on curve B (periodic charts)
    std::vector<int> shifts{0};
    double period = 0.0;
    if (a.meta.v_period) {
        auto vrange = [](const CurveSolution& c) {
            double lo = kInf, hi = -kInf;
            for (const auto& s : c.samples) {
                lo = std::min(lo, s.v);
                hi = std::max(hi, s.v);
            }
            return std::pair{lo, hi};
        };
        const auto [alo, ahi] = vrange(a);
        const auto [blo, bhi] = vrange(b);
        period = *a.meta.v_period;
        const int kmin = static_cast<int>(std::floor((alo - bhi) / period)) - 1;
        const int kmax = static_cast<int>(std::ceil((ahi - blo) / period)) + 1;
        shifts.clear();
        for (int k2 = kmin; k2 <= kmax; ++k2) shifts.push_back(k2);
    }

    const double start_excl = 1e-9 * (1.0 + std::abs(a.samples.back().param));
    for (const int shift : shifts) {
        const double dv = shift * period;
        for (std::size_t i = 0; i + 1 < a.samples.size(); ++i) {
            const double p1u = a.samples[i].u, p1v = a.samples[i].v;
            const double d1u = a.samples[i + 1].u - p1u, d1v = a.samples[i + 1].v - p1v;
            const double alou = std::min(p1u, p1u + d1u), ahiu = std::max(p1u, p1u + d1u);
            for (std::size_t j = 0; j + 1 < b.samples.size(); ++j) {
                const double q1u = b.samples[j].u, q1v = b.samples[j].v + dv;
                const double d2u = b.samples[j + 1].u - q1u,
                             d2v = b.samples[j + 1].v + dv - q1v;
                if (std::max(q1u, q1u + d2u) < alou - chart_tol ||
                    std::min(q1u, q1u + d2u) > ahiu + chart_tol)
                    continue;
                const double cross = d1u * d2v - d1v * d2u;
                const double scale =
                    std::abs(d1u) + std::abs(d1v) + std::abs(d2u) + std::abs(d2v) + 1e-300;
                if (std::abs(cross) < 1e-12 * scale * scale) continue;  // not transversal
                const double ru = q1u - p1u, rv = q1v - p1v;
                const double t = (ru * d2v - rv * d2u) / cross;
                const double s = (ru * d1v - rv * d1u) / cross;
                if (t < -1e-12 || t > 1.0 + 1e-12 || s < -1e-12 || s > 1.0 + 1e-12) continue;
                const double pa = a.samples[i].param +
                                  t * (a.samples[i + 1].param - a.samples[i].param);
                const double pb = b.samples[j].param +
                                  s * (b.samples[j + 1].param - b.samples[j].param);
                if (pa < start_excl && pb < start_excl) continue;  // the shared start
                Intersection x;
                x.u = p1u + t * d1u;
                x.v = p1v + t * d1v;
                x.winding_shift = shift;
                x.time_a = a.samples[i].time + t * (a.samples[i + 1].time - a.samples[i].time);
                x.time_b = b.samples[j].time + s * (b.samples[j + 1].time - b.samples[j].time);
                bool dup = false;
                for (const auto& e : rep.points)
                    if (std::abs(e.u - x.u) < 10 * chart_tol && std::abs(e.v - x.v) < 10 * chart_tol)
                        dup = true;
                if (!dup) rep.points.push_back(x);
            }
        }
    }

    if (rep.points.empty())
        raise(Errc::no_intersection, "curves do not intersect beyond their shared start");

    std::sort(rep.points.begin(), rep.points.end(),
              [](const Intersection& l, const Intersection& r) { return l.time_a < r.time_a; });
    rep.gap = rep.points.front().time_b - rep.points.front().time_a;
    rep.winner = rep.gap >= 0.0 ? 0 : 1;
    return rep;
}

// ---- Frenet frames -----------------------------------------------------------

namespace {

std::vector<Vec3> moving_average5(const std::vector<Vec3>& in) {
    const std::size_t n = in.size();
    std::vector<Vec3> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 acc{};
        int cnt = 0;
        for (int k = -2; k <= 2; ++k) {
            const long long j = static_cast<long long>(i) + k;
            if (j < 0 || j >= static_cast<long long>(n)) continue;
            acc += in[j];
            ++cnt;
        }
        out[i] = acc / cnt;
    }
    return out;
}

std::vector<Vec3> derivative_along(std::span<const double> s, const std::vector<Vec3>& f) {
    const std::size_t n = f.size();
    std::vector<double> fx(n), fy(n), fz(n);
    for (std::size_t i = 0; i < n; ++i) {
        fx[i] = f[i].x;
        fy[i] = f[i].y;
        fz[i] = f[i].z;
    }
    std::vector<Vec3> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = Vec3{numeric::sampled_derivative(s, fx, i), numeric::sampled_derivative(s, fy, i),
                    numeric::sampled_derivative(s, fz, i)};
    return d;
}

}  // namespace

FrenetData frenet_profile(std::span<const Vec3> raw) {
    if (raw.size() < 7) raise(Errc::domain_error, "frenet_profile needs at least 7 samples");

    // resample toward uniform arclength by subselecting input points (their
    // positions stay exact); clusters of nearly coincident samples would
    // otherwise amplify rounding in the third-derivative torsion estimate
    double total = 0.0;
    for (std::size_t i = 1; i < raw.size(); ++i) total += norm(raw[i] - raw[i - 1]);
    const double h_target = total / static_cast<double>(raw.size() - 1);
    std::vector<Vec3> points;
    points.reserve(raw.size());
    points.push_back(raw[0]);
    double since = 0.0;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        since += norm(raw[i] - raw[i - 1]);
        if (since >= 0.7 * h_target || i + 1 == raw.size()) {
            if (since > 0.0) points.push_back(raw[i]);
            since = 0.0;
        }
    }
    const std::size_t n = points.size();
    if (n < 7) raise(Errc::domain_error, "frenet_profile: too few distinct samples");

    std::vector<double> s(n);
    s[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = norm(points[i] - points[i - 1]);
        if (!(step > 0.0))
            raise(Errc::domain_error, "frenet_profile: coincident consecutive samples");
        s[i] = s[i - 1] + step;
    }

    std::vector<double> px(n), py(n), pz(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = points[i].x;
        py[i] = points[i].y;
        pz[i] = points[i].z;
    }

    std::vector<Vec3> T(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 d{numeric::sampled_derivative(s, px, i), numeric::sampled_derivative(s, py, i),
                     numeric::sampled_derivative(s, pz, i)};
        T[i] = normalized(d);
    }

    const std::vector<Vec3> Tp = derivative_along(s, T);

    FrenetData out;
    out.samples.resize(n);
    std::vector<Vec3> N(n), B(n);
    std::vector<bool> degen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 proj = Tp[i] - T[i] * dot(Tp[i], T[i]);  // Gram-Schmidt against T
        const double kappa = norm(proj);
        out.samples[i].s = s[i];
        out.samples[i].tangent = T[i];
        out.samples[i].curvature = kappa;
        out.residual_tangent = std::max(out.residual_tangent, norm(Tp[i] - proj));
        if (kappa < 1e-10) {
            degen[i] = true;
            out.samples[i].degenerate = true;
            N[i] = Vec3{};
            B[i] = Vec3{};
            continue;
        }
        N[i] = proj / kappa;
        B[i] = normalized(cross(T[i], N[i]));
        out.samples[i].normal = N[i];
        out.samples[i].binormal = B[i];
    }

    // a sample's FD window must not touch a degenerate frame
    std::vector<bool> valid(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t w = std::min<std::size_t>(5, n);
        std::size_t lo = (i >= w / 2) ? i - w / 2 : 0;
        lo = std::min(lo, n - w);
        for (std::size_t k2 = lo; k2 < lo + w; ++k2)
            if (degen[k2]) valid[i] = false;
    }

    const std::vector<Vec3> Bp = derivative_along(s, B);
    const std::vector<Vec3> Ns = moving_average5(N);
    const std::vector<Vec3> Bs = moving_average5(B);
    const std::vector<Vec3> Bsp = derivative_along(s, Bs);

    for (std::size_t i = 0; i < n; ++i) {
        if (!valid[i]) {
            out.samples[i].degenerate = true;
            continue;
        }
        const double tau = -dot(Bp[i], N[i]);
        const double tau_s = -dot(Bsp[i], normalized(Ns[i]));
        out.samples[i].torsion = tau;
        out.samples[i].torsion_smoothed = tau_s;
        out.max_abs_torsion = std::max(out.max_abs_torsion, std::abs(tau));
        out.max_abs_torsion_smoothed = std::max(out.max_abs_torsion_smoothed, std::abs(tau_s));
        out.residual_binormal =
            std::max(out.residual_binormal, norm(Bp[i] + N[i] * tau));
    }
    return out;
}

FrenetData frenet_profile(const CurveSolution& curve) {
    std::vector<Vec3> pts;
    pts.reserve(curve.samples.size());
    for (const auto& smp : curve.samples) pts.push_back(smp.point);
    return frenet_profile(pts);
}

// ---- planarity ---------------------------------------------------------------

PlaneFit planarity_check(std::span<const Vec3> points) {
    if (points.size() < 4) raise(Errc::domain_error, "planarity_check needs at least 4 samples");
    Vec3 c{};
    for (const Vec3& p : points) c += p;
    c = c / static_cast<double>(points.size());

    std::array<double, 6> cov{};  // xx, xy, xz, yy, yz, zz
    for (const Vec3& p : points) {
        const Vec3 d = p - c;
        cov[0] += d.x * d.x;
        cov[1] += d.x * d.y;
        cov[2] += d.x * d.z;
        cov[3] += d.y * d.y;
        cov[4] += d.y * d.z;
        cov[5] += d.z * d.z;
    }
    const auto eig = numeric::sym_eigen3(cov);

    PlaneFit fit;
    fit.point = c;
    fit.normal = eig.vectors[0];  // smallest spread direction
    for (const Vec3& p : points)
        fit.max_deviation = std::max(fit.max_deviation, std::abs(dot(p - c, fit.normal)));
    fit.origin_distance = std::abs(dot(c, fit.normal));
    return fit;
}

PlaneFit planarity_check(const CurveSolution& curve) {
    std::vector<Vec3> pts;
    pts.reserve(curve.samples.size());
    for (const auto& smp : curve.samples) pts.push_back(smp.point);
    return planarity_check(pts);
}

// ---- first integral ------------------------------------------------------------

std::vector<double> first_integral_residual(const CurveSolution& curve,
                                            const SurfacePatch& surface, const Potential& pot) {
    const int rcase = curve.meta.reduction_case;
    const double V0 = curve.meta.V0;
    const double C = curve.meta.C;
    const auto& smp = curve.samples;

    std::vector<double> residuals;
    if (smp.size() < 9) return residuals;

    // split at the turning point: the independent coordinate must be monotone
    // within each finite-difference window
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    std::size_t blk = 0;
    auto indep = [&](std::size_t i) { return rcase == 1 ? smp[i].v : smp[i].u; };
    auto fre = [&](std::size_t i) { return rcase == 1 ? smp[i].u : smp[i].v; };
    for (std::size_t i = 2; i < smp.size(); ++i) {
        const double d0 = indep(i - 1) - indep(i - 2);
        const double d1 = indep(i) - indep(i - 1);
        if (d0 * d1 < 0.0) {
            blocks.emplace_back(blk, i - 1);
            blk = i - 1;
        }
    }
    blocks.emplace_back(blk, smp.size() - 1);

    for (const auto& [lo, hi] : blocks) {
        const std::size_t len = hi - lo + 1;
        if (len < 9) continue;
        std::vector<double> xs(len), ys(len);
        for (std::size_t i = 0; i < len; ++i) {
            xs[i] = indep(lo + i);
            ys[i] = fre(lo + i);
        }
        // interior margin: the slope of a square-root-type arc cannot be
        // differenced to 1e-8 arbitrarily close to a singular endpoint, so a
        // 4% band at each block end is excluded
        const double span = std::abs(xs[len - 1] - xs[0]);
        const double margin = 0.04 * span;
        for (std::size_t i = 3; i + 3 < len; ++i) {
            if (std::abs(xs[i] - xs[0]) < margin || std::abs(xs[len - 1] - xs[i]) < margin)
                continue;
            const double fp = numeric::sampled_derivative(xs, ys, i, 7);
            const std::size_t gi = lo + i;
            const double E = surface.E(smp[gi].u, smp[gi].v);
            const double G = surface.G(smp[gi].u, smp[gi].v);
            const double y = V0 - pot.V(smp[gi].u, smp[gi].v);
            const double mf = rcase == 1 ? E : G;
            const double mi = rcase == 1 ? G : E;
            const double value = mf * std::abs(fp) / std::sqrt(y * (mf * fp * fp + mi));
            residuals.push_back(value - C);
        }
    }
    return residuals;
}

}  // namespace brach
