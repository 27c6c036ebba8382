#include "brach/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "brach/errors.hpp"
#include "brach/numeric.hpp"
#include "brach/parallel.hpp"
#include "brach/quadrature.hpp"

namespace brach {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrtHalf = 0.70710678118654752440;

// exact for V linear along the segment; reduces to 2/sqrt(d1) at the cusp
double speed_factor(double d0, double d1) {
    const double s0 = std::sqrt(std::max(d0, 0.0));
    const double s1 = std::sqrt(std::max(d1, 0.0));
    if (s0 + s1 == 0.0) return kInf;
    return 2.0 / (s0 + s1);  // == (s1 - s0) * 2 / (d1 - d0), stable form
}

}  // namespace

DiscreteCurve as_discrete(const CurveSolution& curve) {
    DiscreteCurve out;
    out.points.reserve(curve.samples.size());
    for (const auto& s : curve.samples) out.points.push_back({s.u, s.v});
    return out;
}

double travel_time(const SurfacePatch& surface, const Potential& pot, double V0,
                   const DiscreteCurve& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 2) raise(Errc::domain_error, "travel_time: need at least two samples");

    const double level_tol = 1e-12 * std::max(1.0, std::abs(V0));
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const ChartPoint& p0 = pts[i];
        const ChartPoint& p1 = pts[i + 1];
        if (p0.u == p1.u && p0.v == p1.v)
            raise(Errc::domain_error, "travel_time: coincident consecutive samples");
        if (!surface.domain().contains(p0.u, p0.v) || !surface.domain().contains(p1.u, p1.v))
            raise(Errc::domain_error, "travel_time: sample outside the open chart domain");

        const double d0 = V0 - pot.V(p0.u, p0.v);
        const double d1 = V0 - pot.V(p1.u, p1.v);
        if (i > 0 && d0 < level_tol)
            raise(Errc::above_start_level,
                  "travel_time: interior sample at or above the start level");
        if (i == 0 && d0 < -level_tol)
            raise(Errc::above_start_level, "travel_time: first sample above the start level");
        if (d1 < level_tol && i + 2 < pts.size())
            raise(Errc::above_start_level,
                  "travel_time: interior sample at or above the start level");

        const double mu = 0.5 * (p0.u + p1.u);
        const double mv = 0.5 * (p0.v + p1.v);
        const double du = p1.u - p0.u;
        const double dv = p1.v - p0.v;
        const double ds =
            std::sqrt(surface.E(mu, mv) * du * du + surface.G(mu, mv) * dv * dv);
        total += kSqrtHalf * ds * speed_factor(d0, d1);
    }
    if (!std::isfinite(total)) raise(Errc::above_start_level, "travel_time: divergent segment");
    return total;
}

// ---- minimality probe ----------------------------------------------------------

namespace {

double bump(double x) {
    const double t = 1.0 - x * x;
    if (t <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / t);  // peak 1 at x = 0, compact support
}

}  // namespace

ProbeReport minimality_probe(const SurfacePatch& surface, const Potential& pot,
                             const CurveSolution& solution, int trials, double amplitude,
                             std::uint64_t seed, int jobs) {
    if (trials < 1) raise(Errc::config_error, "minimality_probe: trials must be >= 1");
    if (amplitude < 0.0) raise(Errc::config_error, "minimality_probe: amplitude must be >= 0");
    const auto& smp = solution.samples;
    if (smp.size() < 8) raise(Errc::config_error, "minimality_probe: solution too short");

    const int rcase = solution.meta.reduction_case;
    const double V0 = solution.meta.V0;
    const double p_lo = smp.front().param;
    const double p_hi = smp.back().param;

    const DiscreteCurve base = as_discrete(solution);
    const double t_ref = travel_time(surface, pot, V0, base);

    std::vector<int> redraws(trials, 0);
    const auto gaps = par::map_batch(
        static_cast<std::size_t>(trials),
        [&](std::size_t trial) -> double {
            for (int attempt = 0; attempt < 100; ++attempt) {
                std::seed_seq sseq{seed, static_cast<std::uint64_t>(trial),
                                   static_cast<std::uint64_t>(attempt)};
                std::mt19937_64 rng(sseq);
                std::uniform_real_distribution<double> uwidth(0.05, 0.30);
                const double width = uwidth(rng) * (p_hi - p_lo);
                std::uniform_real_distribution<double> ucenter(p_lo + width, p_hi - width);
                const double center = ucenter(rng);
                const double sign = (rng() & 1) ? 1.0 : -1.0;

                DiscreteCurve pert = base;
                bool ok = true;
                for (std::size_t i = 0; i < smp.size(); ++i) {
                    const double d = sign * amplitude * bump((smp[i].param - center) / width);
                    if (d == 0.0) continue;
                    if (rcase == 1)
                        pert.points[i].u += d;
                    else
                        pert.points[i].v += d;
                    if (!surface.domain().contains(pert.points[i].u, pert.points[i].v)) {
                        ok = false;
                        break;
                    }
                    if (i > 0 && !(V0 - pot.V(pert.points[i].u, pert.points[i].v) > 0.0)) {
                        ok = false;  // perturbation pushed the sample above the level
                        break;
                    }
                }
                if (!ok) {
                    ++redraws[trial];
                    continue;
                }
                return travel_time(surface, pot, V0, pert) - t_ref;
            }
            raise(Errc::domain_error,
                  "minimality_probe: perturbation kept leaving the domain (trial " +
                      std::to_string(trial) + ")");
        },
        jobs);

    ProbeReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.reference_time = t_ref;
    rep.gaps = gaps;
    rep.min_gap = *std::min_element(gaps.begin(), gaps.end());
    rep.max_gap = *std::max_element(gaps.begin(), gaps.end());
    for (int r : redraws) rep.redraws += r;
    rep.passed = rep.min_gap >= -1e-9;
    return rep;
}

// ---- grid oracle -----------------------------------------------------------------

GridResult grid_oracle(const SurfacePatch& surface, const Potential& pot, double V0, ChartPoint A,
                       ChartPoint B, const GridSpec& spec) {
    const int nu = spec.nu, nv = spec.nv;
    if (nu < 4 || nv < 4) raise(Errc::config_error, "grid_oracle: resolution too small");
    const double du = (spec.rect.u_max - spec.rect.u_min) / (nu - 1);
    const double dv = (spec.rect.v_max - spec.rect.v_min) / (nv - 1);
    if (!(du > 0.0) || !(dv > 0.0)) raise(Errc::config_error, "grid_oracle: empty rectangle");

    auto node_u = [&](int i) { return spec.rect.u_min + i * du; };
    auto node_v = [&](int j) { return spec.rect.v_min + j * dv; };
    auto id = [&](int i, int j) { return j * nu + i; };
    const int n_nodes = nu * nv;

    const double level_tol = 1e-12 * std::max(1.0, std::abs(V0));
    std::vector<char> valid(n_nodes, 0);
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i) {
            const double u = node_u(i), v = node_v(j);
            if (!surface.domain().contains(u, v)) continue;
            valid[id(i, j)] = (V0 - pot.V(u, v)) > level_tol ? 1 : 0;
        }

    auto snap = [&](ChartPoint p, const char* who) -> std::pair<int, int> {
        const int i = static_cast<int>(std::lround((p.u - spec.rect.u_min) / du));
        const int j = static_cast<int>(std::lround((p.v - spec.rect.v_min) / dv));
        if (i < 0 || i >= nu || j < 0 || j >= nv)
            raise(Errc::config_error,
                  std::string("grid_oracle: ") + who + " lies outside the lattice rectangle");
        return {i, j};
    };
    const auto [ai, aj] = snap(A, "A");
    const auto [bi, bj] = snap(B, "B");
    if (!valid[id(bi, bj)])
        raise(Errc::unreachable, "grid_oracle: B snapped to an excised lattice node");

    // 16-neighbor stencil (forward half; the reverse edges mirror it)
    static constexpr int kOff[8][2] = {{1, 0},  {0, 1},  {1, 1},  {1, -1},
                                       {2, 1},  {1, 2},  {2, -1}, {1, -2}};

    // all forward edge weights, batched (the parallel kernel)
    const std::size_t n_edges = static_cast<std::size_t>(n_nodes) * 8;
    const auto weights = par::map_batch(
        n_edges,
        [&](std::size_t e) -> double {
            const int node = static_cast<int>(e / 8);
            const int k = static_cast<int>(e % 8);
            const int i = node % nu, j = node / nu;
            const int i2 = i + kOff[k][0], j2 = j + kOff[k][1];
            if (i2 < 0 || i2 >= nu || j2 < 0 || j2 >= nv) return kInf;
            if (!valid[node] || !valid[id(i2, j2)]) return kInf;
            const double u1 = node_u(i), v1 = node_v(j);
            const double u2 = node_u(i2), v2 = node_v(j2);
            const double mu = 0.5 * (u1 + u2), mv = 0.5 * (v1 + v2);
            if (!surface.domain().contains(mu, mv)) return kInf;
            const double uu = u2 - u1, vv = v2 - v1;
            const double ds = std::sqrt(surface.E(mu, mv) * uu * uu + surface.G(mu, mv) * vv * vv);
            // same composite rule as travel_time: metric at the midpoint, exact
            // speed factor for linearly interpolated V. Splitting an edge then
            // reproduces its weight exactly, so refined lattices stay consistent.
            const double d0 = V0 - pot.V(u1, v1);
            const double d1 = V0 - pot.V(u2, v2);
            return kSqrtHalf * ds * speed_factor(d0, d1);
        },
        spec.jobs);

    // Dijkstra with a lazy-deletion heap; the source is A itself. If A sits on
    // (or above) the start level its lattice node is excised, and exact
    // straight-fall seed edges attach it to the first valid nodes below.
    std::vector<double> dist(n_nodes + 1, kInf);
    std::vector<int> prev(n_nodes + 1, -1);
    const int source = n_nodes;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    auto push = [&](int node, double d, int from) {
        if (d < dist[node]) {
            dist[node] = d;
            prev[node] = from;
            heap.push({d, node});
        }
    };

    if (valid[id(ai, aj)] && (V0 - pot.V(node_u(ai), node_v(aj))) > level_tol) {
        push(id(ai, aj), 0.0, source);
    } else {
        // vertical seed: walk the falling coordinate column from A
        const bool fall_in_v = pot.symmetry == Symmetry::independent_of_u;
        const double probe = fall_in_v
                                 ? pot.V(node_u(ai), node_v(aj) + dv) - pot.V(node_u(ai), node_v(aj))
                                 : pot.V(node_u(ai) + du, node_v(aj)) - pot.V(node_u(ai), node_v(aj));
        const int step = probe < 0.0 ? +1 : -1;
        int seeded = 0;
        for (int s = 1; s < (fall_in_v ? nv : nu) && seeded < 4; ++s) {
            const int i2 = fall_in_v ? ai : ai + step * s;
            const int j2 = fall_in_v ? aj + step * s : aj;
            if (i2 < 0 || i2 >= nu || j2 < 0 || j2 >= nv) break;
            if (!valid[id(i2, j2)]) continue;
            const double u2 = node_u(i2), v2 = node_v(j2);
            // exact rest-fall time along the straight coordinate segment
            auto integrand = [&](double t) -> double {
                const double uu = fall_in_v ? A.u : A.u + t * (u2 - A.u);
                const double vv = fall_in_v ? A.v + t * (v2 - A.v) : A.v;
                const double depth = std::max(V0 - pot.V(uu, vv), 0.0);
                const double m = fall_in_v ? surface.G(uu, vv) : surface.E(uu, vv);
                const double len = fall_in_v ? std::abs(v2 - A.v) : std::abs(u2 - A.u);
                return kSqrtHalf * len * std::sqrt(m / std::max(depth, 1e-300));
            };
            const double w =
                quad::sqrt_endpoints(integrand, 0.0, 1.0, true, false, 1e-12).value;
            push(id(i2, j2), w, source);
            ++seeded;
        }
        if (seeded == 0)
            raise(Errc::unreachable, "grid_oracle: no valid seed nodes below A");
    }

    const int target = id(bi, bj);
    while (!heap.empty()) {
        const auto [d, node] = heap.top();
        heap.pop();
        if (d > dist[node]) continue;
        if (node == target) break;
        const int i = node % nu, j = node / nu;
        for (int k = 0; k < 8; ++k) {
            // forward edge from this node
            {
                const int i2 = i + kOff[k][0], j2 = j + kOff[k][1];
                if (i2 >= 0 && i2 < nu && j2 >= 0 && j2 < nv) {
                    const double w = weights[static_cast<std::size_t>(node) * 8 + k];
                    if (std::isfinite(w)) push(id(i2, j2), d + w, node);
                }
            }
            // reverse edge into this node
            {
                const int i2 = i - kOff[k][0], j2 = j - kOff[k][1];
                if (i2 >= 0 && i2 < nu && j2 >= 0 && j2 < nv) {
                    const double w = weights[static_cast<std::size_t>(id(i2, j2)) * 8 + k];
                    if (std::isfinite(w)) push(id(i2, j2), d + w, node);
                }
            }
        }
    }

    if (!std::isfinite(dist[target]))
        raise(Errc::unreachable, "grid_oracle: B is unreachable on the lattice");

    GridResult out;
    out.time = dist[target];
    std::vector<ChartPoint> rev;
    for (int node = target; node != source && node >= 0; node = prev[node])
        rev.push_back({node_u(node % nu), node_v(node / nu)});
    rev.push_back({A.u, A.v});
    out.path.points.assign(rev.rbegin(), rev.rend());
    return out;
}

}  // namespace brach
