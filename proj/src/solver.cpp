#include "brach/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brach/errors.hpp"
#include "brach/numeric.hpp"
#include "brach/parallel.hpp"
#include "brach/quadrature.hpp"

namespace brach {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double SolverConfig::D() const { return C == 0.0 ? kInf : 1.0 / (C * C); }

void SolverConfig::validate() const {
    if (!(C >= 0.0)) raise(Errc::config_error, "C must be >= 0; direction lives in `branch`");
    if (!(quad_tol > 0.0)) raise(Errc::config_error, "quad_tol must be positive");
    if (!(root_tol > 0.0)) raise(Errc::config_error, "root_tol must be positive");
    if (max_windings < 1) raise(Errc::config_error, "max_windings must be >= 1");
    if (samples < 8) raise(Errc::config_error, "samples must be >= 8");
}

namespace detail {

// One reduced problem: all coefficient data depends on the independent
// coordinate only (that is the Theorem 1/3 hypothesis), so every callback
// below is a single-variable function of it.
struct Problem {
    SurfacePatch surface;
    std::optional<Potential> pot;
    std::optional<Medium> medium;
    std::string field_name;
    int theorem = 1;
    int reduction_case = 1;  // 1: free = u, indep = v;  2: free = v, indep = u
    double w0 = 0.0, free0 = 0.0;
    double V0 = 0.0;
    int dir = -1;
    int free_sense = +1;
    bool start_singular = true;
    double indep_min = -kInf, indep_max = kInf;
    std::optional<double> central_exponent;

    ChartPoint chart(double w, double f) const {
        return reduction_case == 1 ? ChartPoint{f, w} : ChartPoint{w, f};
    }
    double m_indep(double w) const {
        const ChartPoint p = chart(w, free0);
        return reduction_case == 1 ? surface.G(p.u, p.v) : surface.E(p.u, p.v);
    }
    double m_free(double w) const {
        const ChartPoint p = chart(w, free0);
        return reduction_case == 1 ? surface.E(p.u, p.v) : surface.G(p.u, p.v);
    }
    // V0 - V for the potential route, 1/n^2 for the medium route
    double drive(double w) const {
        const ChartPoint p = chart(w, free0);
        if (theorem == 1) return V0 - pot->V(p.u, p.v);
        const double n = medium->n(p.u, p.v);
        return 1.0 / (n * n);
    }
    double speed(double w) const {
        if (theorem == 1) return std::sqrt(2.0 * std::max(drive(w), 0.0));
        const ChartPoint p = chart(w, free0);
        return medium->speed(p.u, p.v);
    }
    double indep_scale() const { return std::max(1.0, std::abs(w0)); }
};

}  // namespace detail

using detail::Problem;

namespace {

// ---- problem construction -------------------------------------------------

double indep_of(const Problem& p, ChartPoint q) { return p.reduction_case == 1 ? q.v : q.u; }
double free_of(const Problem& p, ChartPoint q) { return p.reduction_case == 1 ? q.u : q.v; }

void check_reduction_symmetry(Problem& p) {
    // Spot-check that E, G and the field really are independent of the free
    // coordinate on this chart, per the Theorem 1/3 hypotheses.
    const Domain& dom = p.surface.domain();
    const double flo = p.reduction_case == 1 ? dom.u_min : dom.v_min;
    const double fhi = p.reduction_case == 1 ? dom.u_max : dom.v_max;
    double delta = 0.37 * std::max(1.0, std::abs(p.free0));
    if (p.free0 + delta >= fhi) delta = -delta;
    if (p.free0 + delta <= flo) delta *= 0.01;
    if (p.free0 + delta <= flo || p.free0 + delta >= fhi) return;  // sliver domain

    const double h = 1e-3 * p.indep_scale();
    for (int step = 1; step <= 3; ++step) {
        const double w = p.w0 + p.dir * step * h;
        const ChartPoint a = p.chart(w, p.free0);
        const ChartPoint b = p.chart(w, p.free0 + delta);
        if (!dom.contains(a.u, a.v) || !dom.contains(b.u, b.v)) continue;
        auto close = [](double x, double y) {
            return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
        };
        if (!close(p.surface.E(a.u, a.v), p.surface.E(b.u, b.v)) ||
            !close(p.surface.G(a.u, a.v), p.surface.G(b.u, b.v)))
            raise(Errc::symmetry_mismatch,
                  "metric coefficients vary along the declared symmetry coordinate of " +
                      p.surface.name());
        if (p.theorem == 1) {
            if (!close(p.pot->V(a.u, a.v), p.pot->V(b.u, b.v)))
                raise(Errc::symmetry_mismatch,
                      "potential '" + p.pot->name + "' varies along the symmetry coordinate");
        } else {
            try {
                if (!close(p.medium->n(a.u, a.v), p.medium->n(b.u, b.v)))
                    raise(Errc::symmetry_mismatch, "medium '" + p.medium->name +
                                                       "' varies along the symmetry coordinate");
            } catch (const Error& e) {
                if (e.code() != Errc::start_level_singularity) throw;
            }
        }
    }
}

void pick_direction(Problem& p, March requested) {
    if (requested == March::increasing) {
        p.dir = +1;
    } else if (requested == March::decreasing) {
        p.dir = -1;
    } else {
        const double h = 1e-5 * p.indep_scale();
        auto probe = [&](int side) -> double {
            const double w = p.w0 + side * h;
            if (w <= p.indep_min || w >= p.indep_max) return -kInf;
            try {
                return p.drive(w);
            } catch (const Error&) {
                return -kInf;
            }
        };
        const double up = probe(+1);
        const double down = probe(-1);
        if (up == -kInf && down == -kInf)
            raise(Errc::singular_start, "field is not evaluable on either side of A");
        if (up == -kInf) {
            p.dir = -1;
        } else if (down == -kInf) {
            p.dir = +1;
        } else if (std::abs(up - down) <= 1e-14 * std::max(1.0, std::abs(up))) {
            raise(Errc::config_error,
                  "no falling direction at A; pass an explicit march direction");
        } else {
            p.dir = up > down ? +1 : -1;
        }
    }
    // from-rest problems must fall strictly below the start level
    const double h = 1e-5 * p.indep_scale();
    double probe_drive;
    try {
        probe_drive = p.drive(p.w0 + p.dir * h);
    } catch (const Error&) {
        raise(Errc::singular_start, "field is not evaluable just beyond A in the march direction");
    }
    if (p.start_singular && !(probe_drive > 0.0))
        raise(Errc::singular_start, "march direction climbs above the start level at A");
}

std::shared_ptr<Problem> build_problem(const SurfacePatch& surface, const Potential* pot,
                                       const Medium* medium, ChartPoint A,
                                       const SolverConfig& cfg) {
    auto p = std::make_shared<Problem>(Problem{surface, {}, {}, "", 1, 1, 0, 0, 0, -1, +1, true,
                                               -kInf, kInf, {}});
    if (!surface.domain().contains(A.u, A.v))
        raise(Errc::singular_start, "A lies on or outside the open chart boundary of " +
                                        surface.name());

    Symmetry sym;
    if (pot) {
        p->pot = *pot;
        p->theorem = 1;
        p->field_name = pot->name;
        p->central_exponent = pot->central_exponent;
        sym = pot->symmetry;
    } else {
        p->medium = *medium;
        p->theorem = 3;
        p->field_name = medium->name;
        sym = medium->symmetry;
    }

    p->reduction_case = (sym == Symmetry::independent_of_u) ? 1 : 2;
    const Domain& dom = surface.domain();
    if (p->reduction_case == 1) {
        p->w0 = A.v;
        p->free0 = A.u;
        p->indep_min = dom.v_min;
        p->indep_max = dom.v_max;
    } else {
        p->w0 = A.u;
        p->free0 = A.v;
        p->indep_min = dom.u_min;
        p->indep_max = dom.u_max;
    }

    if (pot) {
        p->V0 = pot->V(A.u, A.v);
        p->start_singular = true;
    } else {
        p->V0 = medium->V0;
        try {
            p->start_singular = !(p->drive(p->w0) > 0.0);
        } catch (const Error& e) {
            if (e.code() != Errc::start_level_singularity) throw;
            p->start_singular = true;
        }
    }

    pick_direction(*p, cfg.direction);
    check_reduction_symmetry(*p);
    p->free_sense = (cfg.branch == Branch::plus) ? +1 : -1;
    return p;
}

// ---- kinematics -----------------------------------------------------------

struct Kinematics {
    const Problem* p;
    double C;

    double den(double w) const { return p->m_free(w) - C * C * std::max(p->drive(w), 0.0); }

    double rate(double w) const {
        if (C == 0.0) return 0.0;
        const double y = std::max(p->drive(w), 0.0);
        const double mf = p->m_free(w);
        const double d = mf - C * C * y;
        if (d <= 0.0) return kInf;
        return C * std::sqrt(p->m_indep(w) * y / (mf * d));
    }

    double time_rate(double w) const {
        const double mf = p->m_free(w);
        const double d = mf - C * C * std::max(p->drive(w), 0.0);
        if (d <= 0.0) return kInf;
        const double sp = p->speed(w);
        return std::sqrt(p->m_indep(w) * mf / d) / sp;
    }
};

// ---- turning point --------------------------------------------------------

// farthest coordinate the scan may touch: just inside a finite domain edge,
// or a generous multiple of the start scale on unbounded charts
double scan_limit(const Problem& p) {
    const double edge = p.dir > 0 ? p.indep_max : p.indep_min;
    if (std::isfinite(edge))
        return edge - p.dir * std::max(1e-9 * p.indep_scale(), std::abs(edge) * 1e-12);
    return p.w0 + p.dir * 1e4 * p.indep_scale();
}

// Polishes a bracketing root of `f` and nudges the result to the den > 0 side.
double refine_root_inward(const std::function<double(double)>& f, double lo, double hi,
                          const Kinematics& k, double w_from) {
    const double tol = 4e-16 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    double c = numeric::bracketed_root(f, std::min(lo, hi), std::max(lo, hi), tol);
    for (int i = 0; i < 128 && k.den(c) <= 0.0; ++i) c = std::nextafter(c, w_from);
    if (k.den(c) <= 0.0) raise(Errc::quadrature_failure, "turning point refinement failed");
    return c;
}

// First zero of the denominator strictly between w_from (exclusive) and limit,
// marching in k.p->dir. Returns nullopt if the denominator keeps its sign.
std::optional<double> scan_turning(const Kinematics& k, double w_from, double limit,
                                   double /*root_tol*/) {
    const Problem& p = *k.p;
    if (k.C == 0.0) return std::nullopt;

    if (p.central_exponent && p.theorem == 1) {
        // central field V = -u^-n: roots of r(w) = D w^(n+2) + (w/u0)^n - 1
        const double n = *p.central_exponent;
        const double D = 1.0 / (k.C * k.C);
        const double u0 = p.w0;
        auto r = [&](double w) { return D * std::pow(w, n + 2) + std::pow(w / u0, n) - 1.0; };
        const double lo = 1e-12 * u0;
        if (r(lo) >= 0.0 || r(u0) <= 0.0) return std::nullopt;
        const double c = refine_root_inward(r, lo, u0, k, w_from);
        if ((c - w_from) * p.dir <= 0.0 || (limit - c) * p.dir <= 0.0) return std::nullopt;
        return c;
    }

    const double span = std::abs(limit - w_from);
    if (!(span > 0.0) || !std::isfinite(span)) return std::nullopt;
    auto den = [&](double x) { return k.den(x); };
    double h = std::min(span / 64.0, 1e-3 * p.indep_scale());
    double prev = w_from + p.dir * std::min(h * 1e-6, span * 1e-9);
    if (k.den(prev) <= 0.0) {
        // the denominator dies within the probe offset (very large C)
        const double lo = w_from + p.dir * 4e-16 * p.indep_scale();
        if (k.den(lo) <= 0.0) return std::nullopt;
        return refine_root_inward(den, lo, prev, k, w_from);
    }
    double w = prev;
    while ((limit - w) * p.dir > 0.0) {
        w = w + p.dir * h;
        if ((limit - w) * p.dir < 0.0) w = limit;
        if (k.den(w) <= 0.0) return refine_root_inward(den, prev, w, k, w_from);
        prev = w;
        h *= 1.25;
    }
    return std::nullopt;
}

// ---- arc integration ------------------------------------------------------

struct Arc {
    std::vector<double> grid;   // monotone in dir, includes both endpoints
    std::vector<double> dfree;  // per-cell |free| increments
    std::vector<double> dtime;  // per-cell time increments
};

std::vector<double> arc_grid(double w_start, double w_end, int base, bool sing_start,
                             bool sing_end) {
    std::vector<double> g;
    g.reserve(base + 26);
    const double cell = (w_end - w_start) / base;
    g.push_back(w_start);
    if (sing_start)
        for (int l = 12; l >= 1; --l) g.push_back(w_start + cell * std::ldexp(1.0, -l));
    for (int i = 1; i < base; ++i) g.push_back(w_start + i * cell);
    if (sing_end)
        for (int l = 1; l <= 12; ++l) g.push_back(w_end - cell * std::ldexp(1.0, -l));
    g.push_back(w_end);
    // drop cells collapsed by rounding
    std::vector<double> out;
    out.reserve(g.size());
    out.push_back(g.front());
    const double min_cell = 4e-16 * std::max(std::abs(w_start), std::abs(w_end));
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        if (std::abs(g[i] - out.back()) > min_cell) out.push_back(g[i]);
    out.push_back(g.back());
    return out;
}

Arc integrate_arc(const Kinematics& k, double w_start, double w_end, bool sing_start,
                  bool sing_end, const SolverConfig& cfg) {
    Arc arc;
    arc.grid = arc_grid(w_start, w_end, cfg.samples, sing_start, sing_end);
    const std::size_t m = arc.grid.size() - 1;

    auto rate = [&k](double w) { return k.rate(w); };
    auto trate = [&k](double w) { return k.time_rate(w); };
    const auto values = par::map_batch(
        2 * m,
        [&](std::size_t j) {
            const std::size_t i = j % m;
            const bool sa = (i == 0) && sing_start;
            const bool sb = (i == m - 1) && sing_end;
            const std::function<double(double)> f =
                (j < m) ? std::function<double(double)>(rate) : std::function<double(double)>(trate);
            return std::abs(
                quad::sqrt_endpoints(f, arc.grid[i], arc.grid[i + 1], sa, sb, cfg.quad_tol).value);
        },
        cfg.jobs);

    arc.dfree.assign(values.begin(), values.begin() + m);
    arc.dtime.assign(values.begin() + m, values.end());
    return arc;
}

// Cheap free-travel estimate used only to place the winding-cap cutoff.
double coarse_free_travel(const Kinematics& k, double w_from, double w_to, int cells,
                          double* stop_at, double budget) {
    double total = 0.0;
    const double step = (w_to - w_from) / cells;
    for (int i = 0; i < cells; ++i) {
        const double a = w_from + i * step;
        const double b = a + step;
        const bool sa = (i == 0) && k.p->start_singular && a == k.p->w0;
        const double piece =
            std::abs(quad::sqrt_endpoints([&k](double w) { return k.rate(w); }, a, b, sa, false,
                                          1e-6)
                         .value);
        total += piece;
        if (stop_at && total >= budget) {
            *stop_at = b;
            return total;
        }
    }
    return total;
}

// ---- solve driver ----------------------------------------------------------

enum class ArcEnd { turning, target, boundary, cap };

CurveSolution assemble(std::shared_ptr<const Problem> p, const SolverConfig& cfg, const Arc& arc,
                       ArcEnd end) {
    CurveSolution out;
    const std::size_t m = arc.grid.size() - 1;
    out.samples.reserve(m + 1);

    double param = 0.0, fr = p->free0, t = 0.0;
    const ChartPoint a0 = p->chart(p->w0, p->free0);
    out.samples.push_back({0.0, a0.u, a0.v, p->surface.embed(a0.u, a0.v), 0.0});
    for (std::size_t i = 0; i < m; ++i) {
        param += std::abs(arc.grid[i + 1] - arc.grid[i]);
        fr += p->free_sense * arc.dfree[i];
        t += arc.dtime[i];
        const ChartPoint q = p->chart(arc.grid[i + 1], fr);
        out.samples.push_back({param, q.u, q.v, p->surface.embed(q.u, q.v), t});
    }
    out.total_time = t;
    if (end == ArcEnd::turning) out.turning = TurningPoint{arc.grid.back(), param};

    out.meta.surface = p->surface.name();
    out.meta.field = p->field_name;
    out.meta.C = cfg.C;
    out.meta.branch = cfg.branch;
    out.meta.V0 = p->V0;
    out.meta.theorem = p->theorem;
    out.meta.reduction_case = p->reduction_case;
    out.meta.v_period = p->surface.v_period();
    out.meta.truncated = (end == ArcEnd::cap);
    out.meta.hit_boundary = (end == ArcEnd::boundary);
    out.meta.problem = std::move(p);
    return out;
}

CurveSolution run_solve(std::shared_ptr<Problem> p, const SolverConfig& cfg,
                        const StopRule& stop) {
    cfg.validate();
    const Kinematics k{p.get(), cfg.C};
    const double scale = p->indep_scale();

    if (!p->start_singular && k.den(p->w0) <= 0.0)
        raise(Errc::config_error, "C too large: reduced denominator is nonpositive at A");

    std::optional<double> target = stop.target_independent;
    if (target) {
        if (*target == p->w0)
            raise(Errc::config_error, "stop target coincides with the start coordinate");
        if ((*target - p->w0) * p->dir < 0.0)
            raise(Errc::config_error, "stop target lies against the march direction");
    }

    // nearest hard bound in the march direction
    double bound = kInf * p->dir;
    ArcEnd bound_kind = ArcEnd::boundary;
    const double edge = p->dir > 0 ? p->indep_max : p->indep_min;
    if (std::isfinite(edge)) {
        bound = edge - p->dir * std::max(1e-9 * scale, std::abs(edge) * 1e-12);
        bound_kind = ArcEnd::boundary;
    }
    if (stop.span) {
        const double cap_w = p->w0 + p->dir * *stop.span;
        if (!std::isfinite(bound) || (cap_w - bound) * p->dir < 0.0) {
            bound = cap_w;
            bound_kind = ArcEnd::cap;
        }
    }
    if (target && (!std::isfinite(bound) || (*target - bound) * p->dir < 0.0)) {
        bound = *target;
        bound_kind = ArcEnd::target;
    }

    double w_end;
    bool sing_end = false;
    ArcEnd end_kind;

    if (std::isfinite(bound)) {
        const auto c0 = scan_turning(k, p->w0, bound, cfg.root_tol);
        if (c0) {
            w_end = *c0;
            sing_end = true;
            end_kind = ArcEnd::turning;
        } else {
            w_end = bound;
            end_kind = bound_kind;
            // a target may sit within rounding of the turning point; the
            // substitution is exact anyway, so flag the nearly-dead end
            const double dend = k.den(w_end);
            if (dend <= 1e-6 * p->m_free(w_end)) sing_end = true;
        }
    } else {
        // unbounded march: expanding blocks until a turning point or the cap.
        // The span guard keeps cosh-type metrics clear of overflow and cuts
        // curves whose free coordinate converges to an asymptote.
        const double cap = 2.0 * numeric::pi * cfg.max_windings;
        const double span_guard = 150.0 * scale;
        double traveled = 0.0;
        double w_block = p->w0;
        double block = 0.5 * scale;
        std::optional<double> found;
        double cap_w = 0.0;
        bool capped = false;
        for (int it = 0; it < 200 && !found && !capped; ++it) {
            double w_next = w_block + p->dir * block;
            if (std::abs(w_next - p->w0) > span_guard)
                w_next = p->w0 + p->dir * span_guard;
            found = scan_turning(k, w_block, w_next, cfg.root_tol);
            if (found) break;
            double stop_at = 0.0;
            const double piece =
                coarse_free_travel(k, w_block, w_next, 64, &stop_at, cap - traveled);
            if (traveled + piece >= cap) {
                cap_w = stop_at;
                capped = true;
                break;
            }
            traveled += piece;
            w_block = w_next;
            block *= 1.5;
            if (std::abs(w_block - p->w0) >= span_guard) {
                cap_w = w_block;
                capped = true;
            }
        }
        if (found) {
            w_end = *found;
            sing_end = true;
            end_kind = ArcEnd::turning;
        } else if (capped) {
            w_end = cap_w;
            end_kind = ArcEnd::cap;
        } else {
            raise(Errc::config_error,
                  "curve neither turns nor meets a stop rule; give a target or span");
        }
    }

    const Arc arc = integrate_arc(k, p->w0, w_end, p->start_singular, sing_end, cfg);
    return assemble(std::move(p), cfg, arc, end_kind);
}

}  // namespace

// ---- public operations ------------------------------------------------------

CurveSolution solve_theorem1(const SurfacePatch& surface, const Potential& pot, ChartPoint A,
                             const SolverConfig& cfg, const StopRule& stop) {
    return run_solve(build_problem(surface, &pot, nullptr, A, cfg), cfg, stop);
}

CurveSolution solve_theorem3(const SurfacePatch& surface, const Medium& medium, ChartPoint A,
                             const SolverConfig& cfg, const StopRule& stop) {
    return run_solve(build_problem(surface, nullptr, &medium, A, cfg), cfg, stop);
}

std::optional<TurningPoint> find_turning_point(const SurfacePatch& surface, const Potential& pot,
                                               ChartPoint A, const SolverConfig& cfg) {
    cfg.validate();
    auto p = build_problem(surface, &pot, nullptr, A, cfg);
    const Kinematics k{p.get(), cfg.C};
    const auto c0 = scan_turning(k, p->w0, scan_limit(*p), cfg.root_tol);
    if (!c0) return std::nullopt;
    return TurningPoint{*c0, std::abs(*c0 - p->w0)};
}

std::optional<TurningPoint> find_turning_point(const SurfacePatch& surface, const Medium& medium,
                                               ChartPoint A, const SolverConfig& cfg) {
    cfg.validate();
    auto p = build_problem(surface, nullptr, &medium, A, cfg);
    const Kinematics k{p.get(), cfg.C};
    const auto c0 = scan_turning(k, p->w0, scan_limit(*p), cfg.root_tol);
    if (!c0) return std::nullopt;
    return TurningPoint{*c0, std::abs(*c0 - p->w0)};
}

CurveSolution continue_past_turning(const CurveSolution& curve, const SolverConfig& cfg,
                                    const StopRule& stop) {
    if (!curve.turning)
        raise(Errc::no_turning_point, "continue_past_turning: curve has no turning point");
    if (!curve.meta.problem)
        raise(Errc::config_error, "continue_past_turning: curve lacks its problem handle");
    cfg.validate();

    const Problem& base = *curve.meta.problem;
    auto p2 = std::make_shared<Problem>(base);
    p2->dir = -base.dir;  // march back toward the start level
    const double c0 = curve.turning->c0;

    double w_back = base.w0;  // drive returns to zero there (mirrored cusp)
    bool sing_back = base.start_singular;
    if (stop.target_independent) {
        const double t = *stop.target_independent;
        if ((t - c0) * p2->dir <= 0.0 || (w_back - t) * p2->dir < 0.0)
            raise(Errc::config_error,
                  "continuation target must lie between the turning point and the start level");
        if (t != w_back) {
            w_back = t;
            sing_back = false;
        }
    }

    const Kinematics k{p2.get(), cfg.C};
    const Arc arc = integrate_arc(k, c0, w_back, /*sing_start=*/true, sing_back, cfg);

    CurveSolution out = curve;
    out.meta.continued = true;  // the quadrature sign is reversed on the new arc

    double param = curve.samples.back().param;
    double fr = base.reduction_case == 1 ? curve.samples.back().u : curve.samples.back().v;
    double t = curve.samples.back().time;
    const std::size_t m = arc.grid.size() - 1;
    for (std::size_t i = 0; i < m; ++i) {
        param += std::abs(arc.grid[i + 1] - arc.grid[i]);
        fr += base.free_sense * arc.dfree[i];
        t += arc.dtime[i];
        const ChartPoint q = base.chart(arc.grid[i + 1], fr);
        out.samples.push_back({param, q.u, q.v, base.surface.embed(q.u, q.v), t});
    }
    out.total_time = t;
    return out;
}

std::function<double(double)> free_rate(const SurfacePatch& surface, const Potential& pot,
                                        ChartPoint A, const SolverConfig& cfg) {
    auto p = build_problem(surface, &pot, nullptr, A, cfg);
    return [p, C = cfg.C](double w) { return Kinematics{p.get(), C}.rate(w); };
}

std::function<double(double)> free_rate(const SurfacePatch& surface, const Medium& medium,
                                        ChartPoint A, const SolverConfig& cfg) {
    auto p = build_problem(surface, nullptr, &medium, A, cfg);
    return [p, C = cfg.C](double w) { return Kinematics{p.get(), C}.rate(w); };
}

// ---- shooting ----------------------------------------------------------------

namespace {

struct ShootContext {
    std::shared_ptr<Problem> p;
    const SolverConfig* tpl;
    double w_B = 0.0;
    double delta = 0.0;  // |free(B) - free(A)|

    Kinematics kin(double C) const { return Kinematics{p.get(), C}; }

    // |free displacement| accumulated from the start to w, C fixed
    double psi(double C, double w) const {
        if (C == 0.0) return 0.0;
        const Kinematics k = kin(C);
        return std::abs(quad::sqrt_endpoints([&k](double x) { return k.rate(x); }, p->w0, w,
                                             p->start_singular, false, tpl->quad_tol)
                            .value);
    }
    double theta(double C, double c0) const {
        const Kinematics k = kin(C);
        return std::abs(quad::sqrt_endpoints([&k](double x) { return k.rate(x); }, p->w0, c0,
                                             p->start_singular, true, tpl->quad_tol)
                            .value);
    }
    std::optional<double> turning(double C) const {
        const Kinematics k = kin(C);
        return scan_turning(k, p->w0, scan_limit(*p), tpl->root_tol);
    }
};

ShootResult shoot_impl(std::shared_ptr<Problem> p, ChartPoint B,
                       const SolverConfig& cfg_template, double shoot_tol) {
    cfg_template.validate();
    if (!p->surface.domain().contains(B.u, B.v))
        raise(Errc::target_unreachable, "B lies outside the open chart domain");

    ShootContext ctx{p, &cfg_template};
    ctx.w_B = indep_of(*p, B);
    const double free_B = free_of(*p, B);
    const double free_A = p->free0;

    const bool rising_end = std::abs(ctx.w_B - p->w0) <= 1e-14 * p->indep_scale();
    if (!rising_end && (ctx.w_B - p->w0) * p->dir <= 0.0)
        raise(Errc::target_unreachable,
              "B lies against the falling direction from A (V(B) must be below V(A))");
    double drive_B = 0.0;
    if (!rising_end) {
        drive_B = p->drive(ctx.w_B);
        if (!(drive_B > 0.0))
            raise(Errc::target_unreachable, "B is not strictly below the start level");
    }

    SolverConfig cfg = cfg_template;
    cfg.branch = (free_B >= free_A) ? Branch::plus : Branch::minus;
    ctx.delta = std::abs(free_B - free_A);
    p->free_sense = (cfg.branch == Branch::plus) ? +1 : -1;

    if (rising_end && ctx.delta <= shoot_tol)
        raise(Errc::target_unreachable, "B coincides with A");

    // vertical drop
    if (ctx.delta <= shoot_tol && !rising_end) {
        cfg.C = 0.0;
        StopRule st;
        st.target_independent = ctx.w_B;
        return {cfg, run_solve(std::make_shared<Problem>(*p), cfg, st)};
    }

    // scan grid: logarithmic, scaled per the start metric and target depth
    const double scale =
        rising_end ? 1.0 : std::sqrt(p->m_free(p->w0 + p->dir * 1e-5 * p->indep_scale()) /
                                     drive_B);
    double C_crit = kInf;
    if (!rising_end) C_crit = std::sqrt(p->m_free(ctx.w_B) / drive_B);

    std::vector<double> grid;
    for (int i = 0; i <= 48; ++i) {
        const double c = scale * std::pow(10.0, -6.0 + 12.0 * i / 48.0);
        if (c < C_crit) grid.push_back(c);
    }
    if (std::isfinite(C_crit)) grid.push_back(C_crit * (1.0 - 1e-12));
    if (grid.empty()) raise(Errc::no_bracket, "shoot: empty C grid");

    auto solve_final = [&](double C, bool use_continuation) -> ShootResult {
        cfg.C = C;
        auto pf = std::make_shared<Problem>(*p);
        if (!use_continuation) {
            StopRule st;
            st.target_independent = ctx.w_B;
            CurveSolution curve = run_solve(pf, cfg, st);
            return {cfg, std::move(curve)};
        }
        CurveSolution incoming = run_solve(pf, cfg, {});
        if (!incoming.turning)
            raise(Errc::no_bracket, "shoot: expected a turning point on the matched curve");
        StopRule st;
        if (!rising_end) st.target_independent = ctx.w_B;
        CurveSolution full = continue_past_turning(incoming, cfg, st);
        return {cfg, std::move(full)};
    };

    auto check_and_return = [&](ShootResult r) -> ShootResult {
        const Sample& last = r.curve.samples.back();
        const double fr = free_of(*p, ChartPoint{last.u, last.v});
        if (std::abs(fr - free_B) > 10 * shoot_tol)
            raise(Errc::no_bracket, "shoot: converged C misses B by " +
                                        std::to_string(std::abs(fr - free_B)));
        return r;
    };

    // displacement at the target on the incoming (falling) arc; NaN when this C
    // turns before reaching the target depth
    auto m1 = [&](double C) -> double {
        if (rising_end) return std::numeric_limits<double>::quiet_NaN();
        const auto c0 = ctx.turning(C);
        if (c0 && (*c0 - ctx.w_B) * p->dir < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return ctx.psi(C, ctx.w_B);
    };
    // displacement at the target on the rising arc (after the turning point)
    auto m2 = [&](double C) -> double {
        const auto c0 = ctx.turning(C);
        if (!c0) return std::numeric_limits<double>::quiet_NaN();
        if (!rising_end && (*c0 - ctx.w_B) * p->dir < 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        const double th = ctx.theta(C, *c0);
        return 2.0 * th - (rising_end ? 0.0 : ctx.psi(C, ctx.w_B));
    };

    auto bisect_on = [&](const std::function<double(double)>& m, double lo, double hi,
                         double m_lo, double m_hi) -> double {
        // monotone in C between the bracketing grid points
        double a = lo, b = hi, fa = m_lo - ctx.delta, fb = m_hi - ctx.delta;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + b);
            if (fb != fa) {
                const double s = b - fb * (b - a) / (fb - fa);
                if (s > std::min(a, b) && s < std::max(a, b)) mid = s;
            }
            const double fm = m(mid) - ctx.delta;
            if (std::abs(fm) <= 0.1 * shoot_tol || std::abs(b - a) < 1e-15 * std::abs(b))
                return mid;
            if ((fm > 0) == (fa > 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
                fb = fm;
            }
        }
        return 0.5 * (a + b);
    };

    if (!rising_end) {
        // try the incoming arc first: m1 grows from 0 with C
        double prev_C = 0.0, prev_m = 0.0;
        for (const double C : grid) {
            const double v = m1(C);
            if (std::isnan(v)) break;
            if (v >= ctx.delta) {
                const double C_hit = bisect_on(m1, prev_C == 0.0 ? grid.front() * 1e-3 : prev_C,
                                               C, prev_m, v);
                return check_and_return(solve_final(C_hit, false));
            }
            prev_C = C;
            prev_m = v;
        }
    }

    // rising arc: m2 decreases as C grows; scan from the largest C down
    double hi_C = 0.0, hi_m = 0.0;
    bool have_hi = false;
    double best_m = -kInf;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        const double v = m2(*it);
        if (std::isnan(v)) continue;
        best_m = std::max(best_m, v);
        if (v <= ctx.delta) {
            hi_C = *it;
            hi_m = v;
            have_hi = true;
        } else if (have_hi) {
            const double C_hit = bisect_on(m2, *it, hi_C, v, hi_m);
            return check_and_return(solve_final(C_hit, true));
        } else {
            // even the largest usable C overshoots: target sits between the two
            // crossings' reach; bracket against C_crit
            const double C_hi = grid.back();
            const double v_hi = m2(C_hi);
            if (!std::isnan(v_hi) && v_hi <= ctx.delta) {
                const double C_hit = bisect_on(m2, *it, C_hi, v, v_hi);
                return check_and_return(solve_final(C_hit, true));
            }
            break;
        }
    }

    // junction: the target sits at the turning point itself, where the falling
    // and rising crossings coincide. m1 and m2 both approach theta(C_crit) with
    // square-root sensitivity, so neither brackets; C_crit solves it exactly.
    if (!rising_end && std::isfinite(C_crit)) {
        const double probe = m1(grid.back());
        if (!std::isnan(probe) && std::abs(probe - ctx.delta) <= 1e-5 * std::max(1.0, ctx.delta))
            return check_and_return(solve_final(C_crit, false));
    }

    std::ostringstream os;
    os << "no C on the scanned grid reaches B (max swept displacement " << best_m << " vs "
       << ctx.delta << " required";
    if (p->central_exponent) {
        const double bound = 2.0 * numeric::pi / (*p->central_exponent + 2.0);
        os << "; Theorem-2 sector bound on the polar sweep is " << bound;
    }
    os << ")";
    if (best_m > -kInf && best_m < ctx.delta)
        raise(Errc::target_unreachable, os.str());
    raise(Errc::no_bracket, os.str());
}

}  // namespace

ShootResult shoot(const SurfacePatch& surface, const Potential& pot, ChartPoint A, ChartPoint B,
                  const SolverConfig& cfg_template, double shoot_tol) {
    return shoot_impl(build_problem(surface, &pot, nullptr, A, cfg_template), B, cfg_template,
                      shoot_tol);
}

ShootResult shoot(const SurfacePatch& surface, const Medium& medium, ChartPoint A, ChartPoint B,
                  const SolverConfig& cfg_template, double shoot_tol) {
    return shoot_impl(build_problem(surface, nullptr, &medium, A, cfg_template), B,
                      cfg_template, shoot_tol);
}

}  // namespace brach
