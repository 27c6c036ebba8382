// brach: least-time curves on surfaces in uniform, central, and relativistic
// fields. Subcommands: solve, shoot, time, probe, sector, relativistic, compare.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brach/analysis.hpp"
#include "brach/errors.hpp"
#include "brach/io.hpp"
#include "brach/media.hpp"
#include "brach/parallel.hpp"
#include "brach/solver.hpp"
#include "brach/verification.hpp"

namespace {

using namespace brach;

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::config_error:
        case Errc::parse_error:
        case Errc::domain_error:
        case Errc::non_positive_radius:
        case Errc::non_positive_exponent:
            return 2;
        default:
            return 3;
    }
}

void emit_error(const std::string& code, const std::string& message) {
    std::cerr << "{\"code\":\"" << json_escape(code) << "\",\"message\":\""
              << json_escape(message) << "\"}\n";
}

ChartPoint parse_pair(const std::string& text, const std::string& flag) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        raise(Errc::config_error, flag + " expects 'u,v', got '" + text + "'");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        raise(Errc::config_error, flag + " expects numbers 'u,v', got '" + text + "'");
    }
}

struct GlobalOpts {
    double quad_tol = 1e-10;
    double root_tol = 1e-12;
    std::string out_dir = ".";
    int jobs = 1;
    std::uint64_t seed = 0;
};

void require_writable(const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::string probe = dir + "/.brach_write_probe";
    std::ofstream f(probe);
    if (!f) raise(Errc::config_error, "output directory not writable: " + dir);
    f.close();
    std::filesystem::remove(probe);
}

struct SolveArgs {
    std::string surface = "plane";
    std::string field = "uniform";
    std::string A_text = "0,0";
    std::string B_text;
    double C = std::nan("");
    std::string branch = "plus";
    std::string direction = "auto";
    int samples = 1024;
    int max_windings = 8;
    bool no_continue = false;
    std::optional<double> target_indep;
    std::optional<double> span;
};

SolverConfig make_config(const SolveArgs& a, const GlobalOpts& g) {
    SolverConfig cfg;
    cfg.C = std::isnan(a.C) ? 0.0 : a.C;
    if (a.branch == "plus")
        cfg.branch = Branch::plus;
    else if (a.branch == "minus")
        cfg.branch = Branch::minus;
    else
        raise(Errc::config_error, "--branch must be plus or minus");
    if (a.direction == "auto")
        cfg.direction = March::automatic;
    else if (a.direction == "up")
        cfg.direction = March::increasing;
    else if (a.direction == "down")
        cfg.direction = March::decreasing;
    else
        raise(Errc::config_error, "--direction must be auto, up, or down");
    cfg.quad_tol = g.quad_tol;
    cfg.root_tol = g.root_tol;
    cfg.samples = a.samples;
    cfg.max_windings = a.max_windings;
    cfg.jobs = g.jobs;
    return cfg;
}

void print_summary(const CurveSolution& c) {
    std::cout << "surface=" << c.meta.surface << " field=" << c.meta.field
              << " C=" << io::format_double(c.meta.C)
              << " branch=" << (c.meta.branch == Branch::plus ? "plus" : "minus")
              << " samples=" << c.samples.size()
              << " total_time=" << io::format_double(c.total_time);
    if (c.turning)
        std::cout << " turning_c0=" << io::format_double(c.turning->c0);
    else
        std::cout << " turning_c0=none";
    std::cout << " continued=" << (c.meta.continued ? 1 : 0)
              << " truncated=" << (c.meta.truncated ? 1 : 0) << "\n";
}

void write_artifacts(const GlobalOpts& g, const SurfacePatch& surface,
                     const CurveSolution& curve) {
    require_writable(g.out_dir);
    io::write_curve_csv(g.out_dir + "/curve.csv", curve);

    io::SvgSeries chart;
    for (const Sample& s : curve.samples) chart.points.emplace_back(s.u, s.v);
    chart.label = "C=" + io::format_double(curve.meta.C);
    io::write_chart_svg(g.out_dir + "/curve.svg", std::vector<io::SvgSeries>{chart},
                        curve.meta.surface + " / " + curve.meta.field + " (chart coordinates)");

    const CurveSolution* one[] = {&curve};
    io::write_embedded_svg(g.out_dir + "/curve3d.svg", surface, one,
                           curve.meta.surface + " / " + curve.meta.field +
                               " (orthographic projection)");
}

int cmd_solve(const SolveArgs& a, const GlobalOpts& g, bool is_shoot) {
    const SurfacePatch surface = parse_surface(a.surface);
    const FieldSpec field = parse_field(a.field, surface);
    const ChartPoint A = parse_pair(a.A_text, "--A");

    const bool has_B = !a.B_text.empty();
    const bool has_C = !std::isnan(a.C);
    if (is_shoot && !has_B) raise(Errc::config_error, "shoot requires --B");
    if (!is_shoot && has_B == has_C)
        raise(Errc::config_error, "give exactly one of --B (shoot to a point) or --C");

    SolverConfig cfg = make_config(a, g);
    CurveSolution curve;

    if (has_B) {
        const ChartPoint B = parse_pair(a.B_text, "--B");
        if (field.relativistic_c) {
            const double V0 = field.potential.V(A.u, A.v);
            const Medium med = relativistic_index(field.potential, V0, *field.relativistic_c);
            const ShootResult r = shoot(surface, med, A, B, cfg);
            cfg = r.config;
            curve = r.curve;
        } else {
            const ShootResult r = shoot(surface, field.potential, A, B, cfg);
            cfg = r.config;
            curve = r.curve;
        }
        std::cout << "C=" << io::format_double(cfg.C) << " branch="
                  << (cfg.branch == Branch::plus ? "plus" : "minus") << "\n";
    } else {
        StopRule stop;
        stop.target_independent = a.target_indep;
        stop.span = a.span;
        if (cfg.C == 0.0 && !a.target_indep && !a.span) stop.span = 5.0;
        if (field.relativistic_c) {
            const double V0 = field.potential.V(A.u, A.v);
            const Medium med = relativistic_index(field.potential, V0, *field.relativistic_c);
            curve = solve_theorem3(surface, med, A, cfg, stop);
        } else {
            curve = solve_theorem1(surface, field.potential, A, cfg, stop);
        }
        if (curve.turning && !a.no_continue && !a.target_indep)
            curve = continue_past_turning(curve, cfg);
    }

    write_artifacts(g, surface, curve);
    print_summary(curve);
    return 0;
}

int cmd_time(const std::string& csv, const std::string& surface_kw, const std::string& field_kw,
             std::optional<double> V0_opt) {
    const SurfacePatch surface = parse_surface(surface_kw);
    const FieldSpec field = parse_field(field_kw, surface);
    const io::CsvCurve data = io::read_curve_csv(csv);
    DiscreteCurve curve;
    for (const Sample& s : data.rows) curve.points.push_back({s.u, s.v});
    const double V0 =
        V0_opt ? *V0_opt : field.potential.V(curve.points.front().u, curve.points.front().v);
    std::cout << io::format_double(travel_time(surface, field.potential, V0, curve)) << "\n";
    return 0;
}

int cmd_probe(const std::string& csv, const std::string& surface_kw, const std::string& field_kw,
              std::optional<double> V0_opt, int trials, double amplitude, const GlobalOpts& g) {
    const SurfacePatch surface = parse_surface(surface_kw);
    const FieldSpec field = parse_field(field_kw, surface);
    const io::CsvCurve data = io::read_curve_csv(csv);

    CurveSolution sol;
    sol.samples = data.rows;
    sol.meta.surface = surface.name();
    sol.meta.field = field.potential.name;
    sol.meta.reduction_case =
        field.potential.symmetry == Symmetry::independent_of_u ? 1 : 2;
    sol.meta.V0 = V0_opt ? *V0_opt
                         : field.potential.V(data.rows.front().u, data.rows.front().v);
    sol.total_time = data.rows.back().time;

    const ProbeReport rep =
        minimality_probe(surface, field.potential, sol, trials, amplitude, g.seed, g.jobs);
    std::cout << (rep.passed ? "PASS" : "FAIL") << " min_gap=" << io::format_double(rep.min_gap)
              << " max_gap=" << io::format_double(rep.max_gap) << " trials=" << rep.trials
              << " redraws=" << rep.redraws << " seed=" << rep.seed << "\n";
    return 0;
}

int cmd_sector(double n_exp, const std::string& c0_text, const GlobalOpts& g) {
    std::vector<double> c0s;
    std::string tok;
    for (std::size_t i = 0; i <= c0_text.size(); ++i) {
        if (i == c0_text.size() || c0_text[i] == ',') {
            if (!tok.empty()) c0s.push_back(std::stod(tok));
            tok.clear();
        } else {
            tok.push_back(c0_text[i]);
        }
    }
    if (c0s.empty()) raise(Errc::config_error, "--c0 expects a comma-separated list");
    if (!(n_exp > 0.0)) raise(Errc::non_positive_exponent, "--n must be positive");

    const auto thetas = par::map_batch(
        c0s.size(), [&](std::size_t i) { return sector_angle(n_exp, c0s[i]).theta; }, g.jobs);

    require_writable(g.out_dir);
    std::ofstream csv(g.out_dir + "/sector.csv", std::ios::binary);
    const std::string header = "c0,theta,theta_limit,sector_central_angle";
    std::cout << header << "\n";
    csv << header << "\n";
    for (std::size_t i = 0; i < c0s.size(); ++i) {
        const double lim = 3.14159265358979323846 / (n_exp + 2.0);
        const double sect = 2.0 * 3.14159265358979323846 * n_exp / (n_exp + 2.0);
        const std::string row = io::format_double(c0s[i]) + "," + io::format_double(thetas[i]) +
                                "," + io::format_double(lim) + "," + io::format_double(sect);
        std::cout << row << "\n";
        csv << row << "\n";
    }
    return 0;
}

int cmd_relativistic(double c, double k, const std::string& B_text,
                     const std::string& surface_kw, const std::string& A_text,
                     const SolveArgs& base, const GlobalOpts& g) {
    const SurfacePatch surface = parse_surface(surface_kw);
    const FieldSpec field = parse_field("uniform", surface);
    const ChartPoint A = parse_pair(A_text, "--A");
    const double V0 = field.potential.V(A.u, A.v);
    const Medium med = relativistic_index(field.potential, V0, c);

    SolverConfig cfg = make_config(base, g);
    CurveSolution rel;
    if (!B_text.empty()) {
        const ShootResult r = shoot(surface, med, A, parse_pair(B_text, "--B"), cfg);
        cfg = r.config;
        rel = r.curve;
        k = cfg.C;
    } else {
        if (!(k > 0.0)) raise(Errc::config_error, "relativistic needs --k > 0 or --B");
        cfg.C = k;
        rel = solve_theorem3(surface, med, A, cfg);
        if (rel.turning) rel = continue_past_turning(rel, cfg);
    }

    // classical counterpart with the equivalent constant sqrt(2) k / c, the
    // map under which the two curves coincide as c grows
    SolverConfig ccfg = cfg;
    ccfg.C = std::sqrt(2.0) * k / c;
    CurveSolution cl = solve_theorem1(surface, field.potential, A, ccfg);
    if (cl.turning) cl = continue_past_turning(cl, ccfg);

    require_writable(g.out_dir);
    io::write_curve_csv(g.out_dir + "/relativistic.csv", rel);
    io::write_curve_csv(g.out_dir + "/classical.csv", cl);

    io::SvgSeries rs, cs;
    rs.color = "#1f4e9c";
    rs.label = "relativistic k=" + io::format_double(k) + " c=" + io::format_double(c);
    for (const Sample& s : rel.samples) rs.points.emplace_back(s.u, s.v);
    cs.color = "#1a7a3c";
    cs.dashed = true;
    cs.label = "classical C=" + io::format_double(ccfg.C);
    for (const Sample& s : cl.samples) cs.points.emplace_back(s.u, s.v);
    io::write_chart_svg(g.out_dir + "/overlay.svg", std::vector<io::SvgSeries>{rs, cs},
                        "relativistic vs classical least-time curves");

    std::cout << "k=" << io::format_double(k) << " C_classical=" << io::format_double(ccfg.C)
              << " T_rel=" << io::format_double(rel.total_time)
              << " T_classical=" << io::format_double(cl.total_time) << "\n";
    return 0;
}

int cmd_compare(const SolveArgs& base, double C1, double C2, const GlobalOpts& g) {
    const SurfacePatch surface = parse_surface(base.surface);
    const FieldSpec field = parse_field(base.field, surface);
    const ChartPoint A = parse_pair(base.A_text, "--A");

    auto solve_one = [&](double C) {
        SolverConfig cfg = make_config(base, g);
        cfg.C = C;
        CurveSolution cur = solve_theorem1(surface, field.potential, A, cfg);
        if (cur.turning && !base.no_continue) cur = continue_past_turning(cur, cfg);
        return cur;
    };
    const CurveSolution a = solve_one(C1);
    const CurveSolution b = solve_one(C2);

    require_writable(g.out_dir);
    io::SvgSeries series_a, series_b;
    series_a.label = "C=" + io::format_double(C1);
    series_b.label = "C=" + io::format_double(C2);
    series_b.color = "#b03030";
    for (const Sample& s : a.samples) series_a.points.emplace_back(s.u, s.v);
    for (const Sample& s : b.samples) series_b.points.emplace_back(s.u, s.v);
    io::write_chart_svg(g.out_dir + "/compare.svg",
                        std::vector<io::SvgSeries>{series_a, series_b},
                        "intersecting least-time curves");

    try {
        const IntersectionReport rep = compare_intersecting(a, b);
        if (rep.coincident) {
            std::cout << "coincident curves, gap=0\n";
            return 0;
        }
        const Intersection& first = rep.points.front();
        std::cout << "intersections=" << rep.points.size() << " winner="
                  << (rep.winner == 0 ? "A" : "B") << " gap=" << io::format_double(rep.gap)
                  << " at u=" << io::format_double(first.u) << " v=" << io::format_double(first.v)
                  << " time_a=" << io::format_double(first.time_a)
                  << " time_b=" << io::format_double(first.time_b) << "\n";
    } catch (const Error& e) {
        if (e.code() != Errc::no_intersection) throw;
        std::cout << "no intersection\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"least-time curves on surfaces: uniform, central, and relativistic fields"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value file mirroring the flags; flags override");

    GlobalOpts g;
    app.add_option("--quad-tol", g.quad_tol, "absolute quadrature tolerance");
    app.add_option("--root-tol", g.root_tol, "turning-point root tolerance");
    app.add_option("--out-dir", g.out_dir, "artifact directory");
    app.add_option("--jobs", g.jobs, "parallel batch width (1 = serial)");
    app.add_option("--seed", g.seed, "seed for randomized operations");

    SolveArgs sa;
    auto add_problem_opts = [&](CLI::App* cmd) {
        cmd->add_option("--surface", sa.surface,
                        "plane|cone|hyperboloid|cylinder|polar|revolution:<h>:<g>");
        cmd->add_option("--field", sa.field, "uniform|central:<n>|relativistic:<c>");
        cmd->add_option("--A", sa.A_text, "start point u,v");
    };
    auto add_solver_opts = [&](CLI::App* cmd) {
        cmd->add_option("--branch", sa.branch, "plus|minus");
        cmd->add_option("--direction", sa.direction, "auto|up|down");
        cmd->add_option("--samples", sa.samples, "base sample intervals per arc");
        cmd->add_option("--max-windings", sa.max_windings, "free-coordinate travel cap");
        cmd->add_flag("--no-continue", sa.no_continue, "stop at the turning point");
        cmd->add_option("--target-indep", sa.target_indep,
                        "stop when the marching coordinate reaches this value");
        cmd->add_option("--span", sa.span, "marching span cap");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve from A with a given C (or --B)");
    add_problem_opts(solve);
    add_solver_opts(solve);
    solve->add_option("--C", sa.C, "integration constant (>= 0)");
    solve->add_option("--B", sa.B_text, "target point u,v (switches to shooting)");

    CLI::App* shootc = app.add_subcommand("shoot", "find C so the curve passes through B");
    add_problem_opts(shootc);
    add_solver_opts(shootc);
    shootc->add_option("--B", sa.B_text, "target point u,v")->required();

    std::string csv_path;
    std::optional<double> V0_opt;
    CLI::App* timec = app.add_subcommand("time", "travel time of a curve.csv polyline");
    timec->add_option("csv", csv_path, "curve.csv path")->required();
    add_problem_opts(timec);
    timec->add_option("--V0", V0_opt, "start level (default: V at the first sample)");

    int trials = 100;
    double amplitude = 0.05;
    CLI::App* probec = app.add_subcommand("probe", "seeded minimality perturbation test");
    probec->add_option("csv", csv_path, "curve.csv path")->required();
    add_problem_opts(probec);
    probec->add_option("--V0", V0_opt, "start level (default: V at the first sample)");
    probec->add_option("--trials", trials, "number of perturbations");
    probec->add_option("--amplitude", amplitude, "maximum bump amplitude");

    double n_exp = 1.0;
    std::string c0_list;
    CLI::App* sectorc = app.add_subcommand("sector", "forbidden-sector sweep table");
    sectorc->add_option("--n", n_exp, "central-field exponent (> 0)")->required();
    sectorc->add_option("--c0", c0_list, "comma-separated turning radii in (0,1)")->required();

    double rc = 10.0, rk = std::nan("");
    std::string rB;
    CLI::App* relc =
        app.add_subcommand("relativistic", "overlay relativistic and classical curves");
    relc->add_option("--c", rc, "speed of light parameter")->required();
    relc->add_option("--k", rk, "eikonal separation constant");
    relc->add_option("--B", rB, "target point u,v (shoot instead of --k)");
    relc->add_option("--surface", sa.surface, "chart (plane)");
    relc->add_option("--A", sa.A_text, "start point u,v");
    add_solver_opts(relc);

    double C1 = 0.0, C2 = 0.0;
    CLI::App* cmpc = app.add_subcommand("compare", "intersect two curves, compare times");
    add_problem_opts(cmpc);
    add_solver_opts(cmpc);
    cmpc->add_option("--C1", C1, "first integration constant")->required();
    cmpc->add_option("--C2", C2, "second integration constant")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("ConfigError", e.what());
        return 2;
    }

    try {
        if (*solve) return cmd_solve(sa, g, false);
        if (*shootc) return cmd_solve(sa, g, true);
        if (*timec) return cmd_time(csv_path, sa.surface, sa.field, V0_opt);
        if (*probec)
            return cmd_probe(csv_path, sa.surface, sa.field, V0_opt, trials, amplitude, g);
        if (*sectorc) return cmd_sector(n_exp, c0_list, g);
        if (*relc) return cmd_relativistic(rc, rk, rB, sa.surface, sa.A_text, sa, g);
        if (*cmpc) return cmd_compare(sa, C1, C2, g);
    } catch (const brach::Error& e) {
        emit_error(errc_name(e.code()), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        emit_error("InternalError", e.what());
        return 3;
    }
    return 0;
}
