#include "brach/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "brach/errors.hpp"

namespace brach::io {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_curve_csv(const std::string& path, const CurveSolution& curve) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(Errc::config_error, "cannot open for writing: " + path);
    os << "param,u,v,x,y,z,time\n";
    for (const Sample& s : curve.samples) {
        os << format_double(s.param) << ',' << format_double(s.u) << ',' << format_double(s.v)
           << ',' << format_double(s.point.x) << ',' << format_double(s.point.y) << ','
           << format_double(s.point.z) << ',' << format_double(s.time) << '\n';
    }
    if (!os) raise(Errc::config_error, "write failed: " + path);
}

CsvCurve read_curve_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(Errc::config_error, "cannot open for reading: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("param,u,v,x,y,z,time", 0) != 0)
        raise(Errc::parse_error, path + ": expected header 'param,u,v,x,y,z,time'");

    CsvCurve out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double cols[7];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int c = 0; c < 7; ++c) {
            const auto res = std::from_chars(p, end, cols[c]);
            if (res.ec != std::errc{})
                raise(Errc::parse_error, path + ": bad number in row " +
                                             std::to_string(out.rows.size() + 1));
            p = res.ptr;
            if (c < 6) {
                if (p == end || *p != ',')
                    raise(Errc::parse_error, path + ": expected 7 comma-separated columns");
                ++p;
            }
        }
        out.rows.push_back(
            {cols[0], cols[1], cols[2], Vec3{cols[3], cols[4], cols[5]}, cols[6]});
    }
    if (out.rows.size() < 2) raise(Errc::parse_error, path + ": fewer than two data rows");
    return out;
}

// ---- SVG ---------------------------------------------------------------------

namespace {

struct Box {
    double x_lo = kInf, x_hi = -kInf, y_lo = kInf, y_hi = -kInf;
    void add(double x, double y) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    void pad() {
        const double dx = std::max(1e-9, 0.05 * (x_hi - x_lo + 1e-12));
        const double dy = std::max(1e-9, 0.05 * (y_hi - y_lo + 1e-12));
        x_lo -= dx;
        x_hi += dx;
        y_lo -= dy;
        y_hi += dy;
    }
};

constexpr double kW = 820.0, kH = 620.0, kMargin = 55.0;

struct Mapper {
    Box box;
    double sx, sy;
    Mapper(const Box& b) : box(b) {
        sx = (kW - 2 * kMargin) / (box.x_hi - box.x_lo);
        sy = (kH - 2 * kMargin) / (box.y_hi - box.y_lo);
    }
    double X(double x) const { return kMargin + (x - box.x_lo) * sx; }
    double Y(double y) const { return kH - kMargin - (y - box.y_lo) * sy; }  // y up
};

void emit_svg(std::ofstream& os, const Mapper& m, std::span<const SvgSeries> series,
              const std::string& title, const std::string& x_label,
              const std::string& y_label) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!-- " << title << "\n"
       << "     data x in [" << format_double(m.box.x_lo) << ", " << format_double(m.box.x_hi)
       << "] maps to pixels [" << kMargin << ", " << kW - kMargin << "]\n"
       << "     data y in [" << format_double(m.box.y_lo) << ", " << format_double(m.box.y_hi)
       << "] maps to pixels [" << kH - kMargin << ", " << kMargin << "] (y axis points up) -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes through zero when visible, else along the box edge
    const double x_axis_y = (m.box.y_lo < 0 && m.box.y_hi > 0) ? m.Y(0.0) : kH - kMargin;
    const double y_axis_x = (m.box.x_lo < 0 && m.box.x_hi > 0) ? m.X(0.0) : kMargin;
    os << "<line x1=\"" << kMargin << "\" y1=\"" << x_axis_y << "\" x2=\"" << kW - kMargin
       << "\" y2=\"" << x_axis_y << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << y_axis_x << "\" y1=\"" << kMargin << "\" x2=\"" << y_axis_x
       << "\" y2=\"" << kH - kMargin << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<text x=\"" << kW - kMargin << "\" y=\"" << x_axis_y - 6
       << "\" text-anchor=\"end\" font-size=\"12\">" << x_label << "</text>\n";
    os << "<text x=\"" << y_axis_x + 8 << "\" y=\"" << kMargin + 4
       << "\" font-size=\"12\">" << y_label << "</text>\n";

    double legend_y = kMargin + 10;
    for (const SvgSeries& s : series) {
        if (s.points.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (s.dashed) os << " stroke-dasharray=\"7,5\"";
        os << " points=\"";
        for (const auto& [x, y] : s.points)
            os << format_double(m.X(x)) << ',' << format_double(m.Y(y)) << ' ';
        os << "\"/>\n";
        if (!s.label.empty()) {
            os << "<line x1=\"" << kW - 200 << "\" y1=\"" << legend_y << "\" x2=\"" << kW - 170
               << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
            if (s.dashed) os << " stroke-dasharray=\"7,5\"";
            os << "/>\n<text x=\"" << kW - 162 << "\" y=\"" << legend_y + 4
               << "\" font-size=\"12\">" << s.label << "</text>\n";
            legend_y += 18;
        }
    }
    os << "</svg>\n";
}

}  // namespace

void write_svg(const std::string& path, std::span<const SvgSeries> series,
               const std::string& title, const std::string& x_label, const std::string& y_label) {
    Box box;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) box.add(x, y);
    if (!(box.x_lo <= box.x_hi)) raise(Errc::config_error, "write_svg: no points");
    box.pad();
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(Errc::config_error, "cannot open for writing: " + path);
    emit_svg(os, Mapper(box), series, title, x_label, y_label);
}

void write_chart_svg(const std::string& path, std::span<const SvgSeries> series,
                     const std::string& title) {
    write_svg(path, series, title, "u", "v");
}

void write_embedded_svg(const std::string& path, const SurfacePatch& surface,
                        std::span<const CurveSolution* const> curves, const std::string& title) {
    // fixed orthographic view: rotate about z then x, drop the depth axis
    const double az = -0.55, ax = -1.10;
    const double ca = std::cos(az), sa = std::sin(az);
    const double cb = std::cos(ax), sb = std::sin(ax);
    auto project = [&](const Vec3& p) -> std::pair<double, double> {
        const double x1 = ca * p.x - sa * p.y;
        const double y1 = sa * p.x + ca * p.y;
        return {x1, sb * y1 + cb * p.z};
    };

    std::vector<SvgSeries> series;

    // chart wireframe over the union of the curves' (u, v) ranges
    double u_lo = kInf, u_hi = -kInf, v_lo = kInf, v_hi = -kInf;
    for (const CurveSolution* c : curves)
        for (const Sample& s : c->samples) {
            u_lo = std::min(u_lo, s.u);
            u_hi = std::max(u_hi, s.u);
            v_lo = std::min(v_lo, s.v);
            v_hi = std::max(v_hi, s.v);
        }
    const double u_pad = 0.15 * (u_hi - u_lo + 1e-9);
    const double v_pad = 0.15 * (v_hi - v_lo + 1e-9);
    u_lo -= u_pad;
    u_hi += u_pad;
    v_lo -= v_pad;
    v_hi += v_pad;
    const Domain dom = surface.domain();
    u_lo = std::max(u_lo, dom.u_min + 1e-9 * (1 + std::abs(dom.u_min)));
    u_hi = std::min(u_hi, dom.u_max - 1e-9 * (1 + std::abs(dom.u_max)));
    v_lo = std::max(v_lo, dom.v_min + 1e-9 * (1 + std::abs(dom.v_min)));
    v_hi = std::min(v_hi, dom.v_max - 1e-9 * (1 + std::abs(dom.v_max)));

    const int lines = 13, pts = 48;
    for (int li = 0; li < lines; ++li) {
        SvgSeries iso_u, iso_v;
        iso_u.color = iso_v.color = "#cccccc";
        const double u = u_lo + (u_hi - u_lo) * li / (lines - 1);
        const double v = v_lo + (v_hi - v_lo) * li / (lines - 1);
        for (int k = 0; k < pts; ++k) {
            const double t = static_cast<double>(k) / (pts - 1);
            iso_u.points.push_back(project(surface.embed(u, v_lo + (v_hi - v_lo) * t)));
            iso_v.points.push_back(project(surface.embed(u_lo + (u_hi - u_lo) * t, v)));
        }
        series.push_back(std::move(iso_u));
        series.push_back(std::move(iso_v));
    }

    const char* palette[] = {"#1f4e9c", "#1a7a3c", "#b03030", "#7b3fa0"};
    int ci = 0;
    for (const CurveSolution* c : curves) {
        SvgSeries s;
        s.color = palette[ci++ % 4];
        s.label = "C=" + format_double(c->meta.C);
        for (const Sample& smp : c->samples) s.points.push_back(project(smp.point));
        series.push_back(std::move(s));
    }

    write_svg(path, series, title, "", "");
}

}  // namespace brach::io
