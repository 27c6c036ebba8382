#pragma once

#include <span>
#include <string>
#include <vector>

#include "brach/solver.hpp"

namespace brach::io {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// curve.csv: header `param,u,v,x,y,z,time`, one row per sample, round-trip
/// decimal formatting, '\n' line ends. Byte-identical for identical curves.
void write_curve_csv(const std::string& path, const CurveSolution& curve);

struct CsvCurve {
    std::vector<Sample> rows;
};

CsvCurve read_curve_csv(const std::string& path);

struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f4e9c";
    bool dashed = false;
    std::string label;
};

/// 2D polyline plot; the axis mapping is documented in the file's header
/// comment. Data bounds plus a small margin define the view box.
void write_svg(const std::string& path, std::span<const SvgSeries> series,
               const std::string& title, const std::string& x_label, const std::string& y_label);

/// Chart-coordinate plot (u horizontal, v vertical) of one or more curves.
void write_chart_svg(const std::string& path, std::span<const SvgSeries> series,
                     const std::string& title);

/// Orthographic 3D projection of embedded curves with a light chart wireframe.
void write_embedded_svg(const std::string& path, const SurfacePatch& surface,
                        std::span<const CurveSolution* const> curves, const std::string& title);

}  // namespace brach::io
