#pragma once

#include <cstdint>
#include <vector>

#include "brach/solver.hpp"

namespace brach {

/// Plain chart-coordinate polyline; winding-aware v. Carrier for the
/// travel-time functional and the oracles below.
struct DiscreteCurve {
    std::vector<ChartPoint> points;
};

DiscreteCurve as_discrete(const CurveSolution& curve);

/// Travel time of a particle released at the V = V0 level, along the polyline.
/// Per-segment composite rule: metric length at the segment midpoint times the
/// exact speed factor for linearly interpolated V (this reduces to the
/// square-root substitution on a segment that starts exactly at the V0 level,
/// and is second-order on smooth segments). Always positive.
double travel_time(const SurfacePatch& surface, const Potential& pot, double V0,
                   const DiscreteCurve& curve);

struct ProbeReport {
    int trials = 0;
    int redraws = 0;
    double reference_time = 0.0;
    double min_gap = 0.0;
    double max_gap = 0.0;
    bool passed = false;  // every gap >= -1e-9
    std::uint64_t seed = 0;
    std::vector<double> gaps;  // indexed by trial
};

/// Seeded bump perturbations of the free chart coordinate, vanishing at both
/// endpoints; asserts no perturbation beats the solution's travel time.
/// Deterministic for a given seed, independent of `jobs`.
ProbeReport minimality_probe(const SurfacePatch& surface, const Potential& pot,
                             const CurveSolution& solution, int trials, double amplitude,
                             std::uint64_t seed, int jobs = 1);

struct GridSpec {
    Domain rect;  // bounding chart rectangle (closed box of lattice nodes)
    int nu = 200;
    int nv = 200;
    int jobs = 1;
};

struct GridResult {
    double time = 0.0;
    DiscreteCurve path;
};

/// Label-setting shortest-time search on a 16-neighbor lattice with Eq-(2)
/// midpoint edge weights; nodes at or above the start level are excised and A
/// is attached by exact straight-fall seed edges. A and B snap to the nearest
/// lattice nodes.
GridResult grid_oracle(const SurfacePatch& surface, const Potential& pot, double V0, ChartPoint A,
                       ChartPoint B, const GridSpec& spec);

}  // namespace brach
