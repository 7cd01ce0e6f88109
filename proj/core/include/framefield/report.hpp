#pragma once

// Summary statistics produced by the 2D and 3D optimization pipelines.

#include <vector>

#include "framefield/lsq.hpp"

namespace framefield {

struct FieldReport {
    double energy = 0.0;               // final smoothing energy
    double curvature = 0.0;            // sum of squared inter-frame rotation angles
    std::vector<double> energy_trace;  // energy after each solve + projection
    double deviation_avg = 0.0;        // boundary constraint deviation statistics
    double deviation_max = 0.0;
    double misalignment_max = 0.0;     // 2D: worst boundary angle error in radians
    int singular_count = 0;            // singular triangles (2D) or tets (3D)
    double c_norm_avg = 0.0;           // 3D diagnostic: ||c||^2 * 12/5 per smooth boundary vertex
    double c_norm_max = 0.0;
    double wall_seconds = 0.0;         // measured but kept out of serialized reports
    std::vector<SolveStats> solves;    // one entry per linear solve
};

} // namespace framefield
