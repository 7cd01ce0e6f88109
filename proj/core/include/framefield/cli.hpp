#pragma once

// Command implementations behind the command-line front end. Kept in the
// library so tests can drive complete runs without spawning processes.

#include <string>

namespace framefield {

struct RunConfig {
    std::string input;  // mesh path
    std::string prefix; // output path prefix
    int iterations = 3;
    double lambda = 100.0;
    double crease_deg = 45.0; // crease detection threshold, degrees
    double tol = 1e-10;
    int max_cg = -1;
    bool single_boundary_eq = false; // 2D only: degenerate one-equation lock
    bool hilbert = false;            // 3D only: Hilbert-sort vertex blocks
    bool viz = false;                // also write <prefix>.viz.vtk
};

struct LandscapeConfig {
    double theta_left = 0.0;
    double theta_right = 0.0;
    int grid_n = 64;
    std::string output; // CSV path
};

// Exit codes: 0 success, 2 unreadable input, 1 any other failure.
int cmd_design3d(const RunConfig& config);
int cmd_design2d(const RunConfig& config);
int cmd_selftest();
int cmd_landscape(const LandscapeConfig& config);

} // namespace framefield
