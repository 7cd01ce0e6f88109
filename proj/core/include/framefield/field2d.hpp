#pragma once

// 2D cross-frame fields on triangulations. A frame (an angle theta modulo
// pi/2) is encoded by the representation vector (cos 4*theta, sin 4*theta),
// which turns frame smoothing into linear least squares on those vectors:
// penalty rows align boundary frames, a solve yields raw vectors, projection
// maps them back to the unit circle, and optional relinearized passes add
// tangent-line rows at the current frames.

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "framefield/mesh.hpp"
#include "framefield/report.hpp"

namespace framefield {

using RepVector2 = std::array<double, 2>;

// (cos 4*theta, sin 4*theta) and its inverse; angles are reduced to [0, pi/2).
RepVector2 angle_to_coeffs(double theta);
double coeffs_to_angle(const RepVector2& a);

// Nearest unit representation vector. Throws when the input norm is <= 1e-9
// (the frame is undefined).
RepVector2 project2(const RepVector2& a);

// Signed rotation from frame i to frame j, in (-pi/4, pi/4]; exact ties at
// the range boundary resolve to +pi/4.
double rotation_between_frames2(double theta_i, double theta_j);

struct Field2 {
    std::vector<RepVector2> rep; // per-vertex, unit after projection
    std::vector<double> theta;   // matching angle in [0, pi/2)
};

// Smoothing energy pi * sum over edges of |a_j - a_i|^2.
double energy2(const TriMesh2& mesh, const Field2& field);

// Sum over edges of the squared inter-frame rotation angle.
double field_curvature2(const TriMesh2& mesh, const Field2& field);

// Winding index of the frame field around one triangle: the rotation angles
// along the three directed edges sum to an exact multiple of pi/2; the index
// is that multiple. Nonzero means the triangle is singular.
int triangle_singularity(const Field2& field, const std::array<int, 3>& tri);

// (triangle index, singularity index) for every singular triangle.
std::vector<std::pair<int, int>> singular_triangles2(const TriMesh2& mesh, const Field2& field);

enum class Start2 {
    least_squares, // boundary-penalized harmonic initialization, then smoothing
    axis_aligned   // start all frames at theta = 0 and go straight to smoothing
};

struct Optimize2Options {
    int iterations = 3;       // relinearized smoothing passes after initialization
    double lambda = 100.0;    // penalty weight for constraint rows
    bool single_boundary_eq = false; // use the (degenerate) one-equation lock
    Start2 start = Start2::least_squares;
    double tol = 1e-10;       // linear solver tolerance
    int max_cg = -1;          // CG iteration cap, -1 for the solver default
    std::vector<std::pair<int, double>> interior_locks; // extra (vertex, angle) locks
};

struct Optimize2Result {
    Field2 field;
    FieldReport report;
};

// Core pipeline on an arbitrary edge graph with explicit angle locks; used
// both by optimize2 and by chain-interpolation toys.
Optimize2Result optimize2_graph(int n_vertices, const std::vector<std::array<int, 2>>& edges,
                                const std::vector<std::pair<int, double>>& locks,
                                const Optimize2Options& opt);

// Full pipeline on a triangulation: boundary vertices lock to their stored
// boundary angles; the report adds the singular triangle count.
Optimize2Result optimize2(const TriMesh2& mesh, const Optimize2Options& opt = {});

// Brute-force objective landscape of the 4-vertex chain toy problem: the two
// end frames are locked and the two free angles sweep [0, pi/2)^2.
struct LandscapeResult {
    int n = 0;                     // grid resolution per axis
    double step = 0.0;             // angle increment between samples
    std::vector<double> curvature; // row-major [i1 * n + i2]
    std::vector<double> energy;
    std::vector<std::array<int, 2>> curvature_minima; // strict 8-neighbor minima
    std::vector<std::array<int, 2>> energy_minima;    // (grid is treated as a torus)
};

LandscapeResult landscape(double theta_left, double theta_right, int grid_n = 64);
void write_landscape_csv(const LandscapeResult& grid, std::ostream& out);

} // namespace framefield
