#pragma once

// 3D octahedral frame fields on tet meshes. A frame (a rotated copy of the
// axis-aligned cube cross) is encoded by the 9 coefficients of its polynomial
// indicator in the degree-4 spherical-harmonic basis. Smoothing is linear
// least squares on the coefficient vectors; boundary rows confine boundary
// frames to the affine space of normal-aligned frames; a gradient-ascent
// projection snaps raw solutions back to the feasible rotation manifold, and
// relinearized passes add tangent-space rows at the current frames.

#include <array>
#include <utility>
#include <vector>

#include "framefield/lsq.hpp"
#include "framefield/mesh.hpp"
#include "framefield/report.hpp"
#include "framefield/sh.hpp"

namespace framefield {

struct Frame3 {
    Mat3 r; // frame = r applied to the reference axis cross
};

struct Field3 {
    std::vector<RepVector9> a;            // per-vertex coefficient vectors
    std::vector<Mat3> frame;              // per-vertex rotations after projection
    std::vector<std::array<double, 2>> c; // free boundary coefficients, first n_l vertices
};

// One boundary vertex constraint, precomputed from its estimated normal(s).
// Smooth vertices admit the affine space sqrt(7/12)*h4 + span(h0, h8); crease
// vertices are locked to a single coefficient vector.
struct BoundaryConstraint {
    int vertex = -1;
    bool crease = false;
    RepVector9 h0{}, h4{}, h8{};
    RepVector9 a_lock{};
};

std::vector<BoundaryConstraint>
build_boundary_constraints(const std::vector<VertexNormal>& normals);

// Appends 9 rows per edge realizing the smoothing energy sum |a_j - a_i|^2.
void add_smoothing_terms(const TetMesh& mesh, LsqSystem& sys);

// Appends 9 penalty rows per boundary vertex (requires boundary-first order).
void add_normal_constraints(const TetMesh& mesh,
                            const std::vector<BoundaryConstraint>& constraints, LsqSystem& sys,
                            double lambda);

// Appends 9 penalty rows per vertex tying the next solution to the tangent
// space of the feasible manifold at the previous coefficients.
void add_local_optim_constraints(const std::vector<RepVector9>& prev_a, const TetMesh& mesh,
                                 LsqSystem& sys, double lambda);

struct ClosestFrameStats {
    int iterations = 0;
    bool converged = false;
    double correlation = 0.0;
};

// Gradient ascent of the correlation between q and rotated copies of the
// reference coefficients: returns the nearest feasible frame and its
// coefficient vector. Throws when |q| <= 1e-9. The ascent starts at `start`;
// a start 45 degrees away from the target in a rotation plane sits on a
// saddle of the correlation, so callers with a better guess should pass it.
std::pair<Frame3, RepVector9> closest_frame(const RepVector9& q,
                                            ClosestFrameStats* stats = nullptr,
                                            int max_steps = 1000,
                                            const Mat3& start = Mat3::identity());

// Locked coefficients for a crease vertex with orthogonal unit normals.
RepVector9 lock_crease_frame(const Vec3& n1, const Vec3& n2);

// Matching between two frames: the octahedral symmetry index minimizing the
// residual rotation angle, and that angle (ties pick the smallest index).
std::pair<int, double> rotation_between_frames3(const Mat3& r_i, const Mat3& r_j);

// Smoothing energy sum over edges of |a_j - a_i|^2.
double energy3(const TetMesh& mesh, const std::vector<RepVector9>& a);

// Sum over edges of the squared matched rotation angle between frames.
double field_curvature3(const TetMesh& mesh, const std::vector<Mat3>& frames);

struct SingularTriangle {
    std::array<int, 3> vertices;
    int mismatch = 0; // octahedral index of the composed matching around it
};

struct SingularityGraph {
    std::vector<int> singular_tets;
    std::vector<SingularTriangle> singular_triangles;
};

// A triangle is singular when the composition of the three edge matchings
// around it is not the identity (exact arithmetic in the 24-element group);
// a tet is singular when any of its four triangles is.
SingularityGraph singular_tets(const Field3& field, const TetMesh& mesh);

struct Optimize3Options {
    int iterations = 3;    // relinearized smoothing passes after initialization
    double lambda = 100.0; // penalty weight for constraint rows
    double tol = 1e-10;    // linear solver tolerance
    int max_cg = -1;       // CG iteration cap, -1 for the solver default
    int projection_max_steps = 1000;
};

struct Optimize3Result {
    Field3 field;
    FieldReport report;
    SingularityGraph singularities;
};

// Full pipeline; the mesh must be reordered boundary-first and the normals
// must come from estimate_vertex_normals on that mesh.
Optimize3Result optimize3(const TetMesh& mesh, const std::vector<VertexNormal>& normals,
                          const Optimize3Options& opt = {});

} // namespace framefield
