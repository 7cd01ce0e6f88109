// Triangle and tetrahedral mesh containers, MEDIT-style loaders, boundary
// classification, and the boundary-first vertex ordering the solvers expect.
#pragma once

#include "framefield/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace framefield {

struct TriMesh2 {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;     // CCW
    std::vector<std::array<int, 2>> edges;         // unique, first < second
    std::vector<char> boundary_flags;              // per vertex
    std::vector<double> boundary_angles;           // outward-normal direction, [0, pi/2); NaN inside
};

// Build from raw arrays: validates indices, orients triangles CCW, extracts
// the edge set, boundary flags and boundary angles.
TriMesh2 build_tri_mesh2(std::vector<std::array<double, 2>> vertices,
                         std::vector<std::array<int, 3>> triangles);

// ASCII MEDIT-style reader (Dimension 2).
TriMesh2 load_tri_mesh2(const std::string& path);

enum class VertexClass { interior, smooth_boundary, crease };

struct VertexNormal {
    int vertex = -1;
    Vec3 n{};           // unit outward normal (smooth boundary vertices)
    bool is_crease = false;
    Vec3 n1{}, n2{};    // orthogonalized pair (crease vertices)
};

struct TetMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;               // positively oriented
    std::vector<std::array<int, 2>> edges;               // unique, first < second
    std::vector<std::array<int, 3>> boundary_triangles;  // outward oriented
    std::vector<VertexClass> vertex_class;
    int n_v = 0;
    int n_l = 0; // number of boundary (normal-constrained) vertices
};

TetMesh build_tet_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets);

// ASCII MEDIT-style reader (Dimension 3).
TetMesh load_tet_mesh(const std::string& path);

struct ReorderResult {
    TetMesh mesh;
    std::vector<int> perm;     // old vertex index -> new vertex index
    std::vector<int> inv_perm; // new vertex index -> old vertex index
};

// Permute vertices so the boundary block comes first: vertex i is
// constrained iff i < n_l. Optionally Hilbert-sort within each block.
ReorderResult reorder_boundary_first(const TetMesh& m, bool hilbert_sort = false);

// Area-weighted normals at boundary vertices; vertices whose incident
// boundary-triangle normals span more than crease_threshold_rad become
// creases with two orthogonalized representative normals. Updates
// m.vertex_class in place. Returned list covers boundary vertices in
// increasing vertex order.
std::vector<VertexNormal> estimate_vertex_normals(TetMesh& m, double crease_threshold_rad);

} // namespace framefield
