#pragma once

// Writers for the pipeline's output files: per-vertex field files, singular
// simplex lists, the JSON run report, and legacy-ASCII VTK visualization.
// All numeric output is printed with round-trip precision so identical runs
// produce byte-identical files.

#include <iosfwd>
#include <string>
#include <vector>

#include "framefield/field2d.hpp"
#include "framefield/field3d.hpp"
#include "framefield/mesh.hpp"
#include "framefield/report.hpp"

namespace framefield {

// One line per vertex: `v a0 a1 theta`.
void write_field2(const Field2& field, std::ostream& out);

// One line per vertex: `v a0..a8 r00..r22`, in ORIGINAL vertex numbering.
// old_to_new maps an original vertex id to its id in the (reordered) field;
// pass an empty vector when no reordering happened.
void write_field3(const Field3& field, const std::vector<int>& old_to_new, std::ostream& out);

// One line `t index` per singular triangle.
void write_sing2(const std::vector<std::pair<int, int>>& singular, std::ostream& out);

// One singular tet index per line.
void write_sing3(const SingularityGraph& graph, std::ostream& out);

struct ReportContext {
    std::string command;
    std::string input;
    int n_vertices = 0;
    int n_cells = 0; // triangles or tets
    int n_boundary = 0;
    int n_crease = 0;
    int iterations = 0;
    double lambda = 0.0;
    double tol = 0.0;
};

// Versioned JSON report; wall-clock time is deliberately not serialized.
void write_report_json(const ReportContext& ctx, const FieldReport& report, std::ostream& out);

// Legacy-ASCII VTK polydata: short line segments through each vertex along
// its frame directions.
void write_viz2(const TriMesh2& mesh, const Field2& field, std::ostream& out);
void write_viz3(const TetMesh& mesh, const Field3& field, std::ostream& out);

} // namespace framefield
