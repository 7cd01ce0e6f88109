#include "framefield/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace framefield {

namespace {

void print_doubles(std::ostream& out, const double* values, int count, bool lead_space) {
    char buf[32];
    for (int i = 0; i < count; i++) {
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        if (i > 0 || lead_space) out << ' ';
        out << buf;
    }
}

double mean_edge_length2(const TriMesh2& mesh) {
    double sum = 0.0;
    for (const auto& [i, j] : mesh.edges)
        sum += std::hypot(mesh.vertices[j][0] - mesh.vertices[i][0],
                          mesh.vertices[j][1] - mesh.vertices[i][1]);
    return sum / static_cast<double>(mesh.edges.size());
}

double mean_edge_length3(const TetMesh& mesh) {
    double sum = 0.0;
    for (const auto& [i, j] : mesh.edges) sum += norm(mesh.vertices[j] - mesh.vertices[i]);
    return sum / static_cast<double>(mesh.edges.size());
}

} // namespace

void write_field2(const Field2& field, std::ostream& out) {
    for (std::size_t v = 0; v < field.rep.size(); v++) {
        out << v;
        double row[3] = {field.rep[v][0], field.rep[v][1], field.theta[v]};
        print_doubles(out, row, 3, true);
        out << '\n';
    }
}

void write_field3(const Field3& field, const std::vector<int>& old_to_new, std::ostream& out) {
    const std::size_t n = field.a.size();
    if (!old_to_new.empty() && old_to_new.size() != n)
        throw std::invalid_argument("write_field3: permutation size mismatch");
    for (std::size_t v = 0; v < n; v++) {
        std::size_t w = old_to_new.empty() ? v : static_cast<std::size_t>(old_to_new[v]);
        out << v;
        print_doubles(out, field.a[w].data(), 9, true);
        double r[9];
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++) r[3 * i + j] = field.frame[w](i, j);
        print_doubles(out, r, 9, true);
        out << '\n';
    }
}

void write_sing2(const std::vector<std::pair<int, int>>& singular, std::ostream& out) {
    for (const auto& [tri, index] : singular) out << tri << ' ' << index << '\n';
}

void write_sing3(const SingularityGraph& graph, std::ostream& out) {
    for (int t : graph.singular_tets) out << t << '\n';
}

void write_report_json(const ReportContext& ctx, const FieldReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["command"] = ctx.command;
    j["input"] = ctx.input;
    j["mesh"] = {{"vertices", ctx.n_vertices},
                 {"cells", ctx.n_cells},
                 {"boundary_vertices", ctx.n_boundary},
                 {"crease_vertices", ctx.n_crease}};
    j["config"] = {{"iterations", ctx.iterations}, {"lambda", ctx.lambda}, {"tol", ctx.tol}};
    nlohmann::ordered_json solves = nlohmann::ordered_json::array();
    for (const auto& s : report.solves)
        solves.push_back({{"iterations", s.iterations},
                          {"residual", s.residual},
                          {"converged", s.converged}});
    j["results"] = {{"energy", report.energy},
                    {"curvature", report.curvature},
                    {"energy_trace", report.energy_trace},
                    {"deviation_avg", report.deviation_avg},
                    {"deviation_max", report.deviation_max},
                    {"misalignment_max", report.misalignment_max},
                    {"boundary_misaligned", report.misalignment_max > 0.05},
                    {"singular_count", report.singular_count},
                    {"c_norm_avg", report.c_norm_avg},
                    {"c_norm_max", report.c_norm_max},
                    {"solves", solves}};
    out << j.dump(2) << '\n';
}

void write_viz2(const TriMesh2& mesh, const Field2& field, std::ostream& out) {
    const std::size_t n = mesh.vertices.size();
    const double h = 0.4 * mean_edge_length2(mesh);
    out << "# vtk DataFile Version 2.0\nframe field\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << 4 * n << " double\n";
    char buf[128];
    for (std::size_t v = 0; v < n; v++) {
        double c = std::cos(field.theta[v]), s = std::sin(field.theta[v]);
        const double dirs[2][2] = {{c, s}, {-s, c}};
        for (const auto& d : dirs)
            for (int sign : {-1, 1}) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n",
                              mesh.vertices[v][0] + sign * 0.5 * h * d[0],
                              mesh.vertices[v][1] + sign * 0.5 * h * d[1]);
                out << buf;
            }
    }
    out << "LINES " << 2 * n << ' ' << 6 * n << '\n';
    for (std::size_t v = 0; v < n; v++) {
        out << "2 " << 4 * v << ' ' << 4 * v + 1 << '\n';
        out << "2 " << 4 * v + 2 << ' ' << 4 * v + 3 << '\n';
    }
}

void write_viz3(const TetMesh& mesh, const Field3& field, std::ostream& out) {
    const std::size_t n = mesh.vertices.size();
    const double h = 0.4 * mean_edge_length3(mesh);
    out << "# vtk DataFile Version 2.0\nframe field\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << 6 * n << " double\n";
    char buf[160];
    for (std::size_t v = 0; v < n; v++)
        for (int col = 0; col < 3; col++)
            for (int sign : {-1, 1}) {
                Vec3 d{field.frame[v](0, col), field.frame[v](1, col), field.frame[v](2, col)};
                Vec3 p = mesh.vertices[v] + (sign * 0.5 * h) * d;
                std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p[0], p[1], p[2]);
                out << buf;
            }
    out << "LINES " << 3 * n << ' ' << 9 * n << '\n';
    for (std::size_t v = 0; v < n; v++)
        for (int col = 0; col < 3; col++)
            out << "2 " << 6 * v + 2 * col << ' ' << 6 * v + 2 * col + 1 << '\n';
}

} // namespace framefield
