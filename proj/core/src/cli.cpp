#include "framefield/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "framefield/field2d.hpp"
#include "framefield/field3d.hpp"
#include "framefield/io.hpp"
#include "framefield/mesh.hpp"
#include "framefield/selftest.hpp"

namespace framefield {

namespace {

constexpr double kPi = 3.14159265358979323846;

int failure_code(const std::exception& e) {
    return std::string(e.what()).rfind("cannot open", 0) == 0 ? 2 : 1;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void print_summary(const FieldReport& report) {
    std::printf("energy          %.6g\n", report.energy);
    std::printf("curvature       %.6g\n", report.curvature);
    std::printf("deviation       avg %.3g, max %.3g\n", report.deviation_avg,
                report.deviation_max);
    std::printf("singular        %d\n", report.singular_count);
    for (std::size_t s = 0; s < report.solves.size(); s++)
        std::printf("solve %-9zu %d CG iterations, residual %.3g%s\n", s,
                    report.solves[s].iterations, report.solves[s].residual,
                    report.solves[s].converged ? "" : " (NOT converged)");
    std::printf("wall time       %.3f s\n", report.wall_seconds);
}

} // namespace

int cmd_design3d(const RunConfig& config) {
    try {
        TetMesh loaded = load_tet_mesh(config.input);
        ReorderResult rr = reorder_boundary_first(loaded, config.hilbert);
        auto normals = estimate_vertex_normals(rr.mesh, config.crease_deg * kPi / 180.0);
        int n_crease = 0;
        for (const auto& vn : normals) n_crease += vn.is_crease ? 1 : 0;
        std::printf("mesh: %d vertices, %zu tets, %d boundary (%d crease)\n", rr.mesh.n_v,
                    rr.mesh.tets.size(), rr.mesh.n_l, n_crease);

        Optimize3Options opt;
        opt.iterations = config.iterations;
        opt.lambda = config.lambda;
        opt.tol = config.tol;
        opt.max_cg = config.max_cg;
        Optimize3Result res = optimize3(rr.mesh, normals, opt);

        {
            auto out = open_output(config.prefix + ".field");
            write_field3(res.field, rr.perm, out);
        }
        {
            auto out = open_output(config.prefix + ".sing");
            write_sing3(res.singularities, out);
        }
        {
            ReportContext ctx;
            ctx.command = "design3d";
            ctx.input = config.input;
            ctx.n_vertices = rr.mesh.n_v;
            ctx.n_cells = static_cast<int>(rr.mesh.tets.size());
            ctx.n_boundary = rr.mesh.n_l;
            ctx.n_crease = n_crease;
            ctx.iterations = config.iterations;
            ctx.lambda = config.lambda;
            ctx.tol = config.tol;
            auto out = open_output(config.prefix + ".report.json");
            write_report_json(ctx, res.report, out);
        }
        if (config.viz) {
            auto out = open_output(config.prefix + ".viz.vtk");
            write_viz3(rr.mesh, res.field, out);
        }
        print_summary(res.report);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "design3d: " << e.what() << "\n";
        return failure_code(e);
    }
}

int cmd_design2d(const RunConfig& config) {
    try {
        TriMesh2 mesh = load_tri_mesh2(config.input);
        int n_boundary = 0;
        for (char f : mesh.boundary_flags) n_boundary += f ? 1 : 0;
        std::printf("mesh: %zu vertices, %zu triangles, %d boundary\n", mesh.vertices.size(),
                    mesh.triangles.size(), n_boundary);

        Optimize2Options opt;
        opt.iterations = config.iterations;
        opt.lambda = config.lambda;
        opt.tol = config.tol;
        opt.max_cg = config.max_cg;
        opt.single_boundary_eq = config.single_boundary_eq;
        Optimize2Result res = optimize2(mesh, opt);

        {
            auto out = open_output(config.prefix + ".field");
            write_field2(res.field, out);
        }
        {
            auto out = open_output(config.prefix + ".sing");
            write_sing2(singular_triangles2(mesh, res.field), out);
        }
        {
            ReportContext ctx;
            ctx.command = "design2d";
            ctx.input = config.input;
            ctx.n_vertices = static_cast<int>(mesh.vertices.size());
            ctx.n_cells = static_cast<int>(mesh.triangles.size());
            ctx.n_boundary = n_boundary;
            ctx.iterations = config.iterations;
            ctx.lambda = config.lambda;
            ctx.tol = config.tol;
            auto out = open_output(config.prefix + ".report.json");
            write_report_json(ctx, res.report, out);
        }
        if (config.viz) {
            auto out = open_output(config.prefix + ".viz.vtk");
            write_viz2(mesh, res.field, out);
        }
        print_summary(res.report);
        if (res.report.misalignment_max > 0.05)
            std::printf("WARNING: boundary frames misaligned by up to %.3g rad; "
                        "use the two-equation boundary lock\n",
                        res.report.misalignment_max);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "design2d: " << e.what() << "\n";
        return failure_code(e);
    }
}

int cmd_selftest() {
    auto checks = run_selftest();
    bool all_pass = true;
    for (const auto& c : checks) {
        std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_landscape(const LandscapeConfig& config) {
    try {
        LandscapeResult grid = landscape(config.theta_left, config.theta_right, config.grid_n);
        auto out = open_output(config.output);
        write_landscape_csv(grid, out);
        auto describe = [&](const char* name, const std::vector<std::array<int, 2>>& minima,
                            const std::vector<double>& values) {
            std::printf("%s minima:", name);
            for (const auto& [i1, i2] : minima)
                std::printf(" cell(%d,%d) theta=(%.6g,%.6g) value=%.6g", i1, i2, i1 * grid.step,
                            i2 * grid.step, values[static_cast<std::size_t>(i1) * grid.n + i2]);
            std::printf("\n");
        };
        describe("curvature", grid.curvature_minima, grid.curvature);
        describe("energy", grid.energy_minima, grid.energy);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "landscape: " << e.what() << "\n";
        return failure_code(e);
    }
}

} // namespace framefield
