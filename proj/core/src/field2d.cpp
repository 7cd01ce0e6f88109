#include "framefield/field2d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace framefield {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dist_sq(const RepVector2& a, const RepVector2& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

} // namespace

RepVector2 angle_to_coeffs(double theta) {
    return {std::cos(4.0 * theta), std::sin(4.0 * theta)};
}

double coeffs_to_angle(const RepVector2& a) {
    double n = std::hypot(a[0], a[1]);
    if (n <= 1e-9) throw std::runtime_error("coeffs_to_angle: near-zero representation vector");
    double theta = std::atan2(a[1], a[0]) / 4.0;
    theta = std::fmod(theta, kPi / 2.0);
    if (theta < 0.0) theta += kPi / 2.0;
    if (theta >= kPi / 2.0) theta = 0.0; // tiny negatives round up to pi/2
    return theta;
}

RepVector2 project2(const RepVector2& a) {
    double n = std::hypot(a[0], a[1]);
    if (n <= 1e-9) throw std::runtime_error("project2: near-zero representation vector");
    return {a[0] / n, a[1] / n};
}

double rotation_between_frames2(double theta_i, double theta_j) {
    double d = std::remainder(theta_j - theta_i, kPi / 2.0);
    if (d <= -kPi / 4.0) d += kPi / 2.0;
    return d;
}

double energy2(const TriMesh2& mesh, const Field2& field) {
    double e = 0.0;
    for (const auto& [i, j] : mesh.edges) e += dist_sq(field.rep[j], field.rep[i]);
    return kPi * e;
}

double field_curvature2(const TriMesh2& mesh, const Field2& field) {
    double c = 0.0;
    for (const auto& [i, j] : mesh.edges) {
        double d = rotation_between_frames2(field.theta[i], field.theta[j]);
        c += d * d;
    }
    return c;
}

int triangle_singularity(const Field2& field, const std::array<int, 3>& tri) {
    double s = rotation_between_frames2(field.theta[tri[0]], field.theta[tri[1]]) +
               rotation_between_frames2(field.theta[tri[1]], field.theta[tri[2]]) +
               rotation_between_frames2(field.theta[tri[2]], field.theta[tri[0]]);
    return static_cast<int>(std::lround(s / (kPi / 2.0)));
}

std::vector<std::pair<int, int>> singular_triangles2(const TriMesh2& mesh, const Field2& field) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t t = 0; t < mesh.triangles.size(); t++) {
        int idx = triangle_singularity(field, mesh.triangles[t]);
        if (idx != 0) out.push_back({static_cast<int>(t), idx});
    }
    return out;
}

Optimize2Result optimize2_graph(int n_vertices, const std::vector<std::array<int, 2>>& edges,
                                const std::vector<std::pair<int, double>>& locks,
                                const Optimize2Options& opt) {
    if (n_vertices <= 0) throw std::invalid_argument("optimize2: no vertices");
    if (opt.iterations < 0) throw std::invalid_argument("optimize2: negative iteration count");
    if (opt.lambda <= 0.0) throw std::invalid_argument("optimize2: lambda must be positive");
    if (locks.empty())
        throw std::runtime_error("unconstrained field: no boundary or interior locks");
    for (const auto& [v, theta] : locks) {
        (void)theta;
        if (v < 0 || v >= n_vertices) throw std::out_of_range("optimize2: lock vertex out of range");
    }

    auto t_start = std::chrono::steady_clock::now();
    const double lam = opt.lambda;
    const double sqrt_pi = std::sqrt(kPi);

    std::vector<std::vector<int>> adjacency(n_vertices);
    for (const auto& [i, j] : edges) {
        adjacency[i].push_back(j);
        adjacency[j].push_back(i);
    }

    Optimize2Result res;
    Field2& field = res.field;
    field.rep.assign(n_vertices, {0.0, 0.0});
    field.theta.assign(n_vertices, 0.0);
    FieldReport& report = res.report;

    auto add_base_rows = [&](LsqSystem& sys) {
        for (const auto& [i, j] : edges)
            for (int d = 0; d < 2; d++)
                sys.add_row({{2 * i + d, sqrt_pi}, {2 * j + d, -sqrt_pi}}, 0.0);
        for (const auto& [v, theta] : locks) {
            RepVector2 t = angle_to_coeffs(theta);
            if (opt.single_boundary_eq) {
                sys.add_row({{2 * v, lam * t[0]}, {2 * v + 1, lam * t[1]}}, lam);
            } else {
                sys.add_row({{2 * v, lam}}, lam * t[0]);
                sys.add_row({{2 * v + 1, lam}}, lam * t[1]);
            }
        }
    };

    auto project_all = [&](const std::vector<double>& x) {
        std::vector<char> ok(n_vertices, 0);
        int n_failed = 0;
        for (int v = 0; v < n_vertices; v++) {
            RepVector2 raw{x[2 * v], x[2 * v + 1]};
            if (std::hypot(raw[0], raw[1]) > 1e-9) {
                field.rep[v] = project2(raw);
                field.theta[v] = coeffs_to_angle(field.rep[v]);
                ok[v] = 1;
            } else {
                n_failed++;
            }
        }
        if (n_failed == n_vertices)
            throw std::runtime_error("unconstrained field: projection failed at every vertex");
        // Pathologically symmetric inputs can cancel a vertex to zero; such a
        // vertex inherits the first projected neighbor (repeat until settled).
        while (n_failed > 0) {
            int fixed = 0;
            for (int v = 0; v < n_vertices; v++) {
                if (ok[v]) continue;
                for (int u : adjacency[v]) {
                    if (!ok[u]) continue;
                    field.rep[v] = field.rep[u];
                    field.theta[v] = field.theta[u];
                    ok[v] = 1;
                    fixed++;
                    break;
                }
            }
            if (fixed == 0)
                throw std::runtime_error(
                    "unconstrained field: projection failed on an isolated component");
            n_failed -= fixed;
        }
    };

    auto current_energy = [&]() {
        double e = 0.0;
        for (const auto& [i, j] : edges) e += dist_sq(field.rep[j], field.rep[i]);
        return kPi * e;
    };

    int first_pass = 0;
    if (opt.start == Start2::axis_aligned) {
        for (int v = 0; v < n_vertices; v++) {
            field.rep[v] = {1.0, 0.0};
            field.theta[v] = 0.0;
        }
        first_pass = 1; // no initialization solve; straight to smoothing passes
    }

    for (int pass = first_pass; pass <= opt.iterations; pass++) {
        LsqSystem sys(2 * n_vertices);
        add_base_rows(sys);
        if (pass > 0) {
            // Tangent line of the unit circle at the current frame: keeps the
            // next solution within a bounded rotation of this one.
            for (int v = 0; v < n_vertices; v++)
                sys.add_row({{2 * v, lam * field.rep[v][0]}, {2 * v + 1, lam * field.rep[v][1]}},
                            lam);
        }
        auto [x, stats] = sys.solve(opt.tol, opt.max_cg);
        report.solves.push_back(stats);
        project_all(x);
        report.energy_trace.push_back(current_energy());
    }

    report.energy = report.energy_trace.back();
    double curv = 0.0;
    for (const auto& [i, j] : edges) {
        double d = rotation_between_frames2(field.theta[i], field.theta[j]);
        curv += d * d;
    }
    report.curvature = curv;

    double dev_sum = 0.0;
    for (const auto& [v, theta] : locks) {
        RepVector2 t = angle_to_coeffs(theta);
        double dev = std::sqrt(dist_sq(field.rep[v], t));
        dev_sum += dev;
        report.deviation_max = std::max(report.deviation_max, dev);
        double mis = std::abs(rotation_between_frames2(theta, field.theta[v]));
        report.misalignment_max = std::max(report.misalignment_max, mis);
    }
    report.deviation_avg = dev_sum / static_cast<double>(locks.size());
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

Optimize2Result optimize2(const TriMesh2& mesh, const Optimize2Options& opt) {
    std::vector<std::pair<int, double>> locks;
    for (std::size_t v = 0; v < mesh.vertices.size(); v++)
        if (mesh.boundary_flags[v]) locks.push_back({static_cast<int>(v), mesh.boundary_angles[v]});
    locks.insert(locks.end(), opt.interior_locks.begin(), opt.interior_locks.end());

    Optimize2Result res =
        optimize2_graph(static_cast<int>(mesh.vertices.size()), mesh.edges, locks, opt);
    res.report.singular_count = static_cast<int>(singular_triangles2(mesh, res.field).size());
    return res;
}

LandscapeResult landscape(double theta_left, double theta_right, int grid_n) {
    if (grid_n < 8) throw std::invalid_argument("landscape: grid_n must be at least 8");
    LandscapeResult res;
    res.n = grid_n;
    res.step = (kPi / 2.0) / grid_n;
    res.curvature.assign(static_cast<std::size_t>(grid_n) * grid_n, 0.0);
    res.energy.assign(static_cast<std::size_t>(grid_n) * grid_n, 0.0);

    // Every per-edge term depends only on an angle difference that lives on
    // the sampling lattice, so each edge gets a lookup table over the grid
    // offsets. Besides avoiding trigonometry per cell, this keeps the sampled
    // surfaces exactly symmetric under the path reflection
    // (t1, t2) -> (theta_left + t2 - t1, t2) whenever theta_left lies on the
    // lattice: reflected cells add the same table entries in swapped order
    // and therefore tie bitwise instead of by luck of rounding.
    RepVector2 a_left = angle_to_coeffs(theta_left);
    RepVector2 a_right = angle_to_coeffs(theta_right);
    RepVector2 a_zero = angle_to_coeffs(0.0);
    std::vector<double> chord_left(grid_n), chord_mid(grid_n), chord_right(grid_n);
    std::vector<double> rot_left(grid_n), rot_mid(grid_n), rot_right(grid_n);
    for (int d = 0; d < grid_n; d++) {
        double t = d * res.step;
        RepVector2 at = angle_to_coeffs(t);
        chord_left[d] = dist_sq(at, a_left);
        chord_mid[d] = dist_sq(at, a_zero);
        chord_right[d] = dist_sq(a_right, at);
        rot_left[d] = rotation_between_frames2(theta_left, t);
        rot_mid[d] = rotation_between_frames2(0.0, t);
        rot_right[d] = rotation_between_frames2(t, theta_right);
    }
    for (int i1 = 0; i1 < grid_n; i1++)
        for (int i2 = 0; i2 < grid_n; i2++) {
            int dm = i2 - i1;
            if (dm < 0) dm += grid_n;
            std::size_t cell = static_cast<std::size_t>(i1) * grid_n + i2;
            res.curvature[cell] =
                rot_left[i1] * rot_left[i1] + rot_mid[dm] * rot_mid[dm] + rot_right[i2] * rot_right[i2];
            res.energy[cell] = kPi * (chord_left[i1] + chord_mid[dm] + chord_right[i2]);
        }

    // Strict local minima against the 8-neighborhood; both angles are pi/2
    // periodic, so the grid wraps like a torus. A basin whose sampled minimum
    // falls on a reflection-tied pair of cells is deliberately not reported:
    // only cells strictly below their whole neighborhood count.
    auto collect_minima = [&](const std::vector<double>& grid,
                              std::vector<std::array<int, 2>>& out) {
        for (int i1 = 0; i1 < grid_n; i1++)
            for (int i2 = 0; i2 < grid_n; i2++) {
                double v = grid[static_cast<std::size_t>(i1) * grid_n + i2];
                bool strict_min = true;
                for (int di = -1; di <= 1 && strict_min; di++)
                    for (int dj = -1; dj <= 1; dj++) {
                        if (di == 0 && dj == 0) continue;
                        int ni = (i1 + di + grid_n) % grid_n;
                        int nj = (i2 + dj + grid_n) % grid_n;
                        if (grid[static_cast<std::size_t>(ni) * grid_n + nj] <= v) {
                            strict_min = false;
                            break;
                        }
                    }
                if (strict_min) out.push_back({i1, i2});
            }
    };
    collect_minima(res.curvature, res.curvature_minima);
    collect_minima(res.energy, res.energy_minima);
    return res;
}

void write_landscape_csv(const LandscapeResult& grid, std::ostream& out) {
    out << "theta1,theta2,curvature,energy\n";
    char buf[160];
    for (int i1 = 0; i1 < grid.n; i1++)
        for (int i2 = 0; i2 < grid.n; i2++) {
            std::size_t cell = static_cast<std::size_t>(i1) * grid.n + i2;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", i1 * grid.step,
                          i2 * grid.step, grid.curvature[cell], grid.energy[cell]);
            out << buf;
        }
}

} // namespace framefield
