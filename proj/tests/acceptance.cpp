// Acceptance suite: the release criteria, measured end to end on the bundled
// meshes, one verdict line per criterion. Exits nonzero if any criterion
// fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "framefield/cli.hpp"
#include "framefield/field2d.hpp"
#include "framefield/field3d.hpp"
#include "framefield/mesh.hpp"
#include "framefield/sh.hpp"

using namespace framefield;

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::string kMeshDir = FRAMEFIELD_MESH_DIR;

int failures = 0;

void verdict(int criterion, bool pass, const char* fmt, ...) {
    char detail[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(detail, sizeof detail, fmt, args);
    va_end(args);
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail);
    if (!pass) failures++;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion 1: rotation orthogonality, norm preservation, symmetry ----

void criterion_rotations() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    const Vec9& ref = reference_coeffs();
    double worst = 0.0;
    for (int trial = 0; trial < 1000; trial++) {
        Mat9 rb = rot_9_from_euler(angle(rng), angle(rng), angle(rng));
        worst = std::max(worst, max_abs_diff_identity(mul(transposed(rb), rb)));
        worst = std::max(worst, std::abs(norm(mul(rb, ref)) - 1.0));
    }
    double worst_sym = 0.0;
    for (const Mat3& s : octahedral_group())
        worst_sym = std::max(worst_sym, norm(mul(rot9_from_rot3(s), ref) - ref));
    double dt = seconds_since(t0);
    verdict(1, worst < 1e-10 && worst_sym < 1e-10 && dt < 5.0,
            "coefficient rotations: worst orthogonality/norm error %.2e, worst symmetry "
            "deviation %.2e, %.2f s",
            worst, worst_sym, dt);
}

// ---- criterion 2: generators are first-order rotations ----

void criterion_generators() {
    const Generators& gen = generators();
    const Mat9* gens[3] = {&gen.x, &gen.y, &gen.z};
    Mat9 (*rots[3])(double) = {rot_x_9, rot_y_9, rot_z_9};
    double worst_h = 0.0, worst_ratio_err = 0.0;
    bool pass = true;
    for (int k = 0; k < 3; k++) {
        double err[2];
        for (int half = 0; half < 2; half++) {
            double h = half ? 5e-6 : 1e-5;
            Mat9 r = rots[k](h);
            double worst = 0.0;
            for (int i = 0; i < 9; i++)
                for (int j = 0; j < 9; j++) {
                    double d = (r(i, j) - (i == j ? 1.0 : 0.0)) / h - (*gens[k])(i, j);
                    worst = std::max(worst, std::abs(d));
                }
            err[half] = worst;
        }
        double ratio = err[1] / err[0];
        pass = pass && err[0] < 1e-4 && ratio > 0.4 && ratio < 0.6;
        worst_h = std::max(worst_h, err[0]);
        worst_ratio_err = std::max(worst_ratio_err, std::abs(ratio - 0.5));
    }
    verdict(2, pass, "generator finite differences: worst error %.2e at h=1e-5, halving ratio "
                     "within %.3f of 1/2",
            worst_h, worst_ratio_err);
}

// ---- criterion 3: coefficient rotation matches function rotation ----

void criterion_sampling() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    double worst = 0.0;
    for (int trial = 0; trial < 100; trial++) {
        Mat3 r = rot3_from_euler(angle(rng), angle(rng), angle(rng));
        Vec9 a = mul(rot9_from_rot3(rot3_from_euler(angle(rng), angle(rng), angle(rng))),
                     reference_coeffs());
        worst = std::max(worst, rot9_matches_sampling(r, a));
    }
    verdict(3, worst < 1e-9, "sampling oracle: worst pointwise mismatch %.2e over 100 rotated "
                             "coefficient vectors",
            worst);
}

// ---- criterion 4: projection round trip ----

void criterion_projection() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    double worst_corr = 1.0;
    long total_iters = 0;
    int max_iters = 0;
    bool all_converged = true;
    for (int trial = 0; trial < 1000; trial++) {
        Mat3 r = rot3_from_euler(angle(rng), angle(rng), angle(rng));
        Vec9 q = mul(rot9_from_rot3(r), reference_coeffs());
        ClosestFrameStats st;
        auto [frame, a] = closest_frame(q, &st);
        worst_corr = std::min(worst_corr, dot(q, a));
        total_iters += st.iterations;
        max_iters = std::max(max_iters, st.iterations);
        all_converged = all_converged && st.converged;
    }
    verdict(4, worst_corr > 1.0 - 1e-6 && all_converged && max_iters < 1000,
            "closest-frame round trip: worst correlation 1-%.1e, mean %.1f iterations, max %d",
            1.0 - worst_corr, total_iters / 1000.0, max_iters);
}

// ---- criterion 5: the two-objective landscape of the chain toy ----

void criterion_landscape() {
    auto t0 = std::chrono::steady_clock::now();
    LandscapeResult grid = landscape(0.0, 55.0 * kPi / 256.0, 64);
    double dt = seconds_since(t0);

    bool two_each = grid.energy_minima.size() == 2 && grid.curvature_minima.size() == 2;
    bool colocated = false;
    if (two_each) {
        auto a = grid.energy_minima, b = grid.curvature_minima;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        colocated = a == b;
    }
    bool ordered = false;
    if (colocated) {
        auto value = [&](const std::vector<double>& vals, const std::array<int, 2>& cell) {
            return vals[static_cast<std::size_t>(cell[0]) * grid.n + cell[1]];
        };
        double e0 = value(grid.energy, grid.energy_minima[0]);
        double e1 = value(grid.energy, grid.energy_minima[1]);
        double c0 = value(grid.curvature, grid.energy_minima[0]);
        double c1 = value(grid.curvature, grid.energy_minima[1]);
        ordered = (e0 < e1) == (c0 < c1) && e0 != e1 && c0 != c1;
    }
    verdict(5, two_each && colocated && ordered && dt < 2.0,
            "chain landscape 64x64: %zu energy / %zu curvature minima, co-located %s, "
            "consistently ordered %s, %.2f s",
            grid.energy_minima.size(), grid.curvature_minima.size(), colocated ? "yes" : "no",
            ordered ? "yes" : "no", dt);
}

// ---- criterion 6: initialization beats a cold start ----

void criterion_ordering() {
    auto t0 = std::chrono::steady_clock::now();
    TriMesh2 mesh = load_tri_mesh2(kMeshDir + "/annulus2d.mesh");

    Optimize2Options smoothed;
    smoothed.iterations = 10;
    double curv_smoothed = optimize2(mesh, smoothed).report.curvature;

    Optimize2Options init_only;
    init_only.iterations = 0;
    double curv_init = optimize2(mesh, init_only).report.curvature;

    Optimize2Options cold;
    cold.iterations = 10;
    cold.start = Start2::axis_aligned;
    double curv_cold = optimize2(mesh, cold).report.curvature;

    double dt = seconds_since(t0);
    verdict(6, curv_smoothed <= curv_init + 1e-9 && curv_init < curv_cold && dt < 30.0,
            "annulus curvature: init+10 smoothing %.4f <= init only %.4f < axis-aligned+10 "
            "%.4f, %.1f s",
            curv_smoothed, curv_init, curv_cold, dt);
}

// ---- criterion 7: one- vs two-equation boundary lock ----

void criterion_boundary_lock() {
    TriMesh2 mesh = load_tri_mesh2(kMeshDir + "/parallelogram2d.mesh");

    // The single-equation failure is an initialization phenomenon (smoothing
    // passes re-pin the boundary), so both variants run without smoothing.
    Optimize2Options one_eq;
    one_eq.iterations = 0;
    one_eq.single_boundary_eq = true;
    double bad = optimize2(mesh, one_eq).report.misalignment_max;

    Optimize2Options two_eq;
    two_eq.iterations = 0;
    double good = optimize2(mesh, two_eq).report.misalignment_max;

    verdict(7, bad > 0.1 && good < 1e-3,
            "parallelogram misalignment: single-equation %.3f rad, two-equation %.1e rad", bad,
            good);
}

// ---- criterion 8: boundary deviation of the raw initialization ----

void criterion_deviation() {
    const char* meshes[] = {"box_small.mesh", "lbracket.mesh", "disk_thin.mesh",
                            "box_perf.mesh"};
    double worst_avg = 0.0, worst_max = 0.0;
    bool pass = true;
    for (const char* name : meshes) {
        TetMesh m = load_tet_mesh(kMeshDir + "/" + name);
        ReorderResult rr = reorder_boundary_first(m, false);
        auto normals = estimate_vertex_normals(rr.mesh, 45.0 * kPi / 180.0);
        Optimize3Options opt;
        opt.iterations = 0;
        auto res = optimize3(rr.mesh, normals, opt);
        worst_avg = std::max(worst_avg, res.report.deviation_avg);
        worst_max = std::max(worst_max, res.report.deviation_max);
        pass = pass && res.report.deviation_avg < 1e-6 && res.report.deviation_max < 1e-5 &&
               res.report.deviation_max <= 2.0 * std::sqrt(7.0 / 12.0) &&
               res.report.deviation_avg >= 0.0;
    }
    verdict(8, pass, "initialization deviation over 4 tet meshes: worst avg %.2e (< 1e-6), "
                     "worst max %.2e (< 1e-5)",
            worst_avg, worst_max);
}

// ---- criterion 9: thin-disk field matches the flat 2D field ----

void criterion_disk() {
    TetMesh m3 = load_tet_mesh(kMeshDir + "/disk_thin.mesh");
    TriMesh2 m2 = load_tri_mesh2(kMeshDir + "/disk2d.mesh");
    ReorderResult rr = reorder_boundary_first(m3, false);
    auto normals = estimate_vertex_normals(rr.mesh, 45.0 * kPi / 180.0);
    Optimize3Options o3;
    auto r3 = optimize3(rr.mesh, normals, o3);
    Optimize2Options o2;
    auto r2 = optimize2(m2, o2);

    // The 3D mesh extrudes the 2D mesh: original vertex v < |2D vertices| is
    // the same point in both. Exclude the 2-ring neighborhoods of singular
    // simplices in either mesh, then compare in-plane frame angles.
    const int nfv = static_cast<int>(m2.vertices.size());
    std::vector<char> excl3(rr.mesh.n_v, 0), excl2(nfv, 0);
    auto grow = [](std::vector<char>& excl, const std::vector<std::array<int, 2>>& edges,
                   int hops) {
        for (int h = 0; h < hops; h++) {
            std::vector<char> next = excl;
            for (const auto& e : edges)
                if (excl[e[0]] || excl[e[1]]) next[e[0]] = next[e[1]] = 1;
            excl = std::move(next);
        }
    };
    for (int t : r3.singularities.singular_tets)
        for (int v : rr.mesh.tets[t]) excl3[v] = 1;
    grow(excl3, rr.mesh.edges, 2);
    for (const auto& [t, index] : singular_triangles2(m2, r2.field))
        for (int v : m2.triangles[t]) excl2[v] = 1;
    grow(excl2, m2.edges, 2);

    int considered = 0, agree = 0, excluded = 0;
    for (int v = 0; v < nfv; v++) {
        int v3 = rr.perm[v];
        if (excl3[v3] || excl2[v]) {
            excluded++;
            continue;
        }
        const Mat3& frame = r3.field.frame[v3];
        int zc = 0; // frame column closest to the slab normal
        for (int c = 1; c < 3; c++)
            if (std::abs(frame(2, c)) > std::abs(frame(2, zc))) zc = c;
        int pc = (zc + 1) % 3;
        double theta3 = std::atan2(frame(1, pc), frame(0, pc));
        double diff = std::abs(std::remainder(theta3 - r2.field.theta[v], kPi / 2.0));
        considered++;
        agree += diff <= 1e-2;
    }
    double percent = considered > 0 ? 100.0 * agree / considered : 0.0;
    verdict(9, percent >= 95.0,
            "flat-disk equivalence: %.2f%% of %d matched vertices within 1e-2 rad (%d excluded "
            "near %zu singular tets / %zu singular triangles)",
            percent, considered, excluded, r3.singularities.singular_tets.size(),
            singular_triangles2(m2, r2.field).size());
}

// ---- criterion 10: axis-aligned box sanity ----

void criterion_box() {
    TetMesh m = load_tet_mesh(kMeshDir + "/box_small.mesh");
    ReorderResult rr = reorder_boundary_first(m, false);
    auto normals = estimate_vertex_normals(rr.mesh, 45.0 * kPi / 180.0);
    auto res = optimize3(rr.mesh, normals, Optimize3Options{});

    double worst_angle = 0.0;
    for (const Mat3& f : res.field.frame)
        worst_angle = std::max(worst_angle, rotation_between_frames3(res.field.frame[0], f).second);
    verdict(10, res.report.energy < 1e-8 && res.singularities.singular_tets.empty() &&
                    worst_angle < 1e-6,
            "box sanity: energy %.1e, %zu singular tets, frames constant within %.1e rad",
            res.report.energy, res.singularities.singular_tets.size(), worst_angle);
}

// ---- criterion 11: performance on the 50k-tet mesh ----

void criterion_performance() {
    TetMesh m = load_tet_mesh(kMeshDir + "/box_perf.mesh");
    auto t0 = std::chrono::steady_clock::now();
    ReorderResult rr = reorder_boundary_first(m, false);
    auto normals = estimate_vertex_normals(rr.mesh, 45.0 * kPi / 180.0);
    Optimize3Options opt;
    opt.iterations = 3;
    auto res = optimize3(rr.mesh, normals, opt);
    double dt = seconds_since(t0);
    verdict(11, dt < 60.0 && res.report.energy < 1e-6,
            "performance: %zu tets, initialization + 3 iterations in %.1f s (< 60 s)",
            rr.mesh.tets.size(), dt);
}

// ---- criterion 12: byte-identical reruns ----

void criterion_determinism() {
    RunConfig c3;
    c3.input = kMeshDir + "/lbracket.mesh";
    c3.prefix = "acc_det3_a";
    bool ok = cmd_design3d(c3) == 0;
    c3.prefix = "acc_det3_b";
    ok = ok && cmd_design3d(c3) == 0;
    bool same3 = slurp("acc_det3_a.field") == slurp("acc_det3_b.field") &&
                 slurp("acc_det3_a.sing") == slurp("acc_det3_b.sing") &&
                 slurp("acc_det3_a.report.json") == slurp("acc_det3_b.report.json") &&
                 !slurp("acc_det3_a.field").empty();

    RunConfig c2;
    c2.input = kMeshDir + "/annulus2d.mesh";
    c2.prefix = "acc_det2_a";
    ok = ok && cmd_design2d(c2) == 0;
    c2.prefix = "acc_det2_b";
    ok = ok && cmd_design2d(c2) == 0;
    bool same2 = slurp("acc_det2_a.field") == slurp("acc_det2_b.field") &&
                 slurp("acc_det2_a.sing") == slurp("acc_det2_b.sing") &&
                 slurp("acc_det2_a.report.json") == slurp("acc_det2_b.report.json") &&
                 !slurp("acc_det2_a.field").empty();

    verdict(12, ok && same3 && same2,
            "determinism: repeated 3D and 2D runs are byte-identical (%s/%s)",
            same3 ? "3d ok" : "3d DIFFERS", same2 ? "2d ok" : "2d DIFFERS");
}

} // namespace

int main() {
    criterion_rotations();
    criterion_generators();
    criterion_sampling();
    criterion_projection();
    criterion_landscape();
    criterion_ordering();
    criterion_boundary_lock();
    criterion_deviation();
    criterion_disk();
    criterion_box();
    criterion_performance();
    criterion_determinism();
    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
