#include "framefield/field3d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace framefield {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt712 = std::sqrt(7.0 / 12.0);

// Minimal rotation bringing the z axis onto the unit vector n.
Mat3 rotation_z_to(const Vec3& n) {
    Mat3 r = Mat3::identity();
    double c = n[2];
    if (c >= 1.0 - 1e-15) return r;
    if (c <= -1.0 + 1e-15) { // opposite: half turn about x
        r(1, 1) = -1.0;
        r(2, 2) = -1.0;
        return r;
    }
    Vec3 u = normalized(Vec3{-n[1], n[0], 0.0}); // z x n direction
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double omc = 1.0 - c;
    r(0, 0) = c + u[0] * u[0] * omc;
    r(0, 1) = u[0] * u[1] * omc;
    r(0, 2) = u[1] * s;
    r(1, 0) = u[0] * u[1] * omc;
    r(1, 1) = c + u[1] * u[1] * omc;
    r(1, 2) = -u[0] * s;
    r(2, 0) = -u[1] * s;
    r(2, 1) = u[0] * s;
    r(2, 2) = c;
    return r;
}

RepVector9 column(const Mat9& m, int j) {
    RepVector9 v;
    for (int i = 0; i < 9; i++) v[i] = m(i, j);
    return v;
}

void append_row_skipping_zeros(LsqSystem& sys, std::vector<std::pair<int, double>>& buf,
                               double rhs) {
    buf.erase(std::remove_if(buf.begin(), buf.end(),
                             [](const std::pair<int, double>& e) { return e.second == 0.0; }),
              buf.end());
    sys.add_row(buf, rhs);
}

int edge_index(const std::vector<std::array<int, 2>>& edges, int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges.begin(), edges.end(), key);
    return static_cast<int>(it - edges.begin());
}

} // namespace

std::vector<BoundaryConstraint>
build_boundary_constraints(const std::vector<VertexNormal>& normals) {
    std::vector<BoundaryConstraint> out;
    out.reserve(normals.size());
    for (const auto& vn : normals) {
        BoundaryConstraint bc;
        bc.vertex = vn.vertex;
        bc.crease = vn.is_crease;
        if (vn.is_crease) {
            bc.a_lock = lock_crease_frame(vn.n1, vn.n2);
        } else {
            if (std::abs(norm(vn.n) - 1.0) > 1e-9)
                throw std::invalid_argument("build_boundary_constraints: unnormalized normal at vertex " +
                                            std::to_string(vn.vertex));
            Mat9 rb = rot9_from_rot3(rotation_z_to(vn.n));
            bc.h0 = column(rb, 0);
            bc.h4 = column(rb, 4);
            bc.h8 = column(rb, 8);
        }
        out.push_back(bc);
    }
    return out;
}

void add_smoothing_terms(const TetMesh& mesh, LsqSystem& sys) {
    for (const auto& [i, j] : mesh.edges)
        for (int d = 0; d < 9; d++)
            sys.add_row({{9 * i + d, 1.0}, {9 * j + d, -1.0}}, 0.0);
}

void add_normal_constraints(const TetMesh& mesh,
                            const std::vector<BoundaryConstraint>& constraints, LsqSystem& sys,
                            double lambda) {
    const int c_offset = 9 * mesh.n_v;
    std::vector<std::pair<int, double>> row;
    for (const auto& bc : constraints) {
        if (bc.vertex < 0 || bc.vertex >= mesh.n_l)
            throw std::invalid_argument(
                "add_normal_constraints: constraint vertex outside the boundary-first range");
        for (int d = 0; d < 9; d++) {
            row.clear();
            row.push_back({9 * bc.vertex + d, lambda});
            double rhs;
            if (bc.crease) {
                rhs = lambda * bc.a_lock[d];
            } else {
                row.push_back({c_offset + 2 * bc.vertex + 0, -lambda * bc.h0[d]});
                row.push_back({c_offset + 2 * bc.vertex + 1, -lambda * bc.h8[d]});
                rhs = lambda * kSqrt712 * bc.h4[d];
            }
            append_row_skipping_zeros(sys, row, rhs);
        }
    }
}

void add_local_optim_constraints(const std::vector<RepVector9>& prev_a, const TetMesh& mesh,
                                 LsqSystem& sys, double lambda) {
    if (static_cast<int>(prev_a.size()) != mesh.n_v)
        throw std::invalid_argument("add_local_optim_constraints: previous solution size mismatch");
    const int t_offset = 9 * mesh.n_v + 2 * mesh.n_l;
    const Generators& gen = generators();
    std::vector<std::pair<int, double>> row;
    for (int v = 0; v < mesh.n_v; v++) {
        RepVector9 tx = mul(gen.x, prev_a[v]);
        RepVector9 ty = mul(gen.y, prev_a[v]);
        RepVector9 tz = mul(gen.z, prev_a[v]);
        for (int d = 0; d < 9; d++) {
            row.clear();
            row.push_back({9 * v + d, lambda});
            row.push_back({t_offset + 3 * v + 0, -lambda * tx[d]});
            row.push_back({t_offset + 3 * v + 1, -lambda * ty[d]});
            row.push_back({t_offset + 3 * v + 2, -lambda * tz[d]});
            append_row_skipping_zeros(sys, row, lambda * prev_a[v][d]);
        }
    }
}

std::pair<Frame3, RepVector9> closest_frame(const RepVector9& q_in, ClosestFrameStats* stats,
                                            int max_steps, const Mat3& start) {
    double qn = norm(q_in);
    if (qn <= 1e-9) throw std::runtime_error("closest_frame: near-zero coefficient vector");
    RepVector9 q = (1.0 / qn) * q_in;

    const Generators& gen = generators();
    Mat3 f = start;
    RepVector9 a = mul(rot9_from_rot3(start), reference_coeffs());
    double corr = dot(q, a);
    double s = 0.1;
    int it = 0;
    bool converged = false;
    for (; it < max_steps; it++) {
        Vec3 g{dot(q, mul(gen.x, a)), dot(q, mul(gen.y, a)), dot(q, mul(gen.z, a))};
        if (norm(g) < 1e-4) {
            converged = true;
            break;
        }
        RepVector9 a_new = mul(rot_z_9(s * g[2]), a);
        a_new = mul(rot_y_9(s * g[1]), a_new);
        a_new = mul(rot_x_9(s * g[0]), a_new);
        double corr_new = dot(q, a_new);
        if (corr_new < corr) {
            s *= 0.5; // overshoot: shrink the step, keep the current iterate
            continue;
        }
        Mat3 r3 = mul(rot3_x(s * g[0]), mul(rot3_y(s * g[1]), rot3_z(s * g[2])));
        f = mul(r3, f);
        a = a_new;
        corr = corr_new;
    }
    if (stats) {
        stats->iterations = it;
        stats->converged = converged;
        stats->correlation = corr;
    }
    return {Frame3{f}, a};
}

RepVector9 lock_crease_frame(const Vec3& n1, const Vec3& n2) {
    if (std::abs(norm(n1) - 1.0) > 1e-9 || std::abs(norm(n2) - 1.0) > 1e-9 ||
        std::abs(dot(n1, n2)) > 1e-9)
        throw std::invalid_argument("lock_crease_frame: normals must be orthogonal unit vectors");
    Vec3 n3 = cross(n1, n2);
    Mat3 r;
    for (int i = 0; i < 3; i++) {
        r(i, 0) = n1[i];
        r(i, 1) = n2[i];
        r(i, 2) = n3[i];
    }
    return mul(rot9_from_rot3(r), reference_coeffs());
}

std::pair<int, double> rotation_between_frames3(const Mat3& r_i, const Mat3& r_j) {
    for (const Mat3* r : {&r_i, &r_j}) {
        Mat3 gram = mul(transposed(*r), *r);
        double worst = 0.0;
        for (int a = 0; a < 3; a++)
            for (int b = 0; b < 3; b++)
                worst = std::max(worst, std::abs(gram(a, b) - (a == b ? 1.0 : 0.0)));
        if (worst > 1e-9 || det(*r) < 0.5)
            throw std::invalid_argument("rotation_between_frames3: input is not a rotation");
    }
    Mat3 m = mul(transposed(r_i), r_j); // trace(r_j S r_i^T) = trace(S m) by cyclicity
    const auto& group = octahedral_group();
    int best = 0;
    double best_trace = -4.0;
    for (int s = 0; s < 24; s++) {
        double tr = 0.0;
        for (int a = 0; a < 3; a++)
            for (int b = 0; b < 3; b++) tr += group[s](a, b) * m(b, a);
        if (tr > best_trace) {
            best_trace = tr;
            best = s;
        }
    }
    double angle = std::acos(std::clamp((best_trace - 1.0) / 2.0, -1.0, 1.0));
    return {best, angle};
}

double energy3(const TetMesh& mesh, const std::vector<RepVector9>& a) {
    double e = 0.0;
    for (const auto& [i, j] : mesh.edges) {
        RepVector9 d = a[j] - a[i];
        e += dot(d, d);
    }
    return e;
}

double field_curvature3(const TetMesh& mesh, const std::vector<Mat3>& frames) {
    double c = 0.0;
    for (const auto& [i, j] : mesh.edges) {
        double angle = rotation_between_frames3(frames[i], frames[j]).second;
        c += angle * angle;
    }
    return c;
}

SingularityGraph singular_tets(const Field3& field, const TetMesh& mesh) {
    // Matching per undirected edge, stored for the low-to-high direction.
    std::vector<int> edge_match(mesh.edges.size());
    for (std::size_t e = 0; e < mesh.edges.size(); e++)
        edge_match[e] =
            rotation_between_frames3(field.frame[mesh.edges[e][0]], field.frame[mesh.edges[e][1]])
                .first;
    auto directed = [&](int u, int v) {
        int s = edge_match[edge_index(mesh.edges, u, v)];
        return u < v ? s : octahedral_inverse(s);
    };

    // Unique triangles of the tet mesh, keyed by their sorted vertex triple.
    struct FaceRec {
        std::array<int, 3> key;
        std::array<int, 3> verts;
    };
    std::vector<FaceRec> faces;
    faces.reserve(mesh.tets.size() * 4);
    static const int face_corners[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    for (const auto& t : mesh.tets)
        for (int f = 0; f < 4; f++) {
            FaceRec rec;
            rec.verts = {t[face_corners[f][0]], t[face_corners[f][1]], t[face_corners[f][2]]};
            rec.key = rec.verts;
            std::sort(rec.key.begin(), rec.key.end());
            faces.push_back(rec);
        }
    std::sort(faces.begin(), faces.end(),
              [](const FaceRec& a, const FaceRec& b) { return a.key < b.key; });

    SingularityGraph graph;
    std::vector<std::array<int, 3>> keys;
    std::vector<char> singular;
    for (std::size_t i = 0; i < faces.size();) {
        std::size_t j = i;
        while (j < faces.size() && faces[j].key == faces[i].key) j++;
        const auto& tri = faces[i].verts;
        int composed = octahedral_compose(
            octahedral_compose(directed(tri[0], tri[1]), directed(tri[1], tri[2])),
            directed(tri[2], tri[0]));
        keys.push_back(faces[i].key);
        singular.push_back(composed != 0);
        if (composed != 0) graph.singular_triangles.push_back({tri, composed});
        i = j;
    }

    for (std::size_t t = 0; t < mesh.tets.size(); t++) {
        bool any = false;
        for (int f = 0; f < 4 && !any; f++) {
            std::array<int, 3> key = {mesh.tets[t][face_corners[f][0]],
                                      mesh.tets[t][face_corners[f][1]],
                                      mesh.tets[t][face_corners[f][2]]};
            std::sort(key.begin(), key.end());
            auto it = std::lower_bound(keys.begin(), keys.end(), key);
            any = singular[it - keys.begin()] != 0;
        }
        if (any) graph.singular_tets.push_back(static_cast<int>(t));
    }
    return graph;
}

Optimize3Result optimize3(const TetMesh& mesh, const std::vector<VertexNormal>& normals,
                          const Optimize3Options& opt) {
    if (opt.iterations < 0) throw std::invalid_argument("optimize3: negative iteration count");
    if (opt.lambda <= 0.0) throw std::invalid_argument("optimize3: lambda must be positive");
    for (int v = 0; v < mesh.n_l; v++)
        if (mesh.vertex_class[v] == VertexClass::interior)
            throw std::invalid_argument("optimize3: mesh must be reordered boundary-first");
    if (static_cast<int>(normals.size()) != mesh.n_l)
        throw std::invalid_argument("optimize3: one normal record per boundary vertex required");

    auto t_start = std::chrono::steady_clock::now();
    const auto constraints = build_boundary_constraints(normals);
    const int n_cols = 9 * mesh.n_v + 2 * mesh.n_l + 3 * mesh.n_v;
    const double bound = 2.0 * kSqrt712;

    Optimize3Result res;
    Field3& field = res.field;
    field.a.assign(mesh.n_v, RepVector9{});
    field.frame.assign(mesh.n_v, Mat3::identity());
    field.c.assign(mesh.n_l, {0.0, 0.0});
    FieldReport& report = res.report;

    std::vector<std::vector<int>> neighbors(mesh.n_v);
    for (const auto& e : mesh.edges) {
        neighbors[e[0]].push_back(e[1]);
        neighbors[e[1]].push_back(e[0]);
    }
    for (auto& list : neighbors) std::sort(list.begin(), list.end());

    for (int pass = 0; pass <= opt.iterations; pass++) {
        LsqSystem sys(n_cols);
        add_smoothing_terms(mesh, sys);
        add_normal_constraints(mesh, constraints, sys, opt.lambda);
        if (pass > 0) add_local_optim_constraints(field.a, mesh, sys, opt.lambda);
        auto [x, stats] = sys.solve(opt.tol, opt.max_cg);
        report.solves.push_back(stats);

        if (pass == 0) {
            // Deviation of the raw initialization solution from each boundary
            // vertex's admissible set; must stay within the feasible diameter.
            double sum = 0.0, worst = 0.0;
            for (const auto& bc : constraints) {
                RepVector9 a_raw;
                for (int d = 0; d < 9; d++) a_raw[d] = x[9 * bc.vertex + d];
                RepVector9 residual;
                if (bc.crease) {
                    residual = a_raw - bc.a_lock;
                } else {
                    residual = a_raw - kSqrt712 * bc.h4 - dot(a_raw, bc.h0) * bc.h0 -
                               dot(a_raw, bc.h8) * bc.h8;
                }
                double dev = norm(residual);
                if (dev > bound + 1e-9)
                    throw std::runtime_error("optimize3: boundary deviation " +
                                             std::to_string(dev) +
                                             " exceeds the feasible bound at vertex " +
                                             std::to_string(bc.vertex));
                sum += dev;
                worst = std::max(worst, dev);
            }
            if (!constraints.empty()) {
                report.deviation_avg = sum / static_cast<double>(constraints.size());
                report.deviation_max = worst;
            }
        }

        for (int i = 0; i < mesh.n_l; i++)
            field.c[i] = {x[9 * mesh.n_v + 2 * i], x[9 * mesh.n_v + 2 * i + 1]};

        // Identity-started ascent stalls on coefficient vectors whose frame is
        // near 45 degrees away (correlation saddle) and crawls past the step
        // cap when the rotation-sensitive part of q is weak, so any vertex
        // whose ascent did not cleanly converge is re-projected, warm-started
        // from the projection of the summed coefficients of its resolved
        // neighbors, sweeping until no further vertex can be rescued. Summing
        // over the whole resolved fan (rather than copying one neighbor) keeps
        // the warm start free of any bias from vertex numbering.
        std::vector<RepVector9> q(mesh.n_v);
        std::vector<char> resolved(mesh.n_v, 0);
        for (int v = 0; v < mesh.n_v; v++) {
            for (int d = 0; d < 9; d++) q[v][d] = x[9 * v + d];
            try {
                ClosestFrameStats st;
                auto [frame, a] = closest_frame(q[v], &st, opt.projection_max_steps);
                field.frame[v] = frame.r;
                field.a[v] = a;
                // Zero ascent steps means the start was already a stationary
                // point, which cannot distinguish a genuine optimum from an
                // ambiguous or saddle start, so such vertices are re-projected
                // from a neighbor too (a strong q just converges back).
                resolved[v] = st.converged && st.correlation >= 0.5 && st.iterations > 0;
            } catch (const std::exception& e) {
                throw std::runtime_error("optimize3: projection failed at vertex " +
                                         std::to_string(v) + ": " + e.what());
            }
        }
        for (bool progress = true; progress;) {
            progress = false;
            for (int v = 0; v < mesh.n_v; v++) {
                if (resolved[v]) continue;
                RepVector9 qs{};
                int u = -1;
                int count = 0;
                for (int w : neighbors[v])
                    if (resolved[w]) {
                        for (int d = 0; d < 9; d++) qs[d] += field.a[w][d];
                        if (u < 0) u = w;
                        count++;
                    }
                if (u < 0) continue;
                Mat3 start = field.frame[u];
                if (count > 1) {
                    ClosestFrameStats st;
                    auto [fs, as] = closest_frame(qs, &st, opt.projection_max_steps);
                    if (st.converged && st.correlation >= 0.5 && st.iterations > 0)
                        start = fs.r;
                }
                auto [frame, a] = closest_frame(q[v], nullptr, opt.projection_max_steps, start);
                field.frame[v] = frame.r;
                field.a[v] = a;
                resolved[v] = 1;
                progress = true;
            }
        }
        report.energy_trace.push_back(energy3(mesh, field.a));
    }

    report.energy = report.energy_trace.back();
    report.curvature = field_curvature3(mesh, field.frame);
    res.singularities = singular_tets(field, mesh);
    report.singular_count = static_cast<int>(res.singularities.singular_tets.size());

    double c_sum = 0.0;
    int c_count = 0;
    for (const auto& bc : constraints) {
        if (bc.crease) continue;
        const auto& c = field.c[bc.vertex];
        double diag = (c[0] * c[0] + c[1] * c[1]) * 12.0 / 5.0;
        c_sum += diag;
        report.c_norm_max = std::max(report.c_norm_max, diag);
        c_count++;
    }
    if (c_count > 0) report.c_norm_avg = c_sum / c_count;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

} // namespace framefield
