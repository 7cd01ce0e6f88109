// Generator for the bundled test meshes (MEDIT ASCII format): boxes with a
// Kuhn (6-tet) cube subdivision, an L-shaped bracket, a thin two-layer disk
// with its matching 2D footprint, and several flat 2D domains.

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "framefield/mesh.hpp"

namespace {

using framefield::Vec3;

constexpr double kPi = 3.14159265358979323846;

void write_mesh3(const std::string& path, const std::vector<Vec3>& vertices,
                 const std::vector<std::array<int, 4>>& tets) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "MeshVersionFormatted 2\nDimension 3\nVertices\n%zu\n", vertices.size());
    for (const auto& v : vertices) std::fprintf(f, "%.17g %.17g %.17g 0\n", v[0], v[1], v[2]);
    std::fprintf(f, "Tetrahedra\n%zu\n", tets.size());
    for (const auto& t : tets)
        std::fprintf(f, "%d %d %d %d 0\n", t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1);
    std::fprintf(f, "End\n");
    std::fclose(f);
}

void write_mesh2(const std::string& path, const std::vector<std::array<double, 2>>& vertices,
                 const std::vector<std::array<int, 3>>& triangles) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "MeshVersionFormatted 2\nDimension 2\nVertices\n%zu\n", vertices.size());
    for (const auto& v : vertices) std::fprintf(f, "%.17g %.17g 0\n", v[0], v[1]);
    std::fprintf(f, "Triangles\n%zu\n", triangles.size());
    for (const auto& t : triangles) std::fprintf(f, "%d %d %d 0\n", t[0] + 1, t[1] + 1, t[2] + 1);
    std::fprintf(f, "End\n");
    std::fclose(f);
}

// Validate (indices, orientation, degeneracy) and print a short summary;
// returns the tets in positively-oriented order.
std::vector<std::array<int, 4>> validate3(std::vector<Vec3> vertices,
                                          std::vector<std::array<int, 4>> tets) {
    framefield::TetMesh m = framefield::build_tet_mesh(std::move(vertices), std::move(tets));
    std::printf("%d vertices, %zu tets, %zu boundary triangles, %d boundary vertices\n", m.n_v,
                m.tets.size(), m.boundary_triangles.size(), m.n_l);
    return m.tets;
}

void validate2(const std::vector<std::array<double, 2>>& vertices,
               const std::vector<std::array<int, 3>>& triangles) {
    framefield::TriMesh2 m = framefield::build_tri_mesh2(vertices, triangles);
    int nb = 0;
    for (char fl : m.boundary_flags) nb += fl ? 1 : 0;
    std::printf("%zu vertices, %zu triangles, %d boundary vertices\n", m.vertices.size(),
                m.triangles.size(), nb);
}

// --- 3D generators -------------------------------------------------------

// Kuhn subdivision: each cube splits into 6 tets along the main diagonal,
// one per permutation of the axes; neighboring cubes match on shared faces.
void append_kuhn_cube(int base_corner[2][2][2], std::vector<std::array<int, 4>>& tets) {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
        int at[3] = {0, 0, 0};
        std::array<int, 4> tet;
        tet[0] = base_corner[0][0][0];
        for (int step = 0; step < 3; step++) {
            at[p[step]] = 1;
            tet[step + 1] = base_corner[at[0]][at[1]][at[2]];
        }
        tets.push_back(tet);
    }
}

void gen_box(const std::string& path, int n, double size) {
    const int s = n + 1;
    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(s) * s * s);
    const double h = size / n;
    for (int k = 0; k < s; k++)
        for (int j = 0; j < s; j++)
            for (int i = 0; i < s; i++) verts.push_back({i * h, j * h, k * h});
    auto id = [s](int i, int j, int k) { return i + s * (j + s * k); };
    std::vector<std::array<int, 4>> tets;
    tets.reserve(static_cast<std::size_t>(n) * n * n * 6);
    for (int k = 0; k < n; k++)
        for (int j = 0; j < n; j++)
            for (int i = 0; i < n; i++) {
                int corner[2][2][2];
                for (int di = 0; di < 2; di++)
                    for (int dj = 0; dj < 2; dj++)
                        for (int dk = 0; dk < 2; dk++)
                            corner[di][dj][dk] = id(i + di, j + dj, k + dk);
                append_kuhn_cube(corner, tets);
            }
    write_mesh3(path, verts, validate3(verts, tets));
}

// 2x2x1 block with the [1,2]x[1,2] quadrant removed: a re-entrant edge whose
// boundary vertices carry two orthogonal wall normals.
void gen_lbracket(const std::string& path, int n) {
    const double h = 1.0 / n;
    const int s = 2 * n + 1, sz = n + 1;
    std::vector<int> compact(static_cast<std::size_t>(s) * s * sz, -1);
    auto full_id = [s](int i, int j, int k) { return i + s * (j + s * k); };
    std::vector<Vec3> verts;
    std::vector<std::array<int, 4>> tets;
    auto vertex = [&](int i, int j, int k) {
        int& slot = compact[full_id(i, j, k)];
        if (slot < 0) {
            slot = static_cast<int>(verts.size());
            verts.push_back({i * h, j * h, k * h});
        }
        return slot;
    };
    for (int k = 0; k < n; k++)
        for (int j = 0; j < 2 * n; j++)
            for (int i = 0; i < 2 * n; i++) {
                if (i >= n && j >= n) continue;
                int corner[2][2][2];
                for (int di = 0; di < 2; di++)
                    for (int dj = 0; dj < 2; dj++)
                        for (int dk = 0; dk < 2; dk++)
                            corner[di][dj][dk] = vertex(i + di, j + dj, k + dk);
                append_kuhn_cube(corner, tets);
            }
    write_mesh3(path, verts, validate3(verts, tets));
}

// --- disk footprint shared by the 2D disk and the thin 3D disk -----------

struct Footprint {
    std::vector<std::array<double, 2>> verts;
    std::vector<std::array<int, 3>> tris;
};

// Polar disk footprint: a fine rim ring, one full-count band, then rings
// whose segment count halves inward (angular coarsening) with constant-count
// bands in between, closed by a small center fan. Ring vertices are numbered
// even positions first, so that any id-driven quad-diagonal rule (the prism
// split of the thin 3D disk picks the smallest corner id) alternates
// orientation around each ring instead of forming a chiral screw that would
// twist the weak interior of a rotationally symmetric field; on the rim the
// same numbering keeps every vertex's neighbor fan angularly symmetric,
// holding the penalty solve's constraint violation second-order in the rim
// spacing.
Footprint disk_footprint(int segments) {
    int cur = segments;
    while (cur > 64 && cur % 2 == 0) cur /= 2;
    if (cur != 64) throw std::runtime_error("disk: segments must be 64 times a power of two");

    Footprint fp;
    struct Ring {
        int start;
        int count;
    };
    std::vector<Ring> rings;
    auto rid = [&rings](int k, int p) {
        const Ring& rg = rings[k];
        p %= rg.count;
        return rg.start + ((p % 2 == 0) ? p / 2 : rg.count / 2 + (p - 1) / 2);
    };
    auto add_ring = [&fp, &rings](double radius, int count, bool rim) {
        rings.push_back({static_cast<int>(fp.verts.size()) - (rim ? count : 0), count});
        if (rim) return; // rim vertices are pre-assigned
        int start = static_cast<int>(fp.verts.size());
        fp.verts.resize(fp.verts.size() + count);
        for (int p = 0; p < count; p++) {
            double phi = 2.0 * kPi * p / count;
            int id = start + ((p % 2 == 0) ? p / 2 : count / 2 + (p - 1) / 2);
            fp.verts[id] = {radius * std::cos(phi), radius * std::sin(phi)};
        }
    };
    auto band = [&fp, &rid](int k, int n) { // equal counts, alternating diagonals
        for (int p = 0; p < n; p++) {
            int a = rid(k - 1, p), b = rid(k - 1, p + 1), c = rid(k, p + 1), d = rid(k, p);
            if (p % 2 == 0) {
                fp.tris.push_back({a, b, c});
                fp.tris.push_back({a, c, d});
            } else {
                fp.tris.push_back({a, b, d});
                fp.tris.push_back({b, c, d});
            }
        }
    };
    auto transition = [&fp, &rid](int k, int n) { // outer 2n verts -> inner n verts
        for (int i = 0; i < n; i++) {
            int f0 = rid(k - 1, 2 * i), f1 = rid(k - 1, 2 * i + 1), f2 = rid(k - 1, 2 * i + 2);
            int c0 = rid(k, i), c1 = rid(k, i + 1);
            fp.tris.push_back({f0, f1, c0});
            fp.tris.push_back({f1, c1, c0});
            fp.tris.push_back({f1, f2, c1});
        }
    };

    const int S = segments;
    fp.verts.resize(S);
    for (int p = 0; p < S; p++) {
        double phi = 2.0 * kPi * p / S;
        int id = (p % 2 == 0) ? p / 2 : S / 2 + (p - 1) / 2;
        fp.verts[id] = {std::cos(phi), std::sin(phi)};
    }
    add_ring(1.0, S, true);

    cur = S;
    double r = 1.0 - 2.0 * kPi / S;
    add_ring(r, cur, false); // full-count band keeps the rim fans symmetric
    band(1, cur);
    while (cur > 64) {
        r -= 1.5 * 2.0 * kPi * r / cur;
        cur /= 2;
        add_ring(r, cur, false);
        transition(static_cast<int>(rings.size()) - 1, cur);
    }
    while (r - 2.0 * kPi * r / cur > 0.10) {
        r -= 2.0 * kPi * r / cur;
        add_ring(r, cur, false);
        band(static_cast<int>(rings.size()) - 1, cur);
    }
    while (cur > 8) {
        r -= std::min(1.5 * 2.0 * kPi * r / cur, 0.5 * r);
        cur /= 2;
        add_ring(r, cur, false);
        transition(static_cast<int>(rings.size()) - 1, cur);
    }
    int center = static_cast<int>(fp.verts.size());
    fp.verts.push_back({0.0, 0.0});
    for (int p = 0; p < cur; p++)
        fp.tris.push_back({rid(static_cast<int>(rings.size()) - 1, p),
                           rid(static_cast<int>(rings.size()) - 1, p + 1), center});
    return fp;
}

// Split the prism (bottom p0 p1 p2, top p3 p4 p5, vertical edges i to i+3)
// into 3 tets; quad diagonals pick the smallest global corner index, so
// adjacent prisms always agree on shared faces.
std::array<std::array<int, 4>, 3> split_prism(std::array<int, 6> p) {
    int min_pos = 0;
    for (int i = 1; i < 6; i++)
        if (p[i] < p[min_pos]) min_pos = i;
    if (min_pos >= 3) {
        p = {p[3], p[5], p[4], p[0], p[2], p[1]}; // flip layers, keep vertical pairing
        min_pos = (min_pos == 3) ? 0 : (min_pos == 4 ? 2 : 1);
    }
    for (int r = 0; r < min_pos; r++) p = {p[1], p[2], p[0], p[4], p[5], p[3]};
    if (std::min(p[1], p[5]) < std::min(p[2], p[4]))
        return {{{p[0], p[1], p[2], p[5]}, {p[0], p[1], p[5], p[4]}, {p[0], p[4], p[5], p[3]}}};
    return {{{p[0], p[1], p[2], p[4]}, {p[0], p[4], p[2], p[5]}, {p[0], p[4], p[5], p[3]}}};
}

void gen_disk3d(const std::string& path, int segments, double height) {
    Footprint fp = disk_footprint(segments);
    const int nfv = static_cast<int>(fp.verts.size());
    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(nfv) * 2);
    for (const auto& v : fp.verts) verts.push_back({v[0], v[1], 0.0});
    for (const auto& v : fp.verts) verts.push_back({v[0], v[1], height});
    std::vector<std::array<int, 4>> tets;
    tets.reserve(fp.tris.size() * 3);
    for (const auto& t : fp.tris) {
        auto split = split_prism({t[0], t[1], t[2], t[0] + nfv, t[1] + nfv, t[2] + nfv});
        for (const auto& tet : split) tets.push_back(tet);
    }
    write_mesh3(path, verts, validate3(verts, tets));
}

void gen_disk2d(const std::string& path, int segments) {
    Footprint fp = disk_footprint(segments);
    validate2(fp.verts, fp.tris);
    write_mesh2(path, fp.verts, fp.tris);
}

// --- flat 2D domains ------------------------------------------------------

void gen_annulus2d(const std::string& path, int segments, int rings, double r0) {
    std::vector<std::array<double, 2>> verts;
    verts.reserve(static_cast<std::size_t>(rings + 1) * segments);
    for (int i = 0; i <= rings; i++) {
        double r = r0 + (1.0 - r0) * i / rings;
        for (int sgm = 0; sgm < segments; sgm++) {
            double phi = 2.0 * kPi * sgm / segments;
            verts.push_back({r * std::cos(phi), r * std::sin(phi)});
        }
    }
    auto id = [segments](int ring, int sgm) { return ring * segments + (sgm % segments); };
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < rings; i++)
        for (int sgm = 0; sgm < segments; sgm++) {
            int a = id(i, sgm), b = id(i + 1, sgm), c = id(i + 1, sgm + 1), d = id(i, sgm + 1);
            tris.push_back({a, b, c});
            tris.push_back({a, c, d});
        }
    validate2(verts, tris);
    write_mesh2(path, verts, tris);
}

void gen_grid2d(const std::string& path, int n, int m, double shear_x, double height) {
    std::vector<std::array<double, 2>> verts;
    verts.reserve(static_cast<std::size_t>(n + 1) * (m + 1));
    for (int j = 0; j <= m; j++)
        for (int i = 0; i <= n; i++) {
            double u = static_cast<double>(i) / n, v = static_cast<double>(j) / m;
            verts.push_back({u + shear_x * v, height * v});
        }
    auto id = [n](int i, int j) { return i + (n + 1) * j; };
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < m; j++)
        for (int i = 0; i < n; i++) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    validate2(verts, tris);
    write_mesh2(path, verts, tris);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Test mesh generator (MEDIT ASCII)"};
    app.require_subcommand(1);
    std::string out;
    int n = 4, m = 4, segments = 48, rings = 8;
    double size = 1.0, height = 0.02, r0 = 0.35;
    int disk_segments = 2048;

    auto* box = app.add_subcommand("box", "axis-aligned box, Kuhn-subdivided n^3 cubes");
    box->add_option("output", out)->required();
    box->add_option("--n", n)->capture_default_str();
    box->add_option("--size", size)->capture_default_str();

    auto* lbr = app.add_subcommand("lbracket", "2x2x1 block minus one quadrant");
    lbr->add_option("output", out)->required();
    lbr->add_option("--n", n)->capture_default_str();

    auto* d3 = app.add_subcommand("disk3d", "thin two-layer disk (tets)");
    d3->add_option("output", out)->required();
    d3->add_option("--segments", disk_segments)->capture_default_str();
    d3->add_option("--height", height)->capture_default_str();

    auto* d2 = app.add_subcommand("disk2d", "unit disk footprint (triangles)");
    d2->add_option("output", out)->required();
    d2->add_option("--segments", disk_segments)->capture_default_str();

    auto* an = app.add_subcommand("annulus2d", "annulus r0..1 (triangles)");
    an->add_option("output", out)->required();
    an->add_option("--segments", segments)->capture_default_str();
    an->add_option("--rings", rings)->capture_default_str();
    an->add_option("--r0", r0)->capture_default_str();

    auto* par = app.add_subcommand("parallelogram2d", "sheared unit grid (triangles)");
    par->add_option("output", out)->required();
    par->add_option("--n", n)->capture_default_str();
    par->add_option("--m", m)->capture_default_str();

    auto* sq = app.add_subcommand("square2d", "unit square grid (triangles)");
    sq->add_option("output", out)->required();
    sq->add_option("--n", n)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (box->parsed()) gen_box(out, n, size);
        if (lbr->parsed()) gen_lbracket(out, n);
        if (d3->parsed()) gen_disk3d(out, disk_segments, height);
        if (d2->parsed()) gen_disk2d(out, disk_segments);
        if (an->parsed()) gen_annulus2d(out, segments, rings, r0);
        if (par->parsed()) gen_grid2d(out, n, m, 0.5, std::sqrt(3.0) / 2.0);
        if (sq->parsed()) gen_grid2d(out, n, n, 0.0, 1.0);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "meshgen: %s\n", e.what());
        return 1;
    }
    return 0;
}
