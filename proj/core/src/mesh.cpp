#include "framefield/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace framefield {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Whitespace/comment-aware token reader for MEDIT-style files.
class TokenReader {
  public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    bool next(std::string& tok) {
        while (in_ >> tok) {
            if (tok[0] == '#') {
                std::string line;
                std::getline(in_, line);
                continue;
            }
            return true;
        }
        return false;
    }

    long expect_int(const char* what) {
        std::string tok;
        if (!next(tok)) throw std::runtime_error(std::string("parse error: missing ") + what);
        try {
            std::size_t pos = 0;
            long v = std::stol(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("parse error: expected integer for ") + what +
                                     ", got '" + tok + "'");
        }
    }

    double expect_real(const char* what) {
        std::string tok;
        if (!next(tok)) throw std::runtime_error(std::string("parse error: missing ") + what);
        try {
            std::size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("parse error: expected number for ") + what +
                                     ", got '" + tok + "'");
        }
    }

  private:
    std::istream& in_;
};

struct MeditContent {
    int dimension = 0;
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 4>> tetrahedra;
    std::vector<std::array<int, 3>> triangles;
};

MeditContent parse_medit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    TokenReader rd(in);
    MeditContent out;
    std::string tok;
    while (rd.next(tok)) {
        if (tok == "MeshVersionFormatted") {
            rd.expect_int("format version");
        } else if (tok == "Dimension") {
            out.dimension = static_cast<int>(rd.expect_int("dimension"));
            if (out.dimension != 2 && out.dimension != 3)
                throw std::runtime_error("parse error: unsupported dimension");
        } else if (tok == "Vertices") {
            if (out.dimension == 0) throw std::runtime_error("parse error: Vertices before Dimension");
            long n = rd.expect_int("vertex count");
            out.vertices.reserve(n);
            for (long i = 0; i < n; i++) {
                std::array<double, 3> v{0.0, 0.0, 0.0};
                for (int d = 0; d < out.dimension; d++) v[d] = rd.expect_real("vertex coordinate");
                rd.expect_real("vertex reference tag"); // ignored
                out.vertices.push_back(v);
            }
        } else if (tok == "Tetrahedra") {
            long n = rd.expect_int("tetrahedron count");
            out.tetrahedra.reserve(n);
            for (long i = 0; i < n; i++) {
                std::array<int, 4> t;
                for (int d = 0; d < 4; d++) t[d] = static_cast<int>(rd.expect_int("tet index")) - 1;
                rd.expect_int("tet reference tag"); // ignored
                out.tetrahedra.push_back(t);
            }
        } else if (tok == "Triangles") {
            long n = rd.expect_int("triangle count");
            out.triangles.reserve(n);
            for (long i = 0; i < n; i++) {
                std::array<int, 3> t;
                for (int d = 0; d < 3; d++) t[d] = static_cast<int>(rd.expect_int("triangle index")) - 1;
                rd.expect_int("triangle reference tag"); // ignored
                out.triangles.push_back(t);
            }
        } else if (tok == "Edges") {
            long n = rd.expect_int("edge count");
            for (long i = 0; i < n * 3; i++) rd.expect_int("edge field");
        } else if (tok == "Corners" || tok == "RequiredVertices" || tok == "Ridges") {
            long n = rd.expect_int("count");
            for (long i = 0; i < n; i++) rd.expect_int("index");
        } else if (tok == "End") {
            break;
        } else {
            throw std::runtime_error("parse error: unknown keyword '" + tok + "'");
        }
    }
    return out;
}

std::array<int, 2> sorted_edge(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

void dedup_edges(std::vector<std::array<int, 2>>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// --- Hilbert curve key (Skilling's transpose algorithm, 3 axes) ---

std::uint64_t hilbert_key(std::uint32_t cx, std::uint32_t cy, std::uint32_t cz, int bits) {
    std::uint32_t x[3] = {cx, cy, cz};
    std::uint32_t m = 1u << (bits - 1);
    // Inverse undo
    for (std::uint32_t q = m; q > 1; q >>= 1) {
        std::uint32_t p = q - 1;
        for (int i = 0; i < 3; i++) {
            if (x[i] & q) {
                x[0] ^= p;
            } else {
                std::uint32_t t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
    }
    // Gray encode
    for (int i = 1; i < 3; i++) x[i] ^= x[i - 1];
    std::uint32_t t = 0;
    for (std::uint32_t q = m; q > 1; q >>= 1)
        if (x[2] & q) t ^= q - 1;
    for (int i = 0; i < 3; i++) x[i] ^= t;
    // Interleave bits, x major
    std::uint64_t key = 0;
    for (int b = bits - 1; b >= 0; b--)
        for (int i = 0; i < 3; i++) key = (key << 1) | ((x[i] >> b) & 1u);
    return key;
}

std::vector<int> hilbert_order(const std::vector<Vec3>& pts, const std::vector<int>& subset) {
    Vec3 lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
               std::numeric_limits<double>::max()};
    Vec3 hi = {-lo[0], -lo[1], -lo[2]};
    for (int v : subset)
        for (int d = 0; d < 3; d++) {
            lo[d] = std::min(lo[d], pts[v][d]);
            hi[d] = std::max(hi[d], pts[v][d]);
        }
    const int bits = 10;
    double scale[3];
    for (int d = 0; d < 3; d++) {
        double ext = hi[d] - lo[d];
        scale[d] = ext > 0.0 ? ((1 << bits) - 1) / ext : 0.0;
    }
    std::vector<std::pair<std::uint64_t, int>> keyed;
    keyed.reserve(subset.size());
    for (int v : subset) {
        std::uint32_t c[3];
        for (int d = 0; d < 3; d++)
            c[d] = static_cast<std::uint32_t>((pts[v][d] - lo[d]) * scale[d] + 0.5);
        keyed.push_back({hilbert_key(c[0], c[1], c[2], bits), v});
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<int> order;
    order.reserve(keyed.size());
    for (const auto& [k, v] : keyed) order.push_back(v);
    return order;
}

} // namespace

TriMesh2 build_tri_mesh2(std::vector<std::array<double, 2>> vertices,
                         std::vector<std::array<int, 3>> triangles) {
    TriMesh2 m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);
    const int nv = static_cast<int>(m.vertices.size());
    if (nv == 0 || m.triangles.empty()) throw std::runtime_error("empty mesh");
    for (auto& t : m.triangles) {
        for (int d = 0; d < 3; d++)
            if (t[d] < 0 || t[d] >= nv)
                throw std::runtime_error("topology error: triangle vertex index out of range");
        const auto& a = m.vertices[t[0]];
        const auto& b = m.vertices[t[1]];
        const auto& c = m.vertices[t[2]];
        double twice_area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if (twice_area == 0.0) throw std::runtime_error("topology error: degenerate triangle");
        if (twice_area < 0.0) std::swap(t[1], t[2]);
    }

    // Edge set and boundary edges (appearing in exactly one triangle).
    std::vector<std::array<int, 2>> all;
    all.reserve(m.triangles.size() * 3);
    for (const auto& t : m.triangles)
        for (int d = 0; d < 3; d++) all.push_back(sorted_edge(t[d], t[(d + 1) % 3]));
    std::sort(all.begin(), all.end());
    std::vector<char> edge_boundary;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) j++;
        m.edges.push_back(all[i]);
        edge_boundary.push_back(j - i == 1);
        i = j;
    }

    m.boundary_flags.assign(nv, 0);
    m.boundary_angles.assign(nv, std::numeric_limits<double>::quiet_NaN());

    // Outward normal direction per boundary edge, found from the owning
    // triangle (CCW: rotating the edge vector by -90 degrees points outward).
    // Per-vertex angles average the edge normals in 4-theta representation
    // space, weighted by edge length, so right-angle corners lock exactly.
    std::vector<double> rep_c(nv, 0.0), rep_s(nv, 0.0);
    std::vector<double> fallback(nv, std::numeric_limits<double>::quiet_NaN());
    for (const auto& t : m.triangles) {
        for (int d = 0; d < 3; d++) {
            int i = t[d], j = t[(d + 1) % 3];
            auto key = sorted_edge(i, j);
            auto it = std::lower_bound(m.edges.begin(), m.edges.end(), key);
            if (!edge_boundary[it - m.edges.begin()]) continue;
            double ex = m.vertices[j][0] - m.vertices[i][0];
            double ey = m.vertices[j][1] - m.vertices[i][1];
            double len = std::hypot(ex, ey);
            double theta = std::atan2(-ex, ey); // direction of (ey, -ex)
            for (int v : {i, j}) {
                m.boundary_flags[v] = 1;
                rep_c[v] += len * std::cos(4.0 * theta);
                rep_s[v] += len * std::sin(4.0 * theta);
                if (std::isnan(fallback[v])) fallback[v] = theta;
            }
        }
    }
    for (int v = 0; v < nv; v++) {
        if (!m.boundary_flags[v]) continue;
        double c = rep_c[v], s = rep_s[v];
        double angle;
        if (std::hypot(c, s) < 1e-9)
            angle = fallback[v];
        else
            angle = std::atan2(s, c) / 4.0;
        angle = std::fmod(angle, kPi / 2.0);
        if (angle < 0.0) angle += kPi / 2.0;
        if (angle >= kPi / 2.0) angle = 0.0; // tiny negatives round up to pi/2
        m.boundary_angles[v] = angle;
    }
    return m;
}

TriMesh2 load_tri_mesh2(const std::string& path) {
    MeditContent c = parse_medit(path);
    if (c.dimension != 2) throw std::runtime_error("parse error: expected a 2D mesh in " + path);
    std::vector<std::array<double, 2>> verts;
    verts.reserve(c.vertices.size());
    for (const auto& v : c.vertices) verts.push_back({v[0], v[1]});
    return build_tri_mesh2(std::move(verts), std::move(c.triangles));
}

TetMesh build_tet_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets) {
    TetMesh m;
    m.vertices = std::move(vertices);
    m.tets = std::move(tets);
    m.n_v = static_cast<int>(m.vertices.size());
    if (m.n_v == 0 || m.tets.empty()) throw std::runtime_error("empty mesh");

    for (auto& t : m.tets) {
        for (int d = 0; d < 4; d++)
            if (t[d] < 0 || t[d] >= m.n_v)
                throw std::runtime_error("topology error: tet vertex index out of range");
        Vec3 e1 = m.vertices[t[1]] - m.vertices[t[0]];
        Vec3 e2 = m.vertices[t[2]] - m.vertices[t[0]];
        Vec3 e3 = m.vertices[t[3]] - m.vertices[t[0]];
        double vol = dot(cross(e1, e2), e3);
        if (vol == 0.0) throw std::runtime_error("topology error: degenerate tet");
        if (vol < 0.0) std::swap(t[2], t[3]);
    }

    std::vector<std::array<int, 2>> all;
    all.reserve(m.tets.size() * 6);
    for (const auto& t : m.tets)
        for (int a = 0; a < 4; a++)
            for (int b = a + 1; b < 4; b++) all.push_back(sorted_edge(t[a], t[b]));
    dedup_edges(all);
    m.edges = std::move(all);

    // Boundary faces: sorted triple seen exactly once across all tets.
    struct FaceRec {
        std::array<int, 3> key;
        std::array<int, 3> verts; // as listed in the tet
        int opposite;
    };
    std::vector<FaceRec> faces;
    faces.reserve(m.tets.size() * 4);
    static const int face_corners[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    for (const auto& t : m.tets) {
        for (int f = 0; f < 4; f++) {
            FaceRec rec;
            rec.verts = {t[face_corners[f][0]], t[face_corners[f][1]], t[face_corners[f][2]]};
            rec.key = rec.verts;
            std::sort(rec.key.begin(), rec.key.end());
            rec.opposite = t[f];
            faces.push_back(rec);
        }
    }
    std::sort(faces.begin(), faces.end(),
              [](const FaceRec& a, const FaceRec& b) { return a.key < b.key; });
    m.vertex_class.assign(m.n_v, VertexClass::interior);
    for (std::size_t i = 0; i < faces.size();) {
        std::size_t j = i;
        while (j < faces.size() && faces[j].key == faces[i].key) j++;
        if (j - i == 1) {
            // Orient outward: normal must point away from the opposite vertex.
            auto tri = faces[i].verts;
            Vec3 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
            Vec3 n = cross(b - a, c - a);
            if (dot(n, m.vertices[faces[i].opposite] - a) > 0.0) std::swap(tri[1], tri[2]);
            m.boundary_triangles.push_back(tri);
            for (int v : tri) m.vertex_class[v] = VertexClass::smooth_boundary;
        }
        i = j;
    }
    m.n_l = static_cast<int>(
        std::count_if(m.vertex_class.begin(), m.vertex_class.end(),
                      [](VertexClass c) { return c != VertexClass::interior; }));
    return m;
}

TetMesh load_tet_mesh(const std::string& path) {
    MeditContent c = parse_medit(path);
    if (c.dimension != 3) throw std::runtime_error("parse error: expected a 3D mesh in " + path);
    if (c.tetrahedra.empty()) throw std::runtime_error("empty mesh");
    std::vector<Vec3> verts;
    verts.reserve(c.vertices.size());
    for (const auto& v : c.vertices) verts.push_back({v[0], v[1], v[2]});
    return build_tet_mesh(std::move(verts), std::move(c.tetrahedra));
}

ReorderResult reorder_boundary_first(const TetMesh& m, bool hilbert_sort) {
    std::vector<int> boundary, interior;
    for (int v = 0; v < m.n_v; v++)
        (m.vertex_class[v] != VertexClass::interior ? boundary : interior).push_back(v);
    if (hilbert_sort) {
        boundary = hilbert_order(m.vertices, boundary);
        interior = hilbert_order(m.vertices, interior);
    }
    ReorderResult out;
    out.inv_perm.reserve(m.n_v);
    out.inv_perm.insert(out.inv_perm.end(), boundary.begin(), boundary.end());
    out.inv_perm.insert(out.inv_perm.end(), interior.begin(), interior.end());
    out.perm.assign(m.n_v, -1);
    for (int nw = 0; nw < m.n_v; nw++) out.perm[out.inv_perm[nw]] = nw;

    std::vector<Vec3> verts(m.n_v);
    for (int old = 0; old < m.n_v; old++) verts[out.perm[old]] = m.vertices[old];
    std::vector<std::array<int, 4>> tets = m.tets;
    for (auto& t : tets)
        for (int d = 0; d < 4; d++) t[d] = out.perm[t[d]];
    out.mesh = build_tet_mesh(std::move(verts), std::move(tets));
    return out;
}

std::vector<VertexNormal> estimate_vertex_normals(TetMesh& m, double crease_threshold_rad) {
    // Cluster the incident boundary triangle normals of each boundary vertex:
    // a normal joins the first cluster whose average direction lies within
    // the crease threshold (the cross product length is twice the triangle
    // area, so sums are area-weighted for free). One cluster means a smooth
    // vertex; several mean a crease between near-planar patches.
    std::vector<std::vector<Vec3>> incident(m.n_v);
    for (const auto& tri : m.boundary_triangles) {
        Vec3 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
        Vec3 n = cross(b - a, c - a);
        if (norm(n) == 0.0) continue; // degenerate triangle contributes nothing
        for (int v : tri) incident[v].push_back(n);
    }

    auto angle_between = [](const Vec3& a, const Vec3& b) {
        return std::acos(std::clamp(dot(normalized(a), normalized(b)), -1.0, 1.0));
    };

    std::vector<VertexNormal> out;
    for (int v = 0; v < m.n_v; v++) {
        if (m.vertex_class[v] == VertexClass::interior) continue;
        const auto& list = incident[v];
        if (list.empty())
            throw std::runtime_error("estimate_vertex_normals: vertex " + std::to_string(v) +
                                     " has no usable boundary triangle");
        std::vector<Vec3> clusters;
        for (const auto& n : list) {
            bool placed = false;
            for (auto& sum : clusters) {
                if (angle_between(sum, n) <= crease_threshold_rad) {
                    sum = sum + n;
                    placed = true;
                    break;
                }
            }
            if (!placed) clusters.push_back(n);
        }

        VertexNormal rec;
        rec.vertex = v;
        if (clusters.size() >= 2) {
            // Crease: lock to the cluster pair closest to a right angle,
            // symmetrically perturbed to exact orthogonality.
            int pick_a = 0, pick_b = 1;
            double best = std::numeric_limits<double>::max();
            for (std::size_t i = 0; i < clusters.size(); i++)
                for (std::size_t j = i + 1; j < clusters.size(); j++) {
                    double d = std::abs(angle_between(clusters[i], clusters[j]) - kPi / 2.0);
                    if (d < best) {
                        best = d;
                        pick_a = static_cast<int>(i);
                        pick_b = static_cast<int>(j);
                    }
                }
            Vec3 n1 = normalized(clusters[pick_a]);
            Vec3 n2 = normalized(clusters[pick_b]);
            Vec3 axis = cross(n1, n2);
            if (norm(axis) > 1e-12) {
                axis = normalized(axis);
                double delta = (kPi / 2.0 - angle_between(n1, n2)) / 2.0;
                auto rotate = [&](const Vec3& p, double t) {
                    double ct = std::cos(t), st = std::sin(t);
                    return ct * p + st * cross(axis, p) + (1.0 - ct) * dot(axis, p) * axis;
                };
                n1 = rotate(n1, -delta);
                n2 = rotate(n2, delta);
            }
            // Clean up any residual non-orthogonality from roundoff.
            n1 = normalized(n1);
            n2 = normalized(n2 - dot(n1, n2) * n1);
            rec.is_crease = true;
            rec.n1 = n1;
            rec.n2 = n2;
            m.vertex_class[v] = VertexClass::crease;
        } else {
            if (norm(clusters[0]) < 1e-12)
                throw std::runtime_error(
                    "estimate_vertex_normals: zero aggregate normal at vertex " +
                    std::to_string(v));
            rec.n = normalized(clusters[0]);
            m.vertex_class[v] = VertexClass::smooth_boundary;
        }
        out.push_back(rec);
    }
    return out;
}

} // namespace framefield
