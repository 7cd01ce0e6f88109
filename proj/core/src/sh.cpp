#include "framefield/sh.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace framefield {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalization constants of the orthonormal degree-4 tesseral basis.
const double kc_m4 = 0.75 * std::sqrt(35.0 / kPi);          // xy(x^2 - y^2)
const double kc_m3 = 0.75 * std::sqrt(35.0 / (2.0 * kPi));  // yz(3x^2 - y^2)
const double kc_m2 = 0.75 * std::sqrt(5.0 / kPi);           // xy(7z^2 - 1)
const double kc_m1 = 0.75 * std::sqrt(5.0 / (2.0 * kPi));   // yz(7z^2 - 3)
const double kc_0  = 3.0 / 16.0 * std::sqrt(1.0 / kPi);     // 35z^4 - 30z^2 + 3
const double kc_p1 = kc_m1;                                 // xz(7z^2 - 3)
const double kc_p2 = 3.0 / 8.0 * std::sqrt(5.0 / kPi);      // (x^2 - y^2)(7z^2 - 1)
const double kc_p3 = kc_m3;                                 // xz(x^2 - 3y^2)
const double kc_p4 = 3.0 / 16.0 * std::sqrt(35.0 / kPi);    // x^4 - 6x^2y^2 + y^4

} // namespace

Vec9 sh_basis_eval(const Vec3& p) {
    double x = p[0], y = p[1], z = p[2];
    double n2 = x * x + y * y + z * z;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        throw std::invalid_argument("sh_basis_eval: input point is not on the unit sphere");
    double x2 = x * x, y2 = y * y, z2 = z * z;
    Vec9 b;
    b[0] = kc_m4 * x * y * (x2 - y2);
    b[1] = kc_m3 * y * z * (3.0 * x2 - y2);
    b[2] = kc_m2 * x * y * (7.0 * z2 - 1.0);
    b[3] = kc_m1 * y * z * (7.0 * z2 - 3.0);
    b[4] = kc_0 * (35.0 * z2 * z2 - 30.0 * z2 + 3.0);
    b[5] = kc_p1 * x * z * (7.0 * z2 - 3.0);
    b[6] = kc_p2 * (x2 - y2) * (7.0 * z2 - 1.0);
    b[7] = kc_p3 * x * z * (x2 - 3.0 * y2);
    b[8] = kc_p4 * (x2 * x2 - 6.0 * x2 * y2 + y2 * y2);
    return b;
}

const Vec9& reference_coeffs() {
    static const Vec9 a = [] {
        Vec9 v{};
        v[4] = std::sqrt(7.0 / 12.0);
        v[8] = std::sqrt(5.0 / 12.0);
        return v;
    }();
    return a;
}

Mat9 rot_z_9(double gamma) {
    Mat9 r{};
    double c1 = std::cos(gamma), s1 = std::sin(gamma);
    double c2 = std::cos(2.0 * gamma), s2 = std::sin(2.0 * gamma);
    double c3 = std::cos(3.0 * gamma), s3 = std::sin(3.0 * gamma);
    double c4 = std::cos(4.0 * gamma), s4 = std::sin(4.0 * gamma);
    r.m[0][0] = c4;  r.m[0][8] = s4;
    r.m[1][1] = c3;  r.m[1][7] = s3;
    r.m[2][2] = c2;  r.m[2][6] = s2;
    r.m[3][3] = c1;  r.m[3][5] = s1;
    r.m[4][4] = 1.0;
    r.m[5][3] = -s1; r.m[5][5] = c1;
    r.m[6][2] = -s2; r.m[6][6] = c2;
    r.m[7][1] = -s3; r.m[7][7] = c3;
    r.m[8][0] = -s4; r.m[8][8] = c4;
    return r;
}

const Mat9& rot_x_quarter_9() {
    static const Mat9 r = [] {
        const double s2 = std::sqrt(2.0) / 4.0;
        const double s5 = std::sqrt(5.0) / 4.0;
        const double s7 = std::sqrt(7.0) / 4.0;
        const double s14 = std::sqrt(14.0) / 4.0;
        const double s35 = std::sqrt(35.0) / 8.0;
        Mat9 q{};
        q.m[0][5] = s14;   q.m[0][7] = -s2;
        q.m[1][1] = -0.75; q.m[1][3] = s7;
        q.m[2][5] = s2;    q.m[2][7] = s14;
        q.m[3][1] = s7;    q.m[3][3] = 0.75;
        q.m[4][4] = 0.375; q.m[4][6] = s5;    q.m[4][8] = s35;
        q.m[5][0] = -s14;  q.m[5][2] = -s2;
        q.m[6][4] = s5;    q.m[6][6] = 0.5;   q.m[6][8] = -s7;
        q.m[7][0] = s2;    q.m[7][2] = -s14;
        q.m[8][4] = s35;   q.m[8][6] = -s7;   q.m[8][8] = 0.125;
        return q;
    }();
    return r;
}

Mat9 rot_y_9(double beta) {
    const Mat9& px = rot_x_quarter_9();
    return mul(transposed(px), mul(rot_z_9(beta), px));
}

namespace {
const Mat9& rot_y_quarter_9() {
    static const Mat9 r = rot_y_9(kPi / 2.0);
    return r;
}
} // namespace

Mat9 rot_x_9(double alpha) {
    const Mat9& py = rot_y_quarter_9();
    return mul(py, mul(rot_z_9(alpha), transposed(py)));
}

Mat9 rot_9_from_euler(double alpha, double beta, double gamma) {
    return mul(rot_x_9(alpha), mul(rot_y_9(beta), rot_z_9(gamma)));
}

Mat3 rot3_x(double a) {
    Mat3 r = Mat3::identity();
    double c = std::cos(a), s = std::sin(a);
    r.m[1][1] = c; r.m[1][2] = -s;
    r.m[2][1] = s; r.m[2][2] = c;
    return r;
}

Mat3 rot3_y(double a) {
    Mat3 r = Mat3::identity();
    double c = std::cos(a), s = std::sin(a);
    r.m[0][0] = c;  r.m[0][2] = s;
    r.m[2][0] = -s; r.m[2][2] = c;
    return r;
}

Mat3 rot3_z(double a) {
    Mat3 r = Mat3::identity();
    double c = std::cos(a), s = std::sin(a);
    r.m[0][0] = c; r.m[0][1] = -s;
    r.m[1][0] = s; r.m[1][1] = c;
    return r;
}

Mat3 rot3_from_euler(double alpha, double beta, double gamma) {
    return mul(rot3_x(alpha), mul(rot3_y(beta), rot3_z(gamma)));
}

Vec3 euler_from_rot3(const Mat3& r) {
    Mat3 rtr = mul(transposed(r), r);
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) {
            double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(rtr.m[i][j] - want) > 1e-9)
                throw std::invalid_argument("euler_from_rot3: input is not orthogonal");
        }
    if (det(r) < 0.0)
        throw std::invalid_argument("euler_from_rot3: input is a reflection, not a rotation");

    // R = Rx(alpha) Ry(beta) Rz(gamma):
    //   R02 = sin(beta), R12 = -sin(alpha)cos(beta), R22 = cos(alpha)cos(beta),
    //   R01 = -cos(beta)sin(gamma), R00 = cos(beta)cos(gamma).
    double r02 = r.m[0][2];
    if (r02 >= 1.0 - 1e-13)
        return {std::atan2(r.m[1][0], r.m[1][1]), kPi / 2.0, 0.0};
    if (r02 <= -1.0 + 1e-13)
        return {std::atan2(-r.m[1][0], r.m[1][1]), -kPi / 2.0, 0.0};
    double beta = std::asin(r02);
    double alpha = std::atan2(-r.m[1][2], r.m[2][2]);
    double gamma = std::atan2(-r.m[0][1], r.m[0][0]);
    return {alpha, beta, gamma};
}

Mat9 rot9_from_rot3(const Mat3& r) {
    Vec3 e = euler_from_rot3(r);
    return rot_9_from_euler(e[0], e[1], e[2]);
}

const Generators& generators() {
    static const Generators g = [] {
        const double s2 = std::sqrt(2.0);
        const double s72 = std::sqrt(7.0 / 2.0);
        const double s32 = 3.0 / std::sqrt(2.0);
        const double s10 = std::sqrt(10.0);
        Generators e{};
        // x generator
        e.x.m[0][7] = -s2;
        e.x.m[1][6] = -s72; e.x.m[1][8] = -s2;
        e.x.m[2][5] = -s32; e.x.m[2][7] = -s72;
        e.x.m[3][4] = -s10; e.x.m[3][6] = -s32;
        e.x.m[4][3] = s10;
        e.x.m[5][2] = s32;
        e.x.m[6][1] = s72;  e.x.m[6][3] = s32;
        e.x.m[7][0] = s2;   e.x.m[7][2] = s72;
        e.x.m[8][1] = s2;
        // y generator
        e.y.m[0][1] = s2;
        e.y.m[1][0] = -s2;  e.y.m[1][2] = s72;
        e.y.m[2][1] = -s72; e.y.m[2][3] = s32;
        e.y.m[3][2] = -s32;
        e.y.m[4][5] = -s10;
        e.y.m[5][4] = s10;  e.y.m[5][6] = -s32;
        e.y.m[6][5] = s32;  e.y.m[6][7] = -s72;
        e.y.m[7][6] = s72;  e.y.m[7][8] = -s2;
        e.y.m[8][7] = s2;
        // z generator
        e.z.m[0][8] = 4.0; e.z.m[8][0] = -4.0;
        e.z.m[1][7] = 3.0; e.z.m[7][1] = -3.0;
        e.z.m[2][6] = 2.0; e.z.m[6][2] = -2.0;
        e.z.m[3][5] = 1.0; e.z.m[5][3] = -1.0;
        return e;
    }();
    return g;
}

double rot9_matches_sampling(const Mat3& r, const Vec9& a) {
    Mat9 rb = rot9_from_rot3(r);
    Vec9 ra = mul(rb, a);
    Mat3 rinv = transposed(r);
    const int n = 128;
    const double golden = 2.39996322972865332; // golden angle
    double worst = 0.0;
    for (int i = 0; i < n; i++) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        Vec3 p = {rad * std::cos(phi), rad * std::sin(phi), z};
        double lhs = dot(sh_basis_eval(p), ra);
        double rhs = dot(sh_basis_eval(mul(rinv, p)), a);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

namespace {

std::array<Mat3, 24> make_octahedral_group() {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::array<Mat3, 24> g{};
    int count = 0;
    for (const auto& p : perms) {
        for (int sbits = 0; sbits < 8; sbits++) {
            Mat3 m{};
            for (int i = 0; i < 3; i++) {
                double s = (sbits >> (2 - i)) & 1 ? -1.0 : 1.0;
                m.m[i][p[i]] = s;
            }
            if (det(m) > 0.5) g[count++] = m;
        }
    }
    return g;
}

bool mat3_equal_exact(const Mat3& a, const Mat3& b) {
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++)
            if (a.m[i][j] != b.m[i][j]) return false;
    return true;
}

struct OctahedralTables {
    std::array<Mat3, 24> group;
    int cayley[24][24];
    int inverse[24];
};

const OctahedralTables& octahedral_tables() {
    static const OctahedralTables t = [] {
        OctahedralTables tb{};
        tb.group = make_octahedral_group();
        for (int i = 0; i < 24; i++) {
            for (int j = 0; j < 24; j++) {
                Mat3 prod = mul(tb.group[i], tb.group[j]);
                int idx = -1;
                for (int k = 0; k < 24; k++)
                    if (mat3_equal_exact(prod, tb.group[k])) { idx = k; break; }
                tb.cayley[i][j] = idx; // closure guarantees idx >= 0
                if (idx == 0) tb.inverse[i] = j;
            }
        }
        return tb;
    }();
    return t;
}

} // namespace

const std::array<Mat3, 24>& octahedral_group() { return octahedral_tables().group; }

int octahedral_compose(int s1, int s2) { return octahedral_tables().cayley[s1][s2]; }

int octahedral_inverse(int s) { return octahedral_tables().inverse[s]; }

int octahedral_index(const Mat3& r) {
    const auto& g = octahedral_group();
    for (int k = 0; k < 24; k++)
        if (mat3_equal_exact(r, g[k])) return k;
    return -1;
}

} // namespace framefield
