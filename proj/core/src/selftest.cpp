#include "framefield/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace framefield {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_error(double worst, double tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst error %.3g (tolerance %.3g)", worst, tol);
    return buf;
}

double max_abs(const Mat9& m) {
    double worst = 0.0;
    for (int i = 0; i < 9; i++)
        for (int j = 0; j < 9; j++) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

} // namespace

std::vector<SelftestCheck> run_selftest(const Generators* override_generators) {
    std::vector<SelftestCheck> checks;
    const Generators& gen = override_generators ? *override_generators : generators();
    const RepVector9 ref = reference_coeffs();
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    { // Rotation matrices are orthogonal and preserve the unit reference norm.
        double worst = 0.0;
        for (int trial = 0; trial < 1000; trial++) {
            Mat9 rb = rot_9_from_euler(angle(rng), angle(rng), angle(rng));
            Mat9 gram = mul(transposed(rb), rb);
            worst = std::max(worst, max_abs_diff_identity(gram));
            worst = std::max(worst, std::abs(norm(mul(rb, ref)) - 1.0));
        }
        checks.push_back({"rotation-orthogonality", worst < 1e-10, format_error(worst, 1e-10)});
    }

    { // All 24 octahedral symmetries fix the reference coefficients.
        double worst = 0.0;
        for (const Mat3& s : octahedral_group()) {
            RepVector9 d = mul(rot9_from_rot3(s), ref) - ref;
            worst = std::max(worst, norm(d));
        }
        checks.push_back({"octahedral-invariance", worst < 1e-10, format_error(worst, 1e-10)});
    }

    { // Generators match finite differences of the rotation matrices.
        const double h = 1e-5;
        double worst = 0.0;
        const Mat9 rots[3] = {rot_x_9(h), rot_y_9(h), rot_z_9(h)};
        const Mat9* gens[3] = {&gen.x, &gen.y, &gen.z};
        for (int k = 0; k < 3; k++) {
            Mat9 diff = rots[k];
            for (int i = 0; i < 9; i++)
                for (int j = 0; j < 9; j++) {
                    diff(i, j) = (diff(i, j) - (i == j ? 1.0 : 0.0)) / h - (*gens[k])(i, j);
                }
            worst = std::max(worst, max_abs(diff));
        }
        checks.push_back({"generator-finite-difference", worst < 1e-4, format_error(worst, 1e-4)});
    }

    { // Rotating coefficients matches rotating the underlying function.
        double worst = 0.0;
        for (int trial = 0; trial < 20; trial++) {
            Mat3 r = rot3_from_euler(angle(rng), angle(rng), angle(rng));
            RepVector9 a = mul(rot9_from_rot3(rot3_from_euler(angle(rng), angle(rng), angle(rng))),
                               ref);
            worst = std::max(worst, rot9_matches_sampling(r, a));
        }
        checks.push_back({"sampling-oracle", worst < 1e-9, format_error(worst, 1e-9)});
    }

    return checks;
}

} // namespace framefield
