// Degree-4 real spherical harmonic basis, 9x9 rotation (Wigner) matrices,
// their infinitesimal generators, and the reference frame coefficients.
//
// Basis order is (Y4,-4, ..., Y4,4), index i corresponds to m = i - 4.
// Convention (frozen, asserted by tests): for a 3x3 rotation R, the 9x9
// matrix acts on coefficients so that sampling commutes with the inverse
// point rotation,
//     B(p)^T (R_B a) = B(R^-1 p)^T a   for all unit p.
#pragma once

#include "framefield/linalg.hpp"

#include <array>

namespace framefield {

// Matrix9 and RepVector9 of the interface are Mat9 / Vec9.
using Matrix9 = Mat9;
using RepVector9 = Vec9;

// Evaluate the 9 orthonormal degree-4 basis functions at a unit vector.
// Throws std::invalid_argument if |p| deviates from 1 by more than 1e-9.
Vec9 sh_basis_eval(const Vec3& p);

// Reference coefficients a~ = (0,0,0,0,sqrt(7/12),0,0,0,sqrt(5/12)).
const Vec9& reference_coeffs();

// Rotation about z by gamma in coefficient space.
Mat9 rot_z_9(double gamma);

// The constant quarter-turn about x in coefficient space.
const Mat9& rot_x_quarter_9();

// Rotations about y and x for arbitrary angles, built by conjugating
// rot_z_9 with quarter turns.
Mat9 rot_y_9(double beta);
Mat9 rot_x_9(double alpha);

// Composed rotation in the x*y*z order.
Mat9 rot_9_from_euler(double alpha, double beta, double gamma);

// 3x3 counterparts, same x*y*z convention.
Mat3 rot3_x(double alpha);
Mat3 rot3_y(double beta);
Mat3 rot3_z(double gamma);
Mat3 rot3_from_euler(double alpha, double beta, double gamma);

// Euler extraction; canonical branch gamma = 0 at gimbal lock (|R02| ~ 1).
// Throws std::invalid_argument if R is not orthogonal within 1e-9.
Vec3 euler_from_rot3(const Mat3& r);

// 9x9 matrix of an arbitrary 3x3 rotation (via Euler decomposition).
Mat9 rot9_from_rot3(const Mat3& r);

// Antisymmetric generators: d/dt rot_k_9(t) at t = 0.
struct Generators {
    Mat9 x, y, z;
};
const Generators& generators();

// Max over >= 100 quasi-random unit points p of
// |B(p)^T (R_B a) - B(R^-1 p)^T a|; a direct check of the convention above.
double rot9_matches_sampling(const Mat3& r, const Vec9& a);

// The 24 rotations of the chiral octahedral group as exact signed
// permutation matrices; element 0 is the identity. The enumeration is
// fixed: permutations of (0,1,2) in lexicographic order, sign patterns
// (+++, ++-, ...) in lexicographic order, keeping det = +1.
const std::array<Mat3, 24>& octahedral_group();

// Exact composition and inverse in the fixed enumeration.
int octahedral_compose(int s1, int s2);
int octahedral_inverse(int s);

// Group index of an exact signed permutation matrix; -1 if not a member.
int octahedral_index(const Mat3& r);

} // namespace framefield
