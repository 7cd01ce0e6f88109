#pragma once

// Built-in verification of the rotation machinery: coefficient rotation
// orthogonality, octahedral invariance of the reference coefficients,
// finite-difference agreement of the linearization generators, and the
// coefficient-vs-function rotation sampling oracle.

#include <string>
#include <vector>

#include "framefield/sh.hpp"

namespace framefield {

struct SelftestCheck {
    std::string name;
    bool pass = false;
    std::string detail; // worst observed error, as text
};

// Runs the whole suite deterministically. A non-null override substitutes
// the linearization generators, which lets tests prove that a corrupted
// constant is caught by the finite-difference check.
std::vector<SelftestCheck> run_selftest(const Generators* override_generators = nullptr);

} // namespace framefield
