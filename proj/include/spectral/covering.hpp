#pragma once

#include <complex>
#include <vector>

#include "spectral/errors.hpp"

namespace spectral {

// Permutation of {0..d-1}, stored as the image list.
using Perm = std::vector<int>;

Perm perm_identity(int d);
Perm perm_mul(const Perm& a, const Perm& b);  // (a*b)(x) = b(a(x)): apply a first
Perm perm_inverse(const Perm& a);
int perm_cycle_count(const Perm& a);
std::vector<int> perm_cycle_type(const Perm& a);  // cycle lengths, descending
bool is_permutation(const Perm& a);

// Branching divisor of a degree-d ramified covering of the sphere:
// finite branch points with one monodromy permutation each.
struct BranchingData {
    int degree = 0;
    std::vector<std::complex<double>> points;
    std::vector<Perm> sigmas;
};

// sigma_infinity = (sigma_1 ... sigma_N)^{-1}, so the product over all
// branch points including infinity is the identity by construction.
Perm sigma_infinity(const BranchingData& b);

struct CoveringValidation {
    bool connected = false;
    std::vector<int> infinity_orbits;  // cycle type of sigma_infinity = pole multiplicities
    int genus = 0;
};

// Transitivity of <sigma_i>, pole structure over infinity, Riemann-Hurwitz genus.
CoveringValidation validate(const BranchingData& b);

// True iff some simultaneous relabeling rho conjugates every sigma of b1 into
// the matching sigma of b2.  Brute force over the symmetric group, d <= 8.
bool equivalent(const BranchingData& b1, const BranchingData& b2);

}  // namespace spectral
