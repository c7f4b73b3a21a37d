#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "spectral/measures.hpp"
#include "spectral/renorm_poly.hpp"
#include "spectral/renorm_rational.hpp"

namespace spectral {

// Either covering family of the transfer machinery.
using CoveringMap = std::variant<RationalCovering, ExpandingPolynomial>;

int covering_degree(const CoveringMap& cov);
double covering_base_point(const CoveringMap& cov);  // seed of inverse iteration

// All d preimages of x, with multiplicity.
std::vector<std::complex<double>> preimages(const CoveringMap& cov, std::complex<double> x);

// Real preimages, ascending.  In the expanding regime every preimage of a
// point of the invariant interval is real; `ok` turns false otherwise.
std::vector<double> real_preimages(const CoveringMap& cov, double x, bool* ok = nullptr);

// L^* nu: every atom splits into its d preimages with weight/d each.
DiscreteMeasure pushforward(const DiscreteMeasure& nu, const CoveringMap& cov);

// Moments of L^* nu from moments of nu (exact polynomial identities through
// preimage power sums).
MomentVector moment_pushforward(const MomentVector& m, const CoveringMap& cov);

struct SampleResult {
    std::vector<double> samples;
    long off_regime_events = 0;  // non-real branch encountered
};

// n_samples i.i.d.-in-the-limit draws from the balanced measure: uniform
// random inverse-branch iteration, n_steps deep, from the map's base point.
// Deterministic given seed.
SampleResult backward_orbit_sample(const CoveringMap& cov, int n_steps, long n_samples,
                                   std::uint64_t seed);

// Moments of the eigen-measure L^* mu = mu, solved degree by degree.
MomentVector invariant_moments(const CoveringMap& cov, int K);

struct RuelleEigen {
    double rho1 = 0, rho2 = 0;
    DiscreteMeasure sigma1, sigma2;
    int iterations1 = 0, iterations2 = 0;
    bool converged1 = false, converged2 = false;
};

// Weighted Ruelle eigen-pairs (L_A f)(x) = sum_{T(y)=x} f(y)/A(y)^2 for the
// factorization T' = A1 A2; A1 collects the critical points flagged in
// `split_mask` (A1 = 1 when the mask is empty).  Power iteration of the
// adjoint on the depth-level preimage-tree cells of [-xi, xi].
RuelleEigen weighted_ruelle_eigen(const ExpandingPolynomial& T,
                                  const std::vector<bool>& split_mask, int depth, double tol,
                                  int max_iter = 10000);

}  // namespace spectral
