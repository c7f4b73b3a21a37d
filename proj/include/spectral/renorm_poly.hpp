#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectral/banded.hpp"
#include "spectral/poly.hpp"

namespace spectral {

// Monic real expanding polynomial with real critical data and a reference
// spectral interval [-xi, xi].
struct ExpandingPolynomial {
    poly::Coeffs coeffs;                  // descending, coeffs[0] == 1
    double xi = 1.0;
    std::vector<double> critical_points;  // ascending roots of T'
    std::vector<double> critical_values;  // T at the critical points

    static ExpandingPolynomial make(poly::Coeffs coeffs, double xi);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double eval(double x) const { return poly::eval(coeffs, x); }
    std::complex<double> eval(std::complex<double> x) const { return poly::eval(coeffs, x); }

    // min_i |t_i| - xi; the expanding regime of the run holds when positive.
    double expanding_margin() const;
    bool expanding() const { return expanding_margin() > 0; }
};

// One sign per critical point, ordered like critical_points.
struct SignVector {
    std::vector<int> delta;
    static SignVector all_minus(int count) { return {std::vector<int>(count, -1)}; }
};

enum class HalfSide { minus, plus };

// Half-line resolvent r_-(z, s) = <s|(J_-(s) - z)^{-1}|s> (or the mirrored
// r_+).  Periodic data is resolved through the fixed point of the one-period
// Moebius map, taking the attracting root (the branch decaying like -1/z);
// finite data uses the truncated continued fraction over the stored depth.
double half_line_resolvent(const JacobiCoeffs& j, double z, long s, HalfSide side);

// The monic degree-d interpolation target T^{(s)} of the delta-branch.
poly::Coeffs branch_targets(const JacobiCoeffs& j, const ExpandingPolynomial& T,
                            const SignVector& delta, long s);

// A d x d Jacobi block recovered from <0|(z-B)^{-1}|0> = (T'(z)/d)/Ts(z).
struct JacobiBlock {
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> nodes;    // block spectrum
    std::vector<double> weights;  // spectral weights at the cyclic vector
};
JacobiBlock block_from_resolvent(const poly::Coeffs& Ts, const ExpandingPolynomial& T);

// Coefficients of the renormalized two-sided Jacobi matrix J(delta, jt):
// blocks J^{(s)} on the diagonal, inter-block coupling p_{sd+d} chosen so the
// product over a block equals the coarse off-diagonal.  Periodic input of
// period P yields periodic output of period d*P.
JacobiCoeffs renormalized_coeffs(const JacobiCoeffs& jt, const ExpandingPolynomial& T,
                                 const SignVector& delta);

// Window of the renormalized operator over blocks s_lo .. s_lo + s_count - 1.
BandedWindow assemble_renormalized(const JacobiCoeffs& jt, const ExpandingPolynomial& T,
                                   const SignVector& delta, long s_lo, int s_count);

struct RenormResiduals {
    double eq_t01 = 0;
    double eq_re1 = 0;
    double eq_re2 = 0;
};

// Interior residuals of the renormalization identities at a probe point:
//   eq_t01:  V^*(z-J)^{-1}V = (T'(z)/d) (T(z)-Jt)^{-1}
//   eq_re1:  V^* T(J) = Jt V^*
//   eq_re2:  V^* [(T(z)-T(J))/(z-J)] V = (T'(z)/d) I
// `J` is a window whose global offset is a multiple of d; V|k> = |kd>.
RenormResiduals renorm_residuals(const BandedWindow& J, const JacobiCoeffs& jt,
                                 const ExpandingPolynomial& T, std::complex<double> z);

struct BranchResult {
    SignVector delta;
    std::optional<JacobiCoeffs> coeffs;  // empty if the branch is invalid
    std::string error;
};

struct BranchEnumeration {
    std::vector<BranchResult> branches;
    // max |difference| over one period for each valid pair, keyed by indices
    std::vector<std::pair<std::pair<int, int>, double>> pair_distances;
    int valid_count = 0;
};
BranchEnumeration enumerate_branches(const JacobiCoeffs& jt, const ExpandingPolynomial& T);

// Residual of S^{d-1} J_tau S^{1-d} = J(Jt_tau, -delta) where (J_tau)(i,j) =
// J(1-i, 1-j).  Compared entrywise over one period of the coefficients.
double dual_delta_check(const JacobiCoeffs& jt, const ExpandingPolynomial& T,
                        const SignVector& delta);

// Darboux transform for T(z) = rho (z^2 - 1) + 1:  with Phi^* Phi =
// (J - T(0))/rho, returns rho Phi Phi^* + T(0).  Exactly isospectral on the
// window.
BandedWindow darboux(const BandedWindow& J, double rho);

struct QuadraticSplit {
    BandedWindow phi;      // odd-even block of the even/odd reordering
    double residual = 0;   // max |diagonal block entry|
};
// Even/odd reordering of a zero-diagonal window into [[0, Phi^*], [Phi, 0]].
QuadraticSplit quadratic_split(const BandedWindow& J);

struct LipschitzReport {
    double max_ratio = 0;
    std::vector<double> per_pair;
};
// ||J(delta,jt1) - J(delta,jt2)|| / ||jt1 - jt2|| on interior windows.
LipschitzReport empirical_lipschitz(const ExpandingPolynomial& T,
                                    const std::vector<std::pair<JacobiCoeffs, JacobiCoeffs>>& pairs,
                                    const SignVector& delta, int window = 200);

// Period-two family of the quadratic covering z^2 - lam:
//   p0 p1 = xi1/2,  q = (t, -t),  t = sqrt(lam - p0^2 - p1^2).
JacobiCoeffs period_two_polynomial(double xi1, double lam, double p0);

}  // namespace spectral
