#pragma once

#include <complex>
#include <vector>

#include "spectral/banded.hpp"
#include "spectral/measures.hpp"

namespace spectral {

// Rational double covering pi(v) = tau*v - c/v, tau > 1, c > 0.
// c = tau-1 is the normalized case with positive fixed point v = 1.
struct RationalCovering {
    double tau = 2.0;
    double c = 1.0;

    RationalCovering() = default;
    RationalCovering(double tau_, double c_) : tau(tau_), c(c_) {
        if (!(tau > 1.0) || !(c > 0.0)) throw InvalidInput("RationalCovering: need tau>1, c>0");
    }
    static RationalCovering normalized(double tau_) { return {tau_, tau_ - 1.0}; }

    double eval(double v) const { return tau * v - c / v; }
    std::complex<double> eval(std::complex<double> v) const { return tau * v - c / v; }
    // positive fixed point pi(xi) = xi
    double fixed_point() const { return std::sqrt(c / (tau - 1.0)); }
    // the two preimages of x: roots of tau v^2 - x v - c = 0
    std::pair<std::complex<double>, std::complex<double>> preimages(
        std::complex<double> x) const {
        std::complex<double> disc = std::sqrt(x * x + 4.0 * tau * c);
        return {(x + disc) / (2.0 * tau), (x - disc) / (2.0 * tau)};
    }
};

// The half-line renormalization transform: factor A^2 + 4 tau c = Phi^* Phi, form
// A_* = Phi A Phi^{-1} and interleave [[A, Phi^*], [Phi, A_*]] / (2 tau).
// Input must be a half-line window with the cyclic-vector convention at 0.
BandedWindow pi_star(const BandedWindow& a, const RationalCovering& cov);

// lambda_n from the forward recursion
//   lambda_n^2 = 4 tau c + p_{n+1}^2 + p_n^2 - p_n^2 p_{n-1}^2 / lambda_{n-2}^2
// with lambda_0^2 = p_1^2 + 4 tau c, lambda_1^2 = p_1^2 + p_2^2 + 4 tau c.
// Equals the Cholesky diagonal of A^2 + 4 tau c for the zero-diagonal Jacobi
// matrix with off-diagonals p; p[i] couples sites i and i+1.
std::vector<double> lambda_sequence(const std::vector<double>& p, const RationalCovering& cov);

// Iterates A_{n+1} = pi^*(A_n), truncating each step to the leading
// window x window block; returns all snapshots (a0 excluded).
std::vector<BandedWindow> iterate_renorm(const BandedWindow& a0, const RationalCovering& cov,
                                         int steps, int window);

// Moments of L^* nu from moments of nu: m_k(mu) = int (1/2) s_k(x) dnu(x)
// where s_k are preimage power sums, s_k = (x/tau) s_{k-1} + (c/tau) s_{k-2}.
MomentVector moment_pushforward(const MomentVector& m, const RationalCovering& cov);

// |<0|(pi^*(a)-z)^{-1}|0> - int (x - 2 tau z) dnu(x) / (2(tau z^2 - x z - c))|
// with nu the exact spectral measure of the window at |0>.  Exact in finite
// dimensions up to roundoff.
double resolvent_identity_residual(const BandedWindow& a, const RationalCovering& cov,
                                   std::complex<double> z);

// Residual of the compressed-resolvent relation for the rational covering:
// V^*(z - pi^*(a))^{-1} V = 1/(2z) + (pi'(z)/2) (pi(z) - a)^{-1}, V|k> = |2k>.
double compressed_resolvent_residual(const BandedWindow& a, const RationalCovering& cov,
                                     std::complex<double> z);

// Period-two five-diagonal operator window of the rational family:
//   lambda^(2) alternates (xi2/(2 tau), 0),
//   tau l0p1 l1p1 = -(xi2/2) l0p0 = (xi2/2) l1p0,
//   (l0p0)^2 + (l0p1)^2 + (l1p1)^2 = c/tau.
// free_param is lambda_0^(1); the diagonal sign is fixed positive.
BandedWindow period_two_rational(double xi2, const RationalCovering& cov, double free_param,
                                 int n = 400);

// <0|a^k|0> for k = 0..K read off the top rows of a half-line window.
MomentVector window_moments(const BandedWindow& a, int K);

// Verifies the basis/coefficient duality: the coefficient matrix [c^k_j] of
// the orthonormal polynomials of (x^2 + 4 tau c) dnu expanded in those of nu
// is Phi^{-1}.  Returns max |Phi C - I| over the leading block.
double basis_duality_residual(const BandedWindow& a, const RationalCovering& cov);

}  // namespace spectral
