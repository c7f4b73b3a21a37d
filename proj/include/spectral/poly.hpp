#pragma once

#include <complex>
#include <vector>

namespace spectral::poly {

// Real polynomial, coefficients descending: c[0] z^n + ... + c[n].
using Coeffs = std::vector<double>;

double eval(const Coeffs& c, double x);
std::complex<double> eval(const Coeffs& c, std::complex<double> x);
Coeffs derivative(const Coeffs& c);
Coeffs mul(const Coeffs& a, const Coeffs& b);
Coeffs add(const Coeffs& a, const Coeffs& b);
Coeffs scale(const Coeffs& a, double s);
Coeffs from_roots(const std::vector<double>& roots);

// Quotient of c by (z - r); exact when r is a root (remainder dropped).
Coeffs deflate(const Coeffs& c, double r);

// Quotient q with c(z) - c(r) = (z - r) q(z), complex node.
std::vector<std::complex<double>> divided_difference(const Coeffs& c, std::complex<double> r);

// All roots via companion-matrix eigenvalues.
std::vector<std::complex<double>> roots(const Coeffs& c);

}  // namespace spectral::poly
