#pragma once

#include <complex>
#include <vector>

namespace spectral::lapack {

// Symmetric banded eigenvalues (ascending). `band` is column-major lower
// band storage: band[(i - j) + j*(kd+1)] = a(i,j), j <= i <= j+kd.
std::vector<double> sym_band_eig(int n, int kd, std::vector<double> band);

// Same, also returning eigenvectors (column-major n x n).
void sym_band_eig(int n, int kd, std::vector<double> band, std::vector<double>& values,
                  std::vector<double>& vectors);

// General banded solve a*X = rhs, complex double; rhs holds nrhs columns
// column-major (column j at offset j*n).  Caller fills `packed` in LAPACK
// gbsv layout via gbsv_index below.
std::vector<std::complex<double>> banded_solve(int n, int kl, int ku,
                                               const std::vector<std::complex<double>>& packed,
                                               std::vector<std::complex<double>> rhs,
                                               int nrhs = 1);

// Packed gbsv layout index for entry (i, j): row kl+ku+i-j, col j,
// leading dimension 2*kl+ku+1 (column-major).
inline size_t gbsv_index(int kl, int ku, int i, int j) {
    return static_cast<size_t>(kl + ku + i - j) + static_cast<size_t>(j) * (2 * kl + ku + 1);
}

// Eigenvalues of a dense real matrix (row-major), unordered.
std::vector<std::complex<double>> dense_eig(int n, std::vector<double> a_rowmajor);

// Eigenvalues of a dense complex matrix (row-major), unordered.
std::vector<std::complex<double>> dense_eig(int n, std::vector<std::complex<double>> a_rowmajor);

// Largest singular value of a dense real matrix (row-major) of size m x n.
double largest_singular_value(int m, int n, std::vector<double> a_rowmajor);

}  // namespace spectral::lapack
