#include "spectral/lapack.hpp"

#include <lapacke.h>

#include <stdexcept>
#include <string>

#include "spectral/errors.hpp"

namespace spectral::lapack {

std::vector<double> sym_band_eig(int n, int kd, std::vector<double> band) {
    std::vector<double> w(n);
    int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'L', n, kd, band.data(), kd + 1, w.data(),
                              nullptr, 1);
    if (info != 0) throw std::runtime_error("dsbevd failed, info=" + std::to_string(info));
    return w;
}

void sym_band_eig(int n, int kd, std::vector<double> band, std::vector<double>& values,
                  std::vector<double>& vectors) {
    values.assign(n, 0.0);
    vectors.assign(static_cast<size_t>(n) * n, 0.0);
    int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'V', 'L', n, kd, band.data(), kd + 1,
                              values.data(), vectors.data(), n);
    if (info != 0) throw std::runtime_error("dsbevd failed, info=" + std::to_string(info));
}

std::vector<std::complex<double>> banded_solve(int n, int kl, int ku,
                                               const std::vector<std::complex<double>>& packed,
                                               std::vector<std::complex<double>> rhs, int nrhs) {
    std::vector<std::complex<double>> ab = packed;
    std::vector<lapack_int> ipiv(n);
    int info = LAPACKE_zgbsv(LAPACK_COL_MAJOR, n, kl, ku, nrhs,
                             reinterpret_cast<lapack_complex_double*>(ab.data()),
                             2 * kl + ku + 1, ipiv.data(),
                             reinterpret_cast<lapack_complex_double*>(rhs.data()), n);
    if (info != 0) throw SingularSystem("zgbsv failed, info=" + std::to_string(info));
    return rhs;
}

std::vector<std::complex<double>> dense_eig(int n, std::vector<double> a_rowmajor) {
    std::vector<double> wr(n), wi(n);
    int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a_rowmajor.data(), n, wr.data(),
                             wi.data(), nullptr, n, nullptr, n);
    if (info != 0) throw std::runtime_error("dgeev failed, info=" + std::to_string(info));
    std::vector<std::complex<double>> e(n);
    for (int i = 0; i < n; ++i) e[i] = {wr[i], wi[i]};
    return e;
}

std::vector<std::complex<double>> dense_eig(int n, std::vector<std::complex<double>> a_rowmajor) {
    std::vector<std::complex<double>> w(n);
    int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'N', n,
                             reinterpret_cast<lapack_complex_double*>(a_rowmajor.data()), n,
                             reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, n,
                             nullptr, n);
    if (info != 0) throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
    return w;
}

double largest_singular_value(int m, int n, std::vector<double> a_rowmajor) {
    if (m == 0 || n == 0) return 0.0;
    std::vector<double> s(std::min(m, n));
    std::vector<double> superb(std::max(1, std::min(m, n) - 1));
    int info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'N', 'N', m, n, a_rowmajor.data(), n, s.data(),
                              nullptr, m, nullptr, n, superb.data());
    if (info != 0) throw std::runtime_error("dgesvd failed, info=" + std::to_string(info));
    return s[0];
}

}  // namespace spectral::lapack
