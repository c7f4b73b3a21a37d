#include "spectral/banded.hpp"

#include "spectral/lapack.hpp"

namespace spectral {

BandedWindow jacobi_window(const JacobiCoeffs& jc, long offset, int n, Side side) {
    BandedWindow r(offset, n, 1, side);
    for (int i = 0; i < n; ++i) {
        long g = offset + i;
        r.set(i, i, jc.q_at(g));
        if (i + 1 < n) {
            double p = jc.p_at(g);
            r.set(i, i + 1, p);
            r.set(i + 1, i, p);
        }
    }
    return r;
}

BandedWindow shift_window(int n, int k, Side side) {
    BandedWindow r(0, n, std::abs(k), side);
    for (int i = 0; i < n; ++i)
        if (i + k >= 0 && i + k < n) r.set(i, i + k, 1.0);
    return r;
}

BandedWindow identity_window(int n, Side side) {
    BandedWindow r(0, n, 0, side);
    for (int i = 0; i < n; ++i) r.set(i, i, 1.0);
    return r;
}

BandedWindow cholesky_upper(const BandedWindow& a) {
    const int n = a.n(), w = a.w();
    // a = Phi^* Phi, Phi upper:  a(i,j) = sum_{k <= min(i,j)} Phi(k,i) Phi(k,j).
    // Row i of Phi follows from rows i-w..i-1 and row i of a.
    BandedWindow phi(a.offset(), n, w, a.side());
    for (int i = 0; i < n; ++i) {
        double d = a.at(i, i);
        for (int k = std::max(0, i - w); k < i; ++k) {
            double v = phi.at(k, i);
            d -= v * v;
        }
        if (!(d > 0)) throw NotPositiveDefinite(i);
        const double pii = std::sqrt(d);
        phi.set(i, i, pii);
        for (int j = i + 1; j <= std::min(n - 1, i + w); ++j) {
            double s = a.at(i, j);
            for (int k = std::max(0, j - w); k < i; ++k) s -= phi.at(k, i) * phi.at(k, j);
            phi.set(i, j, s / pii);
        }
    }
    // Forward recursion: row i only reads rows above, so exactness is kept
    // wherever the input was exact from the top down.
    int top = a.dirty_top() == 0 ? 0 : n;
    phi.set_margins(top, a.dirty_bottom());
    return phi;
}

BandedWindow similarity_forward(const BandedWindow& phi, const BandedWindow& a) {
    if (phi.n() != a.n() || phi.offset() != a.offset())
        throw InvalidInput("similarity_forward: window mismatch");
    const int n = a.n();
    const int w = phi.w();
    BandedWindow b = band_mul(phi, a);  // b = Phi A
    const int wout = std::min(b.w(), n > 0 ? n - 1 : 0);
    BandedWindow astar(a.offset(), n, wout, a.side());
    // Solve A_* Phi = Phi A column by column: Phi(k, j) != 0 for k in [j-w, j].
    for (int j = 0; j < n; ++j) {
        const double pjj = phi.at(j, j);
        if (pjj == 0.0) throw SingularSystem("similarity_forward: zero pivot on phi diagonal");
        for (int i = std::max(0, j - wout); i <= std::min(n - 1, j + wout); ++i) {
            double s = b.at(i, j);
            for (int k = std::max(0, j - w); k < j; ++k) s -= astar.at(i, k) * phi.at(k, j);
            astar.set(i, j, s / pjj);
        }
    }
    astar.set_margins(b.dirty_top(), std::min(n, a.dirty_bottom() + 2 * w));
    return astar;
}

namespace {

template <typename T>
std::complex<double> resolvent_entry_impl(const BandedWindowT<T>& a, std::complex<double> z,
                                          int i, int j) {
    const int n = a.n(), w = a.w();
    if (i < 0 || i >= n || j < 0 || j >= n) throw InvalidInput("resolvent_entry: index range");
    const int kl = w, ku = w;
    std::vector<std::complex<double>> packed(static_cast<size_t>(2 * kl + ku + 1) * n,
                                             std::complex<double>(0));
    for (int r = 0; r < n; ++r)
        for (int c = std::max(0, r - w); c <= std::min(n - 1, r + w); ++c) {
            std::complex<double> v = a.at(r, c);
            if (r == c) v -= z;
            packed[lapack::gbsv_index(kl, ku, r, c)] = v;
        }
    std::vector<std::complex<double>> rhs(n, 0.0);
    rhs[j] = 1.0;
    auto x = lapack::banded_solve(n, kl, ku, packed, std::move(rhs));
    return x[i];
}

}  // namespace

std::complex<double> resolvent_entry(const BandedWindow& a, std::complex<double> z, int i,
                                     int j) {
    return resolvent_entry_impl(a, z, i, j);
}

std::complex<double> resolvent_entry(const ComplexBandedWindow& a, std::complex<double> z, int i,
                                     int j) {
    return resolvent_entry_impl(a, z, i, j);
}

namespace {

std::vector<double> lower_band_storage(const BandedWindow& a) {
    const int n = a.n(), w = a.w();
    std::vector<double> band(static_cast<size_t>(w + 1) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = j; i <= std::min(n - 1, j + w); ++i)
            band[static_cast<size_t>(i - j) + static_cast<size_t>(j) * (w + 1)] = a.at(i, j);
    return band;
}

}  // namespace

std::vector<double> eigenvalues(const BandedWindow& a) {
    return lapack::sym_band_eig(a.n(), a.w(), lower_band_storage(a));
}

EigenSystem eigen_system(const BandedWindow& a) {
    EigenSystem es;
    es.n = a.n();
    lapack::sym_band_eig(a.n(), a.w(), lower_band_storage(a), es.values, es.vectors);
    return es;
}

double operator_norm_window(const BandedWindow& a, int lo, int hi) {
    lo = std::max(lo, 0);
    hi = std::min(hi, a.n());
    const int m = hi - lo;
    if (m <= 0) return 0.0;
    std::vector<double> d(static_cast<size_t>(m) * m, 0.0);
    for (int i = lo; i < hi; ++i)
        for (int j = std::max(lo, i - a.w()); j < std::min(hi, i + a.w() + 1); ++j)
            d[static_cast<size_t>(i - lo) * m + (j - lo)] = a.at(i, j);
    return lapack::largest_singular_value(m, m, std::move(d));
}

}  // namespace spectral
