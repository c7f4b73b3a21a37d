#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "spectral/errors.hpp"

namespace spectral {

enum class Side { half_line, whole_line };

// Finite index-window of a (semi-)infinite banded operator.
//
// Rows are stored row-major, 2w+1 slots per row; slot w+d of row i holds
// entry (i, i+d), d in [-w, w].  `offset` is the global index of row 0.
//
// Exactness margins: rows [dirty_top, n - dirty_bottom) are guaranteed to
// coincide with the corresponding rows of the infinite operator the window
// was cut from.  Operations grow the dirty margins by their bandwidth reach;
// a half-line window with offset 0 has a genuine boundary at the top, so its
// top margin never grows from band reach alone.
template <typename T>
class BandedWindowT {
public:
    BandedWindowT() = default;
    BandedWindowT(long offset, int n, int w, Side side)
        : offset_(offset), n_(n), w_(std::min(w, n > 0 ? n - 1 : 0)), side_(side),
          data_(static_cast<size_t>(n) * (2 * static_cast<size_t>(w_) + 1), T(0)) {
        if (n < 0 || w < 0) throw InvalidInput("BandedWindow: negative size or bandwidth");
    }

    long offset() const { return offset_; }
    int n() const { return n_; }
    int w() const { return w_; }
    Side side() const { return side_; }

    int dirty_top() const { return dirty_top_; }
    int dirty_bottom() const { return dirty_bottom_; }
    void set_margins(int top, int bottom) {
        dirty_top_ = std::clamp(top, 0, n_);
        dirty_bottom_ = std::clamp(bottom, 0, n_);
    }

    bool in_band(int i, int j) const {
        return i >= 0 && i < n_ && j >= 0 && j < n_ && std::abs(i - j) <= w_;
    }

    T at(int i, int j) const {
        if (!in_band(i, j)) return T(0);
        return data_[static_cast<size_t>(i) * (2 * w_ + 1) + (j - i + w_)];
    }

    void set(int i, int j, T v) {
        if (!in_band(i, j)) {
            if (v != T(0)) throw InvalidInput("BandedWindow::set outside band");
            return;
        }
        data_[static_cast<size_t>(i) * (2 * w_ + 1) + (j - i + w_)] = v;
    }

    void add(int i, int j, T v) { set(i, j, at(i, j) + v); }

    // Conjugate transpose; margins carry over (column exactness mirrors rows
    // within the band reach, tracked conservatively).
    BandedWindowT adjoint() const {
        BandedWindowT r(offset_, n_, w_, side_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - w_); j <= std::min(n_ - 1, i + w_); ++j)
                r.set(j, i, conj_of(at(i, j)));
        r.set_margins(std::min(n_, dirty_top_ + w_), std::min(n_, dirty_bottom_ + w_));
        return r;
    }

    double norm_max() const {
        double m = 0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    // Largest |entry(i,j) - conj(entry(j,i))| over rows [r0, r1).
    double max_asymmetry(int r0 = 0, int r1 = -1) const {
        if (r1 < 0) r1 = n_;
        double m = 0;
        for (int i = r0; i < r1; ++i)
            for (int j = std::max(r0, i - w_); j < std::min(r1, i + w_ + 1); ++j)
                m = std::max(m, std::abs(at(i, j) - conj_of(at(j, i))));
        return m;
    }

    void hermitize() {
        for (int i = 0; i < n_; ++i)
            for (int j = i; j <= std::min(n_ - 1, i + w_); ++j) {
                T v = (at(i, j) + conj_of(at(j, i))) / 2.0;
                set(i, j, v);
                set(j, i, conj_of(v));
            }
    }

    // Leading m x m block.  Stored entries are unchanged by the cut, so the
    // margins only shrink by the removed rows.
    BandedWindowT leading(int m) const {
        m = std::min(m, n_);
        BandedWindowT r(offset_, m, std::min(w_, m - 1), side_);
        for (int i = 0; i < m; ++i)
            for (int j = std::max(0, i - r.w()); j <= std::min(m - 1, i + r.w()); ++j)
                r.set(i, j, at(i, j));
        r.set_margins(dirty_top_, std::max(0, dirty_bottom_ - (n_ - m)));
        return r;
    }

    BandedWindowT scaled(T s) const {
        BandedWindowT r = *this;
        for (auto& v : r.data_) v *= s;
        return r;
    }

    // Copy with the outer diagonals beyond wnew dropped.
    BandedWindowT band_trimmed(int wnew) const {
        wnew = std::min(wnew, w_);
        BandedWindowT r(offset_, n_, wnew, side_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - wnew); j <= std::min(n_ - 1, i + wnew); ++j)
                r.set(i, j, at(i, j));
        r.set_margins(dirty_top_, dirty_bottom_);
        return r;
    }

    void shift_diagonal(T s) {
        for (int i = 0; i < n_; ++i) set(i, i, at(i, i) + s);
    }

    std::vector<T> dense() const {
        std::vector<T> d(static_cast<size_t>(n_) * n_, T(0));
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - w_); j <= std::min(n_ - 1, i + w_); ++j)
                d[static_cast<size_t>(i) * n_ + j] = at(i, j);
        return d;
    }

    static double abs_of(T v) { return std::abs(v); }
    static T conj_of(T v) {
        if constexpr (std::is_same_v<T, std::complex<double>>)
            return std::conj(v);
        else
            return v;
    }

private:
    long offset_ = 0;
    int n_ = 0;
    int w_ = 0;
    Side side_ = Side::half_line;
    int dirty_top_ = 0;
    int dirty_bottom_ = 0;
    std::vector<T> data_;
};

using BandedWindow = BandedWindowT<double>;
using ComplexBandedWindow = BandedWindowT<std::complex<double>>;

// Off-diagonal p (positive) and diagonal q of a Jacobi matrix.
// p[i] couples sites i and i+1: J(k, k+1) = p_at(k), J(k, k) = q_at(k).
// Periodic data wraps both indices modulo the period (valid for k < 0 too).
struct JacobiCoeffs {
    std::vector<double> p;
    std::vector<double> q;
    std::optional<int> period;

    JacobiCoeffs() = default;
    JacobiCoeffs(std::vector<double> p_, std::vector<double> q_,
                 std::optional<int> period_ = std::nullopt)
        : p(std::move(p_)), q(std::move(q_)), period(period_) {
        for (double v : p)
            if (!(v > 0)) throw InvalidInput("JacobiCoeffs: off-diagonals must be positive");
        if (period) {
            if (*period <= 0 || p.size() != static_cast<size_t>(*period) ||
                q.size() != static_cast<size_t>(*period))
                throw InvalidInput("JacobiCoeffs: periodic data must have length = period");
        }
    }

    static long mod(long k, long m) { return ((k % m) + m) % m; }

    double p_at(long k) const {
        if (period) return p[mod(k, *period)];
        if (k < 0 || k >= static_cast<long>(p.size()))
            throw InvalidInput("JacobiCoeffs: p index out of range");
        return p[k];
    }
    double q_at(long k) const {
        if (period) return q[mod(k, *period)];
        if (k < 0 || k >= static_cast<long>(q.size()))
            throw InvalidInput("JacobiCoeffs: q index out of range");
        return q[k];
    }
};

// Tridiagonal window of a Jacobi operator; rows offset..offset+n-1.
BandedWindow jacobi_window(const JacobiCoeffs& jc, long offset, int n, Side side);

// Window of the shift power S^k (ones on the k-th superdiagonal for k > 0).
BandedWindow shift_window(int n, int k, Side side = Side::whole_line);

BandedWindow identity_window(int n, Side side = Side::half_line);

// Banded product a*b.  Bandwidth adds, exact margins shrink by the other
// factor's band reach.
template <typename T>
BandedWindowT<T> band_mul(const BandedWindowT<T>& a, const BandedWindowT<T>& b) {
    if (a.offset() != b.offset()) throw InvalidInput("band_mul: offset mismatch");
    if (a.n() != b.n()) throw InvalidInput("band_mul: size mismatch");
    const int n = a.n();
    const int w = std::min(a.w() + b.w(), n > 0 ? n - 1 : 0);
    BandedWindowT<T> r(a.offset(), n, w, a.side());
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - w), jhi = std::min(n - 1, i + w);
        for (int j = jlo; j <= jhi; ++j) {
            const int klo = std::max({0, i - a.w(), j - b.w()});
            const int khi = std::min({n - 1, i + a.w(), j + b.w()});
            T s(0);
            for (int k = klo; k <= khi; ++k) s += a.at(i, k) * b.at(k, j);
            r.set(i, j, s);
        }
    }
    const bool genuine_top = (a.side() == Side::half_line && a.offset() == 0);
    int top = std::max(a.dirty_top(),
                       (b.dirty_top() == 0 && genuine_top) ? 0 : b.dirty_top() + a.w());
    int bottom = std::max(a.dirty_bottom(), b.dirty_bottom() + a.w());
    r.set_margins(top, bottom);
    return r;
}

// Upper-triangular Cholesky factor: a = Phi^* Phi with positive diagonal.
// The recursion is strictly forward, so the factor matches the infinite
// operator's factor on every row the input was exact on.
BandedWindow cholesky_upper(const BandedWindow& a);

// Solves A_* Phi = Phi A column-forward within the band (A_* = Phi A Phi^{-1}
// without a global inverse).
BandedWindow similarity_forward(const BandedWindow& phi, const BandedWindow& a);

// <i|(a - z)^{-1}|j> of the window, via banded LU of (a - z).
std::complex<double> resolvent_entry(const BandedWindow& a, std::complex<double> z, int i, int j);
std::complex<double> resolvent_entry(const ComplexBandedWindow& a, std::complex<double> z, int i,
                                     int j);

// All eigenvalues of a self-adjoint window, ascending.
std::vector<double> eigenvalues(const BandedWindow& a);

struct EigenSystem {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major, column k = eigenvector k
    int n = 0;
    double vector_entry(int i, int k) const { return vectors[static_cast<size_t>(k) * n + i]; }
};
EigenSystem eigen_system(const BandedWindow& a);

// 2N x 2N window with entry(2i+r, 2j+s) = scale * block[r][s](i, j).
template <typename T>
BandedWindowT<T> interleave(const BandedWindowT<T>& b00, const BandedWindowT<T>& b01,
                            const BandedWindowT<T>& b10, const BandedWindowT<T>& b11,
                            double scale) {
    const int N = b00.n();
    const BandedWindowT<T>* blocks[2][2] = {{&b00, &b01}, {&b10, &b11}};
    int wb = 0, dt = 0, db = 0;
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
            const auto& blk = *blocks[r][s];
            if (blk.n() != N) throw InvalidInput("interleave: block size mismatch");
            wb = std::max(wb, blk.w());
            dt = std::max(dt, blk.dirty_top());
            db = std::max(db, blk.dirty_bottom());
        }
    BandedWindowT<T> out(2 * b00.offset(), 2 * N, std::min(2 * wb + 1, 2 * N - 1), b00.side());
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
            const auto& blk = *blocks[r][s];
            for (int i = 0; i < N; ++i)
                for (int j = std::max(0, i - blk.w()); j <= std::min(N - 1, i + blk.w()); ++j) {
                    T v = blk.at(i, j);
                    if (v != T(0)) out.set(2 * i + r, 2 * j + s, T(scale) * v);
                }
        }
    out.set_margins(2 * dt, 2 * db);
    return out;
}

// max |entry| over the interior exact rows, restricted to |i-j| <= w.
template <typename T>
double interior_norm_max(const BandedWindowT<T>& a, int extra_margin = 0) {
    double m = 0;
    const int lo = a.dirty_top() + extra_margin;
    const int hi = a.n() - a.dirty_bottom() - extra_margin;
    for (int i = lo; i < hi; ++i)
        for (int j = std::max(lo, i - a.w()); j < std::min(hi, i + a.w() + 1); ++j)
            m = std::max(m, std::abs(a.at(i, j)));
    return m;
}

template <typename T>
BandedWindowT<T> band_sub(const BandedWindowT<T>& a, const BandedWindowT<T>& b) {
    if (a.offset() != b.offset() || a.n() != b.n())
        throw InvalidInput("band_sub: window mismatch");
    const int w = std::max(a.w(), b.w());
    BandedWindowT<T> r(a.offset(), a.n(), w, a.side());
    for (int i = 0; i < a.n(); ++i)
        for (int j = std::max(0, i - w); j <= std::min(a.n() - 1, i + w); ++j)
            r.set(i, j, a.at(i, j) - b.at(i, j));
    r.set_margins(std::max(a.dirty_top(), b.dirty_top()),
                  std::max(a.dirty_bottom(), b.dirty_bottom()));
    return r;
}

// Largest singular value of the dense restriction to rows/cols [lo, hi).
double operator_norm_window(const BandedWindow& a, int lo, int hi);

}  // namespace spectral
