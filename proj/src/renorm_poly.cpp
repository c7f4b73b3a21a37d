#include "spectral/renorm_poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "spectral/lapack.hpp"

namespace spectral {

ExpandingPolynomial ExpandingPolynomial::make(poly::Coeffs coeffs, double xi) {
    if (coeffs.size() < 2) throw InvalidInput("ExpandingPolynomial: degree must be >= 1");
    if (std::abs(coeffs[0] - 1.0) > 1e-12)
        throw InvalidInput("ExpandingPolynomial: polynomial must be monic");
    coeffs[0] = 1.0;
    ExpandingPolynomial T;
    T.coeffs = std::move(coeffs);
    T.xi = xi;
    auto dcoef = poly::derivative(T.coeffs);
    for (const auto& r : poly::roots(dcoef)) {
        if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r.real())))
            throw InvalidInput("ExpandingPolynomial: complex critical point, not expanding");
        T.critical_points.push_back(r.real());
    }
    std::sort(T.critical_points.begin(), T.critical_points.end());
    for (double c : T.critical_points) T.critical_values.push_back(T.eval(c));
    return T;
}

double ExpandingPolynomial::expanding_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (double t : critical_values) m = std::min(m, std::abs(t) - xi);
    return m;
}

namespace {

struct Moebius {
    // r -> (a r + b) / (c r + d)
    double a = 1, b = 0, c = 0, d = 1;
    Moebius compose(const Moebius& o) const {  // this after o
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    void normalize() {
        double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (s > 0) { a /= s; b /= s; c /= s; d /= s; }
    }
};

// Attracting fixed point of a hyperbolic Moebius map; the resolvent branch,
// being the limit of the truncated continued fraction, is always this one.
double attracting_fixed_point(const Moebius& m) {
    const double A = m.c, B = m.d - m.a, C = -m.b;
    if (std::abs(A) < 1e-300) {
        if (std::abs(B) < 1e-300) throw InvalidInput("half_line_resolvent: degenerate map");
        return -C / B;
    }
    const double disc = B * B - 4 * A * C;
    if (disc < 0)
        throw InvalidInput("half_line_resolvent: z inside spectrum (complex fixed points)");
    const double sq = std::sqrt(disc);
    // cancellation-free root pair: big root by the sign-matched formula,
    // small root from the product C/A
    const double big = (B >= 0 ? -B - sq : -B + sq) / (2 * A);
    const double r1 = big, r2 = (big == 0.0) ? -B / (2 * A) : C / (A * big);
    auto mult = [&](double r) {
        double den = m.c * r + m.d;
        return std::abs(m.a * m.d - m.b * m.c) / (den * den);
    };
    const double m1 = mult(r1), m2 = mult(r2);
    if (std::abs(m1 - m2) < 1e-12 * (m1 + m2)) return (r1 + r2) / 2;  // parabolic: band edge
    return m1 < m2 ? r1 : r2;
}

}  // namespace

double half_line_resolvent(const JacobiCoeffs& j, double z, long s, HalfSide side) {
    if (j.period) {
        const int P = *j.period;
        Moebius m;  // identity
        if (side == HalfSide::minus) {
            // r_k = 1/((q_k - z) - p_{k-1}^2 r_{k-1}), composed over one period
            for (int t = 0; t < P; ++t) {
                long k = s - t;
                Moebius step{0, 1, -j.p_at(k - 1) * j.p_at(k - 1), j.q_at(k) - z};
                m = (t == 0) ? step : m.compose(step);
                m.normalize();
            }
        } else {
            for (int t = 0; t < P; ++t) {
                long k = s + t;
                Moebius step{0, 1, -j.p_at(k) * j.p_at(k), j.q_at(k) - z};
                m = (t == 0) ? step : m.compose(step);
                m.normalize();
            }
        }
        return attracting_fixed_point(m);
    }
    // finite data: truncated continued fraction over the stored depth
    const long n = static_cast<long>(j.q.size());
    if (s < 0 || s >= n) throw InvalidInput("half_line_resolvent: index out of data range");
    double r = 0;
    if (side == HalfSide::minus) {
        for (long k = 0; k <= s; ++k) {
            double coupling = (k > 0) ? j.p_at(k - 1) : 0.0;
            r = 1.0 / (j.q_at(k) - z - coupling * coupling * r);
        }
    } else {
        for (long k = n - 1; k >= s; --k) {
            double coupling = (k < n - 1) ? j.p_at(k) : 0.0;
            r = 1.0 / (j.q_at(k) - z - coupling * coupling * r);
        }
    }
    return r;
}

poly::Coeffs branch_targets(const JacobiCoeffs& j, const ExpandingPolynomial& T,
                            const SignVector& delta, long s) {
    const int d = T.degree();
    const auto& crit = T.critical_points;
    if (delta.delta.size() != crit.size())
        throw InvalidInput("branch_targets: delta length must match critical point count");
    poly::Coeffs dT = poly::derivative(T.coeffs);
    poly::Coeffs ddT = poly::derivative(dT);
    const double qcoef = -T.coeffs[1] / d;

    // T^(s)(z) = (z - q) T'(z)/d + sum_c T'(z)/((z - c) T''(c)) * T^(s)(c)
    poly::Coeffs Ts = poly::scale(poly::mul({1.0, -qcoef}, dT), 1.0 / d);
    for (size_t ci = 0; ci < crit.size(); ++ci) {
        const double c = crit[ci];
        const double tc = T.critical_values[ci];
        double target;
        if (delta.delta[ci] == -1) {
            double r = half_line_resolvent(j, tc, s, HalfSide::minus);
            if (r == 0.0) throw BranchInvalid(s, static_cast<int>(ci), "vanishing resolvent");
            target = -1.0 / r;
        } else {
            double ptil = j.p_at(s);  // coarse coupling between sites s and s+1
            target = -ptil * ptil * half_line_resolvent(j, tc, s + 1, HalfSide::plus);
        }
        const double curv = poly::eval(ddT, c);
        if (std::abs(curv) < 1e-12)
            throw Unsupported("branch_targets: degenerate critical point (T''(c) = 0)");
        Ts = poly::add(Ts, poly::scale(poly::deflate(dT, c), target / curv));
    }
    return Ts;
}

JacobiBlock block_from_resolvent(const poly::Coeffs& Ts, const ExpandingPolynomial& T) {
    const int d = T.degree();
    poly::Coeffs dT = poly::derivative(T.coeffs);
    JacobiBlock blk;
    if (d == 1) {
        blk.diag = {-Ts.back()};
        blk.nodes = blk.diag;
        blk.weights = {1.0};
        return blk;
    }
    auto rts = poly::roots(Ts);
    std::vector<double> x;
    for (const auto& r : rts) {
        if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r.real())))
            throw BranchInvalid(-1, -1, "complex block spectrum");
        x.push_back(r.real());
    }
    std::sort(x.begin(), x.end());
    for (int i = 0; i + 1 < d; ++i)
        if (x[i + 1] - x[i] < 1e-9 * (1.0 + std::abs(x[i])))
            throw BranchInvalid(-1, -1, "repeated block spectrum");
    poly::Coeffs dTs = poly::derivative(Ts);
    std::vector<double> w(d);
    for (int i = 0; i < d; ++i) {
        w[i] = poly::eval(dT, x[i]) / d / poly::eval(dTs, x[i]);
        if (!(w[i] > 0)) throw BranchInvalid(-1, -1, "nonpositive spectral weight");
    }
    // Stieltjes: three-term recurrence of the orthonormal polynomials of the
    // discrete measure sum w_i delta_{x_i}
    blk.diag.assign(d, 0.0);
    blk.off.assign(d - 1, 0.0);
    double wsum = 0;
    for (double v : w) wsum += v;
    std::vector<double> pk(d, 1.0 / std::sqrt(wsum)), pkm1(d, 0.0);
    for (int k = 0; k < d; ++k) {
        double alpha = 0;
        for (int i = 0; i < d; ++i) alpha += w[i] * x[i] * pk[i] * pk[i];
        blk.diag[k] = alpha;
        if (k == d - 1) break;
        std::vector<double> v(d);
        for (int i = 0; i < d; ++i)
            v[i] = (x[i] - alpha) * pk[i] - (k > 0 ? blk.off[k - 1] * pkm1[i] : 0.0);
        double b2 = 0;
        for (int i = 0; i < d; ++i) b2 += w[i] * v[i] * v[i];
        if (!(b2 > 0)) throw BranchInvalid(-1, -1, "Stieltjes breakdown");
        blk.off[k] = std::sqrt(b2);
        pkm1 = pk;
        for (int i = 0; i < d; ++i) pk[i] = v[i] / blk.off[k];
    }
    blk.nodes = std::move(x);
    blk.weights = std::move(w);
    return blk;
}

JacobiCoeffs renormalized_coeffs(const JacobiCoeffs& jt, const ExpandingPolynomial& T,
                                 const SignVector& delta) {
    if (!jt.period) throw InvalidInput("renormalized_coeffs: periodic coarse data required");
    const int P = *jt.period;
    const int d = T.degree();
    std::vector<double> p(static_cast<size_t>(d) * P, 0.0);
    std::vector<double> q(static_cast<size_t>(d) * P, 0.0);
    for (int s = 0; s < P; ++s) {
        JacobiBlock blk;
        try {
            blk = block_from_resolvent(branch_targets(jt, T, delta, s), T);
        } catch (const BranchInvalid& e) {
            throw BranchInvalid(s, e.crit_index, e.what());
        }
        double prod = 1.0;
        for (int i = 0; i < d; ++i) {
            q[static_cast<size_t>(s) * d + i] = blk.diag[i];
            if (i < d - 1) {
                p[static_cast<size_t>(s) * d + i] = blk.off[i];
                prod *= blk.off[i];
            }
        }
        p[static_cast<size_t>(s) * d + d - 1] = jt.p_at(s) / prod;
    }
    return JacobiCoeffs(std::move(p), std::move(q), d * P);
}

BandedWindow assemble_renormalized(const JacobiCoeffs& jt, const ExpandingPolynomial& T,
                                   const SignVector& delta, long s_lo, int s_count) {
    JacobiCoeffs out = renormalized_coeffs(jt, T, delta);
    return jacobi_window(out, s_lo * T.degree(), s_count * T.degree(), Side::whole_line);
}

namespace {

// Windows of banded powers J^0..J^m (bandwidth grows m*w).
std::vector<BandedWindow> banded_powers(const BandedWindow& J, int m) {
    std::vector<BandedWindow> pw;
    BandedWindow id(J.offset(), J.n(), 0, J.side());
    for (int i = 0; i < J.n(); ++i) id.set(i, i, 1.0);
    pw.push_back(std::move(id));
    for (int k = 1; k <= m; ++k) pw.push_back(band_mul(pw[k - 1], J));
    return pw;
}

}  // namespace

RenormResiduals renorm_residuals(const BandedWindow& J, const JacobiCoeffs& jt,
                                 const ExpandingPolynomial& T, std::complex<double> z) {
    const int d = T.degree();
    const int N = J.n();
    if (J.offset() % d != 0)
        throw InvalidInput("renorm_residuals: window offset must be a multiple of d");
    const long t_lo = J.offset() / d;
    const int nT = N / d;
    BandedWindow Jt = jacobi_window(jt, t_lo, nT, Side::whole_line);

    RenormResiduals out;
    const std::complex<double> Tz = T.eval(z);
    const std::complex<double> dTz = poly::eval(poly::derivative(T.coeffs), z);

    // interior tilde indices: central half of the window
    const int mT = std::max(2, nT / 4);
    const int klo = mT, khi = nT - mT;

    // ---- eq_t01: banded solves of (J - z) against unit columns at l*d ----
    {
        const int kl = J.w(), ku = J.w();
        std::vector<std::complex<double>> packed(static_cast<size_t>(2 * kl + ku + 1) * N, 0.0);
        for (int r = 0; r < N; ++r)
            for (int c = std::max(0, r - J.w()); c <= std::min(N - 1, r + J.w()); ++c) {
                std::complex<double> v = J.at(r, c);
                if (r == c) v -= z;
                packed[lapack::gbsv_index(kl, ku, r, c)] = v;
            }
        const int ncols = khi - klo;
        std::vector<std::complex<double>> rhs(static_cast<size_t>(N) * ncols, 0.0);
        for (int l = klo; l < khi; ++l) rhs[static_cast<size_t>(l - klo) * N + l * d] = 1.0;
        auto X = lapack::banded_solve(N, kl, ku, packed, std::move(rhs), ncols);

        // coarse resolvent columns
        const int klT = 1, kuT = 1;
        std::vector<std::complex<double>> packedT(static_cast<size_t>(2 * klT + kuT + 1) * nT,
                                                  0.0);
        for (int r = 0; r < nT; ++r)
            for (int c = std::max(0, r - 1); c <= std::min(nT - 1, r + 1); ++c) {
                std::complex<double> v = Jt.at(r, c);
                if (r == c) v -= Tz;
                packedT[lapack::gbsv_index(klT, kuT, r, c)] = v;
            }
        std::vector<std::complex<double>> rhsT(static_cast<size_t>(nT) * ncols, 0.0);
        for (int l = klo; l < khi; ++l) rhsT[static_cast<size_t>(l - klo) * nT + l] = 1.0;
        auto Y = lapack::banded_solve(nT, klT, kuT, packedT, std::move(rhsT), ncols);

        for (int l = klo; l < khi; ++l)
            for (int k = klo; k < khi; ++k) {
                // V^*(z-J)^{-1}V = -(J-z)^{-1} compressed; same sign tilde-side
                std::complex<double> lhs = -X[static_cast<size_t>(l - klo) * N + k * d];
                std::complex<double> rhs_v =
                    -(dTz / static_cast<double>(d)) * Y[static_cast<size_t>(l - klo) * nT + k];
                out.eq_t01 = std::max(out.eq_t01, std::abs(lhs - rhs_v));
            }
    }

    // ---- eq_re1 and eq_re2 via banded powers ----
    auto pw = banded_powers(J, d);
    const int reach = d * J.w();
    for (int k = klo; k < khi; ++k) {
        const int row = k * d;
        for (int col = std::max(0, row - reach); col <= std::min(N - 1, row + reach); ++col) {
            // T(J)(row, col)
            double tj = 0;
            for (int m = 0; m <= d; ++m) tj += T.coeffs[d - m] * pw[m].at(row, col);
            double expect = (col % d == 0) ? Jt.at(k, col / d) : 0.0;
            out.eq_re1 = std::max(out.eq_re1, std::abs(tj - expect));
        }
        for (int l = klo; l < khi; ++l) {
            if (std::abs(k - l) * d > reach) continue;
            // Q_z(J) with Q_z(x) = (T(z) - T(x))/(z - x), degree d-1
            auto qc = poly::divided_difference(T.coeffs, z);
            std::complex<double> v = 0;
            for (int m = 0; m <= d - 1; ++m) v += qc[d - 1 - m] * pw[m].at(row, l * d);
            std::complex<double> expect = (k == l) ? dTz / static_cast<double>(d) : 0.0;
            out.eq_re2 = std::max(out.eq_re2, std::abs(v - expect));
        }
    }
    return out;
}

BranchEnumeration enumerate_branches(const JacobiCoeffs& jt, const ExpandingPolynomial& T) {
    const int nc = static_cast<int>(T.critical_points.size());
    BranchEnumeration en;
    for (int mask = 0; mask < (1 << nc); ++mask) {
        SignVector sv;
        sv.delta.resize(nc);
        for (int i = 0; i < nc; ++i) sv.delta[i] = (mask >> i) & 1 ? 1 : -1;
        BranchResult br;
        br.delta = sv;
        try {
            br.coeffs = renormalized_coeffs(jt, T, sv);
            ++en.valid_count;
        } catch (const std::exception& e) {
            br.error = e.what();
        }
        en.branches.push_back(std::move(br));
    }
    const int B = static_cast<int>(en.branches.size());
    for (int i = 0; i < B; ++i)
        for (int j = i + 1; j < B; ++j) {
            if (!en.branches[i].coeffs || !en.branches[j].coeffs) continue;
            const auto& a = *en.branches[i].coeffs;
            const auto& b = *en.branches[j].coeffs;
            double dist = 0;
            const int period = *a.period;
            for (int k = 0; k < period; ++k) {
                dist = std::max(dist, std::abs(a.p_at(k) - b.p_at(k)));
                dist = std::max(dist, std::abs(a.q_at(k) - b.q_at(k)));
            }
            en.pair_distances.push_back({{i, j}, dist});
        }
    return en;
}

double dual_delta_check(const JacobiCoeffs& jt, const ExpandingPolynomial& T,
                        const SignVector& delta) {
    if (!jt.period) throw InvalidInput("dual_delta_check: periodic coarse data required");
    const int P = *jt.period;
    const int d = T.degree();
    // Jt_tau(i,j) = Jt(1-i, 1-j): q_tau(k) = q(1-k), p_tau(k) = p(-k)
    std::vector<double> ptau(P), qtau(P);
    for (int i = 0; i < P; ++i) {
        ptau[i] = jt.p_at(-static_cast<long>(i));
        qtau[i] = jt.q_at(1 - static_cast<long>(i));
    }
    JacobiCoeffs jt_tau(std::move(ptau), std::move(qtau), P);

    SignVector neg;
    for (int v : delta.delta) neg.delta.push_back(-v);

    JacobiCoeffs A = renormalized_coeffs(jt, T, delta);
    JacobiCoeffs B = renormalized_coeffs(jt_tau, T, neg);

    // S^{d-1} (U_tau J U_tau) S^{1-d} entry (i,j) = J(d-i, d-j):
    // q_B(k) = q_A(d-k), p_B(k) = p_A(d-1-k)
    double res = 0;
    const int period = d * P;
    for (int k = 0; k < period; ++k) {
        res = std::max(res, std::abs(B.q_at(k) - A.q_at(d - static_cast<long>(k))));
        res = std::max(res, std::abs(B.p_at(k) - A.p_at(d - 1 - static_cast<long>(k))));
    }
    return res;
}

BandedWindow darboux(const BandedWindow& J, double rho) {
    if (!(rho > 2.0)) throw InvalidInput("darboux: need rho > 2");
    const double T0 = 1.0 - rho;
    BandedWindow m = J.scaled(1.0 / rho);
    m.shift_diagonal(-T0 / rho);
    BandedWindow phi = cholesky_upper(m);
    BandedWindow out = band_mul(phi, phi.adjoint()).scaled(rho);
    out.shift_diagonal(T0);
    out.hermitize();
    out = out.band_trimmed(J.w());
    return out;
}

QuadraticSplit quadratic_split(const BandedWindow& J) {
    const int N = J.n();
    double diagmax = 0;
    for (int i = 0; i < N; ++i) diagmax = std::max(diagmax, std::abs(J.at(i, i)));
    if (diagmax > 1e-13 * std::max(1.0, J.norm_max()))
        throw InvalidInput("quadratic_split: window has nonzero main diagonal");
    const int ne = (N + 1) / 2, no = N / 2;
    const int wphi = (J.w() + 1) / 2;
    QuadraticSplit qs;
    qs.phi = BandedWindow(J.offset() / 2, no, std::min(wphi, std::max(no - 1, 0)), J.side());
    for (int i = 0; i < no; ++i)
        for (int j = 0; j < ne; ++j)
            if (std::abs(2 * i + 1 - 2 * j) <= J.w() && qs.phi.in_band(i, j))
                qs.phi.set(i, j, J.at(2 * i + 1, 2 * j));
    double res = 0;
    for (int i = 0; i < N; ++i)
        for (int j = std::max(0, i - J.w()); j <= std::min(N - 1, i + J.w()); ++j)
            if ((i % 2) == (j % 2)) res = std::max(res, std::abs(J.at(i, j)));
    qs.residual = res;
    qs.phi.set_margins(J.dirty_top() / 2, J.dirty_bottom() / 2 + 1);
    return qs;
}

LipschitzReport empirical_lipschitz(const ExpandingPolynomial& T,
                                    const std::vector<std::pair<JacobiCoeffs, JacobiCoeffs>>& pairs,
                                    const SignVector& delta, int window) {
    const int d = T.degree();
    const int s_count = std::max(8, window / d);
    const long s_lo = -s_count / 2;
    LipschitzReport rep;
    for (const auto& [jt1, jt2] : pairs) {
        BandedWindow J1 = assemble_renormalized(jt1, T, delta, s_lo, s_count);
        BandedWindow J2 = assemble_renormalized(jt2, T, delta, s_lo, s_count);
        BandedWindow diff = band_sub(J1, J2);
        const int margin = std::max(2 * d, 4);
        double num = operator_norm_window(diff, margin, diff.n() - margin);

        const int nT = s_count;
        BandedWindow T1 = jacobi_window(jt1, s_lo, nT, Side::whole_line);
        BandedWindow T2 = jacobi_window(jt2, s_lo, nT, Side::whole_line);
        BandedWindow dT = band_sub(T1, T2);
        double den = operator_norm_window(dT, 2, dT.n() - 2);

        double ratio = den == 0.0 ? 0.0 : num / den;
        rep.per_pair.push_back(ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    return rep;
}

JacobiCoeffs period_two_polynomial(double xi1, double lam, double p0) {
    if (!(p0 > 0) || !(xi1 > 0)) throw InvalidInput("period_two_polynomial: need p0, xi1 > 0");
    const double p1 = xi1 / (2.0 * p0);
    double t2 = lam - p0 * p0 - p1 * p1;
    if (t2 < -1e-14 * std::max(1.0, std::abs(lam)))
        throw NoRealSolution("period_two_polynomial: lam < p0^2 + (xi1/(2 p0))^2");
    const double t = std::sqrt(std::max(0.0, t2));
    return JacobiCoeffs({p0, p1}, {t, -t}, 2);
}

}  // namespace spectral
