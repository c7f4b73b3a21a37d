#include "spectral/renorm_rational.hpp"

#include <cmath>

#include "spectral/lapack.hpp"

namespace spectral {

BandedWindow pi_star(const BandedWindow& a, const RationalCovering& cov) {
    if (a.side() != Side::half_line)
        throw InvalidInput("pi_star: expects a half-line window with cyclic vector at 0");
    const int n = a.n();
    const double shift = 4.0 * cov.tau * cov.c;

    BandedWindow a2 = band_mul(a, a);
    a2.shift_diagonal(shift);
    BandedWindow phi = cholesky_upper(a2);  // NotPositiveDefinite only on NaN input
    BandedWindow astar = similarity_forward(phi, a);
    astar.hermitize();
    // A^2 + 4 tau c commutes with A, so the exact A_* is banded like A.
    astar = astar.band_trimmed(a.w());
    int extra = std::min(astar.n(), astar.dirty_bottom() + phi.w());
    astar.set_margins(astar.dirty_top(), extra);

    BandedWindow out = interleave(a, phi.adjoint(), phi, astar, 1.0 / (2.0 * cov.tau));
    out.hermitize();
    return out;
}

std::vector<double> lambda_sequence(const std::vector<double>& p, const RationalCovering& cov) {
    const double shift = 4.0 * cov.tau * cov.c;
    std::vector<double> lam2(p.size(), 0.0);
    std::vector<double> lam(p.size(), 0.0);
    for (size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0)) throw InvalidInput("lambda_sequence: p must be nonnegative");
        double v;
        if (i == 0)
            v = shift + p[0] * p[0];
        else if (i == 1)
            v = shift + p[0] * p[0] + p[1] * p[1];
        else {
            double pn = p[i - 1], pnext = p[i];
            v = shift + pnext * pnext + pn * pn -
                pn * pn * p[i - 2] * p[i - 2] / lam2[i - 2];
        }
        if (!(v > 0)) throw InvalidInput("lambda_sequence: recursion left positive cone");
        lam2[i] = v;
        lam[i] = std::sqrt(v);
    }
    return lam;
}

std::vector<BandedWindow> iterate_renorm(const BandedWindow& a0, const RationalCovering& cov,
                                         int steps, int window) {
    if (window < 16) throw InvalidInput("iterate_renorm: window must be >= 16");
    std::vector<BandedWindow> snaps;
    snaps.reserve(steps);
    BandedWindow cur = a0;
    for (int s = 0; s < steps; ++s) {
        BandedWindow next = pi_star(cur, cov);
        if (next.n() > window) next = next.leading(window);
        snaps.push_back(next);
        cur = std::move(next);
    }
    return snaps;
}

MomentVector moment_pushforward(const MomentVector& m, const RationalCovering& cov) {
    const size_t K = m.size();
    MomentVector out;
    out.m.assign(K, 0.0);
    if (K == 0) return out;
    // s_k(x) as polynomials in x, ascending coefficients; s_0 = 2, s_1 = x/tau.
    std::vector<std::vector<double>> s(K);
    if (K > 0) s[0] = {2.0};
    if (K > 1) s[1] = {0.0, 1.0 / cov.tau};
    for (size_t k = 2; k < K; ++k) {
        std::vector<double> cur(k + 1, 0.0);
        for (size_t j = 0; j < s[k - 1].size(); ++j) cur[j + 1] += s[k - 1][j] / cov.tau;
        for (size_t j = 0; j < s[k - 2].size(); ++j) cur[j] += s[k - 2][j] * cov.c / cov.tau;
        s[k] = std::move(cur);
    }
    for (size_t k = 0; k < K; ++k) {
        double v = 0;
        for (size_t j = 0; j < s[k].size() && j < K; ++j) v += 0.5 * s[k][j] * m[j];
        out.m[k] = v;
    }
    if (!m.m.empty()) out.m[0] = m[0];  // mass is preserved exactly
    return out;
}

MomentVector window_moments(const BandedWindow& a, int K) {
    // <0|a^k|0> by repeated banded application to e_0, reading only rows the
    // band reach can touch.
    MomentVector out;
    out.m.assign(K + 1, 0.0);
    out.m[0] = 1.0;
    std::vector<double> v(a.n(), 0.0);
    v[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        std::vector<double> nv(a.n(), 0.0);
        for (int i = 0; i < a.n(); ++i) {
            double s = 0;
            for (int j = std::max(0, i - a.w()); j <= std::min(a.n() - 1, i + a.w()); ++j)
                s += a.at(i, j) * v[j];
            nv[i] = s;
        }
        v = std::move(nv);
        out.m[k] = v[0];
    }
    return out;
}

namespace {

DiscreteMeasure spectral_measure_at_zero(const BandedWindow& a) {
    EigenSystem es = eigen_system(a);
    std::vector<double> w(es.n);
    for (int k = 0; k < es.n; ++k) {
        double c0 = es.vector_entry(0, k);
        w[k] = c0 * c0;
    }
    return DiscreteMeasure(es.values, w);
}

}  // namespace

double resolvent_identity_residual(const BandedWindow& a, const RationalCovering& cov,
                                   std::complex<double> z) {
    if (z.imag() == 0.0) throw InvalidInput("resolvent_identity_residual: need Im z != 0");
    BandedWindow big = pi_star(a, cov);
    std::complex<double> lhs = resolvent_entry(big, z, 0, 0);
    DiscreteMeasure nu = spectral_measure_at_zero(a);
    std::complex<double> rhs = 0.0;
    for (size_t i = 0; i < nu.support.size(); ++i) {
        double x = nu.support[i];
        rhs += nu.weights[i] * (x - 2.0 * cov.tau * z) /
               (2.0 * (cov.tau * z * z - x * z - cov.c));
    }
    return std::abs(lhs - rhs);
}

double compressed_resolvent_residual(const BandedWindow& a, const RationalCovering& cov,
                                     std::complex<double> z) {
    BandedWindow big = pi_star(a, cov);
    const int m = a.n();
    const int probe = std::min(6, m);
    std::complex<double> dpi = cov.tau + cov.c / (z * z);
    double res = 0;
    for (int k = 0; k < probe; ++k) {
        for (int l = 0; l < probe; ++l) {
            std::complex<double> lhs = resolvent_entry(big, z, 2 * k, 2 * l);
            std::complex<double> rhs = -(dpi / 2.0) * resolvent_entry(a, cov.eval(z), k, l);
            if (k == l) rhs += 1.0 / (2.0 * z);
            // (z - J)^{-1} = -(J - z)^{-1}
            res = std::max(res, std::abs(-lhs - rhs));
        }
    }
    return res;
}

BandedWindow period_two_rational(double xi2, const RationalCovering& cov, double free_param,
                                 int n) {
    const double tau = cov.tau;
    const double u = free_param;  // lambda_0^(1)
    if (u == 0.0) throw NoRealSolution("period_two_rational: free parameter must be nonzero");
    double rhs = cov.c / tau - u * u;
    if (rhs < -1e-12 * std::max(1.0, cov.c / tau))
        throw NoRealSolution("period_two_rational: (lambda^(1))^2 exceeds c/tau");
    rhs = std::max(rhs, 0.0);
    const double denom = 1.0 + xi2 * xi2 / (4.0 * tau * tau * u * u);
    const double t = std::sqrt(rhs / denom);   // lambda_0^(0), sign fixed positive
    const double l11 = -xi2 * t / (2.0 * tau * u);
    const double l02 = xi2 / (2.0 * tau);

    BandedWindow v(0, n, 2, Side::whole_line);
    for (int i = 0; i < n; ++i) {
        v.set(i, i, i % 2 == 0 ? t : -t);
        if (i + 1 < n) {
            double l1 = ((i + 1) % 2 == 0) ? u : l11;  // Lambda_1 entry index (i+1) mod 2
            v.set(i, i + 1, l1);
            v.set(i + 1, i, l1);
        }
        if (i + 2 < n && i % 2 == 0) {
            v.set(i, i + 2, l02);
            v.set(i + 2, i, l02);
        }
    }
    v.set_margins(0, 0);
    return v;
}

double basis_duality_residual(const BandedWindow& a, const RationalCovering& cov) {
    const int n = a.n();
    EigenSystem es = eigen_system(a);
    std::vector<double> wt(n), wt2(n);
    const double shift = 4.0 * cov.tau * cov.c;
    for (int k = 0; k < n; ++k) {
        double c0 = es.vector_entry(0, k);
        wt[k] = c0 * c0;
        wt2[k] = wt[k] * (es.values[k] * es.values[k] + shift);
    }
    // orthonormal polynomial values on the nodes: Stieltjes three-term
    // recurrence with full reorthogonalization, stable at these sizes
    auto onp = [&](const std::vector<double>& w) {
        std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
        auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += w[i] * u[i] * v[i];
            return s;
        };
        double w0 = 0;
        for (int i = 0; i < n; ++i) w0 += w[i];
        for (int i = 0; i < n; ++i) P[0][i] = 1.0 / std::sqrt(w0);
        for (int deg = 1; deg < n; ++deg) {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i) v[i] = es.values[i] * P[deg - 1][i];
            for (int pass = 0; pass < 2; ++pass)
                for (int j = 0; j < deg; ++j) {
                    double c = dot(v, P[j]);
                    for (int i = 0; i < n; ++i) v[i] -= c * P[j][i];
                }
            double nrm = std::sqrt(dot(v, v));
            for (int i = 0; i < n; ++i) P[deg][i] = v[i] / nrm;
        }
        return P;
    };
    auto F = onp(wt);
    auto G = onp(wt2);
    // C(j,k) = <g_k, f_j>_nu
    std::vector<std::vector<double>> C(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += wt[i] * G[k][i] * F[j][i];
            C[j][k] = s;
        }
    BandedWindow a2 = band_mul(a, a);
    a2.shift_diagonal(shift);
    BandedWindow phi = cholesky_upper(a2);
    // Phi C = I on the leading block (skip the last bandwidth columns where
    // the discrete orthogonalization runs out of degrees)
    const int m = n - 2 * phi.w();
    double res = 0;
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            double s = 0;
            for (int j = std::max(0, i); j <= std::min(n - 1, i + phi.w()); ++j)
                s += phi.at(i, j) * C[j][k];
            res = std::max(res, std::abs(s - (i == k ? 1.0 : 0.0)));
        }
    return res;
}

}  // namespace spectral
