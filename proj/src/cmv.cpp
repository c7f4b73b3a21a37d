#include "spectral/cmv.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/lapack.hpp"

namespace spectral {

namespace {

using cplx = std::complex<double>;

// Block-diagonal factor with Theta-blocks on (k, k+1) for k in `parity`;
// uncovered boundary rows carry 1 on the diagonal and are marked dirty.
ComplexBandedWindow cmv_factor(const VerblunskySeq& a, int parity) {
    const int n = static_cast<int>(a.size());
    ComplexBandedWindow m(0, n, 1, Side::whole_line);
    std::vector<char> covered(n, 0);
    for (int k = parity; k + 1 < n; k += 2) {
        m.set(k, k, std::conj(a.a[k]));
        m.set(k, k + 1, a.rho(k));
        m.set(k + 1, k, a.rho(k));
        m.set(k + 1, k + 1, -a.a[k]);
        covered[k] = covered[k + 1] = 1;
    }
    int dt = 0, db = 0;
    for (int i = 0; i < n; ++i)
        if (!covered[i]) {
            m.set(i, i, 1.0);
            if (i < n / 2)
                dt = std::max(dt, i + 1);
            else
                db = std::max(db, n - i);
        }
    m.set_margins(dt, db);
    return m;
}

}  // namespace

CmvWindow build_cmv(const VerblunskySeq& a) {
    const int n = static_cast<int>(a.size());
    if (n < 6 || n % 2 != 0) throw InvalidInput("build_cmv: window length must be even, >= 6");
    ComplexBandedWindow a0 = cmv_factor(a, 0);
    ComplexBandedWindow a1 = cmv_factor(a, 1);
    CmvWindow out;
    out.mat = band_mul(a0, a1);
    ComplexBandedWindow prod = band_mul(out.mat.adjoint(), out.mat);
    prod.shift_diagonal(cplx(-1.0, 0.0));
    out.unitary_defect = interior_norm_max(prod);
    return out;
}

FiveDiagReport five_diagonal_check(const CmvWindow& c, const VerblunskySeq& a) {
    const auto& B = c.mat;
    const int n = B.n();
    ComplexBandedWindow Z(0, n, 2, Side::whole_line);  // Z = B + B^*
    Z.set_margins(B.dirty_top(), B.dirty_bottom());
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
            Z.set(i, j, B.at(i, j) + std::conj(B.at(j, i)));
    FiveDiagReport rep;
    const int lo = std::max(2, B.dirty_top() + 1);
    const int hi = n - std::max(1, B.dirty_bottom());
    auto rho = [&](int k) { return a.rho(k); };
    for (int k = lo; k < hi; ++k) {
        cplx diag = Z.at(k, k) + 2.0 * std::real(a.a[k] * std::conj(a.a[k - 1]));
        rep.entry_residual = std::max(rep.entry_residual, std::abs(diag));
        cplx two = Z.at(k - 2, k) - rho(k - 1) * rho(k - 2);
        rep.entry_residual = std::max(rep.entry_residual, std::abs(two));
        cplx pred = rho(k - 1) * (a.a[k] - a.a[k - 2]);
        if (k % 2 == 1) pred = std::conj(pred);
        rep.entry_residual = std::max(rep.entry_residual, std::abs(Z.at(k - 1, k) - pred));
    }
    // alternating zero slots of the five-diagonal shape
    for (int i = lo; i < hi - 2; ++i) {
        if (i % 2 == 1) rep.band_residual = std::max(rep.band_residual, std::abs(B.at(i, i + 2)));
        if (i % 2 == 0) rep.band_residual = std::max(rep.band_residual, std::abs(B.at(i + 2, i)));
    }
    return rep;
}

VerblunskySeq extract_verblunsky(const ComplexBandedWindow& m) {
    const int n = m.n();
    std::vector<cplx> a;
    for (int k = 0; k <= n - 3; ++k) {
        if (k % 2 == 0) {
            // column k+2: entries (k, k+2) = rho_{k+1} rho_k? no:
            // (k, k+2) = rho_k rho_{k+1}, (k+1, k+2) = -a_k rho_{k+1}
            cplx denom = m.at(k, k + 2);
            cplx u = -m.at(k + 1, k + 2) / denom;
            a.push_back(u / std::sqrt(1.0 + std::norm(u)));
        } else {
            // row k-1: (k-1, k) = rho_{k-1} conj(a_k), (k-1, k+1) = rho_{k-1} rho_k
            cplx w = m.at(k - 1, k) / m.at(k - 1, k + 1);
            a.push_back(std::conj(w) / std::sqrt(1.0 + std::norm(w)));
        }
    }
    return VerblunskySeq(std::move(a));
}

namespace {

using Dense = std::vector<cplx>;

Dense to_dense(const ComplexBandedWindow& m) {
    const int n = m.n();
    Dense d(static_cast<size_t>(n) * n, cplx(0));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - m.w()); j <= std::min(n - 1, i + m.w()); ++j)
            d[static_cast<size_t>(i) * n + j] = m.at(i, j);
    return d;
}

Dense commutator_rhs(const Dense& b, int n, SchurProjection proj) {
    // M = B + B^H, G = projection(M), return G B - B G
    Dense g(static_cast<size_t>(n) * n, cplx(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx mij = b[static_cast<size_t>(i) * n + j] +
                       std::conj(b[static_cast<size_t>(j) * n + i]);
            cplx val(0);
            if (proj == SchurProjection::skew) {
                if (j > i)
                    val = mij;
                else if (j < i)
                    val = -mij;
            } else {
                if (j >= i) val = mij;
            }
            g[static_cast<size_t>(i) * n + j] = val;
        }
    Dense r(static_cast<size_t>(n) * n, cplx(0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            cplx gik = g[static_cast<size_t>(i) * n + k];
            cplx bik = b[static_cast<size_t>(i) * n + k];
            if (gik == cplx(0) && bik == cplx(0)) continue;
            for (int j = 0; j < n; ++j)
                r[static_cast<size_t>(i) * n + j] +=
                    gik * b[static_cast<size_t>(k) * n + j] -
                    bik * g[static_cast<size_t>(k) * n + j];
        }
    return r;
}

double hausdorff(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    double h = 0;
    for (const auto& x : u) {
        double best = 1e300;
        for (const auto& y : v) best = std::min(best, std::abs(x - y));
        h = std::max(h, best);
    }
    for (const auto& y : v) {
        double best = 1e300;
        for (const auto& x : u) best = std::min(best, std::abs(x - y));
        h = std::max(h, best);
    }
    return h;
}

double interior_unitary_defect(const Dense& b, int n) {
    double defect = 0;
    for (int i = 2; i < n - 2; ++i)
        for (int j = 2; j < n - 2; ++j) {
            cplx s(0);
            for (int k = 0; k < n; ++k)
                s += std::conj(b[static_cast<size_t>(k) * n + i]) *
                     b[static_cast<size_t>(k) * n + j];
            if (i == j) s -= 1.0;
            defect = std::max(defect, std::abs(s));
        }
    return defect;
}

}  // namespace

SchurFlowResult schur_flow_step(const VerblunskySeq& a, double dt, int n_steps,
                                SchurProjection projection, int sample_every) {
    if (!(dt <= 1e-2) || !(dt > 0)) throw InvalidInput("schur_flow_step: need 0 < dt <= 1e-2");
    const int n = static_cast<int>(a.size());
    CmvWindow c0 = build_cmv(a);
    Dense b = to_dense(c0.mat);
    auto eig0 = lapack::dense_eig(n, b);

    SchurFlowResult res;
    if (sample_every <= 0) sample_every = n_steps;
    res.times.push_back(0.0);
    res.trajectory.push_back(extract_verblunsky(c0.mat));
    res.defects.push_back(interior_unitary_defect(b, n));
    res.drifts.push_back(0.0);

    const size_t sz = b.size();
    Dense k1, k2, k3, k4, tmp(sz);
    for (int step = 1; step <= n_steps; ++step) {
        k1 = commutator_rhs(b, n, projection);
        for (size_t i = 0; i < sz; ++i) tmp[i] = b[i] + 0.5 * dt * k1[i];
        k2 = commutator_rhs(tmp, n, projection);
        for (size_t i = 0; i < sz; ++i) tmp[i] = b[i] + 0.5 * dt * k2[i];
        k3 = commutator_rhs(tmp, n, projection);
        for (size_t i = 0; i < sz; ++i) tmp[i] = b[i] + dt * k3[i];
        k4 = commutator_rhs(tmp, n, projection);
        for (size_t i = 0; i < sz; ++i)
            b[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        if (step % sample_every == 0 || step == n_steps) {
            ComplexBandedWindow w(0, n, 2, Side::whole_line);
            for (int i = 0; i < n; ++i)
                for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
                    w.set(i, j, b[static_cast<size_t>(i) * n + j]);
            VerblunskySeq cur = [&] {
                try {
                    return extract_verblunsky(w);
                } catch (const InvalidInput&) {
                    res.hit_boundary = true;
                    return res.trajectory.back();
                }
            }();
            for (const auto& v : cur.a)
                if (std::abs(v) >= 1.0 - 1e-8) res.hit_boundary = true;
            res.times.push_back(step * dt);
            res.trajectory.push_back(std::move(cur));
            res.defects.push_back(interior_unitary_defect(b, n));
            res.drifts.push_back(hausdorff(eig0, lapack::dense_eig(n, b)));
            if (res.hit_boundary) break;
        }
    }

    res.unitary_defect = res.defects.back();
    res.spectral_drift = res.drifts.back();
    return res;
}

}  // namespace spectral
