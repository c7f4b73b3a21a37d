#include "spectral/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spectral/lapack.hpp"

namespace spectral {

int covering_degree(const CoveringMap& cov) {
    if (std::holds_alternative<RationalCovering>(cov)) return 2;
    return std::get<ExpandingPolynomial>(cov).degree();
}

double covering_base_point(const CoveringMap& cov) {
    if (const auto* r = std::get_if<RationalCovering>(&cov)) return r->fixed_point();
    return 0.0;
}

std::vector<std::complex<double>> preimages(const CoveringMap& cov, std::complex<double> x) {
    if (const auto* r = std::get_if<RationalCovering>(&cov)) {
        auto [v1, v2] = r->preimages(x);
        return {v1, v2};
    }
    const auto& T = std::get<ExpandingPolynomial>(cov);
    poly::Coeffs shifted = T.coeffs;
    if (x.imag() == 0.0) {
        shifted.back() -= x.real();
        return poly::roots(shifted);
    }
    // complex x: Durand-Kerner on T(y) - x
    const int d = T.degree();
    std::vector<std::complex<double>> z(d);
    for (int i = 0; i < d; ++i)
        z[i] = std::polar(1.0 + 0.3 * i, 2.0 * M_PI * i / d + 0.4);
    for (int it = 0; it < 200; ++it) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> num = poly::eval(T.coeffs, z[i]) - x;
            std::complex<double> den = 1.0;
            for (int j = 0; j < d; ++j)
                if (j != i) den *= z[i] - z[j];
            std::complex<double> step = num / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

std::vector<double> real_preimages(const CoveringMap& cov, double x, bool* ok) {
    if (ok) *ok = true;
    std::vector<double> out;
    for (const auto& z : preimages(cov, x)) {
        if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real())))
            out.push_back(z.real());
        else if (ok)
            *ok = false;
    }
    std::sort(out.begin(), out.end());
    return out;
}

DiscreteMeasure pushforward(const DiscreteMeasure& nu, const CoveringMap& cov) {
    const int d = covering_degree(cov);
    DiscreteMeasure out;
    for (size_t i = 0; i < nu.support.size(); ++i) {
        bool ok = true;
        auto pre = real_preimages(cov, nu.support[i], &ok);
        if (!ok || static_cast<int>(pre.size()) != d)
            throw InvalidInput("pushforward: non-real preimage branch");
        for (double y : pre) {
            out.support.push_back(y);
            out.weights.push_back(nu.weights[i] / d);
        }
    }
    out.validate();
    return out;
}

namespace {

// Power sums of the preimages of x as polynomials in x (ascending coeffs).
// For T(y) = y^d + a_1 y^{d-1} + ... + a_d the roots of T(y) - x have
// elementary symmetric functions e_i = (-1)^i a_i (i < d),
// e_d = (-1)^d (a_d - x).
std::vector<std::vector<double>> power_sum_polys(const ExpandingPolynomial& T, int K) {
    const int d = T.degree();
    std::vector<std::vector<double>> e(d + 1);  // e[i] as poly in x, ascending
    e[0] = {1.0};
    for (int i = 1; i <= d; ++i) {
        double sign = (i % 2 == 0) ? 1.0 : -1.0;
        if (i < d)
            e[i] = {sign * T.coeffs[i]};
        else
            e[i] = {sign * T.coeffs[d], -sign};  // (-1)^d (a_d - x)
    }
    auto mulp = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(a.size() + b.size() - 1, 0.0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    auto axpy = [](std::vector<double>& r, double c, const std::vector<double>& a) {
        if (r.size() < a.size()) r.resize(a.size(), 0.0);
        for (size_t i = 0; i < a.size(); ++i) r[i] += c * a[i];
    };
    std::vector<std::vector<double>> s(K + 1);
    s[0] = {static_cast<double>(d)};
    // Newton: s_k = e_1 s_{k-1} - e_2 s_{k-2} + ... + (-1)^{k-1} (e_{k-1} s_1 - k e_k), k <= d
    //         s_k = e_1 s_{k-1} - ... + (-1)^{d-1} e_d s_{k-d},                    k > d
    for (int k = 1; k <= K; ++k) {
        std::vector<double> acc = {0.0};
        for (int i = 1; i <= std::min(k, d); ++i) {
            double sign = (i % 2 == 1) ? 1.0 : -1.0;
            if (i == k)
                axpy(acc, sign * k, e[i]);
            else
                axpy(acc, sign, mulp(e[i], s[k - i]));
        }
        s[k] = std::move(acc);
    }
    return s;
}

}  // namespace

MomentVector moment_pushforward(const MomentVector& m, const CoveringMap& cov) {
    if (const auto* r = std::get_if<RationalCovering>(&cov)) return moment_pushforward(m, *r);
    const auto& T = std::get<ExpandingPolynomial>(cov);
    const int d = T.degree();
    const int K = static_cast<int>(m.size());
    MomentVector out;
    out.m.assign(K, 0.0);
    if (K == 0) return out;
    auto s = power_sum_polys(T, K - 1);
    for (int k = 0; k < K; ++k) {
        double v = 0;
        for (size_t j = 0; j < s[k].size() && j < static_cast<size_t>(K); ++j)
            v += s[k][j] * m[j] / d;
        out.m[k] = v;
    }
    out.m[0] = m[0];
    return out;
}

SampleResult backward_orbit_sample(const CoveringMap& cov, int n_steps, long n_samples,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double x0 = covering_base_point(cov);
    SampleResult res;
    res.samples.reserve(n_samples);
    auto uniform_index = [&](int m) {
        // top bits, deterministic across platforms
        return static_cast<int>((rng() >> 11) % static_cast<std::uint64_t>(m));
    };
    for (long i = 0; i < n_samples; ++i) {
        double x = x0;
        for (int s = 0; s < n_steps; ++s) {
            bool ok = true;
            auto pre = real_preimages(cov, x, &ok);
            if (!ok) ++res.off_regime_events;
            if (pre.empty()) break;
            x = pre[uniform_index(static_cast<int>(pre.size()))];
        }
        res.samples.push_back(x);
    }
    return res;
}

MomentVector invariant_moments(const CoveringMap& cov, int K) {
    MomentVector m;
    m.m.assign(K + 1, 0.0);
    m.m[0] = 1.0;
    if (const auto* r = std::get_if<RationalCovering>(&cov)) {
        // m_k = int (1/2) s_k dm with s_k = (x/tau)s_{k-1} + (c/tau)s_{k-2};
        // the self-coefficient of m_k is 1/(2 tau^k) < 1.
        std::vector<std::vector<double>> s(K + 1);
        s[0] = {2.0};
        if (K >= 1) s[1] = {0.0, 1.0 / r->tau};
        for (int k = 2; k <= K; ++k) {
            std::vector<double> cur(k + 1, 0.0);
            for (size_t j = 0; j < s[k - 1].size(); ++j) cur[j + 1] += s[k - 1][j] / r->tau;
            for (size_t j = 0; j < s[k - 2].size(); ++j) cur[j] += s[k - 2][j] * r->c / r->tau;
            s[k] = std::move(cur);
        }
        for (int k = 1; k <= K; ++k) {
            double self = 0.5 * s[k][k];
            double rhs = 0;
            for (int j = 0; j < k; ++j) rhs += 0.5 * s[k][j] * m.m[j];
            m.m[k] = rhs / (1.0 - self);
        }
        return m;
    }
    const auto& T = std::get<ExpandingPolynomial>(cov);
    const int d = T.degree();
    auto s = power_sum_polys(T, K);
    for (int k = 1; k <= K; ++k) {
        // deg_x(s_k) = floor(k/d) < k, so the balanced moments come out
        // directly in degree order
        double self = (static_cast<int>(s[k].size()) > k) ? s[k][k] / d : 0.0;
        double rhs = 0;
        for (int j = 0; j < std::min<int>(k, static_cast<int>(s[k].size())); ++j)
            rhs += s[k][j] * m.m[j] / d;
        m.m[k] = rhs / (1.0 - self);
    }
    return m;
}

RuelleEigen weighted_ruelle_eigen(const ExpandingPolynomial& T,
                                  const std::vector<bool>& split_mask, int depth, double tol,
                                  int max_iter) {
    const int d = T.degree();
    if (split_mask.size() != T.critical_points.size())
        throw InvalidInput("weighted_ruelle_eigen: mask length must match critical points");
    if (depth < 1 || std::pow(static_cast<double>(d), depth) > 4.0e6)
        throw InvalidInput("weighted_ruelle_eigen: tree too deep");

    // depth-L preimage-tree cell centers: x_{b.w} = branch_b(x_w)
    long ncells = 1;
    for (int i = 0; i < depth; ++i) ncells *= d;
    std::vector<double> centers = {0.0};
    for (int lev = 0; lev < depth; ++lev) {
        std::vector<double> next(centers.size() * d);
        for (size_t w = 0; w < centers.size(); ++w) {
            bool ok = true;
            auto pre = real_preimages(CoveringMap(T), centers[w], &ok);
            if (!ok || static_cast<int>(pre.size()) != d)
                throw InvalidInput("weighted_ruelle_eigen: non-real branch in tree");
            for (int b = 0; b < d; ++b)
                next[static_cast<size_t>(b) * centers.size() + w] = pre[b];
        }
        centers = std::move(next);
    }
    // Words are encoded big-endian (first letter = high digit), so the word
    // of a cell w is (w0..w_{L-1}) with cell(w) = branch_{w0}(cell(tail)).
    // The preimage of cell w under branch b is the depth-(L+1) cell
    // (b, w0..w_{L-1}); its containing depth-L cell is (b, w0..w_{L-2}),
    // i.e. index b*d^{L-1} + w/d.

    auto a_eval = [&](double y, bool first_factor) {
        double v = first_factor ? 1.0 : static_cast<double>(d);
        for (size_t ci = 0; ci < T.critical_points.size(); ++ci) {
            bool in_first = split_mask[ci];
            if (in_first == first_factor) v *= (y - T.critical_points[ci]);
        }
        return v;
    };

    // precompute per-cell preimages and both weight tables
    std::vector<double> pre_all(static_cast<size_t>(ncells) * d);
    std::vector<double> wt1(static_cast<size_t>(ncells) * d), wt2(wt1.size());
    for (long w = 0; w < ncells; ++w) {
        bool ok = true;
        auto pre = real_preimages(CoveringMap(T), centers[w], &ok);
        if (!ok || static_cast<int>(pre.size()) != d)
            throw InvalidInput("weighted_ruelle_eigen: non-real branch");
        for (int b = 0; b < d; ++b) {
            const double y = pre[b];
            pre_all[static_cast<size_t>(w) * d + b] = y;
            const double a1 = a_eval(y, true), a2 = a_eval(y, false);
            wt1[static_cast<size_t>(w) * d + b] = 1.0 / (a1 * a1);
            wt2[static_cast<size_t>(w) * d + b] = 1.0 / (a2 * a2);
        }
    }

    RuelleEigen out;
    const long stride = ncells / d;
    for (int which = 0; which < 2; ++which) {
        const auto& wt = which == 0 ? wt1 : wt2;
        std::vector<double> sigma(ncells, 1.0 / ncells);
        std::vector<double> nxt(ncells);
        double rho = 0;
        bool conv = false;
        int it = 0;
        for (; it < max_iter; ++it) {
            std::fill(nxt.begin(), nxt.end(), 0.0);
            for (long w = 0; w < ncells; ++w) {
                const double sw = sigma[w];
                if (sw == 0.0) continue;
                const long tail = w / d;
                for (int b = 0; b < d; ++b)
                    nxt[static_cast<size_t>(b) * stride + tail] +=
                        sw * wt[static_cast<size_t>(w) * d + b];
            }
            double mass = 0;
            for (double v : nxt) mass += v;
            rho = mass;
            double tv = 0;
            for (long i = 0; i < ncells; ++i) {
                nxt[i] /= mass;
                tv += std::abs(nxt[i] - sigma[i]);
            }
            sigma.swap(nxt);
            if (0.5 * tv <= tol) {
                conv = true;
                ++it;
                break;
            }
        }
        DiscreteMeasure meas;
        meas.support = centers;
        meas.weights = sigma;
        double fix = 0;
        for (double v : meas.weights) fix += v;
        for (double& v : meas.weights) v /= fix;
        if (which == 0) {
            out.rho1 = rho;
            out.sigma1 = std::move(meas);
            out.iterations1 = it;
            out.converged1 = conv;
        } else {
            out.rho2 = rho;
            out.sigma2 = std::move(meas);
            out.iterations2 = it;
            out.converged2 = conv;
        }
    }
    return out;
}

}  // namespace spectral
