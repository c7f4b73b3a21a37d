#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracle_helpers.hpp"
#include "spectral/renorm_rational.hpp"

using namespace spectral;

namespace {

BandedWindow free_jacobi(int n, double p) {
    JacobiCoeffs jc(std::vector<double>(n, p), std::vector<double>(n, 0.0));
    return jacobi_window(jc, 0, n, Side::half_line);
}

BandedWindow random_tridiag(std::mt19937_64& rng, int n, double pmax = 0.8, double qmax = 0.5) {
    BandedWindow a(0, n, 1, Side::half_line);
    for (int i = 0; i < n; ++i) {
        a.set(i, i, oracle::unif(rng, -qmax, qmax));
        if (i + 1 < n) {
            double p = oracle::unif(rng, 0.05, pmax);
            a.set(i, i + 1, p);
            a.set(i + 1, i, p);
        }
    }
    return a;
}

// eigenvalues whose eigenvectors carry almost no boundary mass
std::vector<double> interior_eigs(const BandedWindow& a, int edge, double factor = 10.0) {
    EigenSystem es = eigen_system(a);
    std::vector<double> out;
    const double thresh = factor * 2.0 * edge / a.n();
    for (int k = 0; k < es.n; ++k) {
        double mass = 0;
        for (int i = 0; i < edge; ++i) {
            mass += es.vector_entry(i, k) * es.vector_entry(i, k);
            mass += es.vector_entry(es.n - 1 - i, k) * es.vector_entry(es.n - 1 - i, k);
        }
        if (mass < thresh) out.push_back(es.values[k]);
    }
    return out;
}

}  // namespace

TEST_CASE("pi_star of A = 0 is a direct sum of square-root blocks") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow zero(0, 4, 0, Side::half_line);
    BandedWindow out = pi_star(zero, cov);
    CHECK(out.n() == 8);
    CHECK(out.at(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    auto e = eigenvalues(out);
    for (int i = 0; i < 4; ++i) CHECK(e[i] == doctest::Approx(-1.0 / std::sqrt(2.0)));
    for (int i = 4; i < 8; ++i) CHECK(e[i] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("pi_star of a 1x1 window gives the two preimages of x0") {
    std::mt19937_64 rng(2);
    for (double tau : {1.5, 2.0, 5.0}) {
        RationalCovering cov = RationalCovering::normalized(tau);
        double x0 = oracle::unif(rng, -0.9, 0.9);
        BandedWindow a(0, 1, 0, Side::half_line);
        a.set(0, 0, x0);
        auto e = eigenvalues(pi_star(a, cov));
        double disc = std::sqrt(x0 * x0 + 4 * tau * (tau - 1));
        CHECK(e[0] == doctest::Approx((x0 - disc) / (2 * tau)).epsilon(1e-13));
        CHECK(e[1] == doctest::Approx((x0 + disc) / (2 * tau)).epsilon(1e-13));
    }
}

TEST_CASE("pi_star of the free J: lambda_0/(2 tau) sits at (1,0)") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow out = pi_star(free_jacobi(32, 1.0), cov);
    CHECK(out.at(1, 0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(out.max_asymmetry() == 0.0);  // hermitized by construction
}

TEST_CASE("pi_star spectrum maps into the input spectrum under pi") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow a = free_jacobi(128, 0.5);  // spectrum [-1, 1]
    BandedWindow out = pi_star(a, cov);      // 256 x 256
    auto ein = eigenvalues(a);
    const double lo = ein.front(), hi = ein.back();
    for (double v : interior_eigs(out, 8)) {
        double x = cov.eval(v);
        CHECK(x > lo - 1e-6);
        CHECK(x < hi + 1e-6);
    }
}

TEST_CASE("lambda_sequence closed cases and the Cholesky oracle") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    auto lz = lambda_sequence(std::vector<double>(10, 0.0), cov);
    for (double v : lz) CHECK(v == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

    const int n = 202;
    auto l1 = lambda_sequence(std::vector<double>(n, 1.0), cov);
    CHECK(l1[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(l1[1] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
    CHECK(l1[2] == doctest::Approx(std::sqrt(89.0 / 9.0)).epsilon(1e-15));

    // the window's last row is band-truncated; all exact rows must agree
    BandedWindow j = free_jacobi(n, 1.0);
    BandedWindow a2 = band_mul(j, j);
    a2.shift_diagonal(8.0);
    BandedWindow phi = cholesky_upper(a2);
    for (int i = 0; i < n - a2.dirty_bottom(); ++i)
        CHECK(std::abs(phi.at(i, i) - l1[i]) <= 1e-12);
}

TEST_CASE("lambda_sequence rejects corrupt data") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    std::vector<double> p = {1.0, std::nan(""), 1.0};
    CHECK_THROWS_AS(lambda_sequence(p, cov), InvalidInput);
}

TEST_CASE("moment_pushforward closed forms") {
    for (double tau : {1.5, 2.0, 5.0}) {
        RationalCovering cov = RationalCovering::normalized(tau);
        MomentVector m(std::vector<double>{1.0, 0.3, 0.7, -0.2});
        MomentVector out = moment_pushforward(m, cov);
        CHECK(out[0] == doctest::Approx(1.0));
        CHECK(out[1] == doctest::Approx(0.3 / (2 * tau)).epsilon(1e-14));
        CHECK(out[2] ==
              doctest::Approx(0.7 / (2 * tau * tau) + (tau - 1) / tau).epsilon(1e-14));
    }
}

TEST_CASE("iterate_renorm: odd moments vanish, m2 contracts to the fixed point") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow a0(0, 1, 0, Side::half_line);
    auto snaps = iterate_renorm(a0, cov, 20, 256);
    const double target = 4.0 / 7.0;
    std::vector<double> errs;
    for (const auto& s : snaps) {
        auto m = window_moments(s, 2);
        CHECK(std::abs(m[1]) < 1e-14);
        errs.push_back(std::abs(m[2] - target));
    }
    CHECK(errs.back() < 1e-9);
    // measured ratio of successive errors ~ 1/(2 tau^2) = 1/8
    for (size_t i = 1; i < 8; ++i)
        CHECK(errs[i] / errs[i - 1] == doctest::Approx(0.125).epsilon(0.05));
}

TEST_CASE("iterate_renorm: window 128 vs 256 agree on the leading block") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow a0(0, 1, 0, Side::half_line);
    auto s1 = iterate_renorm(a0, cov, 10, 128);
    auto s2 = iterate_renorm(a0, cov, 10, 256);
    const auto& w1 = s1.back();
    const auto& w2 = s2.back();
    double err = 0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) err = std::max(err, std::abs(w1.at(i, j) - w2.at(i, j)));
    CHECK(err < 1e-9);  // measured self-consistency level at these windows
}

TEST_CASE("moment identity: <0|pi*(a)^k|0> equals the pushforward moments") {
    std::mt19937_64 rng(23);
    RationalCovering cov = RationalCovering::normalized(2.0);
    for (int trial = 0; trial < 3; ++trial) {
        BandedWindow a = random_tridiag(rng, 10);
        BandedWindow big = pi_star(a, cov);
        auto ma = window_moments(a, 12);
        auto mb = window_moments(big, 12);
        auto push = moment_pushforward(ma, cov);
        for (int k = 0; k <= 12; ++k) CHECK(std::abs(mb[k] - push[k]) <= 1e-11);
    }
}

TEST_CASE("resolvent identity (corrected sign): explicit and dense-oracle cases") {
    RationalCovering cov = RationalCovering::normalized(2.0);
    // a = 0: both sides equal -z/(z^2 - 1/2)
    BandedWindow zero(0, 6, 0, Side::half_line);
    std::complex<double> z(1.0, 1.0);
    BandedWindow big = pi_star(zero, cov);
    std::complex<double> lhs = resolvent_entry(big, z, 0, 0);
    std::complex<double> expect = -z / (z * z - 0.5);
    CHECK(std::abs(lhs - expect) < 1e-13);
    CHECK(resolvent_identity_residual(zero, cov, z) < 1e-13);

    // 1x1 vs the dense 2x2 block
    BandedWindow a1(0, 1, 0, Side::half_line);
    a1.set(0, 0, 0.37);
    CHECK(resolvent_identity_residual(a1, cov, {0.4, 0.8}) < 1e-13);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 4; ++trial) {
        BandedWindow a = random_tridiag(rng, 6);
        CHECK(resolvent_identity_residual(a, cov, {-0.3, 0.9}) <= 1e-12);
    }
}

TEST_CASE("compressed resolvent relation for the rational cover") {
    std::mt19937_64 rng(5);
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow a = random_tridiag(rng, 40);
    CHECK(compressed_resolvent_residual(a, cov, {0.2, 1.1}) < 1e-10);
}

TEST_CASE("period_two_rational: closed relations and spectrum containment") {
    const double tau = 2.0;
    RationalCovering cov = RationalCovering::normalized(tau);
    const double xi2 = 1.0;
    BandedWindow v = period_two_rational(xi2, cov, 0.4, 400);

    CHECK(v.at(0, 2) == doctest::Approx(xi2 / (2 * tau)));  // lambda^(2) head
    CHECK(v.at(1, 3) == 0.0);

    // matrix identity tau v^2 - c = (xi2/2)(S^2 + S^-2) v on the interior
    BandedWindow v2 = band_mul(v, v).scaled(tau);
    v2.shift_diagonal(-cov.c);
    BandedWindow s2 = shift_window(400, 2);
    BandedWindow rhs = band_mul(band_sub(s2, shift_window(400, -2).scaled(-1.0)), v);
    rhs = rhs.scaled(xi2 / 2);
    CHECK(interior_norm_max(band_sub(v2, rhs), 6) < 1e-13);

    // interior spectrum lands inside pi^{-1}([-xi2, xi2])
    for (double lam : interior_eigs(v, 8)) {
        CHECK(std::abs(cov.eval(lam)) <= xi2 + 1e-8);
    }

    // symmetric solution: diagonal zero forces a vanishing lambda^(1)
    double u0 = std::sqrt(cov.c / tau);
    BandedWindow vs = period_two_rational(xi2, cov, u0, 50);
    CHECK(std::abs(vs.at(0, 0)) < 1e-12);
    CHECK(std::abs(vs.at(0, 1)) < 1e-12);  // the other lambda^(1) entry vanishes

    CHECK_THROWS_AS(period_two_rational(xi2, cov, 2.0, 50), NoRealSolution);
}

TEST_CASE("basis duality: coefficient matrix inverts Phi") {
    std::mt19937_64 rng(71);
    RationalCovering cov = RationalCovering::normalized(2.0);
    BandedWindow a = random_tridiag(rng, 24, 0.7, 0.3);
    CHECK(basis_duality_residual(a, cov) <= 1e-10);
}

TEST_CASE("general (tau, c) covering is supported") {
    RationalCovering cov(3.0, 1.0);  // the c = 1 variant
    CHECK(cov.fixed_point() == doctest::Approx(1.0 / std::sqrt(2.0)));
    BandedWindow zero(0, 4, 0, Side::half_line);
    auto e = eigenvalues(pi_star(zero, cov));
    // preimages of 0: tau v^2 = c
    CHECK(e.back() == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-13));
    std::mt19937_64 rng(3);
    BandedWindow a = random_tridiag(rng, 8);
    CHECK(resolvent_identity_residual(a, cov, {0.1, 0.7}) < 1e-12);
}
