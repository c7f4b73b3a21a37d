#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "spectral/covering.hpp"
#include "spectral/io.hpp"

using namespace spectral;

namespace {

// Independent genus oracle by explicit sheet gluing.  Cut the sphere along
// slits from each branch point to infinity; the cut base is a 2N-gon with
// boundary word (inf, z_1, inf, z_2, ...).  Take d copies and glue the right
// bank of slit i on sheet j to the left bank on sheet sigma_i(j), reversing
// orientation; count cells.
int genus_by_gluing(const BranchingData& b) {
    const int N = static_cast<int>(b.sigmas.size());
    const int d = b.degree;
    if (N == 0) return 0;  // sphere, unramified single-degree cover assumed connected
    // corners: per sheet, per slit, four corner slots:
    //   (slit i, L bank) edge runs inf -> z_i, (slit i, R bank) runs z_i -> inf
    // corner ids: sheet*4N + slit*4 + {0: L start(inf), 1: L end(z), 2: R start(z), 3: R end(inf)}
    std::vector<int> parent(static_cast<size_t>(d) * 4 * N);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int c) { parent[find(a)] = find(c); };
    auto corner = [&](int sheet, int slit, int slot) { return sheet * 4 * N + slit * 4 + slot; };

    // within a sheet, consecutive boundary corners of the polygon coincide:
    // ... z_i: (L end) ~ (R start);  inf between slit i and slit i+1:
    // (R end of i) ~ (L start of i+1 mod N)
    for (int s = 0; s < d; ++s)
        for (int i = 0; i < N; ++i) {
            unite(corner(s, i, 1), corner(s, i, 2));
            unite(corner(s, i, 3), corner(s, (i + 1) % N, 0));
        }
    // gluing with orientation reversal: start(R, sheet j) ~ end(L, sigma(j)), etc.
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < d; ++j) {
            int jj = b.sigmas[i][j];
            unite(corner(j, i, 2), corner(jj, i, 1));  // z-corner to z-corner
            unite(corner(j, i, 3), corner(jj, i, 0));  // inf-corner to inf-corner
        }
    int V = 0;
    for (int x = 0; x < static_cast<int>(parent.size()); ++x)
        if (find(x) == x) ++V;
    const int E = N * d;  // 2Nd banks glued in pairs
    const int F = d;
    const int chi = V - E + F;
    return (2 - chi) / 2;
}

Perm transposition(int d, int a, int b) {
    Perm p = perm_identity(d);
    std::swap(p[a], p[b]);
    return p;
}

}  // namespace

TEST_CASE("sigma_infinity closes the product relation") {
    BranchingData b{2, {{-2.0, 0.0}, {2.0, 0.0}}, {transposition(2, 0, 1), transposition(2, 0, 1)}};
    Perm sinf = sigma_infinity(b);
    CHECK(sinf == perm_identity(2));  // two infinities

    BranchingData one{2, {{0.0, 0.0}}, {transposition(2, 0, 1)}};
    CHECK(sigma_infinity(one) == transposition(2, 0, 1));  // one infinity, double pole

    BranchingData none{3, {}, {}};
    CHECK(sigma_infinity(none) == perm_identity(3));

    // product sigma_1...sigma_N sigma_inf = id always
    BranchingData g{3,
                    {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
                    {transposition(3, 0, 1), transposition(3, 1, 2), transposition(3, 0, 2),
                     transposition(3, 0, 1)}};
    Perm prod = perm_identity(3);
    for (const auto& s : g.sigmas) prod = perm_mul(prod, s);
    CHECK(perm_mul(prod, sigma_infinity(g)) == perm_identity(3));
}

TEST_CASE("validate: the period-two five-diagonal covering is the sphere") {
    BranchingData b{2, {{-2.0, 0.0}, {2.0, 0.0}}, {transposition(2, 0, 1), transposition(2, 0, 1)}};
    auto v = validate(b);
    CHECK(v.connected);
    CHECK(v.infinity_orbits == std::vector<int>{1, 1});
    CHECK(v.genus == 0);
    CHECK(v.genus == genus_by_gluing(b));
}

TEST_CASE("validate: disconnected data is flagged") {
    BranchingData b{2, {{0.0, 0.0}}, {perm_identity(2)}};
    CHECK_FALSE(validate(b).connected);
}

TEST_CASE("validate: genus matches the gluing oracle") {
    // four transpositions in Sigma_3: elliptic curve (genus 1)
    BranchingData g{3,
                    {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
                    {transposition(3, 0, 1), transposition(3, 1, 2), transposition(3, 0, 2),
                     transposition(3, 0, 1)}};
    auto v = validate(g);
    CHECK(v.connected);
    CHECK(v.genus == 1);
    CHECK(v.genus == genus_by_gluing(g));

    // hyperelliptic-style: 2-sheeted with 2g+2 = 6 finite branch points
    BranchingData h{2, {}, {}};
    for (int i = 0; i < 6; ++i) {
        h.points.push_back({static_cast<double>(i), 0.0});
        h.sigmas.push_back(transposition(2, 0, 1));
    }
    auto vh = validate(h);
    CHECK(vh.genus == 2);
    CHECK(vh.genus == genus_by_gluing(h));
    CHECK(vh.infinity_orbits == std::vector<int>{1, 1});

    // a degree-4 mix with a 3-cycle
    Perm c3 = {1, 2, 0, 3};
    BranchingData m{4,
                    {{0, 0}, {1, 0}, {2, 1}},
                    {c3, transposition(4, 2, 3), transposition(4, 0, 3)}};
    auto vm = validate(m);
    CHECK(vm.genus == genus_by_gluing(m));
}

TEST_CASE("validate: single transposition gives one infinity of multiplicity 2") {
    BranchingData one{2, {{0.5, 0.25}}, {transposition(2, 0, 1)}};
    auto v = validate(one);
    CHECK(v.infinity_orbits == std::vector<int>{2});
    CHECK(v.genus == 0);
    CHECK(v.genus == genus_by_gluing(one));
}

TEST_CASE("equivalent: reflexive, relabeled, and a genuine non-equivalence") {
    BranchingData g{3,
                    {{0, 0}, {1, 0}},
                    {transposition(3, 0, 1), transposition(3, 1, 2)}};
    CHECK(equivalent(g, g));

    // conjugate everything by a fixed rho
    Perm rho = {2, 0, 1};
    BranchingData g2 = g;
    for (auto& s : g2.sigmas) {
        Perm t(3);
        for (int x = 0; x < 3; ++x) t[rho[x]] = rho[s[x]];
        s = t;
    }
    CHECK(equivalent(g, g2));
    CHECK(validate(g).genus == validate(g2).genus);
    CHECK(validate(g).infinity_orbits == validate(g2).infinity_orbits);

    // (12),(23) vs (13),(23): second entries incompatible under any rho fixing both
    BranchingData ga{3, {{0, 0}, {1, 0}}, {transposition(3, 0, 1), transposition(3, 1, 2)}};
    BranchingData gb{3, {{0, 0}, {1, 0}}, {transposition(3, 0, 2), transposition(3, 0, 2)}};
    CHECK_FALSE(equivalent(ga, gb));

    BranchingData big{9, {}, {}};
    BranchingData big2 = big;
    CHECK_THROWS_AS(equivalent(big, big2), Unsupported);
}

TEST_CASE("covering JSON schema round-trip") {
    BranchingData b{3,
                    {{0.5, -1.0}, {2.0, 0.0}},
                    {transposition(3, 0, 1), Perm{1, 2, 0}}};
    auto j = io::covering_to_json(b);
    CHECK(j["sigmas"][0][0] == 2);  // 1-based in JSON
    BranchingData r = io::covering_from_json(j);
    CHECK(r.degree == b.degree);
    CHECK(r.sigmas == b.sigmas);
    CHECK(r.points == b.points);
}
