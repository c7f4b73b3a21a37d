#include "spectral/covering.hpp"

#include <algorithm>
#include <numeric>

namespace spectral {

Perm perm_identity(int d) {
    Perm p(d);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm perm_mul(const Perm& a, const Perm& b) {
    Perm r(a.size());
    for (size_t x = 0; x < a.size(); ++x) r[x] = b[a[x]];
    return r;
}

Perm perm_inverse(const Perm& a) {
    Perm r(a.size());
    for (size_t x = 0; x < a.size(); ++x) r[a[x]] = static_cast<int>(x);
    return r;
}

bool is_permutation(const Perm& a) {
    std::vector<char> seen(a.size(), 0);
    for (int v : a) {
        if (v < 0 || v >= static_cast<int>(a.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

std::vector<int> perm_cycle_type(const Perm& a) {
    std::vector<char> seen(a.size(), 0);
    std::vector<int> cyc;
    for (size_t x = 0; x < a.size(); ++x) {
        if (seen[x]) continue;
        int len = 0;
        for (size_t y = x; !seen[y]; y = a[y]) {
            seen[y] = 1;
            ++len;
        }
        cyc.push_back(len);
    }
    std::sort(cyc.rbegin(), cyc.rend());
    return cyc;
}

int perm_cycle_count(const Perm& a) { return static_cast<int>(perm_cycle_type(a).size()); }

namespace {

void check(const BranchingData& b) {
    if (b.degree <= 0) throw InvalidInput("BranchingData: degree must be positive");
    if (b.points.size() != b.sigmas.size())
        throw InvalidInput("BranchingData: one permutation per branch point required");
    for (const auto& s : b.sigmas) {
        if (static_cast<int>(s.size()) != b.degree || !is_permutation(s))
            throw InvalidInput("BranchingData: malformed permutation");
    }
}

}  // namespace

Perm sigma_infinity(const BranchingData& b) {
    check(b);
    Perm prod = perm_identity(b.degree);
    for (const auto& s : b.sigmas) prod = perm_mul(prod, s);
    return perm_inverse(prod);
}

CoveringValidation validate(const BranchingData& b) {
    check(b);
    CoveringValidation v;
    // connectivity = transitivity of the generated group on sheets
    std::vector<char> reach(b.degree, 0);
    std::vector<int> stack = {0};
    reach[0] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (const auto& s : b.sigmas) {
            for (int y : {s[x], perm_inverse(s)[x]}) {
                if (!reach[y]) {
                    reach[y] = 1;
                    stack.push_back(y);
                }
            }
        }
    }
    v.connected = std::all_of(reach.begin(), reach.end(), [](char c) { return c != 0; });

    Perm sinf = sigma_infinity(b);
    v.infinity_orbits = perm_cycle_type(sinf);

    // Riemann-Hurwitz over all branch points including infinity:
    // 2 - 2g = 2d - sum_P (d - #cycles(sigma_P)).
    int defect = b.degree - perm_cycle_count(sinf);
    for (const auto& s : b.sigmas) defect += b.degree - perm_cycle_count(s);
    v.genus = 1 - b.degree + defect / 2;
    return v;
}

bool equivalent(const BranchingData& b1, const BranchingData& b2) {
    check(b1);
    check(b2);
    if (b1.degree != b2.degree) throw InvalidInput("equivalent: degree mismatch");
    if (b1.sigmas.size() != b2.sigmas.size()) return false;
    if (b1.degree > 8) throw Unsupported("equivalent: brute force capped at degree 8");
    Perm rho = perm_identity(b1.degree);
    std::sort(rho.begin(), rho.end());
    do {
        bool ok = true;
        for (size_t i = 0; i < b1.sigmas.size() && ok; ++i) {
            // rho sigma1 rho^{-1} == sigma2
            const Perm& s1 = b1.sigmas[i];
            const Perm& s2 = b2.sigmas[i];
            for (int x = 0; x < b1.degree; ++x) {
                if (rho[s1[x]] != s2[rho[x]]) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return true;
    } while (std::next_permutation(rho.begin(), rho.end()));
    return false;
}

}  // namespace spectral
