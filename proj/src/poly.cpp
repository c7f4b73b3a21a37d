#include "spectral/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectral/lapack.hpp"

namespace spectral::poly {

double eval(const Coeffs& c, double x) {
    double v = 0;
    for (double ck : c) v = v * x + ck;
    return v;
}

std::complex<double> eval(const Coeffs& c, std::complex<double> x) {
    std::complex<double> v = 0;
    for (double ck : c) v = v * x + ck;
    return v;
}

Coeffs derivative(const Coeffs& c) {
    if (c.size() <= 1) return {0.0};
    const int n = static_cast<int>(c.size()) - 1;
    Coeffs d(n);
    for (int i = 0; i < n; ++i) d[i] = c[i] * (n - i);
    return d;
}

Coeffs mul(const Coeffs& a, const Coeffs& b) {
    Coeffs r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Coeffs add(const Coeffs& a, const Coeffs& b) {
    const size_t n = std::max(a.size(), b.size());
    Coeffs r(n, 0.0);
    for (size_t i = 0; i < a.size(); ++i) r[n - a.size() + i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[n - b.size() + i] += b[i];
    return r;
}

Coeffs scale(const Coeffs& a, double s) {
    Coeffs r = a;
    for (double& v : r) v *= s;
    return r;
}

Coeffs from_roots(const std::vector<double>& rts) {
    Coeffs c = {1.0};
    for (double r : rts) c = mul(c, {1.0, -r});
    return c;
}

Coeffs deflate(const Coeffs& c, double r) {
    if (c.size() <= 1) return {0.0};
    Coeffs q(c.size() - 1);
    double acc = 0;
    for (size_t i = 0; i + 1 < c.size(); ++i) {
        acc = acc * r + c[i];
        q[i] = acc;
    }
    return q;
}

std::vector<std::complex<double>> divided_difference(const Coeffs& c, std::complex<double> r) {
    if (c.size() <= 1) return {0.0};
    std::vector<std::complex<double>> q(c.size() - 1);
    std::complex<double> acc = 0;
    for (size_t i = 0; i + 1 < c.size(); ++i) {
        acc = acc * r + c[i];
        q[i] = acc;
    }
    return q;
}

std::vector<std::complex<double>> roots(const Coeffs& c) {
    // strip leading zeros
    size_t lead = 0;
    while (lead + 1 < c.size() && c[lead] == 0.0) ++lead;
    const int n = static_cast<int>(c.size() - lead) - 1;
    if (n <= 0) return {};
    if (c[lead] == 0.0) throw std::invalid_argument("poly::roots: zero polynomial");
    std::vector<double> comp(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) comp[static_cast<size_t>(0) * n + j] = -c[lead + 1 + j] / c[lead];
    for (int i = 1; i < n; ++i) comp[static_cast<size_t>(i) * n + (i - 1)] = 1.0;
    return lapack::dense_eig(n, std::move(comp));
}

}  // namespace spectral::poly
