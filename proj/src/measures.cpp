#include "spectral/measures.hpp"

#include <cmath>

#include "spectral/lapack.hpp"

namespace spectral {

double MomentVector::hankel_min_eigenvalue() const {
    const int K = static_cast<int>(m.size());
    if (K == 0) return 0.0;
    const int h = (K + 1) / 2;  // largest Hankel [m_{i+j}], i,j < h
    std::vector<double> band;   // dense via dsbevd with kd = h-1
    std::vector<double> dense(static_cast<size_t>(h) * h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) dense[static_cast<size_t>(i) * h + j] = m[i + j];
    // pack as lower band with kd = h-1
    std::vector<double> packed(static_cast<size_t>(h) * h, 0.0);
    for (int j = 0; j < h; ++j)
        for (int i = j; i < h; ++i)
            packed[static_cast<size_t>(i - j) + static_cast<size_t>(j) * h] =
                dense[static_cast<size_t>(i) * h + j];
    auto vals = lapack::sym_band_eig(h, h - 1, std::move(packed));
    return vals.front();
}

MomentVector moments_of(const DiscreteMeasure& nu, int K) {
    MomentVector out;
    out.m.resize(K + 1);
    for (int k = 0; k <= K; ++k) out.m[k] = nu.moment(k);
    return out;
}

}  // namespace spectral
