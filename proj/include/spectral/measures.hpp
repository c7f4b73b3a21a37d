#pragma once

#include <vector>

#include "spectral/errors.hpp"

namespace spectral {

// Finitely supported measure on the real line.
struct DiscreteMeasure {
    std::vector<double> support;
    std::vector<double> weights;

    DiscreteMeasure() = default;
    DiscreteMeasure(std::vector<double> s, std::vector<double> w)
        : support(std::move(s)), weights(std::move(w)) {
        validate();
    }

    void validate() const {
        if (support.size() != weights.size())
            throw InvalidInput("DiscreteMeasure: support/weights length mismatch");
        double total = 0;
        for (double w : weights) {
            if (w < 0) throw InvalidInput("DiscreteMeasure: negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidInput("DiscreteMeasure: weights must sum to 1");
    }

    double moment(int k) const {
        double s = 0;
        for (size_t i = 0; i < support.size(); ++i) {
            double xk = 1;
            for (int j = 0; j < k; ++j) xk *= support[i];
            s += weights[i] * xk;
        }
        return s;
    }
};

// Moment sequence m_0..m_K with m_0 = 1.
struct MomentVector {
    std::vector<double> m;

    MomentVector() = default;
    explicit MomentVector(std::vector<double> mm) : m(std::move(mm)) {}

    size_t size() const { return m.size(); }
    double operator[](size_t k) const { return m[k]; }

    // Smallest eigenvalue of the Hankel matrices [m_{i+j}]; a valid moment
    // sequence is positive semidefinite.
    double hankel_min_eigenvalue() const;
};

MomentVector moments_of(const DiscreteMeasure& nu, int K);

}  // namespace spectral
