#pragma once

#include <complex>
#include <vector>

#include "spectral/banded.hpp"

namespace spectral {

// Verblunsky window a_0..a_{n-1}, all strictly inside the unit disk.
struct VerblunskySeq {
    std::vector<std::complex<double>> a;

    VerblunskySeq() = default;
    explicit VerblunskySeq(std::vector<std::complex<double>> aa) : a(std::move(aa)) {
        for (const auto& v : a)
            if (!(std::abs(v) < 1.0)) throw InvalidInput("VerblunskySeq: need |a_k| < 1");
    }
    size_t size() const { return a.size(); }
    double rho(size_t k) const { return std::sqrt(1.0 - std::norm(a[k])); }
};

struct CmvWindow {
    ComplexBandedWindow mat;   // five-diagonal unitary window, w = 2
    double unitary_defect = 0; // max |(A^*A - I)(i,j)| over interior rows
};

// CMV operator window from a Verblunsky window: the product of the two
// block-diagonal factors (even blocks, then shift-conjugated odd blocks).
CmvWindow build_cmv(const VerblunskySeq& a);

struct FiveDiagReport {
    double entry_residual = 0;  // z-matrix closed forms on interior rows
    double band_residual = 0;   // zero-slot pattern of the five-diagonal shape
};

// Checks A + A^* (the z-matrix) against the closed forms
//   Z(k,k)    = -2 Re(a_k conj(a_{k-1}))
//   Z(k-2,k)  = rho_{k-1} rho_{k-2}
//   Z(k-1,k)  = rho_{k-1}(a_k - a_{k-2})   (conjugated on odd k)
// and the alternating zero slots of the five-diagonal pattern.
FiveDiagReport five_diagonal_check(const CmvWindow& c, const VerblunskySeq& a);

enum class SchurProjection {
    skew,                 // strict_upper(M) - strict_lower(M), anti-Hermitian
    upper_with_diagonal,  // plain upper-triangular part, for comparison runs
};

struct SchurFlowResult {
    std::vector<double> times;
    std::vector<VerblunskySeq> trajectory;   // extracted coefficients per sample
    std::vector<double> defects;             // unitarity defect per sample
    std::vector<double> drifts;              // spectral drift per sample
    double unitary_defect = 0;               // defect of the final window
    double spectral_drift = 0;               // Hausdorff distance of spectra
    bool hit_boundary = false;               // some |a_k| reached 1 - 1e-8
};

// RK4 integration of the Lax equation  dA/dt = [(A + A^*)_+ , A]  on the
// window; coefficients re-extracted from the evolved matrix entries.
SchurFlowResult schur_flow_step(const VerblunskySeq& a, double dt, int n_steps,
                                SchurProjection projection = SchurProjection::skew,
                                int sample_every = 0);

// Entry-ratio extraction of Verblunsky coefficients from a CMV-shaped window.
VerblunskySeq extract_verblunsky(const ComplexBandedWindow& m);

}  // namespace spectral
