#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

// Thrown when a Cholesky pivot fails; `row` is the first failing index.
// Branch validity of the polynomial renormalization is detected through
// this error, so it is a first-class type rather than an assertion.
struct NotPositiveDefinite : std::runtime_error {
    int row;
    explicit NotPositiveDefinite(int r)
        : std::runtime_error("matrix not positive definite at row " + std::to_string(r)), row(r) {}
};

// A delta-branch of the renormalization produced complex roots, repeated
// roots or nonpositive spectral weights.
struct BranchInvalid : std::runtime_error {
    long block_index;
    int crit_index;
    BranchInvalid(long s, int c, const std::string& what)
        : std::runtime_error("invalid branch at block s=" + std::to_string(s) +
                             ", critical point #" + std::to_string(c) + ": " + what),
          block_index(s), crit_index(c) {}
};

struct NoRealSolution : std::runtime_error {
    explicit NoRealSolution(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectral
