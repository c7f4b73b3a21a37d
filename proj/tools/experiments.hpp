#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace spectral::harness {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

enum class ExperimentKind {
    validate_covering,
    renorm_iterate,
    renorm_poly,
    verify_identities,
    cmv,
    measure,
    lipschitz,
};

const char* kind_name(ExperimentKind k);
std::optional<ExperimentKind> kind_from_name(const std::string& name);

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::verify_identities;
    json params = json::object();
    std::uint64_t seed = 0;
    std::string output_dir = ".";
};

// Parses {"kind": ..., "params": {...}, "seed": N, "output_dir": ...};
// unknown keys anywhere are rejected.
ExperimentConfig parse_config(const json& j);

struct CheckResult {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool pass = false;
};

struct Report {
    json config_echo;
    std::string tool_version = kToolVersion;
    std::vector<CheckResult> checks;
    json results = json::object();
    // artifact name -> file body, written next to the report
    std::vector<std::pair<std::string, std::string>> artifacts;
    double wall_ms = 0;  // sidecar only, never part of the report body

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::vector<std::string> failing() const {
        std::vector<std::string> f;
        for (const auto& c : checks)
            if (!c.pass) f.push_back(c.name);
        return f;
    }
};

// Deterministic given config+seed; does not touch the filesystem.
Report run_experiment(const ExperimentConfig& cfg);

// Report JSON body (no timestamps, stable ordering).
json report_to_json(const Report& rep);

std::uint64_t config_hash(const ExperimentConfig& cfg);

// Writes the report plus artifacts into cfg.output_dir.  Names embed the
// config hash; an existing report with different content gets a fresh .vN
// suffix (append-only versioning).  Wall time goes to a sidecar file.
// Returns the report path.
std::string write_report(const Report& rep, const ExperimentConfig& cfg);

// CSV artifact emission for an already-run report (kept separate so tests
// can inspect bodies without touching the filesystem).
std::vector<std::pair<std::string, std::string>> emit_plotdata(const Report& rep);

}  // namespace spectral::harness
