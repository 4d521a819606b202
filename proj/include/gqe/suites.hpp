#pragma once

#include <map>
#include <string>
#include <vector>

#include "gqe/geometry.hpp"

namespace gqe {

struct SuiteConfig {
    std::string suite;
    std::string model = "kantor";  // kantor | parabolic | elliptic | tits
    int p = 3, h = 2;
    int sigma = 1;  // frobenius exponent for kantor models
    int m = -1;     // nonsquare override, -1 = canonical
    bool exhaustive = true;
    uint64_t seed = 1;
    int samples = 50;
};

struct SuiteOutcome {
    bool pass = false;
    std::string report_json;
};

// q = p^h with p prime; false when q is not a prime power.
bool factor_prime_power(int q, int& p, int& h);

std::vector<std::string> suite_names();

SuiteOutcome run_suite(const SuiteConfig& cfg);

// Geometry of the configured model (shared, cached) plus its sidecar model
// description (form coefficients / clan data / oval coordinates).
const Geometry& build_model(const SuiteConfig& cfg, std::map<std::string, std::string>& sidecar);

// Decomposition driver for the CLI: reads a serialized cover of the omega-1
// affine geometry (point and line map files) and emits the decomposition
// result as JSON.
std::string run_decompose(const SuiteConfig& cfg, const std::string& point_map_path,
                          const std::string& line_map_path);

// Census report rows for the CLI subcommands.
std::string run_subgq_report(const SuiteConfig& cfg, bool with_special_lines);

}  // namespace gqe
