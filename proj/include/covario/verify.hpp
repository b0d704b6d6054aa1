#pragma once

// Named verification suites. Each suite runs a fixed set of checks with the
// default tolerances and returns a table of measured values against limits.
// The CLI `verify` subcommand and the acceptance runner share these.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "covario/geometry.hpp"
#include "covario/oracles.hpp"

namespace covario {

inline constexpr int kSchemaVersion = 1;

struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    /// "<=", ">=", "in [a, b]" or "==": how value is compared against limit
    std::string relation = "<=";
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    bool passed = false;
    double seconds = 0.0;
    std::vector<Check> checks;
    nlohmann::json details = nlohmann::json::object();
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int family = 0;                    ///< counterexample: 1, 3, or 0 for both
    std::optional<double> tolerance;   ///< overrides the suite's main tolerance
};

/// Suite names in acceptance order.
const std::vector<std::string>& suite_names();

/// Runs one suite by name. "all" is not a suite; use run_all.
/// InvalidArgument for unknown names.
SuiteResult run_suite(const std::string& name, const VerifyOptions& options = {});

/// Every suite in order, plus a final wall-clock check on the whole run.
std::vector<SuiteResult> run_all(const VerifyOptions& options = {});

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const SuiteResult& r);

/// Fixed-width pass/fail table, one row per check.
std::string format_table(const std::vector<SuiteResult>& results);

// ---------------------------------------------------------------------------
// Generators shared with the tests

/// Convex polygon from `n` sorted random angles on a random ellipse, rotated
/// and shifted into [-2, 2]^2. n >= 3.
Polygon random_convex_polygon(oracles::RandomStream& rng, int n);

/// Smooth body h = a0 + sum_k (a_k cos k theta + b_k sin k theta) with
/// coefficients small enough that h + h'' >= a0 / 2.
SupportBody random_support_body(oracles::RandomStream& rng, int harmonics = 4);

/// Unit square [0, 1]^2, the disk of radius 1 and h = 1 + 0.05 cos 3 theta.
Body unit_square();
Body unit_disk();
Body constant_width_body();

}  // namespace covario
