#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bikelab/numerics.hpp"

// Single-command verification gate: every symplectic identity check and every
// closed-form/coordinate-oracle cross-check, printed as a table
//   identity | n | residual | tolerance | status
// Deterministic given the rng seed; returns false (and the caller exits
// nonzero) if any row fails.

namespace bikelab::lab {

struct VerifyOptions {
    std::uint64_t rng_seed = 12345;
    ToleranceConfig tolerances;
};

struct VerifyRow {
    std::string identity;
    int n = 0;  // 0 when not applicable
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

std::vector<VerifyRow> verify_rows(const VerifyOptions& opts);

// Runs all checks, prints the table, returns overall pass/fail.
bool run_verify(const VerifyOptions& opts, std::ostream& out);

}  // namespace bikelab::lab
