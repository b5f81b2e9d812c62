#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bikelab/dynamics.hpp"
#include "bikelab/lab/config.hpp"

// Batch experiment driver: runs one configured experiment, writes CSV/SVG/JSON
// outputs, and prints an invariant-drift summary. Deterministic given the
// config (and its rng seed); reruns produce byte-identical files.

namespace bikelab::lab {

struct ExitReport {
    int code = 0;  // 0 ok, 1 numerical check failure, 2 config error
    std::string message;
};

// One named value series over an orbit or flow.
struct Series {
    std::string name;
    std::vector<double> values;
};

struct DriftColumn {
    std::string name;
    double max_rel_drift = 0.0;  // max |v_k - v_0| / max(|v_0|, eps)
    double slope = 0.0;          // least-squares slope against the index
};

struct DriftReport {
    std::vector<DriftColumn> columns;
    Point2 center;  // mean vertex position over the orbit (empirical invariant center)
};

DriftReport drift_report(std::span<const Series> series);
DriftReport drift_report(const std::vector<OrbitRecord>& records);

// Number of worker threads: BIKELAB_THREADS if set, else hardware concurrency.
int worker_threads();

// Runs the experiment described by the config, writing outputs and printing
// the summary to `out`. Numerical conservation failures return code 1 with a
// diagnostic naming the violated conservation law.
ExitReport run(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace bikelab::lab
