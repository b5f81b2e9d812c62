#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bikelab/geometry.hpp"
#include "bikelab/lab/svg.hpp"
#include "bikelab/numerics.hpp"

// Experiment configuration: a single JSON document per run. Polygons are
// serialized as JSON arrays of [x, y] pairs with vertex order preserved; that
// format is shared by every subcommand and by the --polygon flag.

namespace bikelab::lab {

struct OutputPaths {
    std::string csv;   // empty = skip
    std::string svg;
    std::string json;
};

struct ExperimentConfig {
    // orbit | quad-orbit | flow | phase-portrait | domain | period6 | conics | verify
    std::string kind;

    std::optional<Polygon> polygon;
    std::vector<std::array<double, 2>> shape_seeds;  // (alpha, beta) pairs

    std::optional<double> t;      // absolute frame length
    std::optional<double> t_rel;  // frame length as a fraction of min side

    int steps = 1024;        // orbit / quad-orbit
    double duration = 10.0;  // flow
    int iters = 200;         // phase-portrait
    int grid = 200;          // domain
    int max_steps = 500;     // domain

    double t_min = 0.50, t_max = 0.60, t_step = 0.002;  // period6

    ToleranceConfig tolerances;
    std::uint64_t rng_seed = 12345;
    OutputPaths out;
    FigureSpec figure;

    // Frame length for the config's polygon; throws ConfigError when neither
    // t nor t_rel is usable.
    double resolve_t() const;

    // Stable hash of the canonical serialized form, recorded in outputs.
    std::uint64_t hash() const;
};

// Parses and validates a config file; referenced files (polygon_file,
// seeds_file) are loaded here so missing paths fail fast. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

// Same, from an in-memory JSON document.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir = ".");

// Polygon <-> JSON array of [x, y] pairs.
std::string polygon_to_json(const Polygon& p);
Polygon polygon_from_json(const std::string& json_text);

}  // namespace bikelab::lab
