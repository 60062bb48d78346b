#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kdv/grid.hpp"
#include "kdv/soliton.hpp"
#include "kdv/spectral.hpp"

namespace kdv {

struct QuadratureConfig {
    double s_max = 4.0;
    int nodes = 32;
    double amplitude = 1.0;  ///< gaussian density
    double width = 1.0;

    QuadratureSpectrum spectrum() const;
};

struct EvolutionConfig {
    double k0 = 1.0;
    int M = 2;
    std::vector<double> p0;
    double t_end = 0.5;
    int steps = 100;
    int substeps = 1;
    bool enforce_conservation = true;
};

using VesselConfig = std::variant<std::monostate, SolitonSpec, DiscreteSpectrum, QuadratureConfig, EvolutionConfig>;

struct CheckSelection {
    std::string name;
    std::optional<double> tolerance;
};

struct RunConfig {
    VesselConfig vessel;
    std::optional<Grid2D> grid;
    std::vector<CheckSelection> checks;
    std::optional<std::string> output_path;
    std::optional<std::string> format;  ///< "csv" or "json"
    std::optional<std::uint64_t> seed;
};

/// Parses a JSON document. Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace kdv
