#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bellmdl/errors.hpp"

// Run configuration shared by the CLI commands: quadrature tolerances, Monte
// Carlo controls, scan grids, and output selection. Values come from built-in
// defaults, then an optional key = value config file (path from --config or
// the BELL_MDL_CONFIG environment variable), then command-line flags.

namespace bellmdl {

enum class OutputFormat { csv, json };

struct RunConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::uint64_t mc_n = 1'000'000;
    std::uint64_t seed = 12345;
    double gamma_min = -0.4;
    double gamma_max = 0.4;
    double gamma_step = 0.1;
    int phi_steps = 179;
    int grid_n = 181;
    double refine_tol = 1e-6;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;

    std::vector<double> gamma_grid() const {
        std::vector<double> grid;
        for (double g = gamma_min; g <= gamma_max + 0.5 * gamma_step; g += gamma_step)
            grid.push_back(g);
        return grid;
    }

    std::vector<double> phi_grid() const {
        std::vector<double> grid;
        grid.reserve(phi_steps);
        for (int i = 1; i <= phi_steps; ++i)
            grid.push_back(std::numbers::pi * i / (phi_steps + 1));
        return grid;
    }

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw DomainError("config: tolerances must be positive");
        if (!(gamma_step > 0.0)) throw DomainError("config: gamma_step must be positive");
        if (gamma_min > gamma_max) throw DomainError("config: gamma_min > gamma_max");
        for (double g : gamma_grid()) {
            if (!(g > -0.5)) throw DomainError("config: gamma grid entries must be > -1/2");
        }
        if (phi_steps < 1) throw DomainError("config: phi_steps must be >= 1");
        if (grid_n < 32) throw DomainError("config: grid_n must be >= 32");
        if (!(refine_tol > 0.0)) throw DomainError("config: refine_tol must be positive");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace detail

/// Applies one `key = value` setting. Unknown keys are an error.
inline void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "rel_tol") cfg.rel_tol = std::stod(value);
        else if (key == "abs_tol") cfg.abs_tol = std::stod(value);
        else if (key == "mc_n") cfg.mc_n = std::stoull(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "gamma_min") cfg.gamma_min = std::stod(value);
        else if (key == "gamma_max") cfg.gamma_max = std::stod(value);
        else if (key == "gamma_step") cfg.gamma_step = std::stod(value);
        else if (key == "phi_steps") cfg.phi_steps = std::stoi(value);
        else if (key == "grid_n") cfg.grid_n = std::stoi(value);
        else if (key == "refine_tol") cfg.refine_tol = std::stod(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "format") {
            if (value == "csv") cfg.format = OutputFormat::csv;
            else if (value == "json") cfg.format = OutputFormat::json;
            else throw DomainError("config: format must be csv or json");
        }
        else throw DomainError("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw DomainError("config: bad value '" + value + "' for key '" + key + "'");
    } catch (const std::out_of_range&) {
        throw DomainError("config: value out of range for key '" + key + "'");
    }
}

/// Loads `key = value` lines over `cfg`. '#' starts a comment; blank lines
/// are ignored.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line " + std::to_string(lineno) +
                              " is not 'key = value'");
        config_set(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

}  // namespace bellmdl
