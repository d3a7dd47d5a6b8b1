// config.hpp — model parameters, flat key-value config files, content hashing
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace aahbath {

// All physical parameters of the chain+bath model, in units 2J = 1.
// Energies are measured in 2J, times in (2J)^-1.
struct ModelConfig {
    int    N_s   = 21;                      // chain length
    double lambda = 1.0;                    // chain hopping
    double Delta = 1.0;                     // AAH modulation amplitude
    double beta  = 1.6180339887498949;      // (1+sqrt(5))/2
    double phi   = -1.8849555921538759;     // -0.6*pi
    int    d     = 1;                       // bath dimension, 1..3
    double g     = 0.1;                     // chain-bath coupling
    int    N_b   = 201;                     // bath linear size per axis
    double dt    = 0.02;                    // time step
    double t_max = 200.0;                   // evolution horizon

    void validate() const {
        if (N_s < 1) throw std::invalid_argument("ModelConfig: N_s must be >= 1");
        if (N_b < 1) throw std::invalid_argument("ModelConfig: N_b must be >= 1");
        if (d < 1 || d > 3) throw std::invalid_argument("ModelConfig: d must be 1, 2 or 3");
        if (dt <= 0) throw std::invalid_argument("ModelConfig: dt must be positive");
        if (t_max <= 0) throw std::invalid_argument("ModelConfig: t_max must be positive");
    }
    int steps() const { return static_cast<int>(t_max / dt + 0.5); }
};

// Flat "key = value" text files. Unknown keys are returned to the caller so a
// run driver can layer its own keys on top of the model block.
struct ParsedConfig {
    ModelConfig model;
    std::map<std::string, std::string> extra;   // non-model keys, verbatim
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig load_config_file(const std::string& path);

// Canonical serialization: model keys in fixed order, %.17g values.
// parse(serialize(parse(x))) == parse(x) is a fixed point.
std::string canonical_config(const ModelConfig& cfg);

// FNV-1a over the canonical serialization; stable across runs and platforms.
std::uint64_t config_hash(const ModelConfig& cfg);
std::string config_hash_hex(const ModelConfig& cfg);

} // namespace aahbath
