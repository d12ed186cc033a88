#pragma once

#include "flexwing/certificates.hpp"
#include "flexwing/fem.hpp"
#include "flexwing/model.hpp"
#include "flexwing/simulation.hpp"
#include "flexwing/verification.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace flexwing {

// Parse failure with the offending line (0 when not tied to a line) and key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string key, const std::string& message);
    int line;
    std::string key;
};

struct RunConfig {
    std::string scenario = "default";
    WingModel model;
    ControlLaw law;
    bool eps_auto = false;
    LoopMode mode = LoopMode::ClosedLoop;
    Disturbance disturbance = Disturbance::zero();
    InitialCondition initial;
    std::string initial_kind = "zero";
    int elements = 16;
    SimulationConfig sim;
    VerifyOptions verify;
    SearchOptions search;
    std::uint64_t seed = 1;
    std::string text;  // raw configuration text, hashed into provenance headers
};

// Sectioned key/value format:
//   [section]
//   key = value   # comment
// Profiles accept: a number, "taper v0 f" for v0 (1 - f y / l), "poly c0 c1 ...",
// or "samples y0:v0 y1:v1 ...". Unknown sections or keys are rejected.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);

// Parses a single profile description on [0, span].
SpatialProfile parse_profile(const std::string& text, double span);

// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace flexwing
