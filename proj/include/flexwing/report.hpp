#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flexwing {

inline constexpr const char* kToolVersion = "1.0.0";

// Lines of the header written at the top of every output file.
struct Provenance {
    std::string command;
    std::string scenario;
    std::string config_hash;  // FNV-1a of the configuration text
    std::optional<double> Lambda;
    std::string extra;

    std::vector<std::string> lines() const;
};

// '#'-prefixed lines.
void write_provenance(std::ostream& os, const Provenance& p);

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct ChartOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    int width = 800;
    int height = 480;
    bool log_y = false;
};

// Standalone SVG line chart; provenance goes into an XML comment.
void write_svg_chart(std::ostream& os, const std::vector<Series>& series, const ChartOptions& opts,
                     const Provenance& prov);

}  // namespace flexwing
