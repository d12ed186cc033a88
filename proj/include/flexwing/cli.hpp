#pragma once

#include "flexwing/certificates.hpp"
#include "flexwing/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace flexwing {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInfeasible = 2,
    kExitVerifyFailed = 3,
    kExitDiverged = 4,
};

struct CommandOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    bool mild_solution = false;
};

// Control law used by simulate/verify: eps from the certificate search when
// the config says "auto", otherwise as given. `report` is empty when the
// fixed eps violate the certificate preconditions (see `rejection`).
struct ResolvedControl {
    ControlLaw law;
    std::optional<CertificateReport> report;
    std::string rejection;
};
ResolvedControl resolve_control(const RunConfig& config);

int cmd_certify(const RunConfig& config, const CommandOptions& opts);
int cmd_simulate(const RunConfig& config, const CommandOptions& opts);
int cmd_verify(const RunConfig& config, const CommandOptions& opts);
int cmd_converge(const RunConfig& config, const CommandOptions& opts);

// Parses argv and dispatches; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace flexwing
