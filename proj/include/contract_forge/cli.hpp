#pragma once

// Subcommands behind the contract_forge executable. Each returns a process exit
// code: 0 on success, 2 on invalid input, 3 when a solver fails.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;  // stdout when unset
    std::optional<std::string> regime;         // joint | as | mh | all
    std::optional<std::uint64_t> seed;
    std::optional<std::string> grid;           // "r_steps,t_steps,refine"
    unsigned workers = 1;
};

/// Thread cap from CONTRACT_FORGE_THREADS, else the hardware concurrency.
unsigned default_workers();

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace cforge::cli
