#pragma once

// The knotc commands as library calls. Each returns what the CLI prints and
// the exit code it should return.

#include "knot/diagnostics.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace knot {

enum ExitCode : int {
    kExitOk = 0,
    kExitTypeError = 1,
    kExitParseError = 2,
    kExitFuelExhausted = 3,
    kExitStuck = 4,
    kExitUsage = 5,
};

struct Verdict {
    std::string command;
    Mode mode = Mode::Sorted;
    int exit_code = kExitOk;
    std::string message;      // stdout
    std::string diagnostics;  // stderr: errors and warnings
};

constexpr std::uint64_t kDefaultFuel = 10000;

// --fuel wins, then $KNOTLANG_FUEL, then the default. Throws
// std::invalid_argument on a malformed or zero value.
std::uint64_t resolve_fuel(std::optional<std::uint64_t> flag, const char *env);

Verdict cmd_check(const std::string &file, Mode mode);

// Writes the target program to `out`, or into the message when empty.
Verdict cmd_compile(const std::string &file, Mode mode, const std::string &out = {});

// `trace` > 0 prints that many step records before the outcome.
Verdict cmd_run(const std::string &file, Mode mode, std::uint64_t fuel, bool target = false,
                std::size_t trace = 0);

// Derivation tree of the program, or of its closure conversion.
Verdict cmd_explain(const std::string &file, Mode mode, bool target = false);

// The whole narrative: the knot under each discipline, the derivations for
// id and f, and the rejected backpatch in the target. Exit 0 iff all six
// verdicts come out as expected.
Verdict cmd_demo();

}  // namespace knot
