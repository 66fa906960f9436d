#pragma once

#include <ostream>

namespace pairdim::cli {

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnsupported = 2;

// Parses argv (argv[0] is the program name), runs one subcommand and writes
// the certificate to `out` or to the --out path. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace pairdim::cli
