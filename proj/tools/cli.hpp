// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace gsac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point behind the `gsac` binary. Subcommands: design, sweep,
/// search, partitions. Returns 0 on success, 1 on usage/validation errors,
/// 2 on runtime failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gsac::cli
