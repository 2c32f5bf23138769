// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace mep::cli {

/// Entry point of the mepsolve tool. Returns the process exit code: 0 on
/// success, 1 for usage errors or unconverged results, 2 when the library
/// reports an error (its name is printed first on the error stream).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// --threads if given, else MEPSOLVE_THREADS, else 1.
int resolve_threads(std::optional<int> flag);

}  // namespace mep::cli
