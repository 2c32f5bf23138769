// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mepsolve/problem.hpp"

namespace mep {

/// Problem files are JSON documents; docs/problem-file.md has the grammar.
/// Entries are [re, im] pairs printed with 17 significant digits, so a
/// write/read cycle reproduces every matrix entry bit for bit and
/// format_problem(parse_problem(s)) == s for any canonical document s.

MepProblem parse_problem(std::string_view text);
std::string format_problem(const MepProblem& problem);

MepProblem read_problem(const std::filesystem::path& path);
void write_problem(const MepProblem& problem, const std::filesystem::path& path);

}  // namespace mep
