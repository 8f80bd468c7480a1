/*
 * Copyright 2026 The bbalgebra Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Each run writes one JSON report.

#ifndef BBA_CLI_HPP_
#define BBA_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace bba::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string subcommand;
  std::string structure;
  std::uint64_t seed = 0;
  std::size_t known = 0;
  std::string out;
  int verbosity = 0;
};

// args excludes the program name. The report goes to `out` (or to --out),
// diagnostics and summaries to `err`. Honors BBA_SEED.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace bba::cli

#endif  // BBA_CLI_HPP_
