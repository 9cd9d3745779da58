/*
 * Copyright 2026 The Abstract Grammar Parser Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * The agparse command line: `parse` and `oracle` subcommands.
 */

#ifndef AGP_CLI_HPP
#define AGP_CLI_HPP

#include <iosfwd>

namespace agp {

inline constexpr int kExitRecognized = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnrecognized = 2;
inline constexpr int kExitUsage = 64;

int run_cli(int argc, const char *const *argv, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace agp

#endif // AGP_CLI_HPP
