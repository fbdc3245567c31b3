// Copyright 2026 The Restoration Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RESTORATION_TOOLS_COMMANDS_HPP
#define RESTORATION_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace restoration::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kAborted = 2 };

struct RunRequest {
    std::filesystem::path network;
    std::filesystem::path scenario;
    std::filesystem::path config;  // empty: built-in defaults
    std::optional<std::uint64_t> seed;
    std::string format = "text";   // "text" or "json"
};

int cmd_validate(const std::filesystem::path& network, std::ostream& out, std::ostream& err);
int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err);
int cmd_plans(const std::filesystem::path& network, const std::filesystem::path& candidate,
              const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_belief(const RunRequest& request, std::size_t step, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches.
int run_main(int argc, char** argv);

}  // namespace restoration::cli

#endif  // RESTORATION_TOOLS_COMMANDS_HPP
