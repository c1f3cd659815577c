// Copyright 2026 The betaenc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <json.hpp>

namespace betaenc::commands {

// Runs one subcommand (encode, convert, lochs, entropy, extract, battery)
// on a JSON request and returns the formatted result ("format": "json" or
// "csv"). Identical requests give byte-identical output.
std::string run(const std::string& command, const nlohmann::json& request);

}  // namespace betaenc::commands
