// Copyright 2026 The rgs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Game documents and the command-line front end.
//
// Document (JSON):
//   players   ["P1", ...]
//   actions   per-player action labels
//   payoffs   flat, player-major: payoffs[i * |A| + a]
//   signals   per-player signal labels
//   kernel    flat: kernel[a * |S| + s] = p(s | a)
//   messages  per-player message labels (defaults to the signals)
//   rhos      optional [{"name": ..., "maps": [{signal: message}, ...]}]
//   params    optional {eta, delta, grid, seed, enumeration_cap, mesh,
//             epsilon, per_plane, margin_factor}
//   normalized optional boolean
// Profiles are indexed with the last player's coordinate varying fastest.

#ifndef RGS_CLI_IO_H_
#define RGS_CLI_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rgs/game_model.h"

namespace rgs {

struct Params {
  double eta = 0.0;
  double delta = 0.9;
  int grid = 360;
  std::uint64_t seed = 1;
  std::size_t enumeration_cap = 10000;
  int mesh = 32;
  double epsilon = 0.05;
  int per_plane = 12;
  double margin_factor = 1e-6;
};

struct GameDocument {
  Instance inst;
  Params params;
};

// Parses and validates; inserts the truthful profile when messages equal
// signals. Throws ValidationError.
GameDocument ParseDocument(const std::string& text);
GameDocument LoadDocument(const std::string& path);
std::string SerializeDocument(const GameDocument& doc);

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitNotCertified = 3, kExitNumerical = 4 };

// Runs one command; returns the exit status. Errors print a single line
// "error: <kind>: <reason>" on `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rgs

#endif  // RGS_CLI_IO_H_
