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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rgs/cli_io.h"
#include "test_util.h"

namespace rgs {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rgs");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rgs_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string Write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

TEST_CASE("normalize prints the minmax vector and round-trips") {
  const fs::path dir = TempDir("normalize");
  const Run r = Cli({"normalize", testing::DataPath("pd_raw.json"), "--out", (dir / "n.json").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "(1, 1)\n");
  const GameDocument raw = LoadDocument(testing::DataPath("pd_raw.json"));
  const GameDocument norm = LoadDocument((dir / "n.json").string());
  const StageGame expect = NormalizeMinmax(raw.inst.game).game;
  CHECK(norm.inst.game.payoff == expect.payoff);  // bit-for-bit
  CHECK(norm.inst.monitoring.kernel == raw.inst.monitoring.kernel);
  // Already normalized: minmax is zero.
  CHECK(Cli({"normalize", (dir / "n.json").string()}).out == "(0, 0)\n");
}

TEST_CASE("documents serialize losslessly") {
  for (const char* name : {"pd_noisy.json", "pg3.json", "one_action.json", "pd_raw.json"}) {
    const GameDocument a = LoadDocument(testing::DataPath(name));
    const GameDocument b = ParseDocument(SerializeDocument(a));
    CHECK(b.inst.game.payoff == a.inst.game.payoff);
    CHECK(b.inst.game.actions == a.inst.game.actions);
    CHECK(b.inst.monitoring.kernel == a.inst.monitoring.kernel);
    CHECK(b.inst.messages.messages == a.inst.messages.messages);
    REQUIRE(b.inst.messages.candidate_rhos.size() == a.inst.messages.candidate_rhos.size());
    for (std::size_t k = 0; k < a.inst.messages.candidate_rhos.size(); ++k) {
      CHECK(b.inst.messages.candidate_rhos[k].name == a.inst.messages.candidate_rhos[k].name);
      CHECK(b.inst.messages.candidate_rhos[k].maps == a.inst.messages.candidate_rhos[k].maps);
    }
    CHECK(b.params.eta == a.params.eta);
    CHECK(b.params.grid == a.params.grid);
    CHECK(SerializeDocument(b) == SerializeDocument(a));
  }
}

TEST_CASE("bound of a one-action game is a single point") {
  const fs::path dir = TempDir("bound");
  const Run r = Cli({"bound", testing::DataPath("one_action.json"), "--eta", "0", "--grid", "360",
                     "--out", (dir / "q.csv").string(), "--svg", (dir / "q.svg").string()});
  REQUIRE(r.code == kExitOk);
  std::istringstream csv(Slurp(dir / "q.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "# rgs set v1");
  std::getline(csv, line);
  CHECK(line == "lambda_1,lambda_2,support");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 360);
  const std::string svg = Slurp(dir / "q.svg");
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("<polygon") == std::string::npos);
}

TEST_CASE("score emits a versioned CSV with 17 significant digits") {
  const Run r = Cli({"score", testing::DataPath("pd_noisy.json"), "--grid", "8", "--eta", "0.1"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("# rgs support v1\nlambda_1,lambda_2,k_lower,k_upper,witness\n", 0) == 0);
  CHECK(r.out.find("0.70710678118654757") != std::string::npos);
}

TEST_CASE("commands are deterministic") {
  const std::vector<std::string> args = {"bound", testing::DataPath("pg3.json"), "--grid", "40"};
  const Run a = Cli(args), b = Cli(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  std::vector<std::string> serial = args;
  serial.push_back("--serial");
  CHECK(Cli(serial).out == a.out);
}

TEST_CASE("errors exit nonzero with one parsable line") {
  const fs::path dir = TempDir("errors");
  auto one_line = [](const Run& r, const std::string& prefix) {
    CHECK(r.err.rfind(prefix, 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  };
  const Run unknown = Cli({"frobnicate", testing::DataPath("pd_raw.json")});
  CHECK(unknown.code == kExitValidation);
  one_line(unknown, "error: usage: ");

  const Run malformed = Cli({"bound", Write(dir / "bad.json", "{\"players\": [")});
  CHECK(malformed.code == kExitValidation);
  one_line(malformed, "error: validation: malformed document");

  const Run missing = Cli({"bound", (dir / "none.json").string()});
  CHECK(missing.code == kExitValidation);

  const std::string mismatch =
      R"({"players":["A","B"],"actions":[["x"],["x"]],"payoffs":[1,2,3],)"
      R"("signals":[["y"],["y"]],"kernel":[1]})";
  const Run dim = Cli({"bound", Write(dir / "dim.json", mismatch)});
  CHECK(dim.code == kExitValidation);
  one_line(dim, "error: validation: dimension mismatch");

  const Run delta = Cli({"aps", testing::DataPath("pd_noisy.json"), "--set",
                         Write(dir / "s.csv", "# rgs set v1\nlambda_1,lambda_2,support\n1,0,1\n"),
                         "--delta", "1.5"});
  CHECK(delta.code == kExitValidation);
}

TEST_CASE("folk writes its artifacts") {
  const fs::path dir = TempDir("folk");
  const Run r = Cli({"folk", testing::DataPath("pg3.json"), "--grid", "60", "--out-dir", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("folk_verdict,true") != std::string::npos);
  CHECK(r.out.find("within_tolerance,true") != std::string::npos);
  for (const char* f : {"folk_report.txt", "v_star.csv", "q_lower.csv", "smooth_witness.csv"})
    CHECK(fs::exists(dir / f));
  CHECK_FALSE(fs::exists(dir / "folk.svg"));  // three players: CSV only
}

TEST_CASE("check reports failing conditions with exit status zero") {
  const Run r = Cli({"check", testing::DataPath("pd_noisy.json"), "--grid", "36"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("folk_verdict,false") != std::string::npos);
}

}  // namespace
}  // namespace rgs
