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

#include "rgs/cli_io.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgs/conditions.h"
#include "rgs/geometry.h"
#include "rgs/scoring.h"
#include "rgs/setops.h"

namespace rgs {
namespace {

using nlohmann::json;

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string("malformed document: missing field '") + key + "'");
  return j.at(key);
}

std::vector<std::vector<std::string>> LabelLists(const json& j, const char* key, int n) {
  const json& v = Field(j, key);
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw ValidationError(std::string("dimension mismatch: '") + key + "' needs one list per player");
  std::vector<std::vector<std::string>> out;
  for (const json& list : v) {
    if (!list.is_array() || list.empty())
      throw ValidationError(std::string("malformed document: '") + key + "' entry must be a nonempty list");
    std::vector<std::string> labels;
    for (const json& s : list) {
      if (!s.is_string()) throw ValidationError(std::string("malformed document: '") + key + "' labels must be strings");
      labels.push_back(s.get<std::string>());
    }
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError(std::string("malformed document: duplicate label in '") + key + "'");
    out.push_back(std::move(labels));
  }
  return out;
}

Vec Numbers(const json& j, const char* key, std::size_t expected) {
  const json& v = Field(j, key);
  if (!v.is_array()) throw ValidationError(std::string("malformed document: '") + key + "' must be an array");
  if (v.size() != expected)
    throw ValidationError(std::string("dimension mismatch: '") + key + "' has " +
                          std::to_string(v.size()) + " entries, expected " +
                          std::to_string(expected));
  Vec out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number())
      throw ValidationError(std::string("malformed document: '") + key + "' entry " +
                            std::to_string(k) + " is not a number");
    out.push_back(v[k].get<double>());
  }
  return out;
}

int IndexOf(const std::vector<std::string>& labels, const std::string& s, const std::string& what) {
  auto it = std::find(labels.begin(), labels.end(), s);
  if (it == labels.end()) throw ValidationError("malformed document: unknown " + what + " '" + s + "'");
  return static_cast<int>(it - labels.begin());
}

template <typename T>
void ReadParam(const json& p, const char* key, T* out) {
  if (!p.contains(key)) return;
  try {
    *out = p.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("malformed document: parameter '") + key + "'");
  }
}

}  // namespace

GameDocument ParseDocument(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed document: ") + e.what());
  }
  GameDocument doc;
  Instance& inst = doc.inst;
  StageGame& g = inst.game;
  const json& players = Field(j, "players");
  if (!players.is_array() || players.empty())
    throw ValidationError("malformed document: 'players' must be a nonempty list");
  for (const json& p : players) g.players.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  const int n = static_cast<int>(g.players.size());
  if (n > 16) throw ValidationError("at most 16 players are supported");
  g.actions = LabelLists(j, "actions", n);
  std::vector<int> sizes;
  for (const auto& a : g.actions) sizes.push_back(static_cast<int>(a.size()));
  g.space = ProfileSpace(sizes);
  const std::size_t na = g.space.count();
  const Vec flat = Numbers(j, "payoffs", n * na);
  g.payoff.assign(na, Vec(n));
  for (int i = 0; i < n; ++i)
    for (std::size_t a = 0; a < na; ++a) g.payoff[a][i] = flat[i * na + a];
  if (j.contains("normalized")) g.normalized = j.at("normalized").get<bool>();

  MonitoringStructure& mon = inst.monitoring;
  mon.signals = LabelLists(j, "signals", n);
  sizes.clear();
  for (const auto& s : mon.signals) sizes.push_back(static_cast<int>(s.size()));
  mon.space = ProfileSpace(sizes);
  mon.kernel = Numbers(j, "kernel", na * mon.space.count());

  MessageModel& msg = inst.messages;
  msg.messages = j.contains("messages") ? LabelLists(j, "messages", n) : mon.signals;
  sizes.clear();
  for (const auto& m : msg.messages) sizes.push_back(static_cast<int>(m.size()));
  msg.space = ProfileSpace(sizes);

  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw ValidationError("malformed document: 'params' must be an object");
    ReadParam(p, "eta", &doc.params.eta);
    ReadParam(p, "delta", &doc.params.delta);
    ReadParam(p, "grid", &doc.params.grid);
    ReadParam(p, "seed", &doc.params.seed);
    ReadParam(p, "enumeration_cap", &doc.params.enumeration_cap);
    ReadParam(p, "mesh", &doc.params.mesh);
    ReadParam(p, "epsilon", &doc.params.epsilon);
    ReadParam(p, "per_plane", &doc.params.per_plane);
    ReadParam(p, "margin_factor", &doc.params.margin_factor);
  }
  msg.enumeration_cap = doc.params.enumeration_cap;

  if (j.contains("rhos")) {
    const json& rhos = j.at("rhos");
    if (!rhos.is_array()) throw ValidationError("malformed document: 'rhos' must be a list");
    for (const json& r : rhos) {
      RhoProfile rho;
      rho.name = Field(r, "name").get<std::string>();
      const json& maps = Field(r, "maps");
      if (!maps.is_array() || static_cast<int>(maps.size()) != n)
        throw ValidationError("message strategy '" + rho.name + "' needs one map per player");
      for (int i = 0; i < n; ++i) {
        std::vector<int> m(mon.signals[i].size(), -1);
        if (!maps[i].is_object())
          throw ValidationError("message strategy '" + rho.name + "' map must be an object");
        for (auto it = maps[i].begin(); it != maps[i].end(); ++it) {
          const int s = IndexOf(mon.signals[i], it.key(), "signal");
          m[s] = IndexOf(msg.messages[i], it.value().get<std::string>(), "message");
        }
        for (int x : m)
          if (x < 0)
            throw ValidationError("message strategy '" + rho.name + "' not total for player " +
                                  std::to_string(i));
        rho.maps.push_back(std::move(m));
      }
      msg.candidate_rhos.push_back(std::move(rho));
    }
  }
  EnsureTruthful(&inst);
  ValidateInstance(inst);
  if (!(doc.params.eta >= 0.0)) throw ValidationError("eta must be nonnegative");
  if (doc.params.grid < 4) throw ValidationError("grid must have at least 4 directions");
  return doc;
}

GameDocument LoadDocument(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open document '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseDocument(ss.str());
}

std::string SerializeDocument(const GameDocument& doc) {
  const Instance& inst = doc.inst;
  const StageGame& g = inst.game;
  const int n = g.n();
  json j;
  j["players"] = g.players;
  j["actions"] = g.actions;
  Vec flat(n * g.num_profiles());
  for (int i = 0; i < n; ++i)
    for (std::size_t a = 0; a < g.num_profiles(); ++a) flat[i * g.num_profiles() + a] = g.payoff[a][i];
  j["payoffs"] = flat;
  j["normalized"] = g.normalized;
  j["signals"] = inst.monitoring.signals;
  j["kernel"] = inst.monitoring.kernel;
  j["messages"] = inst.messages.messages;
  json rhos = json::array();
  for (const RhoProfile& r : inst.messages.candidate_rhos) {
    json maps = json::array();
    for (int i = 0; i < n; ++i) {
      json m = json::object();
      for (std::size_t s = 0; s < r.maps[i].size(); ++s)
        m[inst.monitoring.signals[i][s]] = inst.messages.messages[i][r.maps[i][s]];
      maps.push_back(m);
    }
    rhos.push_back({{"name", r.name}, {"maps", maps}});
  }
  j["rhos"] = rhos;
  const Params& p = doc.params;
  j["params"] = {{"eta", p.eta},         {"delta", p.delta},
                 {"grid", p.grid},       {"seed", p.seed},
                 {"enumeration_cap", p.enumeration_cap},
                 {"mesh", p.mesh},       {"epsilon", p.epsilon},
                 {"per_plane", p.per_plane}, {"margin_factor", p.margin_factor}};
  return j.dump(2) + "\n";
}

namespace {

std::string VecText(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + FormatDouble(v[i]);
  return s + ")";
}

struct Prepared {
  GameDocument doc;
  Vec subtracted;
  DirectionGrid grid;
  PayoffGeometry geometry;
};

Prepared Prepare(const std::string& path, int grid_size, std::uint64_t seed) {
  Prepared p;
  p.doc = LoadDocument(path);
  const NormalizeResult nr = NormalizeMinmax(p.doc.inst.game);
  p.doc.inst.game = nr.game;
  p.subtracted = nr.subtracted;
  p.grid = MakeGrid(p.doc.inst.n(), grid_size, seed);
  p.geometry = ComputePayoffGeometry(p.doc.inst.game, p.grid);
  return p;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounding sets, folk-theorem conditions and strict APS operators for repeated "
               "games with private monitoring and public communication"};
  app.require_subcommand(1);
  std::string doc_path, out_path, out_svg, out_dir, set_path, side_name = "lower";
  double eta = 0, delta = 0.9, epsilon = 0.05, shrink = 0.1;
  int grid = 360, mesh = 32;
  std::uint64_t seed = 1;
  bool serial = false, all_profiles = false;

  auto common = [&](CLI::App* sub, bool with_eta) {
    sub->add_option("document", doc_path, "game document (JSON)")->required();
    sub->add_flag("--serial", serial, "use the serial reference kernels");
    if (with_eta) {
      sub->add_option("--eta", eta, "strictness wedge");
      sub->add_option("--grid", grid, "number of directions (n = 2) or sample size (n >= 3)");
      sub->add_option("--seed", seed, "direction sampling seed (n >= 3)");
    }
  };
  CLI::App* normalize = app.add_subcommand("normalize", "print the pure minmax vector and normalize");
  common(normalize, false);
  normalize->add_option("--out", out_path, "write the normalized document here");

  CLI::App* score = app.add_subcommand("score", "directional score brackets as CSV");
  common(score, true);
  score->add_option("--side", side_name, "lower or upper")->check(CLI::IsMember({"lower", "upper"}));
  score->add_option("--out", out_path, "CSV output (default stdout)");
  score->add_flag("--all-profiles", all_profiles, "search every action profile");

  CLI::App* bound = app.add_subcommand("bound", "bounding set as CSV (and SVG for two players)");
  common(bound, true);
  bound->add_option("--side", side_name, "lower or upper")->check(CLI::IsMember({"lower", "upper"}));
  bound->add_option("--out", out_path, "CSV output (default stdout)");
  bound->add_option("--svg", out_svg, "SVG output (two players)");
  bound->add_flag("--all-profiles", all_profiles, "search every action profile");

  CLI::App* check = app.add_subcommand("check", "condition report");
  common(check, true);
  check->add_option("--out", out_path, "report output (default stdout)");

  CLI::App* folk = app.add_subcommand("folk", "folk-theorem verdict and Hausdorff distance");
  common(folk, true);
  folk->add_option("--epsilon", epsilon, "target Hausdorff distance");
  folk->add_option("--out-dir", out_dir, "directory for report, set snapshots and SVG");

  CLI::App* aps = app.add_subcommand("aps", "self-decomposability of a set on a boundary mesh");
  common(aps, false);
  aps->add_option("--eta", eta, "strictness wedge");
  aps->add_option("--delta", delta, "discount factor");
  aps->add_option("--set", set_path, "set CSV (direction, support)")->required();
  aps->add_option("--mesh", mesh, "boundary mesh size");

  CLI::App* deltabar = app.add_subcommand("deltabar", "smallest certified discount factor");
  common(deltabar, true);
  deltabar->add_option("--shrink", shrink, "inner shrink of the lower bounding set");
  deltabar->add_option("--mesh", mesh, "boundary mesh size");

  std::vector<std::string> argv_store = args;
  if (argv_store.empty()) argv_store.push_back("rgs");
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitValidation;
  }
  const Exec exec = serial ? Exec::kSerial : Exec::kParallel;
  auto opt_given = [](CLI::App* sub, const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };

  try {
    if (normalize->parsed()) {
      GameDocument doc = LoadDocument(doc_path);
      const NormalizeResult nr = NormalizeMinmax(doc.inst.game);
      out << VecText(nr.subtracted) << "\n";
      doc.inst.game = nr.game;
      if (!out_path.empty()) WriteFile(out_path, SerializeDocument(doc));
      return kExitOk;
    }
    CLI::App* sub = app.get_subcommands().front();
    {
      // Document parameters fill every flag the user did not pass.
      const GameDocument probe = LoadDocument(doc_path);
      if (!opt_given(sub, "--eta")) eta = probe.params.eta;
      if (!opt_given(sub, "--grid")) grid = probe.params.grid;
      if (!opt_given(sub, "--seed")) seed = probe.params.seed;
      if (!opt_given(sub, "--delta")) delta = probe.params.delta;
      if (!opt_given(sub, "--mesh")) mesh = probe.params.mesh;
      if (!opt_given(sub, "--epsilon")) epsilon = probe.params.epsilon;
    }
    if (!(eta >= 0.0)) throw ValidationError("eta must be nonnegative");
    if (grid < 4) throw ValidationError("grid must have at least 4 directions");

    if (score->parsed() || bound->parsed()) {
      const Prepared p = Prepare(doc_path, grid, seed);
      ScoringOptions so;
      so.eta = eta;
      so.all_profiles = all_profiles;
      so.exec = exec;
      const Scorer scorer(p.doc.inst, p.geometry, so);
      const Side side = side_name == "upper" ? Side::kUpper : Side::kLower;
      const BoundingSet bs = ComputeBoundingSet(scorer, p.grid, side, exec);
      std::ostringstream csv;
      if (score->parsed()) {
        WriteSupportCsv(csv, scorer, bs);
      } else {
        WriteSetCsv(csv, bs.Q, p.grid);
        if (!out_svg.empty() && p.doc.inst.n() == 2) {
          std::ostringstream svg;
          WriteSvg(svg, {{&p.geometry.V, "gray", "V"}, {&p.geometry.V_star, "blue", "V*"},
                         {&bs.Q, "red", "Q"}});
          WriteFile(out_svg, svg.str());
        }
      }
      if (out_path.empty()) out << csv.str(); else WriteFile(out_path, csv.str());
      if (bs.Q.empty) {
        err << "error: infeasible: bounding set is empty\n";
        return kExitNotCertified;
      }
      return kExitOk;
    }

    if (check->parsed() || folk->parsed()) {
      const Prepared p = Prepare(doc_path, grid, seed);
      FolkOptions fo;
      fo.eta = eta;
      fo.exec = exec;
      fo.per_plane = p.doc.params.per_plane;
      fo.compute_hausdorff = folk->parsed();
      const ConditionReport r = FolkVerdict(p.doc.inst, p.geometry, p.grid, fo);
      std::ostringstream rep;
      WriteConditionReport(rep, p.doc.inst, r);
      if (check->parsed()) {
        if (out_path.empty()) out << rep.str(); else WriteFile(out_path, rep.str());
        return kExitOk;
      }
      const double tol = epsilon + 2.0 * p.grid.resolution * Diameter(p.geometry.V);
      std::ostringstream extra;
      extra << "\n[hausdorff]\n";
      extra << "epsilon," << FormatDouble(epsilon) << "\n";
      extra << "grid_resolution," << FormatDouble(p.grid.resolution) << "\n";
      extra << "tolerance," << FormatDouble(tol) << "\n";
      if (r.hausdorff)
        extra << "within_tolerance," << (*r.hausdorff <= tol ? "true" : "false") << "\n";
      std::optional<ConvexSetRep> smooth;
      if (r.bounding && !r.bounding->Q.empty) {
        try {
          smooth = SmoothInner(r.bounding->Q, epsilon / 2.0, epsilon / 4.0, p.grid);
          extra << "smooth_witness_hausdorff_vs_vstar,"
                << FormatDouble(GridHausdorff(*smooth, p.geometry.V_star)) << "\n";
        } catch (const InfeasibleError& e) {
          extra << "smooth_witness," << e.what() << "\n";
        }
      }
      out << rep.str() << extra.str();
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        WriteFile(out_dir + "/folk_report.txt", rep.str() + extra.str());
        std::ostringstream vs;
        WriteSetCsv(vs, p.geometry.V_star, p.grid);
        WriteFile(out_dir + "/v_star.csv", vs.str());
        if (r.bounding) {
          std::ostringstream qs;
          WriteSetCsv(qs, r.bounding->Q, p.grid);
          WriteFile(out_dir + "/q_lower.csv", qs.str());
        }
        if (smooth) {
          std::ostringstream ws;
          WriteSetCsv(ws, *smooth, p.grid);
          WriteFile(out_dir + "/smooth_witness.csv", ws.str());
        }
        if (p.doc.inst.n() == 2) {
          std::vector<SvgLayer> layers = {{&p.geometry.V, "gray", "V"},
                                          {&p.geometry.V_star, "blue", "V*"}};
          if (r.bounding) layers.push_back({&r.bounding->Q, "red", "Q lower"});
          if (smooth) layers.push_back({&*smooth, "green", "smooth witness"});
          std::ostringstream svg;
          WriteSvg(svg, layers);
          WriteFile(out_dir + "/folk.svg", svg.str());
        }
      }
      return r.folk_verdict ? kExitOk : kExitNotCertified;
    }

    if (aps->parsed()) {
      GameDocument doc = LoadDocument(doc_path);
      doc.inst.game = NormalizeMinmax(doc.inst.game).game;
      std::ifstream in(set_path);
      if (!in) throw ValidationError("cannot open set '" + set_path + "'");
      DirectionGrid g;
      const ConvexSetRep w = ReadSetCsv(in, &g);
      if (g.n != doc.inst.n()) throw ValidationError("set dimension differs from player count");
      MembershipOptions mo;
      mo.eta = eta;
      mo.margin_factor = doc.params.margin_factor;
      const BOperator op(doc.inst, mo, exec);
      const SelfDecomposition sd = SelfDecomposable(op, w, g, delta, mesh, exec);
      out << "certified," << (sd.certified ? "true" : "false") << "\n";
      out << "label," << (sd.certified ? "mesh-certified" : "not certified") << " with "
          << sd.mesh.size() << " points\n";
      out << "delta," << FormatDouble(delta) << "\n";
      out << "point,decomposable,profile,rho,silenced\n";
      for (std::size_t k = 0; k < sd.mesh.size(); ++k) {
        const MembershipResult& m = sd.results[k];
        out << VecText(sd.mesh[k]) << "," << (m.decomposable ? "true" : "false") << ",";
        if (m.decomposable)
          out << m.witness.a << "," << op.rhos()[m.witness.rho_index].name << ","
              << m.witness.silenced;
        else
          out << "-,-,-";
        out << "\n";
      }
      return sd.certified ? kExitOk : kExitNotCertified;
    }

    if (deltabar->parsed()) {
      const Prepared p = Prepare(doc_path, grid, seed);
      ScoringOptions so;
      so.eta = eta;
      so.exec = exec;
      const Scorer scorer(p.doc.inst, p.geometry, so);
      const BoundingSet bs = ComputeBoundingSet(scorer, p.grid, Side::kLower, exec);
      const ConvexSetRep w = SmoothInner(bs.Q, shrink, shrink / 2.0, p.grid);
      MembershipOptions mo;
      mo.eta = eta;
      mo.margin_factor = p.doc.params.margin_factor;
      const BOperator op(p.doc.inst, mo, exec);
      const DeltaBar db = FindDeltaBar(op, w, p.grid, mesh, exec);
      out << "delta,certified\n";
      for (std::size_t k = 0; k < db.deltas.size(); ++k)
        out << FormatDouble(db.deltas[k]) << "," << (db.certified_at[k] ? "true" : "false") << "\n";
      out << "monotone," << (db.monotone ? "true" : "false") << "\n";
      if (!db.certified) {
        out << "delta_bar,not certified up to " << FormatDouble(db.deltas.back()) << "\n";
        return kExitNotCertified;
      }
      out << "delta_bar," << FormatDouble(db.delta_bar) << "\n";
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "error: validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << "\n";
    return kExitNotCertified;
  } catch (const NumericalError& e) {
    err << "error: numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: validation: " << e.what() << "\n";
    return kExitValidation;
  }
  err << "error: usage: unknown command\n";
  return kExitValidation;
}

}  // namespace rgs
