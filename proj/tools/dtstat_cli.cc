// Copyright 2026 The dtstat Authors.
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

// dtstat: sampling, tree families, statistics, calibration and experiments.
// Exit codes: 0 success, 2 configuration error, 3 budget exceeded, 1 other.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dtstat/errors.h"
#include "dtstat/experiment.h"
#include "dtstat/tree_enum.h"

namespace {

using namespace dtstat;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
}

void WriteJson(const std::string& path, const nlohmann::json& j) {
  WriteText(path, j.dump(2) + "\n");
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidConfig, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, path + ": " + e.what());
  }
}

Hypothesis ParseHypothesis(const std::string& name) {
  if (name == "P" || name == "p") return Hypothesis::kP;
  if (name == "Q" || name == "q") return Hypothesis::kQ;
  throw Error(ErrorKind::kInvalidConfig, "hypothesis must be P or Q");
}

// Options shared by the config-driven commands.
struct Common {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> method;
  std::string out;

  // Overrides apply before validation, so --method exact --mode saw works
  // on a colour-coding config.
  ExperimentConfig Load() const {
    ExperimentConfig cfg;
    if (!config.empty()) {
      cfg = ParseConfigUnchecked(ReadText(config));
    }
    if (mode) cfg.mode = ParsePathMode(*mode);
    if (method) cfg.method = ParseMethod(*method);
    cfg.Validate();
    return cfg;
  }
};

void AddCommon(CLI::App* cmd, Common& c, const std::string& seed_help) {
  cmd->add_option("--config", c.config, "TOML configuration")
      ->check(CLI::ExistingFile);
  if (!seed_help.empty()) cmd->add_option("--seed", c.seed, seed_help);
  cmd->add_option("--mode", c.mode, "attached paths: saw or nb")
      ->check(CLI::IsMember({"saw", "nb"}));
  cmd->add_option("--out", c.out, "output path (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decorated-tree statistics for correlated block models"};
  app.require_subcommand(1);

  // sample
  Common sample;
  std::string hypothesis = "P";
  int index = 0;
  bool reveal_latent = false;
  auto* sample_cmd = app.add_subcommand("sample", "emit a pair file");
  AddCommon(sample_cmd, sample, "master seed (overrides the config)");
  sample_cmd->add_option("--hypothesis", hypothesis, "P or Q");
  sample_cmd->add_option("--index", index, "trial index within the group")
      ->check(CLI::NonNegativeNumber);
  sample_cmd->add_flag("--reveal-latent", reveal_latent,
                       "include labels and the permutation");

  // trees
  auto* trees_cmd = app.add_subcommand("trees", "tree utilities");
  trees_cmd->require_subcommand(1);
  int enum_n = 0;
  std::string enum_out;
  auto* enumerate_cmd =
      trees_cmd->add_subcommand("enumerate", "list free trees by code");
  enumerate_cmd->add_option("--n", enum_n, "number of vertices")
      ->required()
      ->check(CLI::Range(1, 20));
  enumerate_cmd->add_option("--out", enum_out, "output path");

  Common check;
  std::string check_code;
  auto* check_cmd =
      trees_cmd->add_subcommand("check", "admissibility of a rooted tree");
  AddCommon(check_cmd, check, "");
  check_cmd->add_option("--code", check_code, "rooted parenthesis code")
      ->required();

  Common build;
  auto* build_cmd =
      trees_cmd->add_subcommand("build-family", "build the shape family");
  AddCommon(build_cmd, build, "family seed (overrides the config)");

  // stat
  Common stat;
  std::string pair_path;
  auto* stat_cmd = app.add_subcommand("stat", "statistic on a pair file");
  AddCommon(stat_cmd, stat, "estimator seed (overrides the config)");
  stat_cmd->add_option("--pair", pair_path, "pair file")
      ->required()
      ->check(CLI::ExistingFile);
  stat_cmd->add_option("--method", stat.method, "exact or color")
      ->check(CLI::IsMember({"exact", "color"}));

  // calibrate
  Common calibrate;
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "threshold from correlated samples");
  AddCommon(calibrate_cmd, calibrate, "master seed (overrides the config)");

  // experiment
  Common experiment;
  bool record_timing = false;
  std::optional<int> threads;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "P versus Q Monte Carlo experiment");
  AddCommon(experiment_cmd, experiment, "master seed (overrides the config)");
  experiment_cmd->add_flag("--record-timing", record_timing,
                           "write per-trial wall times");
  experiment_cmd->add_option("--threads", threads, "worker threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sample_cmd) {
      ExperimentConfig cfg = sample.Load();
      if (sample.seed) cfg.master_seed = *sample.seed;
      const Hypothesis h = ParseHypothesis(hypothesis);
      const PairInstance pair =
          SamplePair(cfg.model, h, TrialSeed(cfg.master_seed, h, index));
      WriteJson(sample.out, PairToJson(pair, reveal_latent));
    } else if (*enumerate_cmd) {
      std::string text;
      for (const auto& t : EnumerateFreeTrees(enum_n)) text += t.code + "\n";
      WriteText(enum_out, text);
    } else if (*check_cmd) {
      const ExperimentConfig cfg = check.Load();
      const CanonicalTree tree = TreeFromCode(check_code, true);
      const AdmissibilityReport rep = CheckAdmissible(tree, cfg.family);
      WriteJson(check.out, {{"code", tree.code},
                            {"admissible", rep.admissible},
                            {"items", rep.item}});
    } else if (*build_cmd) {
      ExperimentConfig cfg = build.Load();
      if (build.seed) cfg.family_seed = *build.seed;
      const Family family = BuildFamily(cfg.family, cfg.family_seed);
      nlohmann::json j = FamilyToJson(family);
      j["hash"] = FamilyHash(family);
      WriteJson(build.out, j);
    } else if (*stat_cmd) {
      ExperimentConfig cfg = stat.Load();
      if (stat.seed) cfg.estimator.seed = *stat.seed;
      const Family family = BuildFamily(cfg.family, cfg.family_seed);
      const PairInstance pair = PairFromJson(ReadJson(pair_path));
      nlohmann::json j = ReportToJson(EvaluateStatistic(cfg, family, pair));
      j["method"] = MethodName(cfg.method);
      WriteJson(stat.out, j);
    } else if (*calibrate_cmd) {
      ExperimentConfig cfg = calibrate.Load();
      if (calibrate.seed) cfg.master_seed = *calibrate.seed;
      const Calibration cal = CalibrateThreshold(cfg);
      WriteJson(calibrate.out, {{"tau", cal.tau},
                                {"mean", cal.mean},
                                {"se", cal.se},
                                {"trials", cal.trials},
                                {"threshold_c", cfg.threshold_c},
                                {"master_seed", cfg.master_seed}});
    } else if (*experiment_cmd) {
      ExperimentConfig cfg = experiment.Load();
      if (experiment.seed) cfg.master_seed = *experiment.seed;
      if (threads) cfg.threads = *threads;
      const Report report = RunExperiment(cfg);
      const std::string dir = experiment.out.empty() ? "." : experiment.out;
      std::filesystem::create_directories(dir);
      WriteText(dir + "/trials.csv", ReportCsv(report, record_timing));
      WriteJson(dir + "/report.json", ReportJson(report, record_timing));
      std::cout << "P mean " << report.p.mean << " (n=" << report.p.count
                << "), Q mean " << report.q.mean << " (n=" << report.q.count
                << "), Welch t " << report.welch.t << ", one-sided p "
                << report.welch.p_value << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "dtstat: " << e.what() << "\n";
    if (IsConfigError(e.kind())) return kExitConfig;
    if (IsBudgetError(e.kind())) return kExitBudget;
    return kExitOther;
  } catch (const std::exception& e) {
    std::cerr << "dtstat: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}
