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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dtstat/errors.h"
#include "dtstat/experiment.h"

namespace dtstat {
namespace {

namespace fs = std::filesystem;

// A small instance of the six-vertex smoke family; every trial takes
// milliseconds.
std::string TinyToml() {
  return R"([model]
n = 40
lambda = 6.0
eps = 0.5
s = 0.9
j_frac = 0.2

[family]
aleph = 6
num_pairs = 1
num_pairings = 2
path_len = 2
max_degree = 3
max_armpath = 2
tiota_min_frac = 0.3
tiota_threshold = 2
sim_k_frac = 0.5
sim_len = 1
pair_dist_lo = 2
pair_dist_hi = 2
cross_pair_dist = 3
symdiff_min = 1
seed = 1

[estimator]
method = "color"
t = 3
seed = 5

[experiment]
trials_p = 3
trials_q = 3
threshold_c = 0.5
master_seed = 11
calibration_trials = 0
)";
}

ExperimentConfig Tiny() { return ParseConfig(TinyToml()); }

// Denser and more clustered, so the mean under P is clearly positive.
std::string StrongToml() {
  std::string text = TinyToml();
  auto set = [&](const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
  };
  set("n = 40", "n = 60");
  set("lambda = 6.0", "lambda = 12.0");
  set("eps = 0.5", "eps = 0.9");
  set("calibration_trials = 0", "calibration_trials = 4");
  return text;
}

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no dtstat::Error thrown";
  return ErrorKind::kInvalidArgument;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dtstat_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------- decide

TEST(Decide, StrictlyAboveIsCorrelated) {
  EXPECT_EQ(Decide(1.5, 1.0), Decision::kP);
}

TEST(Decide, TieGoesToNull) { EXPECT_EQ(Decide(1.0, 1.0), Decision::kQ); }

TEST(Decide, BelowIsNull) { EXPECT_EQ(Decide(0.5, 1.0), Decision::kQ); }

// ---------------------------------------------------------------- config

TEST(Config, ParsesEverySection) {
  const ExperimentConfig cfg = Tiny();
  EXPECT_EQ(cfg.model.n, 40);
  EXPECT_DOUBLE_EQ(cfg.model.lambda, 6.0);
  EXPECT_EQ(cfg.family.aleph, 6);
  EXPECT_EQ(cfg.family.max_armpath, 2);
  EXPECT_EQ(cfg.family_seed, 1u);
  EXPECT_EQ(cfg.method, Method::kColor);
  EXPECT_EQ(cfg.mode, PathMode::kNb);
  EXPECT_EQ(cfg.estimator.t, 3);
  EXPECT_EQ(cfg.estimator.seed, 5u);
  EXPECT_EQ(cfg.trials_p, 3);
  EXPECT_EQ(cfg.master_seed, 11u);
  EXPECT_EQ(cfg.CalibrationTrials(), 0);
}

TEST(Config, JsonRoundTripsThroughToml) {
  const ExperimentConfig cfg = Tiny();
  const auto j = ConfigToJson(cfg);
  EXPECT_EQ(j["model"]["n"], 40);
  EXPECT_EQ(j["family"]["seed"], 1);
  EXPECT_EQ(j["estimator"]["method"], "color");
  EXPECT_EQ(j["experiment"]["threshold_c"], 0.5);
}

TEST(Config, EmptyTextGivesDefaults) {
  const ExperimentConfig cfg = ParseConfig("");
  EXPECT_DOUBLE_EQ(cfg.threshold_c, 0.5);
  EXPECT_EQ(cfg.CalibrationTrials(), cfg.trials_p);
}

TEST(Config, ThresholdBoundsAreRejected) {
  for (const char* c : {"0.0", "1.0", "-0.2", "1.5"}) {
    std::string text = TinyToml();
    text.replace(text.find("threshold_c = 0.5"), 17,
                 std::string("threshold_c = ") + c);
    EXPECT_EQ(KindOf([&] { ParseConfig(text); }), ErrorKind::kInvalidConfig)
        << c;
  }
}

TEST(Config, ZeroTrialsAreRejected) {
  std::string text = TinyToml();
  text.replace(text.find("trials_q = 3"), 12, "trials_q = 0");
  EXPECT_EQ(KindOf([&] { ParseConfig(text); }), ErrorKind::kInvalidConfig);
}

TEST(Config, UnknownKeyIsAParseError) {
  EXPECT_EQ(KindOf([] { ParseConfig("[model]\nlamda = 3.0\n"); }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { ParseConfig("[modle]\nn = 3\n"); }),
            ErrorKind::kParseError);
}

TEST(Config, MalformedTomlIsAParseError) {
  EXPECT_EQ(KindOf([] { ParseConfig("[model\nn = 3\n"); }),
            ErrorKind::kParseError);
  EXPECT_EQ(KindOf([] { ParseConfig("[model]\nn = \"many\"\n"); }),
            ErrorKind::kParseError);
}

TEST(Config, ColourCodingNeedsNbMode) {
  EXPECT_EQ(KindOf([] { ParseConfig("[estimator]\nmode = \"saw\"\n"); }),
            ErrorKind::kInvalidConfig);
  const ExperimentConfig cfg =
      ParseConfig("[estimator]\nmethod = \"exact\"\nmode = \"saw\"\n");
  EXPECT_EQ(cfg.mode, PathMode::kSaw);
}

TEST(Config, RatesAboveOneAreRejected) {
  EXPECT_EQ(KindOf([] { ParseConfig("[model]\nn = 10\nlambda = 9.0\n"); }),
            ErrorKind::kRateOutOfRange);
}

// ---------------------------------------------------------------- pairs

TEST(Pairs, SamplingIsDeterministic) {
  const ExperimentConfig cfg = Tiny();
  const auto a = SamplePair(cfg.model, Hypothesis::kP, 77);
  const auto b = SamplePair(cfg.model, Hypothesis::kP, 77);
  EXPECT_EQ(PairToJson(a, true), PairToJson(b, true));
  const auto c = SamplePair(cfg.model, Hypothesis::kP, 78);
  EXPECT_NE(PairToJson(a, true), PairToJson(c, true));
}

TEST(Pairs, CorrelatedLabelsFollowThePermutation) {
  const ExperimentConfig cfg = Tiny();
  const auto pair = SamplePair(cfg.model, Hypothesis::kP, 5);
  ASSERT_EQ(static_cast<int>(pair.pi.size()), cfg.model.n);
  for (int i = 0; i < cfg.model.n; ++i) {
    EXPECT_EQ(pair.sigma_b[pair.pi[i]], pair.sigma_a[i]);
  }
  EXPECT_EQ(pair.j_a.size(), cfg.model.j_size());
  EXPECT_EQ(pair.j_b.size(), cfg.model.j_size());
}

TEST(Pairs, JsonRoundTrip) {
  const ExperimentConfig cfg = Tiny();
  for (Hypothesis h : {Hypothesis::kP, Hypothesis::kQ}) {
    const auto pair = SamplePair(cfg.model, h, 9);
    const auto j = PairToJson(pair, false);
    EXPECT_FALSE(j.contains("latent"));
    const auto back = PairFromJson(j);
    EXPECT_EQ(PairToJson(back, false), j);
    EXPECT_TRUE(PairToJson(pair, true).contains("latent"));
  }
}

TEST(Pairs, MalformedFileIsAParseError) {
  EXPECT_EQ(KindOf([] { PairFromJson(nlohmann::json{{"a", 1}}); }),
            ErrorKind::kParseError);
}

// ---------------------------------------------------------------- summaries

TEST(Summary, MeanVarianceAndError) {
  const GroupSummary g = Summarize({1.0, 2.0, 3.0, 6.0});
  EXPECT_EQ(g.count, 4);
  EXPECT_DOUBLE_EQ(g.mean, 3.0);
  EXPECT_DOUBLE_EQ(g.variance, (4.0 + 1.0 + 0.0 + 9.0) / 3.0);
  EXPECT_DOUBLE_EQ(g.se, std::sqrt(g.variance / 4.0));
}

// Upper tail of Student's t by Simpson's rule on the density.
double TailOracle(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                   std::sqrt(df * M_PI);
  auto density = [&](double x) {
    return c * std::pow(1.0 + x * x / df, -(df + 1) / 2);
  };
  // P(T > t) = 1/2 - integral over [0, t] for t >= 0.
  const int steps = 20000;
  const double h = t / steps;
  double s = density(0.0) + density(t);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * density(i * h);
  return 0.5 - s * h / 3.0;
}

TEST(Welch, MatchesDirectIntegration) {
  GroupSummary x{12, 3.0, 4.0, std::sqrt(4.0 / 12)};
  GroupSummary y{9, 1.5, 2.5, std::sqrt(2.5 / 9)};
  const WelchResult w = WelchTest(x, y);
  const double vx = 4.0 / 12, vy = 2.5 / 9;
  EXPECT_NEAR(w.t, 1.5 / std::sqrt(vx + vy), 1e-12);
  const double df =
      (vx + vy) * (vx + vy) / (vx * vx / 11 + vy * vy / 8);
  EXPECT_NEAR(w.df, df, 1e-12);
  EXPECT_NEAR(w.p_value, TailOracle(w.t, df), 1e-9);
}

TEST(Welch, DegenerateGroupsGiveNoEvidence) {
  const WelchResult w = WelchTest(Summarize({1.0}), Summarize({0.0, 1.0}));
  EXPECT_EQ(w.t, 0.0);
  EXPECT_EQ(w.p_value, 1.0);
}

// ---------------------------------------------------------------- calibrate

TEST(Calibrate, ThresholdIsTheConfiguredFractionOfTheMean) {
  const ExperimentConfig cfg = ParseConfig(StrongToml());
  const Calibration a = CalibrateThreshold(cfg);
  EXPECT_EQ(a.tau, cfg.threshold_c * a.mean);
  EXPECT_DOUBLE_EQ(a.tau / a.mean, cfg.threshold_c);
  const Calibration b = CalibrateThreshold(cfg);
  EXPECT_EQ(a.tau, b.tau);
  EXPECT_EQ(a.se, b.se);
}

TEST(Calibrate, NonPositiveMeanIsDegenerate) {
  EXPECT_EQ(KindOf([] { CalibrationFromMean(Summarize({-1.0, 0.5}), 0.5); }),
            ErrorKind::kDegenerateCalibration);
  // With J empty no path can attach, so every statistic is zero.
  ExperimentConfig cfg = Tiny();
  cfg.model.j_frac = 0.0;
  cfg.calibration_trials = 2;
  EXPECT_EQ(KindOf([&] { CalibrateThreshold(cfg); }),
            ErrorKind::kDegenerateCalibration);
}

// ---------------------------------------------------------------- experiment

TEST(Experiment, OneTrialPerGroupGivesTwoRows) {
  ExperimentConfig cfg = Tiny();
  cfg.trials_p = cfg.trials_q = 1;
  const Report r = RunExperiment(cfg);
  ASSERT_EQ(r.trials.size(), 2u);
  EXPECT_EQ(r.trials[0].hypothesis, Hypothesis::kP);
  EXPECT_EQ(r.trials[1].hypothesis, Hypothesis::kQ);
  const std::string csv = ReportCsv(r, false);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "trial_id,hypothesis,seed,value,status,wall_time");
}

TEST(Experiment, RerunIsByteIdentical) {
  const ExperimentConfig cfg = Tiny();
  const Report a = RunExperiment(cfg);
  const Report b = RunExperiment(cfg);
  EXPECT_EQ(ReportCsv(a, false), ReportCsv(b, false));
  EXPECT_EQ(ReportJson(a, false).dump(), ReportJson(b, false).dump());
}

TEST(Experiment, ThreadCountChangesNothing) {
  ExperimentConfig cfg = Tiny();
  const std::string one = ReportCsv(RunExperiment(cfg), false);
  cfg.threads = 3;
  EXPECT_EQ(ReportCsv(RunExperiment(cfg), false), one);
}

TEST(Experiment, MasterSeedChangesTheDraws) {
  ExperimentConfig cfg = Tiny();
  const std::string a = ReportCsv(RunExperiment(cfg), false);
  cfg.master_seed += 1;
  EXPECT_NE(ReportCsv(RunExperiment(cfg), false), a);
}

TEST(Experiment, SummaryMatchesTheRows) {
  ExperimentConfig cfg = Tiny();
  cfg.trials_p = 5;
  cfg.trials_q = 4;
  const Report r = RunExperiment(cfg);
  // Recompute from the CSV text, not from the in-memory rows.
  std::istringstream csv(ReportCsv(r, false));
  std::string line;
  std::getline(csv, line);
  double sum[2] = {0, 0};
  int count[2] = {0, 0};
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    ASSERT_GE(f.size(), 5u);
    if (f[4] != "ok") continue;
    const int g = f[1] == "P" ? 0 : 1;
    sum[g] += std::strtod(f[3].c_str(), nullptr);
    ++count[g];
  }
  EXPECT_EQ(rows, 9);
  ASSERT_EQ(count[0], r.p.count);
  ASSERT_EQ(count[1], r.q.count);
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
  };
  EXPECT_TRUE(close(sum[0] / count[0], r.p.mean)) << r.p.mean;
  EXPECT_TRUE(close(sum[1] / count[1], r.q.mean)) << r.q.mean;
  const auto j = ReportJson(r, false);
  EXPECT_TRUE(close(j["summary"]["P"]["mean"].get<double>(), r.p.mean));
  EXPECT_EQ(j["trials"].size(), 9u);
}

TEST(Experiment, FailedTrialsAreRecorded) {
  // The exact statistic with a one-image budget fails on every trial.
  ExperimentConfig cfg = Tiny();
  cfg.method = Method::kExact;
  cfg.budget = 1;
  cfg.model.lambda = 20.0;
  const Report r = RunExperiment(cfg);
  ASSERT_EQ(static_cast<int>(r.trials.size()), cfg.trials_p + cfg.trials_q);
  for (const auto& t : r.trials) {
    EXPECT_EQ(t.status, "BudgetExceeded");
    EXPECT_TRUE(std::isnan(t.value));
  }
  EXPECT_EQ(r.p.count, 0);
  EXPECT_FALSE(r.calibrated);
  const std::string csv = ReportCsv(r, false);
  EXPECT_NE(csv.find(",P,"), std::string::npos);
  EXPECT_NE(csv.find(",,BudgetExceeded,"), std::string::npos);
}

TEST(Experiment, ErrorRatesUseTheThreshold) {
  ExperimentConfig cfg = ParseConfig(StrongToml());
  cfg.trials_p = cfg.trials_q = 6;
  const Report r = RunExperiment(cfg);
  if (!r.calibrated) GTEST_SKIP() << r.calibration_error;
  int false_alarms = 0, misses = 0;
  for (const auto& t : r.trials) {
    const Decision d = Decide(t.value, r.calibration.tau);
    if (t.hypothesis == Hypothesis::kQ) false_alarms += d == Decision::kP;
    if (t.hypothesis == Hypothesis::kP) misses += d == Decision::kQ;
  }
  EXPECT_DOUBLE_EQ(r.false_alarm_rate, false_alarms / 6.0);
  EXPECT_DOUBLE_EQ(r.miss_rate, misses / 6.0);
}

TEST(Experiment, TimingIsOptIn) {
  const Report r = RunExperiment(Tiny());
  const std::string plain = ReportCsv(r, false);
  std::istringstream in(plain);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) EXPECT_EQ(line.back(), ',');
  EXPECT_FALSE(ReportJson(r, false)["trials"][0].contains("wall_time"));
  EXPECT_TRUE(ReportJson(r, true)["trials"][0].contains("wall_time"));
}

// ---------------------------------------------------------------- CLI

#ifdef DTSTAT_CLI_PATH
int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(DTSTAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = TempDir("cli");
    config_ = (dir_ / "tiny.toml").string();
    std::ofstream(config_) << TinyToml();
    strong_ = (dir_ / "strong.toml").string();
    std::ofstream(strong_) << StrongToml();
  }
  fs::path dir_;
  std::string config_;
  std::string strong_;
};

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("trees enumerate --n 5 --out " + (dir_ / "t.txt").string()),
            0);
  const std::string bad = (dir_ / "bad.toml").string();
  std::ofstream(bad) << "[experiment]\nthreshold_c = 0.0\n";
  EXPECT_EQ(RunCli("calibrate --config " + bad), 2);
  EXPECT_EQ(RunCli("experiment --bogus-flag"), 2);
  // A one-image budget on the exact statistic.
  const std::string pair = (dir_ / "pair.json").string();
  ASSERT_EQ(RunCli("sample --config " + config_ + " --out " + pair), 0);
  std::string text = TinyToml();
  text.replace(text.find("method = \"color\""), 16,
               "method = \"exact\"\nbudget = 1");
  std::ofstream((dir_ / "budget.toml").string()) << text;
  EXPECT_EQ(RunCli("stat --config " + (dir_ / "budget.toml").string() +
                   " --pair " + pair),
            3);
}

TEST_F(CliTest, EnumerateListsEveryTree) {
  const auto out = dir_ / "trees.txt";
  ASSERT_EQ(RunCli("trees enumerate --n 7 --out " + out.string()), 0);
  const std::string text = Slurp(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
}

TEST_F(CliTest, EveryCommandIsReproducible) {
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sample --reveal-latent --hypothesis Q --config " + config_, "x.json"},
      {"trees build-family --config " + config_, "x.json"},
      {"trees check --code \"((()())(()))\" --config " + config_, "x.json"},
      {"calibrate --seed 11 --config " + strong_, "x.json"},
      {"experiment --config " + config_, "run"},
  };
  const std::string pair = (dir_ / "pair.json").string();
  ASSERT_EQ(RunCli("sample --config " + config_ + " --out " + pair), 0);
  auto all = commands;
  all.push_back({"stat --config " + config_ + " --pair " + pair, "x.json"});
  // Exact enumeration needs a much smaller graph.
  std::string small = TinyToml();
  small.replace(small.find("n = 40"), 6, "n = 16");
  small.replace(small.find("lambda = 6.0"), 12, "lambda = 3.0");
  const std::string small_cfg = (dir_ / "small.toml").string();
  std::ofstream(small_cfg) << small;
  const std::string small_pair = (dir_ / "small_pair.json").string();
  ASSERT_EQ(RunCli("sample --config " + small_cfg + " --out " + small_pair), 0);
  all.push_back({"stat --method exact --mode saw --config " + small_cfg +
                     " --pair " + small_pair,
                 "x.json"});
  for (const auto& [args, name] : all) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir_ / ("rep" + std::to_string(rep)) / name;
      fs::remove_all(out);
      ASSERT_EQ(RunCli(args + " --out " + out.string()), 0) << args;
      if (fs::is_directory(out)) {
        outputs[rep] = Slurp(out / "trials.csv") + Slurp(out / "report.json");
      } else {
        outputs[rep] = Slurp(out);
      }
    }
    EXPECT_FALSE(outputs[0].empty()) << args;
    EXPECT_EQ(outputs[0], outputs[1]) << args;
  }
}
#endif  // DTSTAT_CLI_PATH

}  // namespace
}  // namespace dtstat
