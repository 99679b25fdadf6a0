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

// Configuration, calibration and Monte Carlo experiments comparing the
// correlated and null models.

#ifndef DTSTAT_EXPERIMENT_H_
#define DTSTAT_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dtstat/color_coding.h"
#include "dtstat/expectation.h"
#include "dtstat/family.h"
#include "dtstat/sbm.h"
#include "dtstat/statistic.h"
#include "json.hpp"

namespace dtstat {

enum class Method { kColor, kExact };

const char* MethodName(Method m);
Method ParseMethod(const std::string& name);  // "color" | "exact"
const char* HypothesisName(Hypothesis h);     // "P" | "Q"

struct ExperimentConfig {
  ModelParams model;
  FamilyConfig family;
  uint64_t family_seed = 1;
  EstimatorConfig estimator;
  Method method = Method::kColor;
  PathMode mode = PathMode::kNb;  // the colour-coding estimator is NB only
  uint64_t budget = kDefaultEmbeddingBudget;
  int trials_p = 40;
  int trials_q = 40;
  // Fresh correlated samples behind the threshold; 0 reuses the experiment's
  // own P group.
  int calibration_trials = -1;  // negative: same as trials_p
  double threshold_c = 0.5;
  uint64_t master_seed = 0;
  int threads = 1;

  int CalibrationTrials() const {
    return calibration_trials < 0 ? trials_p : calibration_trials;
  }
  // Throws kInvalidConfig (and kRateOutOfRange via the model).
  void Validate() const;
};

// TOML with sections [model], [family], [estimator], [experiment]. Unknown
// keys and malformed values are kParseError; the result is validated.
ExperimentConfig ParseConfig(const std::string& toml_text);
// Same without the final Validate(), for callers that override fields first.
ExperimentConfig ParseConfigUnchecked(const std::string& toml_text);
ExperimentConfig LoadConfig(const std::string& path);
nlohmann::json ConfigToJson(const ExperimentConfig& cfg);

// One observed pair and its J sets, all derived from a single seed.
struct PairInstance {
  Hypothesis hypothesis = Hypothesis::kP;
  uint64_t seed = 0;
  SimpleGraph a;
  SimpleGraph b;
  VertexSet j_a;
  VertexSet j_b;
  Labels sigma_a;
  Labels sigma_b;
  std::vector<Vertex> pi;  // correlated pairs only
};

PairInstance SamplePair(const ModelParams& p, Hypothesis h, uint64_t seed);

// Pair file: graphs and J sets, plus labels and the permutation when
// `reveal_latent` is set.
nlohmann::json PairToJson(const PairInstance& pair, bool reveal_latent);
PairInstance PairFromJson(const nlohmann::json& j);

// The configured statistic on one pair.
StatisticReport EvaluateStatistic(const ExperimentConfig& cfg,
                                  const Family& family,
                                  const PairInstance& pair);

// Seed of trial `index` of hypothesis group `h`.
uint64_t TrialSeed(uint64_t master_seed, Hypothesis h, int index);

enum class Decision { kP, kQ };

// P iff value > tau; ties go to Q.
Decision Decide(double value, double tau);

struct TrialResult {
  int trial_id = 0;
  Hypothesis hypothesis = Hypothesis::kP;
  uint64_t seed = 0;
  double value = 0.0;
  std::string status = "ok";  // otherwise the error kind
  double wall_time = 0.0;     // seconds

  bool ok() const { return status == "ok"; }
};

TrialResult RunTrial(const ExperimentConfig& cfg, const Family& family,
                     Hypothesis h, int index);

struct GroupSummary {
  int count = 0;  // successful trials
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double se = 0.0;
};

GroupSummary Summarize(const std::vector<double>& values);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // one-sided, alternative mean(x) > mean(y)
};

// Needs two or more values per group and positive pooled variance;
// otherwise t = 0 and p = 1.
WelchResult WelchTest(const GroupSummary& x, const GroupSummary& y);

struct Calibration {
  double tau = 0.0;
  double mean = 0.0;
  double se = 0.0;
  int trials = 0;
};

// tau = threshold_c times the mean statistic over fresh correlated samples.
// Throws kDegenerateCalibration when that mean is not positive.
Calibration CalibrateThreshold(const ExperimentConfig& cfg);
Calibration CalibrateThreshold(const ExperimentConfig& cfg,
                               const Family& family);
Calibration CalibrationFromMean(const GroupSummary& p_group, double c);

struct Report {
  ExperimentConfig config;
  std::string family_hash;
  int num_shapes = 0;
  std::vector<TrialResult> trials;  // P group first, then Q
  GroupSummary p;
  GroupSummary q;
  WelchResult welch;
  bool calibrated = false;
  std::string calibration_error;  // set when calibration failed
  Calibration calibration;
  double false_alarm_rate = 0.0;  // Q trials decided P
  double miss_rate = 0.0;         // P trials decided Q
};

// Failed trials are recorded with their error kind and excluded from the
// summaries; the batch is never aborted by a trial.
Report RunExperiment(const ExperimentConfig& cfg);

// Columns trial_id, hypothesis, seed, value, status, wall_time. Wall times
// are written only when `with_timing` is set so reruns stay byte-identical.
std::string ReportCsv(const Report& r, bool with_timing);
nlohmann::json ReportJson(const Report& r, bool with_timing);

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double x);

}  // namespace dtstat

#endif  // DTSTAT_EXPERIMENT_H_
