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

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "dtstat/errors.h"
#include "dtstat/experiment.h"
#include "dtstat/rng.h"

namespace dtstat {
namespace {

// Seed streams under the master seed.
constexpr uint64_t kStreamP = 0;
constexpr uint64_t kStreamQ = 1;
constexpr uint64_t kStreamCalibration = 2;

// Streams under a pair seed.
constexpr uint64_t kPairGraphs = 0;
constexpr uint64_t kPairJA = 1;
constexpr uint64_t kPairJB = 2;
constexpr uint64_t kPairColorings = 3;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TrialResult EvaluateSeed(const ExperimentConfig& cfg, const Family& family,
                         Hypothesis h, uint64_t seed) {
  TrialResult r;
  r.hypothesis = h;
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const PairInstance pair = SamplePair(cfg.model, h, seed);
    r.value = EvaluateStatistic(cfg, family, pair).value;
    if (!std::isfinite(r.value)) r.status = "NonFinite";
  } catch (const Error& e) {
    r.status = ErrorKindName(e.kind());
  } catch (const std::exception&) {
    r.status = "InternalError";
  }
  if (!r.ok()) r.value = kNaN;
  r.wall_time = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return r;
}

// Runs jobs[i] for every i on `threads` workers; results land by index.
template <typename Job>
void ParallelFor(int count, int threads, const Job& job) {
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) job(i);
  };
  const int extra = std::min(threads, count) - 1;
  std::vector<std::thread> pool;
  for (int w = 0; w < extra; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

std::vector<TrialResult> RunBatch(const ExperimentConfig& cfg,
                                  const Family& family,
                                  const std::vector<Hypothesis>& hyps,
                                  const std::vector<uint64_t>& seeds) {
  std::vector<TrialResult> out(seeds.size());
  ParallelFor(static_cast<int>(seeds.size()), cfg.threads, [&](int i) {
    out[i] = EvaluateSeed(cfg, family, hyps[i], seeds[i]);
    out[i].trial_id = i;
  });
  return out;
}

std::vector<double> OkValues(const std::vector<TrialResult>& trials,
                             Hypothesis h) {
  std::vector<double> v;
  for (const auto& t : trials) {
    if (t.hypothesis == h && t.ok()) v.push_back(t.value);
  }
  return v;
}

nlohmann::json NumberOrNull(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json GroupJson(const GroupSummary& g) {
  return {{"count", g.count},
          {"mean", NumberOrNull(g.mean)},
          {"variance", NumberOrNull(g.variance)},
          {"se", NumberOrNull(g.se)}};
}

}  // namespace

PairInstance SamplePair(const ModelParams& p, Hypothesis h, uint64_t seed) {
  p.Validate();
  PairInstance pair;
  pair.hypothesis = h;
  pair.seed = seed;
  const uint64_t graph_seed = DeriveSeed(seed, kPairGraphs);
  if (h == Hypothesis::kP) {
    CorrelatedSample s = SampleCorrelated(p, graph_seed);
    pair.a = std::move(s.a);
    pair.b = std::move(s.b);
    pair.sigma_a = s.sigma;
    pair.sigma_b.assign(p.n, 0);
    for (int i = 0; i < p.n; ++i) pair.sigma_b[s.pi[i]] = s.sigma[i];
    pair.pi = std::move(s.pi);
  } else {
    NullSample s = SampleNull(p, graph_seed);
    pair.a = std::move(s.a);
    pair.b = std::move(s.b);
    pair.sigma_a = std::move(s.sigma_a);
    pair.sigma_b = std::move(s.sigma_b);
  }
  Rng rng_a = MakeRng(DeriveSeed(seed, kPairJA));
  Rng rng_b = MakeRng(DeriveSeed(seed, kPairJB));
  pair.j_a = SampleJ(p, rng_a);
  pair.j_b = SampleJ(p, rng_b);
  return pair;
}

nlohmann::json PairToJson(const PairInstance& pair, bool reveal_latent) {
  nlohmann::json j = {{"hypothesis", HypothesisName(pair.hypothesis)},
                      {"seed", pair.seed},
                      {"a", GraphToJson(pair.a)},
                      {"b", GraphToJson(pair.b)},
                      {"j_a", pair.j_a.members()},
                      {"j_b", pair.j_b.members()}};
  if (reveal_latent) {
    nlohmann::json latent = {{"sigma_a", pair.sigma_a},
                             {"sigma_b", pair.sigma_b}};
    if (!pair.pi.empty()) latent["pi"] = pair.pi;
    j["latent"] = latent;
  }
  return j;
}

PairInstance PairFromJson(const nlohmann::json& j) {
  PairInstance pair;
  try {
    const std::string h = j.at("hypothesis").get<std::string>();
    if (h != "P" && h != "Q") {
      throw Error(ErrorKind::kParseError, "hypothesis must be P or Q");
    }
    pair.hypothesis = h == "P" ? Hypothesis::kP : Hypothesis::kQ;
    pair.seed = j.value("seed", uint64_t{0});
    pair.a = GraphFromJson(j.at("a"));
    pair.b = GraphFromJson(j.at("b"));
    if (pair.a.n() != pair.b.n()) {
      throw Error(ErrorKind::kParseError, "graphs have different orders");
    }
    const int n = pair.a.n();
    auto read_set = [n](const nlohmann::json& arr) {
      auto members = arr.get<std::vector<Vertex>>();
      for (Vertex v : members) {
        if (v < 0 || v >= n) {
          throw Error(ErrorKind::kParseError, "J member out of range");
        }
      }
      return VertexSet(n, members);
    };
    pair.j_a = read_set(j.at("j_a"));
    pair.j_b = read_set(j.at("j_b"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return pair;
}

StatisticReport EvaluateStatistic(const ExperimentConfig& cfg,
                                  const Family& family,
                                  const PairInstance& pair) {
  ModelParams p = cfg.model;
  p.n = pair.a.n();
  if (cfg.method == Method::kExact) {
    return FExact(pair.a, pair.b, family, pair.j_a, pair.j_b, p, cfg.mode,
                  cfg.budget);
  }
  EstimatorConfig est = cfg.estimator;
  est.seed = DeriveSeed(pair.seed, kPairColorings, cfg.estimator.seed);
  return FBar(pair.a, pair.b, family, pair.j_a, pair.j_b, p, est);
}

uint64_t TrialSeed(uint64_t master_seed, Hypothesis h, int index) {
  return DeriveSeed(master_seed, h == Hypothesis::kP ? kStreamP : kStreamQ,
                    static_cast<uint64_t>(index));
}

Decision Decide(double value, double tau) {
  return value > tau ? Decision::kP : Decision::kQ;
}

TrialResult RunTrial(const ExperimentConfig& cfg, const Family& family,
                     Hypothesis h, int index) {
  TrialResult r =
      EvaluateSeed(cfg, family, h, TrialSeed(cfg.master_seed, h, index));
  r.trial_id = index;
  return r;
}

GroupSummary Summarize(const std::vector<double>& values) {
  GroupSummary g;
  g.count = static_cast<int>(values.size());
  if (g.count == 0) {
    g.mean = g.variance = g.se = kNaN;
    return g;
  }
  g.mean = PairwiseSum(values) / g.count;
  if (g.count < 2) {
    g.variance = g.se = kNaN;
    return g;
  }
  std::vector<double> sq(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    sq[i] = (values[i] - g.mean) * (values[i] - g.mean);
  }
  g.variance = PairwiseSum(sq) / (g.count - 1);
  g.se = std::sqrt(g.variance / g.count);
  return g;
}

WelchResult WelchTest(const GroupSummary& x, const GroupSummary& y) {
  WelchResult w;
  if (x.count < 2 || y.count < 2) return w;
  const double vx = x.variance / x.count;
  const double vy = y.variance / y.count;
  const double pooled = vx + vy;
  if (!(pooled > 0.0)) return w;
  w.t = (x.mean - y.mean) / std::sqrt(pooled);
  w.df = pooled * pooled /
         (vx * vx / (x.count - 1) + vy * vy / (y.count - 1));
  const boost::math::students_t dist(w.df);
  w.p_value = boost::math::cdf(boost::math::complement(dist, w.t));
  return w;
}

Calibration CalibrationFromMean(const GroupSummary& p_group, double c) {
  if (p_group.count == 0 || !(p_group.mean > 0.0)) {
    std::ostringstream msg;
    msg << "mean statistic under P is " << p_group.mean << " over "
        << p_group.count << " trials";
    throw Error(ErrorKind::kDegenerateCalibration, msg.str());
  }
  Calibration cal;
  cal.mean = p_group.mean;
  cal.se = p_group.se;
  cal.trials = p_group.count;
  cal.tau = c * p_group.mean;
  return cal;
}

Calibration CalibrateThreshold(const ExperimentConfig& cfg,
                               const Family& family) {
  cfg.Validate();
  const int count =
      cfg.CalibrationTrials() > 0 ? cfg.CalibrationTrials() : cfg.trials_p;
  std::vector<Hypothesis> hyps(count, Hypothesis::kP);
  std::vector<uint64_t> seeds(count);
  for (int i = 0; i < count; ++i) {
    seeds[i] = DeriveSeed(cfg.master_seed, kStreamCalibration, i);
  }
  const auto trials = RunBatch(cfg, family, hyps, seeds);
  return CalibrationFromMean(Summarize(OkValues(trials, Hypothesis::kP)),
                             cfg.threshold_c);
}

Calibration CalibrateThreshold(const ExperimentConfig& cfg) {
  cfg.Validate();
  return CalibrateThreshold(cfg, BuildFamily(cfg.family, cfg.family_seed));
}

Report RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const Family family = BuildFamily(cfg.family, cfg.family_seed);
  Report r;
  r.config = cfg;
  r.family_hash = FamilyHash(family);
  r.num_shapes = static_cast<int>(family.shapes.size());

  std::vector<Hypothesis> hyps;
  std::vector<uint64_t> seeds;
  for (Hypothesis h : {Hypothesis::kP, Hypothesis::kQ}) {
    const int count = h == Hypothesis::kP ? cfg.trials_p : cfg.trials_q;
    for (int i = 0; i < count; ++i) {
      hyps.push_back(h);
      seeds.push_back(TrialSeed(cfg.master_seed, h, i));
    }
  }
  r.trials = RunBatch(cfg, family, hyps, seeds);
  const auto p_values = OkValues(r.trials, Hypothesis::kP);
  const auto q_values = OkValues(r.trials, Hypothesis::kQ);
  r.p = Summarize(p_values);
  r.q = Summarize(q_values);
  r.welch = WelchTest(r.p, r.q);

  try {
    r.calibration = cfg.CalibrationTrials() == 0
                        ? CalibrationFromMean(r.p, cfg.threshold_c)
                        : CalibrateThreshold(cfg, family);
    r.calibrated = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerateCalibration) throw;
    r.calibration_error = e.what();
  }
  if (r.calibrated) {
    auto rate = [&](const std::vector<double>& vs, Decision wrong) {
      if (vs.empty()) return kNaN;
      int errors = 0;
      for (double v : vs) errors += Decide(v, r.calibration.tau) == wrong;
      return static_cast<double>(errors) / vs.size();
    };
    r.false_alarm_rate = rate(q_values, Decision::kP);
    r.miss_rate = rate(p_values, Decision::kQ);
  } else {
    r.false_alarm_rate = r.miss_rate = kNaN;
  }
  return r;
}

std::string FormatDouble(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string ReportCsv(const Report& r, bool with_timing) {
  std::ostringstream out;
  out << "trial_id,hypothesis,seed,value,status,wall_time\n";
  for (const auto& t : r.trials) {
    out << t.trial_id << ',' << HypothesisName(t.hypothesis) << ',' << t.seed
        << ',' << (t.ok() ? FormatDouble(t.value) : "") << ',' << t.status
        << ',';
    if (with_timing) out << FormatDouble(t.wall_time);
    out << '\n';
  }
  return out.str();
}

nlohmann::json ReportJson(const Report& r, bool with_timing) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : r.trials) {
    nlohmann::json row = {{"trial_id", t.trial_id},
                          {"hypothesis", HypothesisName(t.hypothesis)},
                          {"seed", t.seed},
                          {"value", NumberOrNull(t.value)},
                          {"status", t.status}};
    if (with_timing) row["wall_time"] = t.wall_time;
    trials.push_back(row);
  }
  nlohmann::json threshold = {
      {"calibrated", r.calibrated},
      {"source",
       r.config.CalibrationTrials() == 0 ? "p_group" : "fresh_p_samples"}};
  if (r.calibrated) {
    threshold["tau"] = r.calibration.tau;
    threshold["mean"] = r.calibration.mean;
    threshold["se"] = NumberOrNull(r.calibration.se);
    threshold["trials"] = r.calibration.trials;
  } else {
    threshold["error"] = r.calibration_error;
  }
  return {
      {"config", ConfigToJson(r.config)},
      {"family_hash", r.family_hash},
      {"num_shapes", r.num_shapes},
      {"summary", {{"P", GroupJson(r.p)}, {"Q", GroupJson(r.q)}}},
      {"welch",
       {{"t", r.welch.t}, {"df", r.welch.df}, {"p_value", r.welch.p_value}}},
      {"threshold", threshold},
      {"error_rates",
       {{"false_alarm", NumberOrNull(r.false_alarm_rate)},
        {"miss", NumberOrNull(r.miss_rate)}}},
      {"trials", trials},
  };
}

}  // namespace dtstat
