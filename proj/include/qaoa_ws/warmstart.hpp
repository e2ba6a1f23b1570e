/*
 * Copyright 2026 The qaoa-warmstart Authors
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
#pragma once

// Two-level warm start: optimize at p = 1, predict the depth-p_t schedule
// from (gamma_1, beta_1, p_t), then run one local optimization from the
// prediction. Also the naive-vs-warm benchmark and prediction error reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qaoa_ws/dataset.hpp"
#include "qaoa_ws/errors.hpp"
#include "qaoa_ws/graph.hpp"
#include "qaoa_ws/optimizer.hpp"
#include "qaoa_ws/parallel.hpp"
#include "qaoa_ws/rng.hpp"
#include "qaoa_ws/simulator.hpp"

namespace qaoa_ws {

namespace detail {

inline ParameterVector query_bank(const PredictorBank& bank, const std::vector<double>& features, int p_t) {
  ParameterVector out;
  for (int i = 1; i <= p_t; ++i) {
    out.gamma.push_back(bank.entry(true, i).model.predict(features));
    out.beta.push_back(bank.entry(false, i).model.predict(features));
  }
  return clip_to_domain(std::move(out));
}

}  // namespace detail

/// Depth-p_t starting point from the p = 1 optimum (two-level bank).
inline ParameterVector predict_init(const PredictorBank& bank, double gamma1, double beta1, int p_t) {
  if (bank.layout.hierarchical()) throw DomainError("predict_init needs a two-level bank");
  if (p_t < 2 || p_t > bank.max_depth)
    throw DomainError("target depth " + std::to_string(p_t) + " outside bank range 2.." + std::to_string(bank.max_depth));
  return detail::query_bank(bank, make_features(bank.layout, gamma1, beta1, nullptr, p_t), p_t);
}

/// Depth-p_t starting point from the p = 1 optimum and the depth-m optimum.
inline ParameterVector hierarchical_predict(const PredictorBank& bank, double gamma1, double beta1,
                                            const ParameterVector& intermediate, int p_t) {
  if (!bank.layout.hierarchical()) throw DomainError("hierarchical_predict needs a hierarchical bank");
  if (intermediate.depth() != bank.layout.intermediate_depth)
    throw DomainError("intermediate optimum has depth " + std::to_string(intermediate.depth()) + ", bank expects " +
                      std::to_string(bank.layout.intermediate_depth));
  if (p_t <= bank.layout.intermediate_depth || p_t > bank.max_depth)
    throw DomainError("target depth " + std::to_string(p_t) + " outside bank range " +
                      std::to_string(bank.layout.intermediate_depth + 1) + ".." + std::to_string(bank.max_depth));
  return detail::query_bank(bank, make_features(bank.layout, gamma1, beta1, &intermediate, p_t), p_t);
}

struct TwoLevelResult {
  SolveResult stage1;
  ParameterVector predicted_init;
  SolveResult stage2;
  long total_fc = 0;
  double ar = 0.0;
};

/// Second half of the flow, given an already solved p = 1 instance.
inline TwoLevelResult two_level_from_stage1(const CutTable& table, const SolveResult& stage1, int p_t,
                                            const PredictorBank& bank, const OptimizerConfig& cfg) {
  if (stage1.params.depth() != 1) throw DomainError("stage 1 must be a depth-1 solution");
  TwoLevelResult out;
  out.stage1 = stage1;
  const ParameterVector base = canonical_parameters(stage1.params);
  out.predicted_init = predict_init(bank, base.gamma[0], base.beta[0], p_t);
  out.stage2 = solve_instance(table, out.predicted_init, cfg);
  out.total_fc = out.stage1.fc + out.stage2.fc;
  out.ar = out.stage2.ar;
  return out;
}

/// Stage 1 from one random start drawn from Rng(seed), then stage 2 from the
/// predicted schedule. total_fc counts both loops.
inline TwoLevelResult two_level_solve(const CutTable& table, int p_t, const PredictorBank& bank,
                                      const OptimizerConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const SolveResult stage1 = solve_instance(table, random_params(1, rng), cfg);
  return two_level_from_stage1(table, stage1, p_t, bank, cfg);
}

// ---- prediction error -----------------------------------------------------------------

struct PredictionErrorRow {
  int p = 0;
  std::size_t instances = 0;
  double mean = 0.0;  // mean relative error over all 2p parameters and instances
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  double mse = 0.0;  // mean squared error in radians^2
  std::vector<double> gamma_mean;  // per stage
  std::vector<double> beta_mean;
};

namespace detail {

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace detail

/// Relative error |predicted - stored optimum| / domain width (2pi for gamma,
/// pi for beta) of the bank's prediction for every usable row at each depth.
/// Features come from the stored p = 1 (and depth-m) optima of the same graph.
inline std::vector<PredictionErrorRow> prediction_error_report(const PredictorBank& bank,
                                                               const std::vector<DatasetRow>& rows,
                                                               const std::vector<int>& depths) {
  const RowIndex idx = index_rows(rows);
  std::vector<PredictionErrorRow> out;
  for (int p : depths) {
    if (p < bank.layout.min_target_depth() || p > bank.max_depth) continue;
    PredictionErrorRow r;
    r.p = p;
    r.gamma_mean.assign(static_cast<std::size_t>(p), 0.0);
    r.beta_mean.assign(static_cast<std::size_t>(p), 0.0);
    std::vector<double> all;
    double sq = 0.0;
    for (const auto& [id, by_p] : idx) {
      const auto base = by_p.find(1);
      const auto target = by_p.find(p);
      if (base == by_p.end() || target == by_p.end()) continue;
      ParameterVector pred;
      if (bank.layout.hierarchical()) {
        const auto mid = by_p.find(bank.layout.intermediate_depth);
        if (mid == by_p.end()) continue;
        pred = hierarchical_predict(bank, base->second->gamma_opt[0], base->second->beta_opt[0], mid->second->params(), p);
      } else {
        pred = predict_init(bank, base->second->gamma_opt[0], base->second->beta_opt[0], p);
      }
      for (int i = 0; i < p; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double dg = pred.gamma[k] - target->second->gamma_opt[k];
        const double db = pred.beta[k] - target->second->beta_opt[k];
        sq += dg * dg + db * db;
        const double eg = std::abs(dg) / kGammaMax, eb = std::abs(db) / kBetaMax;
        r.gamma_mean[k] += eg;
        r.beta_mean[k] += eb;
        all.push_back(eg);
        all.push_back(eb);
      }
      ++r.instances;
    }
    if (r.instances == 0) continue;
    const auto n = static_cast<double>(r.instances);
    for (auto& v : r.gamma_mean) v /= n;
    for (auto& v : r.beta_mean) v /= n;
    r.mean = std::accumulate(all.begin(), all.end(), 0.0) / static_cast<double>(all.size());
    r.mse = sq / static_cast<double>(all.size());
    r.median = detail::quantile(all, 0.5);
    r.p90 = detail::quantile(all, 0.9);
    r.max = *std::max_element(all.begin(), all.end());
    out.push_back(std::move(r));
  }
  return out;
}

// ---- benchmark ------------------------------------------------------------------------

struct BenchConfig {
  std::vector<OptimizerKind> optimizers{OptimizerKind::NelderMead, OptimizerKind::QuasiNewton};
  std::vector<int> depths{2, 3, 4, 5};
  int restarts = 20;
  OptimizerConfig optimizer;  // kind is overridden per run
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Raw outcome for one (graph, optimizer, depth).
struct GraphBenchRecord {
  std::string graph_id;
  OptimizerKind optimizer = OptimizerKind::QuasiNewton;
  int p = 0;
  std::vector<long> naive_fc;  // per random restart
  double naive_best_ar = 0.0;
  double naive_mean_ar = 0.0;
  long ml_stage1_fc = 0;
  long ml_stage2_fc = 0;
  long ml_total_fc = 0;
  double ml_ar = 0.0;
  // stage 1 as a full multistart instead of a single run
  long ms_stage1_fc = 0;
  long ms_total_fc = 0;
  double ms_ar = 0.0;
  bool failed = false;
  std::string error;
};

struct BenchRow {
  OptimizerKind optimizer = OptimizerKind::QuasiNewton;
  int p = 0;
  std::size_t graphs = 0;
  std::size_t failures = 0;
  double naive_fc_mean = 0.0, naive_fc_std = 0.0;
  double naive_ar_mean = 0.0, naive_ar_std = 0.0;
  double ml_fc_mean = 0.0, ml_fc_std = 0.0;
  double ml_ar_mean = 0.0, ml_ar_std = 0.0;
  double fc_reduction_pct = 0.0;
  double naive_total_fc_mean = 0.0;  // summed over all restarts of a graph
  double ml_stage2_fc_mean = 0.0;
  double ms_fc_mean = 0.0;
  double ms_ar_mean = 0.0;
  double ms_fc_reduction_pct = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<GraphBenchRecord> records;
  std::vector<PredictionErrorRow> prediction_errors;

  const BenchRow* find(OptimizerKind k, int p) const {
    for (const auto& r : rows)
      if (r.optimizer == k && r.p == p) return &r;
    return nullptr;
  }
};

namespace detail {

struct MeanStd {
  double mean = 0.0, std = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& v) {
  MeanStd m;
  if (v.empty()) return m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double s = 0.0;
    for (double x : v) s += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(s / static_cast<double>(v.size() - 1));
  }
  return m;
}

inline constexpr std::uint64_t kStage1Tag = 0x5354414745310000ULL;
inline constexpr std::uint64_t kStage1MultistartTag = 0x5354414745314d53ULL;

}  // namespace detail

inline BenchRow aggregate_bench(OptimizerKind kind, int p, const std::vector<GraphBenchRecord>& records) {
  BenchRow row;
  row.optimizer = kind;
  row.p = p;
  std::vector<double> naive_fc, naive_total, naive_ar, ml_fc, ml_ar, stage2, ms_fc, ms_ar;
  for (const auto& r : records) {
    if (r.optimizer != kind || r.p != p) continue;
    if (r.failed) {
      ++row.failures;
      continue;
    }
    ++row.graphs;
    for (long fc : r.naive_fc) naive_fc.push_back(static_cast<double>(fc));
    naive_total.push_back(static_cast<double>(std::accumulate(r.naive_fc.begin(), r.naive_fc.end(), 0L)));
    naive_ar.push_back(r.naive_best_ar);
    ml_fc.push_back(static_cast<double>(r.ml_total_fc));
    ml_ar.push_back(r.ml_ar);
    stage2.push_back(static_cast<double>(r.ml_stage2_fc));
    ms_fc.push_back(static_cast<double>(r.ms_total_fc));
    ms_ar.push_back(r.ms_ar);
  }
  const auto nf = detail::mean_std(naive_fc), na = detail::mean_std(naive_ar);
  const auto mf = detail::mean_std(ml_fc), ma = detail::mean_std(ml_ar);
  row.naive_fc_mean = nf.mean;
  row.naive_fc_std = nf.std;
  row.naive_ar_mean = na.mean;
  row.naive_ar_std = na.std;
  row.ml_fc_mean = mf.mean;
  row.ml_fc_std = mf.std;
  row.ml_ar_mean = ma.mean;
  row.ml_ar_std = ma.std;
  row.fc_reduction_pct = nf.mean > 0.0 ? 100.0 * (1.0 - mf.mean / nf.mean) : 0.0;
  row.naive_total_fc_mean = detail::mean_std(naive_total).mean;
  row.ml_stage2_fc_mean = detail::mean_std(stage2).mean;
  row.ms_fc_mean = detail::mean_std(ms_fc).mean;
  row.ms_ar_mean = detail::mean_std(ms_ar).mean;
  row.ms_fc_reduction_pct = nf.mean > 0.0 ? 100.0 * (1.0 - row.ms_fc_mean / nf.mean) : 0.0;
  return row;
}

/// Naive multistart vs two-level flow on every test graph, for every
/// optimizer and target depth. The naive FC statistics are per run (over
/// all restarts and graphs); the naive AR is that of each graph's best run.
/// The two-level flow runs once per graph with a seeded single-start stage 1.
/// Seeds depend only on (seed, graph id, depth), so the report is identical
/// for any thread count.
inline BenchReport run_benchmark(const std::vector<Graph>& test_graphs, const PredictorBank& bank,
                                 const BenchConfig& cfg, const std::vector<DatasetRow>& test_rows = {}) {
  if (test_graphs.empty()) throw DomainError("run_benchmark: no test graphs");
  if (cfg.restarts < 1) throw DomainError("run_benchmark: restarts must be >= 1");
  for (int p : cfg.depths)
    if (p < 2 || p > bank.max_depth) throw DomainError("run_benchmark: depth " + std::to_string(p) + " outside bank range");

  struct Task {
    std::size_t graph;
    OptimizerKind kind;
  };
  std::vector<Task> tasks;
  for (OptimizerKind k : cfg.optimizers)
    for (std::size_t g = 0; g < test_graphs.size(); ++g) tasks.push_back({g, k});

  std::vector<std::vector<GraphBenchRecord>> results(tasks.size());
  parallel_for(
      tasks.size(),
      [&](std::size_t t) {
        const Graph& graph = test_graphs[tasks[t].graph];
        OptimizerConfig ocfg = cfg.optimizer;
        ocfg.kind = tasks[t].kind;
        const std::uint64_t gseed = derive_seed(cfg.seed, hash_string(graph.id));
        auto& out = results[t];
        try {
          const CutTable table = cut_table(graph);
          Rng rng(derive_seed(gseed, detail::kStage1Tag));
          const SolveResult stage1 = solve_instance(table, random_params(1, rng), ocfg);
          const MultistartResult stage1_ms =
              multistart_solve(table, 1, cfg.restarts, ocfg, derive_seed(gseed, detail::kStage1MultistartTag));
          long stage1_ms_fc = 0;
          for (const auto& r : stage1_ms.all) stage1_ms_fc += r.fc;
          for (int p : cfg.depths) {
            GraphBenchRecord rec;
            rec.graph_id = graph.id;
            rec.optimizer = ocfg.kind;
            rec.p = p;
            try {
              const MultistartResult naive = multistart_solve(table, p, cfg.restarts, ocfg, derive_seed(gseed, static_cast<std::uint64_t>(p)));
              double ar_sum = 0.0;
              for (const auto& r : naive.all) {
                rec.naive_fc.push_back(r.fc);
                ar_sum += r.ar;
              }
              rec.naive_best_ar = naive.best.ar;
              rec.naive_mean_ar = ar_sum / static_cast<double>(naive.all.size());
              const TwoLevelResult ml = two_level_from_stage1(table, stage1, p, bank, ocfg);
              rec.ml_stage1_fc = ml.stage1.fc;
              rec.ml_stage2_fc = ml.stage2.fc;
              rec.ml_total_fc = ml.total_fc;
              rec.ml_ar = ml.ar;
              const TwoLevelResult ms = two_level_from_stage1(table, stage1_ms.best, p, bank, ocfg);
              rec.ms_stage1_fc = stage1_ms_fc;
              rec.ms_total_fc = stage1_ms_fc + ms.stage2.fc;
              rec.ms_ar = ms.ar;
            } catch (const ObjectiveError& ex) {
              rec.failed = true;
              rec.error = ex.what();
            }
            out.push_back(std::move(rec));
          }
        } catch (const ObjectiveError& ex) {
          for (int p : cfg.depths) {
            GraphBenchRecord rec;
            rec.graph_id = graph.id;
            rec.optimizer = ocfg.kind;
            rec.p = p;
            rec.failed = true;
            rec.error = ex.what();
            out.push_back(std::move(rec));
          }
        }
      },
      cfg.threads);

  BenchReport report;
  for (auto& r : results)
    for (auto& rec : r) report.records.push_back(std::move(rec));
  for (OptimizerKind k : cfg.optimizers)
    for (int p : cfg.depths) report.rows.push_back(aggregate_bench(k, p, report.records));
  if (!test_rows.empty()) report.prediction_errors = prediction_error_report(bank, test_rows, cfg.depths);
  return report;
}

// ---- report files ---------------------------------------------------------------------

namespace detail {

inline std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

inline void write_bench_csv(std::ostream& os, const BenchReport& rep) {
  using detail::fmt;
  os << "optimizer,p,naive_fc_mean,naive_fc_std,naive_ar_mean,naive_ar_std,ml_fc_mean,ml_fc_std,ml_ar_mean,ml_ar_std,"
        "fc_reduction_pct\n";
  for (const auto& r : rep.rows)
    os << to_string(r.optimizer) << ',' << r.p << ',' << fmt(r.naive_fc_mean) << ',' << fmt(r.naive_fc_std) << ','
       << fmt(r.naive_ar_mean) << ',' << fmt(r.naive_ar_std) << ',' << fmt(r.ml_fc_mean) << ',' << fmt(r.ml_fc_std)
       << ',' << fmt(r.ml_ar_mean) << ',' << fmt(r.ml_ar_std) << ',' << fmt(r.fc_reduction_pct) << '\n';
}

/// Supplementary per-cell statistics: failure counts, summed naive FC and the
/// multistart-stage-1 variant of the two-level flow.
inline void write_bench_details_csv(std::ostream& os, const BenchReport& rep) {
  using detail::fmt;
  os << "optimizer,p,graphs,failures,naive_total_fc_mean,ml_stage2_fc_mean,ms_stage1_fc_mean,ms_ar_mean,"
        "ms_fc_reduction_pct\n";
  for (const auto& r : rep.rows)
    os << to_string(r.optimizer) << ',' << r.p << ',' << r.graphs << ',' << r.failures << ','
       << fmt(r.naive_total_fc_mean) << ',' << fmt(r.ml_stage2_fc_mean) << ',' << fmt(r.ms_fc_mean) << ','
       << fmt(r.ms_ar_mean) << ',' << fmt(r.ms_fc_reduction_pct) << '\n';
}

inline void write_bench_records(std::ostream& os, const BenchReport& rep) {
  for (const auto& r : rep.records) {
    nlohmann::ordered_json j;
    j["graph_id"] = r.graph_id;
    j["optimizer"] = std::string(to_string(r.optimizer));
    j["p"] = r.p;
    j["naive_fc"] = r.naive_fc;
    j["naive_best_ar"] = r.naive_best_ar;
    j["naive_mean_ar"] = r.naive_mean_ar;
    j["ml_stage1_fc"] = r.ml_stage1_fc;
    j["ml_stage2_fc"] = r.ml_stage2_fc;
    j["ml_total_fc"] = r.ml_total_fc;
    j["ml_ar"] = r.ml_ar;
    j["ms_stage1_fc"] = r.ms_stage1_fc;
    j["ms_total_fc"] = r.ms_total_fc;
    j["ms_ar"] = r.ms_ar;
    if (r.failed) {
      j["failed"] = true;
      j["error"] = r.error;
    }
    os << j.dump() << '\n';
  }
}

inline void write_prediction_error_csv(std::ostream& os, const std::vector<PredictionErrorRow>& rows) {
  using detail::fmt;
  os << "p,parameter,instances,mean_rel_error\n";
  for (const auto& r : rows) {
    os << r.p << ",all," << r.instances << ',' << fmt(r.mean) << '\n';
    for (int i = 0; i < r.p; ++i) {
      os << r.p << ',' << param_name(true, i + 1) << ',' << r.instances << ','
         << fmt(r.gamma_mean[static_cast<std::size_t>(i)]) << '\n';
      os << r.p << ',' << param_name(false, i + 1) << ',' << r.instances << ','
         << fmt(r.beta_mean[static_cast<std::size_t>(i)]) << '\n';
    }
  }
}

}  // namespace qaoa_ws
