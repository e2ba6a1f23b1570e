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

// Optimal-parameter dataset: generation, persistence, train/test split,
// correlation and trend analysis, and the per-stage predictor bank.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qaoa_ws/errors.hpp"
#include "qaoa_ws/graph.hpp"
#include "qaoa_ws/optimizer.hpp"
#include "qaoa_ws/parallel.hpp"
#include "qaoa_ws/regression.hpp"
#include "qaoa_ws/rng.hpp"
#include "qaoa_ws/simulator.hpp"

namespace qaoa_ws {

inline constexpr int kDefaultMaxDepth = 6;

// ---- rows --------------------------------------------------------------------------

/// Best parameters found for one (graph, depth).
struct DatasetRow {
  std::string graph_id;
  int p = 0;
  std::vector<double> gamma_opt;
  std::vector<double> beta_opt;
  double value = 0.0;
  int max_cut = 0;
  double ar = 0.0;
  long fc = 0;  // evaluations of the winning run
  int restarts = 0;
  std::string optimizer;
  bool converged = false;
  bool failed = false;
  std::string start = "random";   // "random" or "interpolated": where the winning run began
  std::vector<long> restart_fc;   // evaluations of every random restart
  std::string error;

  ParameterVector params() const { return {gamma_opt, beta_opt}; }
  bool usable() const { return !failed && converged; }
};

inline nlohmann::ordered_json to_json(const DatasetRow& r) {
  nlohmann::ordered_json j;
  j["graph_id"] = r.graph_id;
  j["p"] = r.p;
  j["gamma_opt"] = r.gamma_opt;
  j["beta_opt"] = r.beta_opt;
  j["value"] = r.value;
  j["max_cut"] = r.max_cut;
  j["ar"] = r.ar;
  j["fc"] = r.fc;
  j["restarts"] = r.restarts;
  j["optimizer"] = r.optimizer;
  j["converged"] = r.converged;
  j["start"] = r.start;
  j["restart_fc"] = r.restart_fc;
  if (r.failed) {
    j["failed"] = true;
    j["error"] = r.error;
  }
  return j;
}

inline DatasetRow row_from_json(const nlohmann::json& j) {
  try {
    DatasetRow r;
    r.graph_id = j.at("graph_id").get<std::string>();
    r.p = j.at("p").get<int>();
    r.gamma_opt = j.at("gamma_opt").get<std::vector<double>>();
    r.beta_opt = j.at("beta_opt").get<std::vector<double>>();
    r.value = j.at("value").get<double>();
    r.max_cut = j.at("max_cut").get<int>();
    r.ar = j.at("ar").get<double>();
    r.fc = j.at("fc").get<long>();
    r.restarts = j.at("restarts").get<int>();
    r.optimizer = j.at("optimizer").get<std::string>();
    r.converged = j.value("converged", true);
    r.failed = j.value("failed", false);
    r.start = j.value("start", std::string("random"));
    r.restart_fc = j.value("restart_fc", std::vector<long>{});
    r.error = j.value("error", std::string());
    if (!r.failed && (static_cast<int>(r.gamma_opt.size()) != r.p || static_cast<int>(r.beta_opt.size()) != r.p))
      throw FormatError("row " + r.graph_id + "/p=" + std::to_string(r.p) + ": parameter lengths differ from p");
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("invalid dataset row: ") + ex.what());
  }
}

inline void append_rows(std::ostream& os, const std::vector<DatasetRow>& rows) {
  for (const auto& r : rows) os << to_json(r).dump() << '\n';
}

inline std::vector<DatasetRow> read_rows(std::istream& is) {
  std::vector<DatasetRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(row_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& ex) {
      throw FormatError("rows line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return rows;
}

inline std::vector<DatasetRow> read_rows_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open rows file '" + path + "'");
  return read_rows(in);
}

/// Flat export: one column per gamma_1..gamma_max and beta_1..beta_max,
/// empty beyond the row's depth.
inline void write_rows_csv(std::ostream& os, const std::vector<DatasetRow>& rows, int max_depth = kDefaultMaxDepth) {
  os << "graph_id,p";
  for (int i = 1; i <= max_depth; ++i) os << ",gamma_" << i;
  for (int i = 1; i <= max_depth; ++i) os << ",beta_" << i;
  os << ",value,max_cut,ar,fc\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    if (r.failed) continue;
    os << r.graph_id << ',' << r.p;
    for (int i = 0; i < max_depth; ++i) os << ',' << (i < r.p ? num(r.gamma_opt[i]) : "");
    for (int i = 0; i < max_depth; ++i) os << ',' << (i < r.p ? num(r.beta_opt[i]) : "");
    os << ',' << num(r.value) << ',' << r.max_cut << ',' << num(r.ar) << ',' << r.fc << '\n';
  }
}

/// Number of stored parameters for the given graph count and depths.
inline long parameter_count(std::size_t num_graphs, const std::vector<int>& depths) {
  long per_graph = 0;
  for (int p : depths) per_graph += 2L * p;
  return static_cast<long>(num_graphs) * per_graph;
}

inline long parameter_count(const std::vector<DatasetRow>& rows) {
  long n = 0;
  for (const auto& r : rows)
    if (!r.failed) n += static_cast<long>(r.gamma_opt.size() + r.beta_opt.size());
  return n;
}

/// Parses "1..6", "2,3,5" or "4".
inline std::vector<int> parse_depths(const std::string& spec) {
  std::vector<int> out;
  const auto dots = spec.find("..");
  try {
    if (dots != std::string::npos) {
      const int lo = std::stoi(spec.substr(0, dots)), hi = std::stoi(spec.substr(dots + 2));
      for (int p = lo; p <= hi; ++p) out.push_back(p);
    } else {
      std::size_t pos = 0;
      while (pos <= spec.size()) {
        const auto comma = spec.find(',', pos);
        out.push_back(std::stoi(spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const std::logic_error&) {
    throw DomainError("invalid depth list '" + spec + "'");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty() || out.front() < 1) throw DomainError("depths must be >= 1 in '" + spec + "'");
  return out;
}

// ---- generation ----------------------------------------------------------------------

/// Depth p+1 starting point from a depth-p schedule by linear interpolation
/// of each angle sequence over the stage index, with zero padding at both ends.
inline ParameterVector interpolate_parameters(const ParameterVector& params) {
  const int p = params.depth();
  auto stretch = [p](const std::vector<double>& x) {
    std::vector<double> out(static_cast<std::size_t>(p + 1));
    for (int i = 0; i <= p; ++i) {
      const double prev = i > 0 ? x[static_cast<std::size_t>(i - 1)] : 0.0;
      const double cur = i < p ? x[static_cast<std::size_t>(i)] : 0.0;
      out[static_cast<std::size_t>(i)] = (static_cast<double>(i) * prev + static_cast<double>(p - i) * cur) / p;
    }
    return out;
  };
  return clip_to_domain({stretch(params.gamma), stretch(params.beta)});
}

struct DatasetConfig {
  std::vector<int> depths{1, 2, 3, 4, 5, 6};
  int restarts = 20;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  /// Adds one run started from the interpolated depth p-1 optimum to the
  /// random restarts; the best of all runs is stored.
  bool interpolated_start = true;
  unsigned threads = 0;
  std::size_t chunk = 16;  // graphs per persistence batch
};

inline std::uint64_t instance_seed(std::uint64_t seed, const std::string& graph_id, int p) {
  return derive_seed(seed, hash_string(graph_id), static_cast<std::uint64_t>(p));
}

/// Solves every depth of one graph in ascending order. `known` holds rows
/// already present for this graph (keyed by depth); those depths are not
/// recomputed but still feed the interpolated start of the next depth.
inline std::vector<DatasetRow> solve_graph_depths(const Graph& graph, const DatasetConfig& cfg,
                                                  const std::map<int, DatasetRow>& known) {
  std::vector<DatasetRow> fresh;
  const CutTable table = cut_table(graph);
  std::map<int, ParameterVector> optimum;
  for (const auto& [p, row] : known)
    if (!row.failed) optimum[p] = row.params();

  for (int p : cfg.depths) {
    if (known.count(p)) continue;
    DatasetRow row;
    row.graph_id = graph.id;
    row.p = p;
    row.max_cut = table.max_cut;
    row.restarts = cfg.restarts;
    row.optimizer = std::string(to_string(cfg.optimizer.kind));
    try {
      const MultistartResult ms = multistart_solve(table, p, cfg.restarts, cfg.optimizer, instance_seed(cfg.seed, graph.id, p));
      SolveResult best = ms.best;
      for (const auto& r : ms.all) row.restart_fc.push_back(r.fc);
      if (cfg.interpolated_start && p > 1 && optimum.count(p - 1)) {
        const SolveResult seeded = solve_instance(table, interpolate_parameters(optimum[p - 1]), cfg.optimizer);
        if (seeded.value > best.value || (seeded.value == best.value && seeded.fc < best.fc)) {
          best = seeded;
          row.start = "interpolated";
        }
      }
      const ParameterVector canon = canonical_parameters(best.params);
      row.gamma_opt = canon.gamma;
      row.beta_opt = canon.beta;
      row.value = expectation(table, canon);
      row.ar = row.value / table.max_cut;
      row.fc = best.fc;
      row.converged = best.converged;
      optimum[p] = canon;
    } catch (const ObjectiveError& ex) {
      row.failed = true;
      row.converged = false;
      row.error = ex.what();
    }
    fresh.push_back(std::move(row));
  }
  return fresh;
}

/// Builds (or completes) the dataset. Rows already in `existing` are kept and
/// skipped; `on_batch` receives newly computed rows in graph order after each
/// batch, so appending them to a file reproduces the same bytes as a single
/// uninterrupted run. Returns all rows in (graph, depth) order.
inline std::vector<DatasetRow> build_dataset(const std::vector<Graph>& graphs, const DatasetConfig& cfg,
                                             const std::vector<DatasetRow>& existing = {},
                                             const std::function<void(const std::vector<DatasetRow>&)>& on_batch = {}) {
  if (graphs.empty()) throw DomainError("build_dataset: no graphs");
  if (cfg.restarts < 1) throw DomainError("build_dataset: restarts must be >= 1");
  if (cfg.depths.empty()) throw DomainError("build_dataset: no depths");
  std::unordered_map<std::string, std::map<int, DatasetRow>> known;
  for (const auto& r : existing) known[r.graph_id].emplace(r.p, r);

  std::vector<std::vector<DatasetRow>> fresh(graphs.size());
  const std::size_t chunk = std::max<std::size_t>(1, cfg.chunk);
  for (std::size_t lo = 0; lo < graphs.size(); lo += chunk) {
    const std::size_t hi = std::min(graphs.size(), lo + chunk);
    parallel_for(
        hi - lo,
        [&](std::size_t k) {
          const Graph& g = graphs[lo + k];
          const auto it = known.find(g.id);
          fresh[lo + k] = solve_graph_depths(g, cfg, it == known.end() ? std::map<int, DatasetRow>{} : it->second);
        },
        cfg.threads);
    if (on_batch) {
      std::vector<DatasetRow> batch;
      for (std::size_t k = lo; k < hi; ++k) batch.insert(batch.end(), fresh[k].begin(), fresh[k].end());
      if (!batch.empty()) on_batch(batch);
    }
  }

  std::vector<DatasetRow> all;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    std::map<int, DatasetRow> merged;
    if (const auto it = known.find(graphs[k].id); it != known.end()) merged = it->second;
    for (auto& r : fresh[k]) merged.emplace(r.p, std::move(r));
    for (auto& [p, r] : merged) all.push_back(std::move(r));
  }
  return all;
}

// ---- split -----------------------------------------------------------------------------

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;

  bool is_train(const std::string& id) const { return std::find(train.begin(), train.end(), id) != train.end(); }
  bool is_test(const std::string& id) const { return std::find(test.begin(), test.end(), id) != test.end(); }
};

/// Splits by graph id: floor(f * G) graphs train, the rest test. Membership
/// depends only on the set of ids and the seed.
inline DatasetSplit split_graph_ids(std::vector<std::string> ids, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw DomainError("train fraction must lie in (0, 1]");
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(ids.size()) + 1e-9));
  if (n_train == 0) throw DomainError("split leaves the training side empty");
  Rng rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(ids[i - 1], ids[std::min(j, i - 1)]);
  }
  DatasetSplit s;
  s.train_fraction = train_fraction;
  s.seed = seed;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

inline DatasetSplit split_dataset(const std::vector<DatasetRow>& rows, double train_fraction, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& r : rows) ids.push_back(r.graph_id);
  return split_graph_ids(std::move(ids), train_fraction, seed);
}

inline nlohmann::ordered_json to_json(const DatasetSplit& s) {
  nlohmann::ordered_json j;
  j["train_frac"] = s.train_fraction;
  j["seed"] = s.seed;
  j["train"] = s.train;
  j["test"] = s.test;
  return j;
}

inline DatasetSplit split_from_json(const nlohmann::json& j) {
  try {
    DatasetSplit s;
    s.train_fraction = j.value("train_frac", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.train = j.at("train").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("invalid split file: ") + ex.what());
  }
}

inline std::vector<DatasetRow> select_rows(const std::vector<DatasetRow>& rows, const std::vector<std::string>& ids) {
  const std::set<std::string> keep(ids.begin(), ids.end());
  std::vector<DatasetRow> out;
  for (const auto& r : rows)
    if (keep.count(r.graph_id)) out.push_back(r);
  return out;
}

// ---- correlation and trend analysis ----------------------------------------------

/// Rows grouped by graph, keyed by depth.
using RowIndex = std::map<std::string, std::map<int, const DatasetRow*>>;

inline RowIndex index_rows(const std::vector<DatasetRow>& rows, bool usable_only = true) {
  RowIndex idx;
  for (const auto& r : rows)
    if (!usable_only || r.usable()) idx[r.graph_id][r.p] = &r;
  return idx;
}
// The index points into `rows`; a temporary would leave it dangling.
RowIndex index_rows(std::vector<DatasetRow>&&, bool = true) = delete;

struct CorrelationEntry {
  std::string predictor;  // "gamma1_p1", "beta1_p1" or "p"
  std::string response;   // "gamma_i" / "beta_i"
  int depth = 0;          // 0 = pooled over all depths >= i
  std::size_t count = 0;
  std::optional<double> r;
};

struct TrendSummary {
  int p = 0;
  std::size_t instances = 0;
  double gamma_mean_step = 0.0;  // mean over instances of mean(gamma_{i+1} - gamma_i)
  double beta_mean_step = 0.0;
  double monotone_fraction = 0.0;  // gamma rising and beta falling on average
  std::vector<double> gamma_mean;  // per stage, over instances
  std::vector<double> beta_mean;
};

struct CorrelationReport {
  std::optional<double> feature_r;  // R(gamma_1(p=1), beta_1(p=1))
  std::size_t feature_count = 0;
  std::vector<CorrelationEntry> entries;
  std::vector<TrendSummary> trends;

  std::optional<double> pooled(const std::string& predictor, const std::string& response) const {
    for (const auto& e : entries)
      if (e.depth == 0 && e.predictor == predictor && e.response == response) return e.r;
    return std::nullopt;
  }
};

inline std::string param_name(bool gamma, int stage) { return (gamma ? "gamma_" : "beta_") + std::to_string(stage); }

/// Pearson R between the two-level predictors (gamma_1 and beta_1 of the p=1
/// optimum, and p) and every stage parameter. Stage-i responses pool all rows
/// with p >= i; per-depth values are reported too.
inline CorrelationReport correlation_report(const std::vector<DatasetRow>& rows, int max_depth = kDefaultMaxDepth) {
  const RowIndex idx = index_rows(rows);
  CorrelationReport rep;

  std::vector<double> g1, b1;
  for (const auto& [id, by_p] : idx)
    if (const auto it = by_p.find(1); it != by_p.end()) {
      g1.push_back(it->second->gamma_opt[0]);
      b1.push_back(it->second->beta_opt[0]);
    }
  rep.feature_count = g1.size();
  rep.feature_r = pearson(g1, b1);

  int deepest = 0;
  for (const auto& [id, by_p] : idx)
    if (!by_p.empty()) deepest = std::max(deepest, by_p.rbegin()->first);
  deepest = std::min(deepest, max_depth);

  for (int stage = 1; stage <= deepest; ++stage) {
    for (bool gamma : {true, false}) {
      // depth 0 = pooled
      for (int depth = 0; depth <= deepest; ++depth) {
        if (depth != 0 && depth < stage) continue;
        std::vector<double> fg, fb, fp, resp;
        for (const auto& [id, by_p] : idx) {
          const auto base = by_p.find(1);
          for (const auto& [p, row] : by_p) {
            if (p < stage || (depth != 0 && p != depth)) continue;
            const double v = gamma ? row->gamma_opt[static_cast<std::size_t>(stage - 1)]
                                   : row->beta_opt[static_cast<std::size_t>(stage - 1)];
            resp.push_back(v);
            fp.push_back(p);
            fg.push_back(base != by_p.end() ? base->second->gamma_opt[0] : std::nan(""));
            fb.push_back(base != by_p.end() ? base->second->beta_opt[0] : std::nan(""));
          }
        }
        auto with_base = [&](const std::vector<double>& feat) {
          std::vector<double> x, y;
          for (std::size_t k = 0; k < feat.size(); ++k)
            if (!std::isnan(feat[k])) {
              x.push_back(feat[k]);
              y.push_back(resp[k]);
            }
          return std::pair{pearson(x, y), x.size()};
        };
        const auto [rg, ng] = with_base(fg);
        const auto [rb, nb] = with_base(fb);
        const std::string name = param_name(gamma, stage);
        rep.entries.push_back({"gamma1_p1", name, depth, ng, rg});
        rep.entries.push_back({"beta1_p1", name, depth, nb, rb});
        if (depth == 0) rep.entries.push_back({"p", name, 0, resp.size(), pearson(fp, resp)});
      }
    }
  }

  for (int p = 2; p <= deepest; ++p) {
    TrendSummary t;
    t.p = p;
    t.gamma_mean.assign(static_cast<std::size_t>(p), 0.0);
    t.beta_mean.assign(static_cast<std::size_t>(p), 0.0);
    std::size_t monotone = 0;
    for (const auto& [id, by_p] : idx) {
      const auto it = by_p.find(p);
      if (it == by_p.end()) continue;
      const DatasetRow& r = *it->second;
      const double gs = (r.gamma_opt.back() - r.gamma_opt.front()) / (p - 1);
      const double bs = (r.beta_opt.back() - r.beta_opt.front()) / (p - 1);
      t.gamma_mean_step += gs;
      t.beta_mean_step += bs;
      if (gs > 0.0 && bs < 0.0) ++monotone;
      for (int i = 0; i < p; ++i) {
        t.gamma_mean[static_cast<std::size_t>(i)] += r.gamma_opt[static_cast<std::size_t>(i)];
        t.beta_mean[static_cast<std::size_t>(i)] += r.beta_opt[static_cast<std::size_t>(i)];
      }
      ++t.instances;
    }
    if (t.instances == 0) continue;
    const auto n = static_cast<double>(t.instances);
    t.gamma_mean_step /= n;
    t.beta_mean_step /= n;
    t.monotone_fraction = static_cast<double>(monotone) / n;
    for (auto& v : t.gamma_mean) v /= n;
    for (auto& v : t.beta_mean) v /= n;
    rep.trends.push_back(std::move(t));
  }
  return rep;
}

/// Fraction of instances at depth >= min_depth whose gamma schedule rises and
/// beta schedule falls on average across stages.
inline double monotone_trend_fraction(const std::vector<DatasetRow>& rows, int min_depth = 3) {
  std::size_t total = 0, ok = 0;
  for (const auto& r : rows) {
    if (!r.usable() || r.p < min_depth) continue;
    ++total;
    if (r.gamma_opt.back() > r.gamma_opt.front() && r.beta_opt.back() < r.beta_opt.front()) ++ok;
  }
  return total ? static_cast<double>(ok) / static_cast<double>(total) : 0.0;
}

inline void write_correlation_csv(std::ostream& os, const CorrelationReport& rep) {
  char buf[64];
  auto num = [&](const std::optional<double>& v) {
    if (!v) return std::string("undefined");
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return std::string(buf);
  };
  os << "section,predictor,response,depth,count,value\n";
  os << "feature_r,gamma1_p1,beta1_p1,1," << rep.feature_count << ',' << num(rep.feature_r) << '\n';
  for (const auto& e : rep.entries)
    os << (e.depth == 0 ? "pooled_r" : "per_depth_r") << ',' << e.predictor << ',' << e.response << ','
       << (e.depth == 0 ? std::string("all") : std::to_string(e.depth)) << ',' << e.count << ',' << num(e.r) << '\n';
  for (const auto& t : rep.trends) {
    os << "trend,gamma_mean_step,," << t.p << ',' << t.instances << ',' << num(t.gamma_mean_step) << '\n';
    os << "trend,beta_mean_step,," << t.p << ',' << t.instances << ',' << num(t.beta_mean_step) << '\n';
    os << "trend,monotone_fraction,," << t.p << ',' << t.instances << ',' << num(t.monotone_fraction) << '\n';
    for (int i = 0; i < t.p; ++i) {
      os << "stage_mean,," << param_name(true, i + 1) << ',' << t.p << ',' << t.instances << ','
         << num(t.gamma_mean[static_cast<std::size_t>(i)]) << '\n';
      os << "stage_mean,," << param_name(false, i + 1) << ',' << t.p << ',' << t.instances << ','
         << num(t.beta_mean[static_cast<std::size_t>(i)]) << '\n';
    }
  }
}

// ---- predictor bank ----------------------------------------------------------------

/// Feature layout shared by training and prediction.
///   two-level:    (gamma_1(p=1), beta_1(p=1), p_t)
///   hierarchical: (gamma_1(p=1), beta_1(p=1), gamma_1..m(p=m), beta_1..m(p=m), p_t)
struct FeatureLayout {
  int intermediate_depth = 0;  // m; 0 selects the two-level layout

  bool hierarchical() const { return intermediate_depth > 0; }
  std::size_t size() const { return 3 + 2 * static_cast<std::size_t>(intermediate_depth); }
  int min_target_depth() const { return hierarchical() ? intermediate_depth + 1 : 2; }
};

inline std::vector<double> make_features(const FeatureLayout& layout, double gamma1, double beta1,
                                         const ParameterVector* intermediate, int p_t) {
  std::vector<double> f{gamma1, beta1};
  if (layout.hierarchical()) {
    if (!intermediate || intermediate->depth() != layout.intermediate_depth)
      throw DomainError("hierarchical features need the depth-" + std::to_string(layout.intermediate_depth) + " optimum");
    f.insert(f.end(), intermediate->gamma.begin(), intermediate->gamma.end());
    f.insert(f.end(), intermediate->beta.begin(), intermediate->beta.end());
  } else if (intermediate) {
    throw DomainError("two-level features take no intermediate optimum");
  }
  f.push_back(static_cast<double>(p_t));
  return f;
}

struct BankEntry {
  Regressor model;
  ModelMetrics metrics;  // on the training pairs
  std::size_t train_rows = 0;
};

struct TrainingPair {
  std::vector<double> features;
  double target;
};

class PredictorBank {
 public:
  FeatureLayout layout;
  int max_depth = 0;
  ModelKind kind = ModelKind::Gpr;
  std::map<std::string, BankEntry> models;  // "gamma_i" / "beta_i"

  const BankEntry& entry(bool gamma, int stage) const {
    const auto it = models.find(param_name(gamma, stage));
    if (it == models.end()) throw DomainError("bank has no model for " + param_name(gamma, stage));
    return it->second;
  }

  std::size_t size() const { return models.size(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["meta"] = {{"layout", layout.hierarchical() ? "hierarchical" : "two_level"},
                 {"intermediate_depth", layout.intermediate_depth},
                 {"max_depth", max_depth},
                 {"model", std::string(to_string(kind))}};
    for (int i = 1; i <= max_depth; ++i)
      for (bool gamma : {true, false}) {
        const std::string key = param_name(gamma, i);
        const auto it = models.find(key);
        if (it == models.end()) continue;
        const auto& m = it->second.metrics;
        nlohmann::ordered_json metrics = {{"mse", m.mse}, {"rmse", m.rmse}, {"mae", m.mae}};
        metrics["r2"] = m.r2 ? nlohmann::ordered_json(*m.r2) : nlohmann::ordered_json(nullptr);
        metrics["r2_adj"] = m.r2_adj ? nlohmann::ordered_json(*m.r2_adj) : nlohmann::ordered_json(nullptr);
        j[key] = {{"model", it->second.model.to_json()}, {"metrics", metrics}, {"train_rows", it->second.train_rows}};
      }
    return j;
  }

  static PredictorBank from_json(const nlohmann::json& j) {
    try {
      PredictorBank b;
      const auto& meta = j.at("meta");
      b.layout.intermediate_depth = meta.value("intermediate_depth", 0);
      b.max_depth = meta.at("max_depth").get<int>();
      b.kind = parse_model_kind(meta.value("model", std::string("gpr")));
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "meta") continue;
        BankEntry e;
        e.model = Regressor::from_json(it.value().at("model"));
        const auto& m = it.value().at("metrics");
        e.metrics.mse = m.at("mse").get<double>();
        e.metrics.rmse = m.at("rmse").get<double>();
        e.metrics.mae = m.at("mae").get<double>();
        if (!m.at("r2").is_null()) e.metrics.r2 = m.at("r2").get<double>();
        if (!m.at("r2_adj").is_null()) e.metrics.r2_adj = m.at("r2_adj").get<double>();
        e.train_rows = it.value().value("train_rows", std::size_t{0});
        b.models.emplace(it.key(), std::move(e));
      }
      return b;
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(std::string("invalid bank file: ") + ex.what());
    }
  }
};

/// Feature/target pairs for one bank model: every graph with a usable p=1
/// row (and depth-m row for the hierarchical layout) contributes one pair per
/// usable row at depth p >= max(stage, min_target_depth).
inline std::vector<TrainingPair> training_pairs(const RowIndex& idx, const FeatureLayout& layout, bool gamma, int stage,
                                                int max_depth) {
  std::vector<TrainingPair> pairs;
  for (const auto& [id, by_p] : idx) {
    const auto base = by_p.find(1);
    if (base == by_p.end()) continue;
    ParameterVector mid;
    if (layout.hierarchical()) {
      const auto m = by_p.find(layout.intermediate_depth);
      if (m == by_p.end()) continue;
      mid = m->second->params();
    }
    for (const auto& [p, row] : by_p) {
      if (p < std::max(stage, layout.min_target_depth()) || p > max_depth) continue;
      pairs.push_back({make_features(layout, base->second->gamma_opt[0], base->second->beta_opt[0],
                                     layout.hierarchical() ? &mid : nullptr, p),
                       gamma ? row->gamma_opt[static_cast<std::size_t>(stage - 1)]
                             : row->beta_opt[static_cast<std::size_t>(stage - 1)]});
    }
  }
  return pairs;
}

struct BankConfig {
  RegressorConfig regressor;
  FeatureLayout layout;
  int max_depth = kDefaultMaxDepth;
  unsigned threads = 0;
};

/// One regressor per (stage, gamma|beta) for stages 1..max_depth, trained on
/// usable rows only. Graphs without a usable p=1 row are skipped.
inline PredictorBank train_predictor_bank(const std::vector<DatasetRow>& train_rows, const BankConfig& cfg = {}) {
  const RowIndex idx = index_rows(train_rows);
  int deepest = 0;
  for (const auto& [id, by_p] : idx)
    if (by_p.count(1) && !by_p.empty()) deepest = std::max(deepest, by_p.rbegin()->first);
  PredictorBank bank;
  bank.layout = cfg.layout;
  bank.kind = cfg.regressor.kind;
  bank.max_depth = std::min(cfg.max_depth, deepest);
  if (bank.max_depth < cfg.layout.min_target_depth())
    throw TrainingError("training rows do not reach the minimum target depth " +
                        std::to_string(cfg.layout.min_target_depth()));

  struct Job {
    bool gamma;
    int stage;
  };
  std::vector<Job> jobs;
  for (int i = 1; i <= bank.max_depth; ++i)
    for (bool gamma : {true, false}) jobs.push_back({gamma, i});
  std::vector<BankEntry> fitted(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t k) {
        const auto pairs = training_pairs(idx, cfg.layout, jobs[k].gamma, jobs[k].stage, bank.max_depth);
        if (pairs.size() < 2) throw TrainingError("too few training pairs for " + param_name(jobs[k].gamma, jobs[k].stage));
        Matrix X;
        std::vector<double> y;
        for (const auto& pr : pairs) {
          X.push_back(pr.features);
          y.push_back(pr.target);
        }
        BankEntry e;
        e.model = fit_regressor(X, y, cfg.regressor);
        std::vector<double> pred;
        for (const auto& x : X) pred.push_back(e.model.predict(x));
        e.metrics = regression_metrics(pred, y, X.front().size());
        e.train_rows = pairs.size();
        fitted[k] = std::move(e);
      },
      cfg.threads);
  for (std::size_t k = 0; k < jobs.size(); ++k)
    bank.models.emplace(param_name(jobs[k].gamma, jobs[k].stage), std::move(fitted[k]));
  return bank;
}

}  // namespace qaoa_ws
