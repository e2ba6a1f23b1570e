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

// qaoa-ws: command-line driver for the warm-start pipeline.
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qaoa_ws/qaoa_ws.hpp"

namespace fs = std::filesystem;
using namespace qaoa_ws;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::trunc) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::out | mode);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError("'" + path + "': " + ex.what());
  }
}

std::vector<int> depths_arg(const std::string& s) {
  try {
    return parse_depths(s);
  } catch (const DomainError& ex) {
    throw UsageError(ex.what());
  }
}

OptimizerKind optimizer_arg(const std::string& s) {
  try {
    return parse_optimizer_kind(s);
  } catch (const DomainError& ex) {
    throw UsageError(ex.what());
  }
}

// ---- gen-graphs ---------------------------------------------------------------------

struct GenGraphsArgs {
  int n = 8;
  int count = 330;
  double edge_prob = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_graphs(const GenGraphsArgs& a) {
  if (a.n < 2 || a.n > kDefaultMaxQubits) throw UsageError("--n must lie in 2.." + std::to_string(kDefaultMaxQubits));
  if (a.count < 1) throw UsageError("--count must be >= 1");
  if (!(a.edge_prob > 0.0 && a.edge_prob <= 1.0)) throw UsageError("--edge-prob must lie in (0, 1]");
  const auto graphs = generate_graphs(a.n, a.count, a.edge_prob, a.seed);
  auto out = open_out(a.out);
  write_graphs(out, graphs);
  std::cout << "wrote " << graphs.size() << " graphs to " << a.out << '\n';
  return 0;
}

// ---- build-dataset --------------------------------------------------------------------

struct BuildArgs {
  std::string graphs, out, depths = "1..6", optimizer = "quasi-newton", csv;
  int restarts = 20;
  double ftol = 1e-6;
  long max_evals = 10'000;
  std::uint64_t seed = 0;
  bool no_interp = false;
  unsigned threads = 0;
};

int run_build(const BuildArgs& a) {
  DatasetConfig cfg;
  cfg.depths = depths_arg(a.depths);
  cfg.restarts = a.restarts;
  cfg.optimizer.kind = optimizer_arg(a.optimizer);
  cfg.optimizer.ftol = a.ftol;
  cfg.optimizer.max_evals = a.max_evals;
  cfg.seed = a.seed;
  cfg.interpolated_start = !a.no_interp;
  cfg.threads = a.threads;
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  if (!(a.ftol > 0.0)) throw UsageError("--ftol must be > 0");

  const auto graphs = read_graphs_file(a.graphs);
  std::vector<DatasetRow> existing;
  if (fs::exists(a.out)) existing = read_rows_file(a.out);
  std::size_t fresh = 0;
  auto out = open_out(a.out, std::ios::app);
  const auto rows = build_dataset(graphs, cfg, existing, [&](const std::vector<DatasetRow>& batch) {
    append_rows(out, batch);
    out.flush();
    fresh += batch.size();
  });
  if (!a.csv.empty()) {
    auto csv = open_out(a.csv);
    write_rows_csv(csv, rows);
  }
  std::size_t failed = 0, unconverged = 0;
  for (const auto& r : rows) {
    failed += r.failed;
    unconverged += !r.failed && !r.converged;
  }
  std::cout << "rows: " << rows.size() << " (" << fresh << " new, " << existing.size() << " resumed), parameters: "
            << parameter_count(rows) << ", failed: " << failed << ", not converged: " << unconverged << '\n';
  return 0;
}

// ---- analyze ----------------------------------------------------------------------------

int run_analyze(const std::string& rows_path, const std::string& out_path) {
  const auto rows = read_rows_file(rows_path);
  const auto rep = correlation_report(rows);
  auto out = open_out(out_path);
  write_correlation_csv(out, rep);
  auto show = [](const std::optional<double>& v) {
    return v ? detail::fmt(*v, "%+.3f") : std::string("undefined");
  };
  std::cout << "R(gamma_1(p=1), beta_1(p=1)) = " << show(rep.feature_r) << " over " << rep.feature_count << " graphs\n";
  for (int i = 1; i <= kDefaultMaxDepth; ++i) {
    const auto g = rep.pooled("p", param_name(true, i));
    const auto b = rep.pooled("p", param_name(false, i));
    if (!g && !b) continue;
    std::cout << "stage " << i << ": R(gamma, p) = " << show(g) << ", R(beta, p) = " << show(b) << '\n';
  }
  for (const auto& t : rep.trends)
    std::cout << "p=" << t.p << ": mean gamma step " << detail::fmt(t.gamma_mean_step, "%+.4f") << ", mean beta step "
              << detail::fmt(t.beta_mean_step, "%+.4f") << ", monotone " << detail::fmt(100.0 * t.monotone_fraction, "%.1f")
              << "% of " << t.instances << '\n';
  return 0;
}

// ---- split ------------------------------------------------------------------------------

int run_split(const std::string& rows_path, double frac, std::uint64_t seed, const std::string& out_path) {
  if (!(frac > 0.0 && frac <= 1.0)) throw UsageError("--train-frac must lie in (0, 1]");
  const auto split = split_dataset(read_rows_file(rows_path), frac, seed);
  auto out = open_out(out_path);
  out << to_json(split).dump(2) << '\n';
  std::cout << "train " << split.train.size() << " / test " << split.test.size() << " graphs\n";
  return 0;
}

// ---- train ------------------------------------------------------------------------------

struct TrainArgs {
  std::string rows, split, model = "gpr", out;
  int hierarchical_m = 0;
  int max_depth = kDefaultMaxDepth;
  int min_leaf = 5;
  int tree_depth = 8;
  unsigned threads = 0;
};

int run_train(const TrainArgs& a) {
  BankConfig cfg;
  try {
    cfg.regressor.kind = parse_model_kind(a.model);
  } catch (const DomainError& ex) {
    throw UsageError(ex.what());
  }
  if (a.hierarchical_m < 0 || a.hierarchical_m == 1) throw UsageError("--hierarchical-m must be 0 (off) or >= 2");
  cfg.layout.intermediate_depth = a.hierarchical_m;
  cfg.max_depth = a.max_depth;
  cfg.regressor.tree.min_leaf = a.min_leaf;
  cfg.regressor.tree.max_depth = a.tree_depth;
  cfg.threads = a.threads;
  const auto rows = read_rows_file(a.rows);
  const auto split = split_from_json(read_json_file(a.split));
  const auto bank = train_predictor_bank(select_rows(rows, split.train), cfg);
  auto out = open_out(a.out);
  out << bank.to_json().dump() << '\n';
  std::cout << "trained " << bank.size() << " " << to_string(bank.kind) << " models (stages 1.." << bank.max_depth
            << ") on " << split.train.size() << " graphs\n";
  for (int i = 1; i <= bank.max_depth; ++i)
    for (bool gamma : {true, false}) {
      const auto& e = bank.entry(gamma, i);
      std::cout << "  " << param_name(gamma, i) << ": rows " << e.train_rows << ", train rmse "
                << detail::fmt(e.metrics.rmse, "%.4f") << '\n';
    }
  return 0;
}

// ---- bench ------------------------------------------------------------------------------

struct BenchArgs {
  std::string rows, split, bank, graphs, out, depths = "2..5", optimizers = "nelder-mead,quasi-newton", plot_data,
                                                  records;
  int restarts = 20;
  double ftol = 1e-6;
  long max_evals = 10'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void write_plot_data(const std::string& dir, const std::vector<DatasetRow>& rows, const BenchReport& rep) {
  fs::create_directories(dir);
  {
    auto out = open_out((fs::path(dir) / "fig2_stage_trends.csv").string());
    out << "graph_id,p,stage,gamma,beta\n";
    for (const auto& r : rows) {
      if (!r.usable() || (r.p != 3 && r.p != 5)) continue;
      for (int i = 0; i < r.p; ++i)
        out << r.graph_id << ',' << r.p << ',' << i + 1 << ',' << detail::fmt(r.gamma_opt[static_cast<std::size_t>(i)])
            << ',' << detail::fmt(r.beta_opt[static_cast<std::size_t>(i)]) << '\n';
    }
  }
  {
    auto out = open_out((fs::path(dir) / "fig3_depth_trends.csv").string());
    out << "p,stage,instances,gamma_mean,gamma_std,beta_mean,beta_std\n";
    std::map<std::pair<int, int>, std::pair<std::vector<double>, std::vector<double>>> by;
    for (const auto& r : rows) {
      if (!r.usable()) continue;
      for (int i = 0; i < r.p; ++i) {
        auto& cell = by[{r.p, i + 1}];
        cell.first.push_back(r.gamma_opt[static_cast<std::size_t>(i)]);
        cell.second.push_back(r.beta_opt[static_cast<std::size_t>(i)]);
      }
    }
    for (const auto& [key, cell] : by) {
      const auto g = detail::mean_std(cell.first), b = detail::mean_std(cell.second);
      out << key.first << ',' << key.second << ',' << cell.first.size() << ',' << detail::fmt(g.mean) << ','
          << detail::fmt(g.std) << ',' << detail::fmt(b.mean) << ',' << detail::fmt(b.std) << '\n';
    }
  }
  {
    auto out = open_out((fs::path(dir) / "fig5_correlation.csv").string());
    write_correlation_csv(out, correlation_report(rows));
  }
  {
    auto out = open_out((fs::path(dir) / "fig6_prediction_error.csv").string());
    write_prediction_error_csv(out, rep.prediction_errors);
  }
  {
    auto out = open_out((fs::path(dir) / "fig7_runtime_table.csv").string());
    write_bench_csv(out, rep);
  }
}

int run_bench(const BenchArgs& a) {
  BenchConfig cfg;
  cfg.depths = depths_arg(a.depths);
  cfg.optimizers.clear();
  std::stringstream ss(a.optimizers);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) cfg.optimizers.push_back(optimizer_arg(tok));
  if (cfg.optimizers.empty()) throw UsageError("--optimizers is empty");
  if (a.restarts < 1) throw UsageError("--restarts must be >= 1");
  cfg.restarts = a.restarts;
  cfg.optimizer.ftol = a.ftol;
  cfg.optimizer.max_evals = a.max_evals;
  cfg.seed = a.seed;
  cfg.threads = a.threads;

  const auto rows = read_rows_file(a.rows);
  const auto split = split_from_json(read_json_file(a.split));
  const auto bank = PredictorBank::from_json(read_json_file(a.bank));
  if (bank.layout.hierarchical()) throw UsageError("bench needs a two-level bank (trained without --hierarchical-m)");
  for (int p : cfg.depths)
    if (p < 2 || p > bank.max_depth) throw UsageError("--depths must lie in 2.." + std::to_string(bank.max_depth));
  std::vector<Graph> test_graphs;
  for (auto& g : read_graphs_file(a.graphs))
    if (split.is_test(g.id)) test_graphs.push_back(std::move(g));
  if (test_graphs.empty()) throw std::runtime_error("no graph in '" + a.graphs + "' belongs to the test split");

  const auto report = run_benchmark(test_graphs, bank, cfg, select_rows(rows, split.test));
  {
    auto out = open_out(a.out);
    write_bench_csv(out, report);
  }
  {
    auto out = open_out((fs::path(a.out).replace_extension("").string()) + "_details.csv");
    write_bench_details_csv(out, report);
  }
  if (!a.records.empty()) {
    auto out = open_out(a.records);
    write_bench_records(out, report);
  }
  if (!a.plot_data.empty()) write_plot_data(a.plot_data, rows, report);
  write_bench_csv(std::cout, report);
  std::cout << "prediction error (mean relative):";
  for (const auto& e : report.prediction_errors) std::cout << " p=" << e.p << ' ' << detail::fmt(100 * e.mean, "%.2f") << '%';
  std::cout << "\nnote: naive FC is the per-run mean over all restarts; see *_details.csv for totals\n";
  return 0;
}

// ---- solve ------------------------------------------------------------------------------

struct SolveArgs {
  std::string graph, bank, optimizer = "quasi-newton", graph_id;
  int p = 4;
  std::uint64_t seed = 0;
  double ftol = 1e-6;
};

int run_solve(const SolveArgs& a) {
  OptimizerConfig cfg;
  cfg.kind = optimizer_arg(a.optimizer);
  cfg.ftol = a.ftol;
  const auto bank = PredictorBank::from_json(read_json_file(a.bank));
  if (bank.layout.hierarchical()) throw UsageError("solve needs a two-level bank");
  if (a.p < 2 || a.p > bank.max_depth) throw UsageError("--p must lie in 2.." + std::to_string(bank.max_depth));
  const auto graphs = read_graphs_file(a.graph);
  bool any = false;
  for (const auto& g : graphs) {
    if (!a.graph_id.empty() && g.id != a.graph_id) continue;
    any = true;
    const CutTable table = cut_table(g);
    const auto r = two_level_solve(table, a.p, bank, cfg, derive_seed(a.seed, hash_string(g.id)));
    const auto best = canonical_parameters(r.stage2.params);
    std::cout << g.id << ": p=" << a.p << " value=" << detail::fmt(r.stage2.value, "%.6f") << " max_cut=" << table.max_cut
              << " ar=" << detail::fmt(r.ar, "%.6f") << " fc=" << r.total_fc << " (stage1 " << r.stage1.fc << " + stage2 "
              << r.stage2.fc << ")\n  gamma=";
    for (double v : best.gamma) std::cout << ' ' << detail::fmt(v, "%.6f");
    std::cout << "\n  beta =";
    for (double v : best.beta) std::cout << ' ' << detail::fmt(v, "%.6f");
    std::cout << '\n';
  }
  if (!any) throw UsageError("no graph matched in '" + a.graph + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA MaxCut warm-start toolkit"};
  app.require_subcommand(1);

  GenGraphsArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-graphs", "Generate Erdos-Renyi problem graphs (JSON Lines)");
  gen_cmd->add_option("--n", gen.n, "Nodes per graph");
  gen_cmd->add_option("--count", gen.count, "Number of graphs");
  gen_cmd->add_option("--edge-prob", gen.edge_prob, "Edge probability");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "Output file")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-dataset", "Optimize every graph at every depth (resumable)");
  build_cmd->add_option("--graphs", build.graphs, "Graph file")->required();
  build_cmd->add_option("--depths", build.depths, "Depths, e.g. 1..6");
  build_cmd->add_option("--restarts", build.restarts, "Random restarts per instance");
  build_cmd->add_option("--optimizer", build.optimizer, "nelder-mead | quasi-newton");
  build_cmd->add_option("--ftol", build.ftol, "Functional tolerance");
  build_cmd->add_option("--max-evals", build.max_evals, "Evaluation budget per run");
  build_cmd->add_option("--seed", build.seed, "RNG seed");
  build_cmd->add_flag("--no-interpolated-start", build.no_interp, "Use random restarts only");
  build_cmd->add_option("--csv", build.csv, "Also write a flat CSV export");
  build_cmd->add_option("--threads", build.threads, "Worker threads (0 = all cores)");
  build_cmd->add_option("--out", build.out, "Rows file (appended to when it exists)")->required();

  std::string analyze_rows, analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "Correlation and trend report");
  analyze_cmd->add_option("--rows", analyze_rows, "Rows file")->required();
  analyze_cmd->add_option("--out", analyze_out, "Output CSV")->required();

  std::string split_rows, split_out;
  double split_frac = 0.2;
  std::uint64_t split_seed = 0;
  auto* split_cmd = app.add_subcommand("split", "Split graphs into train/test");
  split_cmd->add_option("--rows", split_rows, "Rows file")->required();
  split_cmd->add_option("--train-frac", split_frac, "Training fraction");
  split_cmd->add_option("--seed", split_seed, "RNG seed");
  split_cmd->add_option("--out", split_out, "Output JSON")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the predictor bank");
  train_cmd->add_option("--rows", train.rows, "Rows file")->required();
  train_cmd->add_option("--split", train.split, "Split file")->required();
  train_cmd->add_option("--model", train.model, "gpr | linear | tree");
  train_cmd->add_option("--hierarchical-m", train.hierarchical_m, "Intermediate depth for hierarchical features (0 = off)");
  train_cmd->add_option("--max-depth", train.max_depth, "Deepest stage to model");
  train_cmd->add_option("--min-leaf", train.min_leaf, "Tree: minimum leaf size");
  train_cmd->add_option("--tree-depth", train.tree_depth, "Tree: maximum depth");
  train_cmd->add_option("--threads", train.threads, "Worker threads (0 = all cores)");
  train_cmd->add_option("--out", train.out, "Bank JSON")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Naive vs two-level benchmark on the test split");
  bench_cmd->add_option("--rows", bench.rows, "Rows file")->required();
  bench_cmd->add_option("--split", bench.split, "Split file")->required();
  bench_cmd->add_option("--bank", bench.bank, "Bank JSON")->required();
  bench_cmd->add_option("--graphs", bench.graphs, "Graph file")->required();
  bench_cmd->add_option("--depths", bench.depths, "Target depths, e.g. 2..5");
  bench_cmd->add_option("--restarts", bench.restarts, "Random restarts for the naive flow");
  bench_cmd->add_option("--optimizers", bench.optimizers, "Comma-separated optimizer kinds");
  bench_cmd->add_option("--ftol", bench.ftol, "Functional tolerance");
  bench_cmd->add_option("--max-evals", bench.max_evals, "Evaluation budget per run");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  bench_cmd->add_option("--records", bench.records, "Per-graph raw records (JSON Lines)");
  bench_cmd->add_option("--plot-data", bench.plot_data, "Directory for per-figure CSVs");
  bench_cmd->add_option("--out", bench.out, "Report CSV")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Two-level solve of one graph file");
  solve_cmd->add_option("--graph", solve.graph, "Graph file")->required();
  solve_cmd->add_option("--p", solve.p, "Target depth");
  solve_cmd->add_option("--bank", solve.bank, "Bank JSON")->required();
  solve_cmd->add_option("--optimizer", solve.optimizer, "nelder-mead | quasi-newton");
  solve_cmd->add_option("--graph-id", solve.graph_id, "Only solve this graph");
  solve_cmd->add_option("--seed", solve.seed, "RNG seed");
  solve_cmd->add_option("--ftol", solve.ftol, "Functional tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) return run_gen_graphs(gen);
    if (*build_cmd) return run_build(build);
    if (*analyze_cmd) return run_analyze(analyze_rows, analyze_out);
    if (*split_cmd) return run_split(split_rows, split_frac, split_seed, split_out);
    if (*train_cmd) return run_train(train);
    if (*bench_cmd) return run_bench(bench);
    if (*solve_cmd) return run_solve(solve);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
