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

// Box-constrained local optimizers with exact objective-call accounting, and
// the random-restart driver that forms the naive QAOA loop.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qaoa_ws/errors.hpp"
#include "qaoa_ws/graph.hpp"
#include "qaoa_ws/rng.hpp"
#include "qaoa_ws/simulator.hpp"

namespace qaoa_ws {

enum class OptimizerKind { NelderMead, QuasiNewton };

inline std::string_view to_string(OptimizerKind k) {
  return k == OptimizerKind::NelderMead ? "nelder-mead" : "quasi-newton";
}

inline OptimizerKind parse_optimizer_kind(std::string_view s) {
  if (s == "nelder-mead" || s == "nelder_mead") return OptimizerKind::NelderMead;
  if (s == "quasi-newton" || s == "quasi_newton") return OptimizerKind::QuasiNewton;
  throw DomainError("unknown optimizer '" + std::string(s) + "'");
}

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::QuasiNewton;
  double ftol = 1e-6;
  long max_evals = 10'000;
  double fd_step = 1e-8;       // relative forward-difference step (quasi-Newton)
  double gtol = 1e-5;          // projected-gradient stop (quasi-Newton)
  int memory = 10;             // correction pairs kept (quasi-Newton)
  double initial_step = 0.05;  // simplex edge as a fraction of box width (Nelder-Mead)

  void validate() const {
    if (!(ftol > 0.0)) throw DomainError("ftol must be > 0");
    if (max_evals < 1) throw DomainError("max_evals must be >= 1");
    if (!(fd_step > 0.0)) throw DomainError("fd_step must be > 0");
    if (memory < 1) throw DomainError("memory must be >= 1");
    if (!(initial_step > 0.0)) throw DomainError("initial_step must be > 0");
  }
};

struct MinimizeResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  long evals = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

struct BudgetExhausted {};

// Counts calls, enforces the budget, rejects non-finite values and keeps the
// best point seen.
class CountedObjective {
 public:
  CountedObjective(const Objective& f, long budget) : f_(f), budget_(budget) {}

  double operator()(std::span<const double> x) {
    if (evals_ >= budget_) throw BudgetExhausted{};
    ++evals_;
    const double v = f_(x);
    if (!std::isfinite(v)) throw ObjectiveError("objective returned a non-finite value");
    if (v < best_f_) {
      best_f_ = v;
      best_x_.assign(x.begin(), x.end());
    }
    return v;
  }

  long evals() const { return evals_; }
  double best_f() const { return best_f_; }
  const std::vector<double>& best_x() const { return best_x_; }

 private:
  const Objective& f_;
  long budget_;
  long evals_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
};

inline void clamp_into(std::vector<double>& x, const Box& box) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
}

inline bool small_change(double before, double after, double ftol) {
  return std::abs(before - after) < ftol * (1.0 + std::abs(after));
}

// Nelder-Mead with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
// Trial points are clamped into the box before evaluation.
inline bool nelder_mead(CountedObjective& f, std::vector<double> x0, const Box& box, const OptimizerConfig& cfg) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = cfg.initial_step * (box.upper[i] - box.lower[i]);
    auto& v = simplex[i + 1];
    v[i] = (x0[i] + step <= box.upper[i]) ? x0[i] + step : x0[i] - step;
    clamp_into(v, box);
  }
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  const std::size_t window = 2 * n;
  std::vector<double> best_history;
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto along = [&](std::vector<double>& out, const std::vector<double>& from, const std::vector<double>& to,
                   double t) {
    for (std::size_t j = 0; j < n; ++j) out[j] = from[j] + t * (to[j] - from[j]);
    clamp_into(out, box);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    best_history.push_back(fv[best]);
    const std::size_t k = best_history.size() - 1;
    if (k >= window && small_change(best_history[k - window], best_history[k], cfg.ftol)) return true;

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
    if (diameter < 1e-14) return true;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

    along(xr, centroid, simplex[worst], -kReflect);
    const double fr = f(xr);
    if (fr < fv[best]) {
      along(xe, centroid, simplex[worst], -kReflect * kExpand);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    if (fr < fv[worst]) {
      along(xc, centroid, xr, kContract);
      const double fc = f(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    } else {
      along(xc, centroid, simplex[worst], kContract);
      const double fc = f(xc);
      if (fc < fv[worst]) {
        simplex[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      along(simplex[i], simplex[best], simplex[i], kShrink);
      fv[i] = f(simplex[i]);
    }
  }
}

// Forward differences with step fd_step * max(1, |x_i|); a probe that would
// leave the box is taken backwards instead.
inline std::vector<double> fd_gradient(CountedObjective& f, const std::vector<double>& x, double fx, const Box& box,
                                       double fd_step) {
  std::vector<double> g(x.size());
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = fd_step * std::max(1.0, std::abs(x[i]));
    const bool forward = x[i] + h <= box.upper[i];
    probe[i] = forward ? x[i] + h : x[i] - h;
    const double step = probe[i] - x[i];
    g[i] = (f(probe) - fx) / step;
    probe[i] = x[i];
  }
  return g;
}

// Limited-memory BFGS on the free variables with a projected backtracking
// (Armijo) line search. Variables pinned at a bound by the gradient sign are
// held fixed for the iteration.
inline bool quasi_newton(CountedObjective& f, std::vector<double> x, const Box& box, const OptimizerConfig& cfg) {
  const std::size_t n = x.size();
  clamp_into(x, box);
  double fx = f(x);
  std::vector<double> g = fd_gradient(f, x, fx, box, cfg.fd_step);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<char> free_var(n);
  std::vector<double> d(n), xt(n);
  bool first = true;

  for (;;) {
    double pg_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool at_lower = x[i] <= box.lower[i] && g[i] > 0.0;
      const bool at_upper = x[i] >= box.upper[i] && g[i] < 0.0;
      free_var[i] = !(at_lower || at_upper);
      const double projected = std::clamp(x[i] - g[i], box.lower[i], box.upper[i]) - x[i];
      pg_norm = std::max(pg_norm, std::abs(projected));
    }
    if (pg_norm < cfg.gtol) return true;

    // Two-loop recursion, restricted to free coordinates.
    for (std::size_t i = 0; i < n; ++i) d[i] = free_var[i] ? -g[i] : 0.0;
    std::vector<double> alpha(memory.size());
    auto dot_free = [&](const std::vector<double>& a, const std::vector<double>& b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (free_var[i]) s += a[i] * b[i];
      return s;
    };
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].rho * dot_free(memory[k].s, d);
      for (std::size_t i = 0; i < n; ++i)
        if (free_var[i]) d[i] -= alpha[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      const double yy = dot_free(last.y, last.y);
      const double sy = dot_free(last.s, last.y);
      if (yy > 0.0 && sy > 0.0)
        for (auto& di : d) di *= sy / yy;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot_free(memory[k].y, d);
      for (std::size_t i = 0; i < n; ++i)
        if (free_var[i]) d[i] += (alpha[k] - beta) * memory[k].s[i];
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += d[i] * g[i];
    if (!(slope < 0.0)) {
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = free_var[i] ? -g[i] : 0.0;
    }

    double t = 1.0;
    if (first || memory.empty()) {
      double dmax = 0.0;
      for (double di : d) dmax = std::max(dmax, std::abs(di));
      if (dmax > 0.0) t = std::min(1.0, 1.0 / dmax);
    }
    constexpr double kArmijo = 1e-4;
    double ft = fx;
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        xt[i] = std::clamp(x[i] + t * d[i], box.lower[i], box.upper[i]);
        decrease += g[i] * (xt[i] - x[i]);
      }
      if (decrease >= 0.0) break;
      ft = f(xt);
      if (ft <= fx + kArmijo * decrease) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    first = false;
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      return true;  // no descent available at gradient resolution
    }

    std::vector<double> g_new = fd_gradient(f, xt, ft, box, cfg.fd_step);
    Pair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = xt[i] - x[i];
      pair.y[i] = g_new[i] - g[i];
      sy += pair.s[i] * pair.y[i];
      ss += pair.s[i] * pair.s[i];
      yy += pair.y[i] * pair.y[i];
    }
    if (sy > 1e-10 * std::sqrt(ss * yy)) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > cfg.memory) memory.pop_front();
    }
    const double f_old = fx;
    x = xt;
    fx = ft;
    g = std::move(g_new);
    if (small_change(f_old, fx, cfg.ftol)) return true;
  }
}

}  // namespace detail

/// Minimizes `objective` over `box` starting at x0. Every objective call,
/// finite-difference probes included, is counted in `evals`. Running out of
/// budget returns the best point seen with converged = false.
inline MinimizeResult minimize(const Objective& objective, std::span<const double> x0, const Box& box,
                               const OptimizerConfig& cfg) {
  cfg.validate();
  if (x0.empty()) throw DomainError("minimize: empty starting point");
  if (x0.size() != box.size()) throw DomainError("minimize: starting point and bounds differ in dimension");
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!(box.lower[i] <= box.upper[i])) throw DomainError("minimize: lower bound exceeds upper bound");
  if (!box.contains(x0)) throw DomainError("minimize: starting point outside bounds");

  detail::CountedObjective counted(objective, cfg.max_evals);
  std::vector<double> start(x0.begin(), x0.end());
  MinimizeResult result;
  try {
    result.converged = cfg.kind == OptimizerKind::NelderMead ? detail::nelder_mead(counted, start, box, cfg)
                                                             : detail::quasi_newton(counted, start, box, cfg);
  } catch (const detail::BudgetExhausted&) {
    result.converged = false;
  }
  result.x = counted.best_x();
  result.f = counted.best_f();
  result.evals = counted.evals();
  return result;
}

/// gamma_i ~ U[0, 2pi], then beta_i ~ U[0, pi].
inline ParameterVector random_params(int p, Rng& rng) {
  if (p < 1) throw DomainError("random_params: depth must be >= 1");
  ParameterVector params;
  params.gamma.resize(static_cast<std::size_t>(p));
  params.beta.resize(static_cast<std::size_t>(p));
  for (auto& g : params.gamma) g = uniform(rng, 0.0, kGammaMax);
  for (auto& b : params.beta) b = uniform(rng, 0.0, kBetaMax);
  return params;
}

struct SolveResult {
  ParameterVector params;
  double value = 0.0;  // expectation at params
  long fc = 0;         // objective evaluations
  double ar = 0.0;     // value / max_cut
  bool converged = false;
};

/// One optimization loop maximizing the QAOA expectation from `init`.
inline SolveResult solve_instance(const CutTable& table, const ParameterVector& init, const OptimizerConfig& cfg) {
  const int p = init.depth();
  if (p < 1) throw DomainError("solve_instance: depth must be >= 1");
  if (table.max_cut <= 0) throw DomainError("solve_instance: graph has no edges");
  const Objective objective = [&](std::span<const double> x) {
    return -expectation(table, ParameterVector::unflatten(x));
  };
  const std::vector<double> x0 = init.flatten();
  const MinimizeResult m = minimize(objective, x0, parameter_box(p), cfg);
  SolveResult r;
  r.params = ParameterVector::unflatten(m.x);
  r.value = -m.f;
  r.fc = m.evals;
  r.ar = r.value / table.max_cut;
  r.converged = m.converged;
  return r;
}

struct MultistartResult {
  SolveResult best;
  std::vector<SolveResult> all;
};

/// Restart r starts from random_params(p, Rng(derive_seed(seed, r))). The
/// winner has the highest value; ties go to lower fc, then lower index.
inline MultistartResult multistart_solve(const CutTable& table, int p, int restarts, const OptimizerConfig& cfg,
                                         std::uint64_t seed) {
  if (restarts < 1) throw DomainError("multistart_solve: restarts must be >= 1");
  MultistartResult out;
  out.all.reserve(static_cast<std::size_t>(restarts));
  std::size_t best = 0;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    out.all.push_back(solve_instance(table, random_params(p, rng), cfg));
    const auto& cur = out.all.back();
    const auto& inc = out.all[best];
    if (cur.value > inc.value || (cur.value == inc.value && cur.fc < inc.fc)) best = out.all.size() - 1;
  }
  out.best = out.all[best];
  return out;
}

}  // namespace qaoa_ws
