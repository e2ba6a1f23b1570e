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

// Single-output regressors (Gaussian process, least squares, CART tree),
// error metrics and Pearson correlation.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qaoa_ws/errors.hpp"

namespace qaoa_ws {

/// Row-major sample matrix.
using Matrix = std::vector<std::vector<double>>;

namespace detail {

inline std::size_t check_xy(const Matrix& X, std::span<const double> y, std::size_t min_rows) {
  if (X.size() != y.size()) throw DomainError("feature rows and targets differ in count");
  if (X.size() < min_rows) throw DomainError("need at least " + std::to_string(min_rows) + " samples");
  const std::size_t d = X.front().size();
  if (d == 0) throw DomainError("feature vectors are empty");
  for (const auto& row : X)
    if (row.size() != d) throw DomainError("ragged feature matrix");
  return d;
}

inline std::vector<double> json_vector(const nlohmann::json& j) { return j.get<std::vector<double>>(); }

}  // namespace detail

// ---- metrics -----------------------------------------------------------------

struct ModelMetrics {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> r2;      // empty when the actual values have zero variance
  std::optional<double> r2_adj;  // additionally empty when m <= d + 1
};

inline ModelMetrics regression_metrics(std::span<const double> predicted, std::span<const double> actual,
                                       std::size_t num_features) {
  if (predicted.size() != actual.size()) throw DomainError("regression_metrics: length mismatch");
  const std::size_t m = actual.size();
  if (m < 2) throw DomainError("regression_metrics: need at least 2 samples");
  ModelMetrics out;
  double sse = 0.0, sae = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = predicted[i] - actual[i];
    sse += e * e;
    sae += std::abs(e);
  }
  out.mse = sse / static_cast<double>(m);
  out.rmse = std::sqrt(out.mse);
  out.mae = sae / static_cast<double>(m);
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(m);
  double sst = 0.0;
  for (double a : actual) sst += (a - mean) * (a - mean);
  if (sst > 0.0) {
    out.r2 = 1.0 - sse / sst;
    if (m > num_features + 1)
      out.r2_adj = 1.0 - (1.0 - *out.r2) * static_cast<double>(m - 1) / static_cast<double>(m - num_features - 1);
  }
  return out;
}

/// Sample Pearson correlation; empty if either series is constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
  const std::size_t m = x.size();
  if (m < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---- Gaussian process ----------------------------------------------------------

struct GprHyperparameters {
  double signal_variance = 1.0;  // sigma_f^2
  double lengthscale = 1.0;      // isotropic, in standardized input units
  double noise_variance = 1e-4;  // sigma_n^2
};

struct GprConfig {
  std::vector<double> lengthscales{0.1, 0.3, 1.0, 3.0, 10.0};
  std::vector<double> signal_variances{0.01, 0.1, 1.0, 10.0};
  std::vector<double> noise_variances{1e-6, 1e-4, 1e-2};
  int refine_starts = 3;         // best grid points refined by coordinate descent
  int refine_max_sweeps = 40;
  double jitter = 1e-10;         // floor on sigma_n^2
  double max_jitter = 1e-6;      // extra diagonal tried before giving up
  std::optional<GprHyperparameters> fixed;  // skip the search entirely
};

/// Trained GP: squared-exponential kernel on standardized inputs, targets
/// centered on their training mean (the prior mean).
class GprModel {
 public:
  GprModel() = default;

  std::size_t num_features() const { return x_mean_.size(); }
  std::size_t num_samples() const { return static_cast<std::size_t>(inputs_.rows()); }
  const GprHyperparameters& hyperparameters() const { return hyper_; }
  double prior_mean() const { return y_mean_; }
  double log_marginal_likelihood() const { return lml_; }

  struct Prediction {
    double mean;
    double variance;  // of a new noisy observation
  };

  Prediction predict(std::span<const double> x) const {
    if (x.size() != num_features()) throw DomainError("gpr_predict: expected " + std::to_string(num_features()) +
                                                      " features, got " + std::to_string(x.size()));
    const Eigen::VectorXd z = standardize(x);
    const Eigen::Index m = inputs_.rows();
    Eigen::VectorXd k(m);
    for (Eigen::Index i = 0; i < m; ++i) k(i) = kernel((inputs_.row(i).transpose() - z).squaredNorm());
    const double mean = y_mean_ + k.dot(alpha_);
    const Eigen::VectorXd v = factor_.matrixL().solve(k);
    double var = hyper_.signal_variance + effective_noise_ - v.squaredNorm();
    if (var < 0.0) var = 0.0;
    return {mean, var};
  }

  double predict_mean(std::span<const double> x) const { return predict(x).mean; }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < inputs_.rows(); ++i) {
      std::vector<double> r(static_cast<std::size_t>(inputs_.cols()));
      for (Eigen::Index c = 0; c < inputs_.cols(); ++c) r[static_cast<std::size_t>(c)] = inputs_(i, c);
      rows.push_back(std::move(r));
    }
    return {{"kind", "gpr"},
            {"signal_variance", hyper_.signal_variance},
            {"lengthscale", hyper_.lengthscale},
            {"noise_variance", hyper_.noise_variance},
            {"effective_noise", effective_noise_},
            {"log_marginal_likelihood", lml_},
            {"x_mean", x_mean_},
            {"x_scale", x_scale_},
            {"y_mean", y_mean_},
            {"inputs", std::move(rows)},
            {"alpha", std::vector<double>(alpha_.data(), alpha_.data() + alpha_.size())}};
  }

  static GprModel from_json(const nlohmann::json& j) {
    GprModel g;
    g.hyper_ = {j.at("signal_variance").get<double>(), j.at("lengthscale").get<double>(),
                j.at("noise_variance").get<double>()};
    g.effective_noise_ = j.at("effective_noise").get<double>();
    g.lml_ = j.at("log_marginal_likelihood").get<double>();
    g.x_mean_ = detail::json_vector(j.at("x_mean"));
    g.x_scale_ = detail::json_vector(j.at("x_scale"));
    g.y_mean_ = j.at("y_mean").get<double>();
    const auto& rows = j.at("inputs");
    const auto d = static_cast<Eigen::Index>(g.x_mean_.size());
    g.inputs_.resize(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r = detail::json_vector(rows[i]);
      if (static_cast<Eigen::Index>(r.size()) != d) throw FormatError("gpr: input row width mismatch");
      for (Eigen::Index c = 0; c < d; ++c) g.inputs_(static_cast<Eigen::Index>(i), c) = r[static_cast<std::size_t>(c)];
    }
    const auto a = detail::json_vector(j.at("alpha"));
    if (a.size() != rows.size()) throw FormatError("gpr: alpha length mismatch");
    g.alpha_ = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    g.factor_.compute(g.gram(g.hyper_, g.effective_noise_));
    if (g.factor_.info() != Eigen::Success) throw FormatError("gpr: stored kernel matrix is not positive definite");
    return g;
  }

  friend GprModel fit_gpr(const Matrix& X, std::span<const double> y, const GprConfig& cfg);

 private:
  double kernel(double sq_dist) const {
    return hyper_.signal_variance * std::exp(-0.5 * sq_dist / (hyper_.lengthscale * hyper_.lengthscale));
  }

  Eigen::VectorXd standardize(std::span<const double> x) const {
    Eigen::VectorXd z(static_cast<Eigen::Index>(x.size()));
    for (std::size_t c = 0; c < x.size(); ++c) z(static_cast<Eigen::Index>(c)) = (x[c] - x_mean_[c]) / x_scale_[c];
    return z;
  }

  Eigen::MatrixXd gram(const GprHyperparameters& h, double noise) const {
    const Eigen::Index m = inputs_.rows();
    Eigen::MatrixXd K(m, m);
    const double inv = 1.0 / (h.lengthscale * h.lengthscale);
    for (Eigen::Index i = 0; i < m; ++i) {
      K(i, i) = h.signal_variance + noise;
      for (Eigen::Index j = 0; j < i; ++j) {
        const double kij = h.signal_variance * std::exp(-0.5 * inv * (inputs_.row(i) - inputs_.row(j)).squaredNorm());
        K(i, j) = kij;
        K(j, i) = kij;
      }
    }
    return K;
  }

  GprHyperparameters hyper_;
  double effective_noise_ = 0.0;  // noise_variance plus any jitter needed to factorize
  double lml_ = 0.0;
  std::vector<double> x_mean_, x_scale_;
  double y_mean_ = 0.0;
  Eigen::MatrixXd inputs_;  // standardized
  Eigen::VectorXd alpha_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

namespace detail {

struct GprFitState {
  GprHyperparameters hyper;
  double noise = 0.0;
  double lml = -std::numeric_limits<double>::infinity();
  Eigen::LLT<Eigen::MatrixXd> factor;
  Eigen::VectorXd alpha;
};

}  // namespace detail

/// Fits one GP. Hyperparameters maximize the log marginal likelihood: the
/// configured grid is scored, then the best `refine_starts` points are polished
/// by coordinate descent in log space. Deterministic.
inline GprModel fit_gpr(const Matrix& X, std::span<const double> y, const GprConfig& cfg = {}) {
  const std::size_t d = detail::check_xy(X, y, 2);
  const std::size_t m = X.size();
  GprModel model;
  model.x_mean_.assign(d, 0.0);
  model.x_scale_.assign(d, 1.0);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (const auto& row : X) mean += row[c];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (const auto& row : X) var += (row[c] - mean) * (row[c] - mean);
    var /= static_cast<double>(m);
    model.x_mean_[c] = mean;
    model.x_scale_[c] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  model.inputs_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < d; ++c)
      model.inputs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          (X[i][c] - model.x_mean_[c]) / model.x_scale_[c];
  model.y_mean_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  Eigen::VectorXd yc(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) yc(static_cast<Eigen::Index>(i)) = y[i] - model.y_mean_;

  const double log2pi = std::log(2.0 * std::numbers::pi);
  auto evaluate = [&](GprHyperparameters h) {
    detail::GprFitState s;
    h.noise_variance = std::max(h.noise_variance, cfg.jitter);
    s.hyper = h;
    const Eigen::MatrixXd K0 = model.gram(h, 0.0);
    for (double extra = 0.0;; extra = extra == 0.0 ? cfg.jitter : extra * 10.0) {
      if (extra > cfg.max_jitter) return s;  // lml stays -inf
      s.noise = h.noise_variance + extra;
      Eigen::MatrixXd K = K0;
      K.diagonal().array() += s.noise;
      s.factor.compute(K);
      if (s.factor.info() == Eigen::Success) break;
    }
    s.alpha = s.factor.solve(yc);
    const double logdet = 2.0 * s.factor.matrixLLT().diagonal().array().log().sum();
    s.lml = -0.5 * yc.dot(s.alpha) - 0.5 * logdet - 0.5 * static_cast<double>(m) * log2pi;
    if (!std::isfinite(s.lml)) s.lml = -std::numeric_limits<double>::infinity();
    return s;
  };

  detail::GprFitState best;
  if (cfg.fixed) {
    best = evaluate(*cfg.fixed);
  } else {
    std::vector<detail::GprFitState> scored;
    for (double l : cfg.lengthscales)
      for (double sf : cfg.signal_variances)
        for (double sn : cfg.noise_variances) scored.push_back(evaluate({sf, l, sn}));
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.lml > b.lml; });
    const std::size_t starts = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(std::max(1, cfg.refine_starts)));
    best = scored.front();
    for (std::size_t s = 0; s < starts; ++s) {
      detail::GprFitState cur = scored[s];
      if (!std::isfinite(cur.lml)) continue;
      double step = 0.5;  // decades
      for (int sweep = 0; sweep < cfg.refine_max_sweeps && step > 0.01; ++sweep) {
        bool improved = false;
        for (int coord = 0; coord < 3; ++coord) {
          for (double dir : {1.0, -1.0}) {
            GprHyperparameters h = cur.hyper;
            double& v = coord == 0 ? h.lengthscale : coord == 1 ? h.signal_variance : h.noise_variance;
            v *= std::pow(10.0, dir * step);
            h.lengthscale = std::clamp(h.lengthscale, 1e-3, 1e3);
            h.signal_variance = std::clamp(h.signal_variance, 1e-6, 1e4);
            h.noise_variance = std::clamp(h.noise_variance, cfg.jitter, 1e2);
            auto cand = evaluate(h);
            if (cand.lml > cur.lml + 1e-12) {
              cur = std::move(cand);
              improved = true;
              break;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      if (cur.lml > best.lml) best = std::move(cur);
    }
  }
  if (!std::isfinite(best.lml)) throw TrainingError("fit_gpr: kernel matrix factorization failed after jitter escalation");
  model.hyper_ = best.hyper;
  model.effective_noise_ = best.noise;
  model.lml_ = best.lml;
  model.alpha_ = std::move(best.alpha);
  model.factor_ = std::move(best.factor);
  return model;
}

// ---- linear least squares -------------------------------------------------------

class LinearModel {
 public:
  std::span<const double> coefficients() const { return coef_; }
  double intercept() const { return intercept_; }
  /// Set when the design matrix was rank deficient and the minimum-norm
  /// (pseudo-inverse) solution was returned.
  bool rank_deficient() const { return rank_deficient_; }
  std::size_t num_features() const { return coef_.size(); }

  double predict_mean(std::span<const double> x) const {
    if (x.size() != coef_.size()) throw DomainError("linear predict: feature count mismatch");
    double s = intercept_;
    for (std::size_t i = 0; i < x.size(); ++i) s += coef_[i] * x[i];
    return s;
  }

  nlohmann::json to_json() const {
    return {{"kind", "linear"}, {"coefficients", coef_}, {"intercept", intercept_}, {"rank_deficient", rank_deficient_}};
  }

  static LinearModel from_json(const nlohmann::json& j) {
    LinearModel l;
    l.coef_ = detail::json_vector(j.at("coefficients"));
    l.intercept_ = j.at("intercept").get<double>();
    l.rank_deficient_ = j.value("rank_deficient", false);
    return l;
  }

  friend LinearModel fit_linear(const Matrix& X, std::span<const double> y);

 private:
  std::vector<double> coef_;
  double intercept_ = 0.0;
  bool rank_deficient_ = false;
};

/// Ordinary least squares with intercept.
inline LinearModel fit_linear(const Matrix& X, std::span<const double> y) {
  const std::size_t d = detail::check_xy(X, y, 2);
  if (X.size() < d + 1) throw DomainError("fit_linear: need at least d + 1 samples");
  const auto m = static_cast<Eigen::Index>(X.size());
  Eigen::MatrixXd A(m, static_cast<Eigen::Index>(d + 1));
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < d; ++c) A(i, static_cast<Eigen::Index>(c)) = X[static_cast<std::size_t>(i)][c];
    A(i, static_cast<Eigen::Index>(d)) = 1.0;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd w = cod.solve(b);
  LinearModel out;
  out.coef_.assign(w.data(), w.data() + d);
  out.intercept_ = w(static_cast<Eigen::Index>(d));
  out.rank_deficient_ = cod.rank() < static_cast<Eigen::Index>(d + 1);
  return out;
}

// ---- regression tree --------------------------------------------------------------

struct TreeConfig {
  int min_leaf = 5;
  int max_depth = 8;
};

/// CART regression tree; a sample goes left when x[feature] <= threshold.
class TreeModel {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // mean target of the training samples reaching this node
    int count = 0;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t num_leaves() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
  }
  std::size_t num_features() const { return num_features_; }

  /// Index of the leaf reached by x.
  int leaf_of(std::span<const double> x) const {
    if (x.size() != num_features_) throw DomainError("tree predict: feature count mismatch");
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return i;
  }

  double predict_mean(std::span<const double> x) const { return nodes_[static_cast<std::size_t>(leaf_of(x))].value; }

  nlohmann::json to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : nodes_)
      nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
                       {"value", n.value}, {"count", n.count}});
    return {{"kind", "tree"}, {"num_features", num_features_}, {"nodes", std::move(nodes)}};
  }

  static TreeModel from_json(const nlohmann::json& j) {
    TreeModel t;
    t.num_features_ = j.at("num_features").get<std::size_t>();
    for (const auto& n : j.at("nodes"))
      t.nodes_.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(), n.at("left").get<int>(),
                          n.at("right").get<int>(), n.at("value").get<double>(), n.at("count").get<int>()});
    if (t.nodes_.empty()) throw FormatError("tree: no nodes");
    return t;
  }

  friend TreeModel fit_tree(const Matrix& X, std::span<const double> y, const TreeConfig& cfg);

 private:
  int grow(const Matrix& X, std::span<const double> y, std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
           int depth, const TreeConfig& cfg) {
    const std::size_t count = hi - lo;
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sum += y[idx[k]];
    const double mean = sum / static_cast<double>(count);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back({-1, 0.0, -1, -1, mean, static_cast<int>(count)});

    double sse = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sse += (y[idx[k]] - mean) * (y[idx[k]] - mean);
    const auto min_leaf = static_cast<std::size_t>(std::max(1, cfg.min_leaf));
    if (depth >= cfg.max_depth || count < 2 * min_leaf || sse <= 0.0) return self;

    int best_feature = -1;
    double best_threshold = 0.0, best_sse = sse;
    std::vector<std::size_t> order(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(hi));
    for (std::size_t f = 0; f < num_features_; ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return X[a][f] < X[b][f]; });
      double left_sum = 0.0, left_sq = 0.0, total_sq = 0.0;
      for (std::size_t a : order) total_sq += y[a] * y[a];
      for (std::size_t k = 0; k + 1 < count; ++k) {
        const double v = y[order[k]];
        left_sum += v;
        left_sq += v * v;
        const std::size_t nl = k + 1, nr = count - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double xa = X[order[k]][f], xb = X[order[k + 1]][f];
        if (!(xa < xb)) continue;
        const double right_sum = sum - left_sum;
        const double split_sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                                 (total_sq - left_sq - right_sum * right_sum / static_cast<double>(nr));
        if (split_sse < best_sse - 1e-12 * (1.0 + sse)) {
          best_sse = split_sse;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (xa + xb);
        }
      }
    }
    if (best_feature < 0) return self;

    const auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(lo),
                                           idx.begin() + static_cast<std::ptrdiff_t>(hi),
                                           [&](std::size_t a) { return X[a][static_cast<std::size_t>(best_feature)] <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - idx.begin());
    const int left = grow(X, y, idx, lo, split, depth + 1, cfg);
    const int right = grow(X, y, idx, split, hi, depth + 1, cfg);
    Node& n = nodes_[static_cast<std::size_t>(self)];
    n.feature = best_feature;
    n.threshold = best_threshold;
    n.left = left;
    n.right = right;
    return self;
  }

  std::vector<Node> nodes_;
  std::size_t num_features_ = 0;
};

inline TreeModel fit_tree(const Matrix& X, std::span<const double> y, const TreeConfig& cfg = {}) {
  TreeModel t;
  t.num_features_ = detail::check_xy(X, y, 2);
  std::vector<std::size_t> idx(X.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  t.grow(X, y, idx, 0, idx.size(), 0, cfg);
  return t;
}

// ---- type-erased model ----------------------------------------------------------

enum class ModelKind { Gpr, Linear, Tree };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Gpr: return "gpr";
    case ModelKind::Linear: return "linear";
    case ModelKind::Tree: return "tree";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "gpr") return ModelKind::Gpr;
  if (s == "linear") return ModelKind::Linear;
  if (s == "tree") return ModelKind::Tree;
  throw DomainError("unknown model kind '" + std::string(s) + "'");
}

struct RegressorConfig {
  ModelKind kind = ModelKind::Gpr;
  GprConfig gpr;
  TreeConfig tree;
};

class Regressor {
 public:
  Regressor() = default;
  explicit Regressor(GprModel m) : model_(std::move(m)) {}
  explicit Regressor(LinearModel m) : model_(std::move(m)) {}
  explicit Regressor(TreeModel m) : model_(std::move(m)) {}

  ModelKind kind() const { return static_cast<ModelKind>(model_.index()); }

  double predict(std::span<const double> x) const {
    return std::visit([&](const auto& m) { return m.predict_mean(x); }, model_);
  }

  std::size_t num_features() const {
    return std::visit([](const auto& m) { return m.num_features(); }, model_);
  }

  template <class T>
  const T* as() const { return std::get_if<T>(&model_); }

  nlohmann::json to_json() const {
    return std::visit([](const auto& m) { return m.to_json(); }, model_);
  }

  static Regressor from_json(const nlohmann::json& j) {
    try {
      switch (parse_model_kind(j.at("kind").get<std::string>())) {
        case ModelKind::Gpr: return Regressor(GprModel::from_json(j));
        case ModelKind::Linear: return Regressor(LinearModel::from_json(j));
        case ModelKind::Tree: return Regressor(TreeModel::from_json(j));
      }
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(std::string("invalid model record: ") + ex.what());
    }
    throw FormatError("invalid model record");
  }

 private:
  std::variant<GprModel, LinearModel, TreeModel> model_;
};

inline Regressor fit_regressor(const Matrix& X, std::span<const double> y, const RegressorConfig& cfg = {}) {
  switch (cfg.kind) {
    case ModelKind::Gpr: return Regressor(fit_gpr(X, y, cfg.gpr));
    case ModelKind::Linear: return Regressor(fit_linear(X, y));
    case ModelKind::Tree: return Regressor(fit_tree(X, y, cfg.tree));
  }
  throw DomainError("unknown model kind");
}

}  // namespace qaoa_ws
