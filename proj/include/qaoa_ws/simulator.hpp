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

// Exact statevector simulation of depth-p QAOA for MaxCut.
//
// Conventions (fixed for the whole library):
//   phase separator  U_C(gamma) = exp(-i gamma C),  C = diag(cut count of z)
//   mixer            U_B(beta)  = prod_j exp(-i beta X_j)
//   initial state    |+>^n
// Basis index z carries node i in bit i. Under this convention the objective
// is 2*pi periodic in every gamma and pi periodic in every beta, which is why
// optimization runs on gamma in [0, 2*pi], beta in [0, pi]. The
// literal RZ(-gamma)/RX(beta) gate angles differ by a factor of 2 and a
// global phase.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qaoa_ws/errors.hpp"
#include "qaoa_ws/graph.hpp"

namespace qaoa_ws {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kGammaMax = 2.0 * kPi;
inline constexpr double kBetaMax = kPi;

struct Statevector {
  int n = 0;
  std::vector<Complex> amplitudes;

  std::size_t size() const { return amplitudes.size(); }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
  }
};

/// Gate angles of a depth-p circuit: stage i applies gamma[i] then beta[i].
struct ParameterVector {
  std::vector<double> gamma;
  std::vector<double> beta;

  ParameterVector() = default;
  ParameterVector(std::vector<double> g, std::vector<double> b) : gamma(std::move(g)), beta(std::move(b)) {
    if (gamma.size() != beta.size()) throw DomainError("gamma and beta must have the same length");
  }

  int depth() const { return static_cast<int>(gamma.size()); }

  /// Flat optimizer layout [gamma_1..gamma_p, beta_1..beta_p].
  std::vector<double> flatten() const {
    std::vector<double> x(gamma);
    x.insert(x.end(), beta.begin(), beta.end());
    return x;
  }

  static ParameterVector unflatten(std::span<const double> x) {
    if (x.size() % 2 != 0 || x.empty()) throw DomainError("flat parameter vector must have even, nonzero length");
    const std::size_t p = x.size() / 2;
    return {std::vector<double>(x.begin(), x.begin() + p), std::vector<double>(x.begin() + p, x.end())};
  }

  bool operator==(const ParameterVector&) const = default;
};

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
  bool contains(std::span<const double> x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    return true;
  }
};

/// Optimization domain for depth p in flat layout.
inline Box parameter_box(int p) {
  Box b;
  b.lower.assign(2 * static_cast<std::size_t>(p), 0.0);
  b.upper.assign(static_cast<std::size_t>(p), kGammaMax);
  b.upper.insert(b.upper.end(), static_cast<std::size_t>(p), kBetaMax);
  return b;
}

inline ParameterVector clip_to_domain(ParameterVector params) {
  for (auto& g : params.gamma) g = std::clamp(g, 0.0, kGammaMax);
  for (auto& b : params.beta) b = std::clamp(b, 0.0, kBetaMax);
  return params;
}

inline Statevector initial_state(int n, int max_qubits = kDefaultMaxQubits) {
  check_qubits(n, max_qubits);
  const std::size_t dim = std::size_t{1} << n;
  return {n, std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0))};
}

/// amplitude[z] *= exp(-i gamma cut(z)). Cut counts are small integers, so the
/// phases are tabulated once per call.
inline void apply_phase_separator(Statevector& state, const CutTable& table, double gamma) {
  if (state.size() != table.size()) throw DomainError("statevector and cut table sizes differ");
  std::vector<Complex> phase(static_cast<std::size_t>(table.num_edges) + 1);
  for (std::size_t k = 0; k < phase.size(); ++k) phase[k] = std::polar(1.0, -gamma * static_cast<double>(k));
  for (std::size_t z = 0; z < state.size(); ++z) state.amplitudes[z] *= phase[static_cast<std::size_t>(table.values[z])];
}

/// exp(-i beta X) on every qubit.
inline void apply_mixer(Statevector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t dim = state.size();
  if (dim != (std::size_t{1} << state.n)) throw DomainError("statevector length is not 2^n");
  Complex* a = state.amplitudes.data();
  for (int q = 0; q < state.n; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t z = base; z < base + stride; ++z) {
        const Complex a0 = a[z];
        const Complex a1 = a[z + stride];
        // (c a0 - i s a1, -i s a0 + c a1)
        a[z] = Complex(c * a0.real() + s * a1.imag(), c * a0.imag() - s * a1.real());
        a[z + stride] = Complex(c * a1.real() + s * a0.imag(), c * a1.imag() - s * a0.real());
      }
    }
  }
}

inline Statevector qaoa_state(const CutTable& table, const ParameterVector& params) {
  if (params.depth() < 1) throw DomainError("QAOA depth must be >= 1");
  Statevector state = initial_state(table.n, std::max(table.n, kDefaultMaxQubits));
  for (int i = 0; i < params.depth(); ++i) {
    apply_phase_separator(state, table, params.gamma[i]);
    apply_mixer(state, params.beta[i]);
  }
  return state;
}

/// <psi(gamma, beta)| C |psi(gamma, beta)>.
inline double expectation(const CutTable& table, const ParameterVector& params) {
  const Statevector state = qaoa_state(table, params);
  double f = 0.0;
  for (std::size_t z = 0; z < state.size(); ++z) f += std::norm(state.amplitudes[z]) * table.values[z];
  return f;
}

/// Maps an optimum to a fixed representative of its symmetry class. For any
/// unweighted MaxCut instance the objective is unchanged by beta_i -> beta_i
/// + pi/2 (X^n commutes with C and fixes |+>^n) and by the joint reversal
/// (gamma, beta) -> (-gamma, -beta). The representative has every beta in
/// [0, pi/2) and gamma_1 in [0, pi].
inline ParameterVector canonical_parameters(ParameterVector params) {
  constexpr double kHalfPi = kPi / 2.0;
  auto wrap = [](double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r >= period ? 0.0 : r;
  };
  for (auto& g : params.gamma) g = wrap(g, kGammaMax);
  for (auto& b : params.beta) b = wrap(b, kHalfPi);
  if (!params.gamma.empty() && params.gamma.front() > kPi) {
    for (auto& g : params.gamma) g = wrap(-g, kGammaMax);
    for (auto& b : params.beta) b = wrap(-b, kHalfPi);
  }
  return params;
}

}  // namespace qaoa_ws
