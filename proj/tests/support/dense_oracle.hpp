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

// Reference QAOA simulation with explicit 2^n x 2^n matrices. The phase
// separator is assembled from per-edge CNOT . RZ . CNOT gates and the mixer
// from Kronecker products of single-qubit rotations, so it shares no code
// path with the diagonal simulator.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qaoa_ws/graph.hpp"
#include "qaoa_ws/simulator.hpp"

namespace qaoa_ws::testing {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Qubit q is bit q of the basis index, i.e. the rightmost Kronecker factor is qubit 0.
inline CMatrix embed_one(const Eigen::Matrix2cd& gate, int q, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    const CMatrix factor = (k == q) ? CMatrix(gate) : CMatrix(CMatrix::Identity(2, 2));
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * factor;
    out = next;
  }
  return out;
}

inline CMatrix cnot(int control, int target, int n) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t z = 0; z < dim; ++z) {
    const std::size_t out = ((z >> control) & 1U) ? z ^ (std::size_t{1} << target) : z;
    m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(z)) = 1.0;
  }
  return m;
}

inline Eigen::Matrix2cd rz(double theta) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << std::exp(-i * theta / 2.0), 0.0, 0.0, std::exp(i * theta / 2.0);
  return m;
}

/// exp(-i beta X)
inline Eigen::Matrix2cd rot_x(double beta) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << std::cos(beta), -i * std::sin(beta), -i * std::sin(beta), std::cos(beta);
  return m;
}

inline Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

/// exp(-i gamma C) up to a global phase: per edge, CNOT(u,v) RZ_v(-gamma) CNOT(u,v)
/// gives exp(i gamma Z_u Z_v / 2) = exp(-i gamma (1 - Z_u Z_v)/2) e^{i gamma/2}.
inline CMatrix phase_separator_dense(const Graph& g, double gamma) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.n);
  CMatrix u = CMatrix::Identity(dim, dim);
  for (const auto& [a, b] : g.edges) u = cnot(a, b, g.n) * embed_one(rz(-gamma), b, g.n) * cnot(a, b, g.n) * u;
  return u;
}

inline CMatrix mixer_dense(int n, double beta) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  CMatrix u = CMatrix::Identity(dim, dim);
  for (int q = 0; q < n; ++q) u = embed_one(rot_x(beta), q, n) * u;
  return u;
}

inline CVector dense_state(const Graph& g, const ParameterVector& params) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.n);
  CVector psi = CVector::Zero(dim);
  psi(0) = 1.0;
  for (int q = 0; q < g.n; ++q) psi = embed_one(hadamard(), q, g.n) * psi;
  for (int i = 0; i < params.depth(); ++i) {
    psi = phase_separator_dense(g, params.gamma[static_cast<std::size_t>(i)]) * psi;
    psi = mixer_dense(g.n, params.beta[static_cast<std::size_t>(i)]) * psi;
  }
  return psi;
}

/// <psi| H_C |psi> with H_C = sum_edges (I - Z_u Z_v) / 2 as an explicit matrix.
inline double dense_expectation(const Graph& g, const ParameterVector& params) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.n);
  const Eigen::Matrix2cd z = (Eigen::Matrix2cd() << 1.0, 0.0, 0.0, -1.0).finished();
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const auto& [a, b] : g.edges)
    h += 0.5 * (CMatrix::Identity(dim, dim) - embed_one(z, a, g.n) * embed_one(z, b, g.n));
  const CVector psi = dense_state(g, params);
  return (psi.adjoint() * h * psi)(0).real();
}

/// Closed form for a single edge at p = 1.
inline double single_edge_closed_form(double gamma, double beta) {
  return 0.5 * (1.0 + std::sin(gamma) * std::sin(4.0 * beta));
}

}  // namespace qaoa_ws::testing
