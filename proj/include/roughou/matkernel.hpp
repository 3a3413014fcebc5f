// Copyright 2026 The roughou Authors
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

#pragma once

#include <cstddef>
#include <vector>

#include "roughou/matrix.hpp"

namespace roughou {

/// Real symmetric matrix. Construction rejects inputs whose asymmetry exceeds
/// 1e-12 of the largest entry; accepted inputs are stored exactly symmetrized.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows) : SymMatrix(Matrix(rows)) {}

  std::size_t dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Spectral decomposition M = Q diag(values) Qᵀ with ascending values. Each
/// column of Q has its first non-negligible component positive.
struct EigDecomp {
  std::vector<double> values;
  Matrix basis;

  Matrix reconstruct() const;
};

EigDecomp sym_eig(const SymMatrix& m);

/// e^{-M t} for symmetric M.
SymMatrix mat_exp_sym(const SymMatrix& m, double t);

/// Unnormalized lower incomplete gamma ∫_0^x s^{a-1} e^{-s} ds.
double lower_inc_gamma(double a, double x);

/// Unnormalized upper incomplete gamma ∫_x^∞ s^{a-1} e^{-s} ds.
double upper_inc_gamma(double a, double x);

/// Generalized hypergeometric 1F2(a; b1, b2; x), summed until the next term
/// falls below 1e-15 of the partial sum (10 000-term cap).
double hyp1f2(double a, double b1, double b2, double x);

/// First `count` series terms of 1F2, each obtained from its predecessor by
/// the ratio (a+k) x / ((b1+k)(b2+k)(k+1)).
std::vector<double> hyp1f2_terms(double a, double b1, double b2, double x, std::size_t count);

}  // namespace roughou
