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

#include "roughou/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "roughou/errors.hpp"

namespace roughou {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr int kMaxGammaIterations = 10000;
constexpr std::size_t kMaxHypTerms = 10000;

bool nonpositive_integer(double b) { return b <= 0.0 && std::floor(b) == b; }

// Continued fraction for Γ(a,x) e^{x} x^{-a}, modified Lentz.
double upper_gamma_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

// Series for γ(a,x) e^{x} x^{-a}.
double lower_gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxGammaIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) return sum;
  }
  throw NumericError("incomplete gamma series did not converge");
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma requires x >= 0");
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) : m_(m) {
  if (!m.square() || m.rows() == 0) throw ValidationError("symmetric matrix must be square and non-empty");
  const double scale = std::max(m.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        std::ostringstream os;
        os << "matrix is not symmetric: entry (" << i << "," << j << ")=" << m(i, j) << " vs (" << j << ","
           << i << ")=" << m(j, i);
        throw ValidationError(os.str());
      }
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
}

Matrix EigDecomp::reconstruct() const {
  const std::size_t d = values.size();
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += basis(i, k) * values[k] * basis(j, k);
      out(i, j) = s;
    }
  return out;
}

EigDecomp sym_eig(const SymMatrix& sym) {
  const std::size_t d = sym.dim();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(d);

  // Cyclic Jacobi, row-by-row sweep order.
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) {
        total += a(p, q) * a(p, q);
        if (p != q) off += a(p, q) * a(p, q);
      }
    if (off <= 1e-30 * total || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigDecomp out;
  out.values.resize(d);
  out.basis = Matrix(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a(src, src);
    double vmax = 0.0;
    for (std::size_t k = 0; k < d; ++k) vmax = std::max(vmax, std::abs(v(k, src)));
    double sign = 1.0;
    for (std::size_t k = 0; k < d; ++k)
      if (std::abs(v(k, src)) > 1e-12 * vmax) {
        sign = v(k, src) < 0.0 ? -1.0 : 1.0;
        break;
      }
    for (std::size_t k = 0; k < d; ++k) out.basis(k, col) = sign * v(k, src);
  }
  return out;
}

SymMatrix mat_exp_sym(const SymMatrix& m, double t) {
  if (t == 0.0) return SymMatrix(Matrix::identity(m.dim()));
  EigDecomp e = sym_eig(m);
  for (double& lambda : e.values) lambda = std::exp(-lambda * t);
  return SymMatrix(e.reconstruct());
}

double lower_inc_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::tgamma(a);
  const double prefactor = std::exp(-x + a * std::log(x));
  if (x < a + 1.0) return prefactor * lower_gamma_series(a, x);
  return std::tgamma(a) - prefactor * upper_gamma_cf(a, x);
}

double upper_inc_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return std::tgamma(a);
  if (std::isinf(x)) return 0.0;
  const double prefactor = std::exp(-x + a * std::log(x));
  if (x < a + 1.0) return std::tgamma(a) - prefactor * lower_gamma_series(a, x);
  return prefactor * upper_gamma_cf(a, x);
}

std::vector<double> hyp1f2_terms(double a, double b1, double b2, double x, std::size_t count) {
  if (nonpositive_integer(b1) || nonpositive_integer(b2))
    throw DomainError("1F2 lower parameters must not be non-positive integers");
  std::vector<double> terms;
  terms.reserve(count);
  double term = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    terms.push_back(term);
    const double kk = static_cast<double>(k);
    term *= (a + kk) / ((b1 + kk) * (b2 + kk)) * (x / (kk + 1.0));
  }
  return terms;
}

double hyp1f2(double a, double b1, double b2, double x) {
  if (nonpositive_integer(b1) || nonpositive_integer(b2))
    throw DomainError("1F2 lower parameters must not be non-positive integers");
  double sum = 1.0;
  double term = 1.0;
  for (std::size_t k = 0; k < kMaxHypTerms; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) / ((b1 + kk) * (b2 + kk)) * (x / (kk + 1.0));
    sum += term;
    if (std::abs(term) < 1e-15 * std::abs(sum)) return sum;
  }
  std::ostringstream os;
  os.precision(17);
  os << "1F2 series did not converge within " << kMaxHypTerms << " terms (partial sum " << sum
     << ", last term " << term << ")";
  throw NumericError(os.str());
}

}  // namespace roughou
