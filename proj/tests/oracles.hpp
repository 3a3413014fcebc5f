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

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "roughou/matrix.hpp"

namespace oracle {

using roughou::Matrix;

/// e^{A} by scaling and squaring with a 30-term Taylor series.
inline Matrix expm(const Matrix& a) {
  const std::size_t d = a.rows();
  double norm = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix scaled = std::ldexp(1.0, -squarings) * a;
  Matrix sum = Matrix::identity(d);
  Matrix term = Matrix::identity(d);
  for (int k = 1; k <= 30; ++k) {
    term = (1.0 / k) * (term * scaled);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

template <class F>
double gk(F f, double a, double b, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

/// Double-exponential quadrature on [a, b]; endpoint singularities are fine.
template <class F>
double ts(F f, double a, double b, double tol = 1e-12) {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, tol);
}

/// ∫_0^x s^{a-1} e^{-s} ds with u = s^a, which removes the endpoint singularity.
inline double lower_inc_gamma(double a, double x) {
  if (x == 0.0) return 0.0;
  const double head = std::min(x, 1.0);
  double total = gk([&](double u) { return std::exp(-std::pow(u, 1.0 / a)); }, 0.0, std::pow(head, a)) / a;
  for (double lo = head; lo < x; lo += 1.0) {
    const double hi = std::min(x, lo + 1.0);
    total += gk([&](double s) { return std::pow(s, a - 1.0) * std::exp(-s); }, lo, hi);
  }
  return total;
}

/// Term-by-term 1F2 in long double.
inline long double hyp1f2(long double a, long double b1, long double b2, long double x, int terms) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 0; k < terms; ++k) {
    term = term * (a + k) * x / ((b1 + k) * (b2 + k) * (k + 1));
    sum += term;
  }
  return sum;
}

/// U(t) = Hλ ∫_0^t ∫_0^s e^{-λv}(s^{2H-1} - v^{2H-1}) dv ds by nested
/// quadrature.
inline double u_scalar(double hurst, double lambda, double t) {
  const double a = 2.0 * hurst;
  // With v = s y and y = z^{1/a}: ∫_0^s e^{-λv}(s^{a-1} - v^{a-1}) dv
  //   = s^a (∫_0^1 e^{-λsy} dy - (1/a) ∫_0^1 e^{-λ s z^{1/a}} dz).
  auto inner = [&](double s) {
    const double plain = ts([&](double y) { return std::exp(-lambda * s * y); }, 0.0, 1.0, 1e-13);
    const double sing = ts([&](double z) { return std::exp(-lambda * s * std::pow(z, 1.0 / a)); }, 0.0, 1.0, 1e-13);
    return std::pow(s, a) * (plain - sing / a);
  };
  return hurst * lambda * ts(inner, 0.0, t, 1e-12);
}

inline double phi_scalar(double hurst, double lambda, double t) {
  return 0.5 * std::pow(t, 2.0 * hurst) - u_scalar(hurst, lambda, t);
}

/// Matrix φ(t) = ½ I t^{2H} - HΓ ∫∫ e^{-Γv}(s^{2H-1} - v^{2H-1}) dv ds with
/// the matrix exponential from `expm`, same substitutions as u_scalar.
inline Matrix phi_matrix(const Matrix& gamma, double hurst, double t) {
  const std::size_t d = gamma.rows();
  const double a = 2.0 * hurst;
  Matrix inner_total(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      auto inner = [&](double s) {
        const double plain = ts([&](double y) { return expm(-(s * y) * gamma)(i, j); }, 0.0, 1.0, 1e-12);
        const double sing =
            ts([&](double z) { return expm(-(s * std::pow(z, 1.0 / a)) * gamma)(i, j); }, 0.0, 1.0, 1e-12);
        return std::pow(s, a) * (plain - sing / a);
      };
      inner_total(i, j) = ts(inner, 0.0, t, 1e-11);
    }
  return 0.5 * std::pow(t, a) * Matrix::identity(d) - hurst * (gamma * inner_total);
}

/// Asymptotic Kolmogorov survival function P(K > λ) with Stephens' small-sample
/// correction, for a KS statistic D over an effective sample size n.
inline double ks_pvalue(double d_stat, double n) {
  const double sn = std::sqrt(n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d_stat;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// One-sample KS statistic against the standard normal.
inline double ks_normal(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

struct Moments {
  double mean;
  double var;
  double stderr_mean;
};

inline Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  const double var = s / (n - 1.0);
  return {m, var, std::sqrt(var / n)};
}

/// Least-squares slope of y on x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
