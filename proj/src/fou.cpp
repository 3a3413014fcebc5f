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

#include "roughou/fou.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "roughou/errors.hpp"

namespace roughou {

namespace {

void require_cov_args(double hurst, double lambda, double sigma, double t) {
  if (!(hurst > 0.0 && hurst <= 0.5)) throw DomainError("stationary covariance needs 0 < H <= 1/2");
  if (!(lambda > 0.0)) throw DomainError("stationary covariance needs lambda > 0");
  if (!(sigma >= 0.0)) throw DomainError("stationary covariance needs sigma >= 0");
  if (!(t >= 0.0)) throw DomainError("stationary covariance is exposed for t >= 0 only");
}

double variance_at_zero(double hurst, double lambda, double sigma) {
  return sigma * sigma * std::pow(lambda, -2.0 * hurst) * hurst * std::tgamma(2.0 * hurst);
}

}  // namespace

ModelSpec make_model(const SymMatrix& gamma, double sigma, double hurst, std::vector<double> x0) {
  ModelSpec m;
  m.d = gamma.dim();
  m.gamma = gamma;
  m.sigma = sigma;
  m.hurst = hurst;
  m.x0 = std::move(x0);
  validate_model(m);
  return m;
}

void validate_model(const ModelSpec& model) {
  if (model.d == 0 || model.gamma.dim() != model.d) throw ValidationError("model dimension does not match gamma");
  if (!model.x0.empty() && model.x0.size() != model.d) throw ValidationError("x0 length does not match d");
  if (!(model.sigma >= 0.0) || !std::isfinite(model.sigma)) throw ValidationError("sigma must be finite and >= 0");
  require_hurst(model.hurst);
  const EigDecomp e = sym_eig(model.gamma);
  if (!(e.values.front() > 0.0)) {
    std::ostringstream os;
    os << "gamma must be positive definite (smallest eigenvalue " << e.values.front() << ")";
    throw ValidationError(os.str());
  }
}

std::vector<double> initial_state(const ModelSpec& model) {
  return model.x0.empty() ? std::vector<double>(model.d, 0.0) : model.x0;
}

PathMatrix euler_simulate(const ModelSpec& model, const SampleGrid& grid, const PathMatrix& driver) {
  const std::size_t d = model.d;
  if (driver.grid() != grid) throw ShapeError("driver grid differs from the simulation grid");
  if (driver.dim() != d || model.gamma.dim() != d) throw ShapeError("driver dimension differs from the model");
  const std::size_t n = grid.steps();
  const std::size_t m = n + 1;
  const double h = grid.mesh();
  const Matrix& g = model.gamma.matrix();
  const std::vector<double> x0 = initial_state(model);

  std::vector<double> x(d * m);
  for (std::size_t i = 0; i < d; ++i) x[i * m] = x0[i];

  if (d == 1) {
    const double gam = g(0, 0);
    const auto b = driver.component(0);
    for (std::size_t l = 0; l < n; ++l) x[l + 1] = x[l] - gam * x[l] * h + model.sigma * (b[l + 1] - b[l]);
  } else {
    std::vector<double> drift(d);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += g(i, j) * x[j * m + l];
        drift[i] = s;
      }
      for (std::size_t i = 0; i < d; ++i)
        x[i * m + l + 1] = x[i * m + l] - drift[i] * h + model.sigma * (driver(i, l + 1) - driver(i, l));
    }
  }
  return PathMatrix(grid, d, std::move(x), PathKind::fou);
}

double stationary_cov(double hurst, double lambda, double sigma, double t) {
  require_cov_args(hurst, lambda, sigma, t);
  if (lambda * t <= kStationaryCovSwitch) return stationary_cov_hypergeometric(hurst, lambda, sigma, t);
  return stationary_cov_asymptotic(hurst, lambda, sigma, t);
}

double stationary_cov_hypergeometric(double hurst, double lambda, double sigma, double t) {
  require_cov_args(hurst, lambda, sigma, t);
  const double s2 = sigma * sigma;
  const double first = s2 / (2.0 * std::pow(lambda, 2.0 * hurst)) * std::tgamma(2.0 * hurst + 1.0) * std::cosh(lambda * t);
  if (t == 0.0) return first;
  const double x = 0.25 * lambda * lambda * t * t;
  const double second = 0.5 * s2 * std::pow(t, 2.0 * hurst) * hyp1f2(1.0, hurst + 0.5, hurst + 1.0, x);
  const double r0 = variance_at_zero(hurst, lambda, sigma);
  const double loss = std::numeric_limits<double>::epsilon() * (first + second) / r0;
  if (loss > 1e-6) {
    std::ostringstream os;
    os << "cosh/1F2 covariance loses " << loss << " relative precision at lambda*t=" << lambda * t
       << "; use the asymptotic branch";
    throw NumericError(os.str());
  }
  return first - second;
}

double stationary_cov_asymptotic(double hurst, double lambda, double sigma, double t, int terms) {
  require_cov_args(hurst, lambda, sigma, t);
  if (t == 0.0) throw DomainError("asymptotic covariance series is not defined at t = 0");
  const double e = 2.0 * hurst;
  double total = 0.0;
  double falling = 1.0;  // Π_{k=0}^{2m-1} (2H - k)
  for (int m = 1; m <= terms; ++m) {
    falling *= (e - (2.0 * m - 2.0)) * (e - (2.0 * m - 1.0));
    total += std::pow(lambda, -2.0 * m) * falling * std::pow(t, e - 2.0 * m);
  }
  return 0.5 * sigma * sigma * total;
}

double stationary_cov_spectral(double hurst, double lambda, double sigma, double t) {
  require_cov_args(hurst, lambda, sigma, t);
  using namespace boost::math::quadrature;
  const double expo = 1.0 - 2.0 * hurst;
  auto density = [expo](double x) { return x == 0.0 ? 0.0 : std::pow(x, expo) / (1.0 + x * x); };

  double integral = 0.0;
  if (t == 0.0) {
    tanh_sinh<double> head;
    exp_sinh<double> tail;
    integral = head.integrate(density, 0.0, 1.0) + tail.integrate(density, 1.0, std::numeric_limits<double>::infinity());
  } else {
    ooura_fourier_cos<double> fourier(1e-14, 10);
    integral = fourier.integrate(density, lambda * t).first;
  }
  const double prefactor = sigma * sigma * std::pow(lambda, -2.0 * hurst) * std::tgamma(2.0 * hurst + 1.0) *
                           std::sin(std::numbers::pi * hurst) / std::numbers::pi;
  return prefactor * integral;
}

double increment_covariance(double hurst, double lambda, double sigma, double t1, double t2, double t3, double t4) {
  auto r = [&](double u) { return stationary_cov(hurst, lambda, sigma, std::abs(u)); };
  return r(t4 - t2) - r(t3 - t2) - r(t4 - t1) + r(t3 - t1);
}

ConvexityChange find_convexity_change(double hurst, double lambda, double sigma, double t_max, double step) {
  auto second = [&](double t) {
    const double d = std::max(step, 0.02 * t);
    return (stationary_cov(hurst, lambda, sigma, t + d) - 2.0 * stationary_cov(hurst, lambda, sigma, t) +
            stationary_cov(hurst, lambda, sigma, t - d)) /
           (d * d);
  };
  double prev_t = step;
  double prev = second(prev_t);
  double t0 = -1.0;
  double t1 = -1.0;
  for (double t = 2.0 * step; t <= t_max; t += step) {
    const double cur = second(t);
    if ((prev > 0.0) != (cur > 0.0)) {
      // Linear interpolation of the root between grid points.
      const double root = prev_t + step * prev / (prev - cur);
      if (t0 < 0.0) t0 = root;
      t1 = root;
    }
    prev = cur;
    prev_t = t;
  }
  if (t0 < 0.0 || prev > 0.0) throw NumericError("covariance second derivative does not turn negative on the scan");
  return {t0, t1};
}

Matrix c1_limit(const ModelSpec& model) {
  validate_model(model);
  const EigDecomp e = sym_eig(model.gamma);
  const double h = model.hurst;
  const double g2h = std::tgamma(2.0 * h);
  std::vector<double> diag(e.values.size());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = std::pow(e.values[i], -2.0 * h) * g2h;
  const Matrix inner = e.basis * Matrix::diagonal(diag) * e.basis.transpose();
  return (model.sigma * model.sigma * h) * inner;
}

Matrix c2_limit(const ModelSpec& model) { return -1.0 * (model.gamma.matrix() * c1_limit(model)); }

LimitConstants limit_constants(const ModelSpec& model) {
  Matrix c1 = c1_limit(model);
  Matrix c2 = -1.0 * (model.gamma.matrix() * c1);
  return {std::move(c1), std::move(c2)};
}

Orthogonalization orthogonalize(const SymMatrix& gamma) {
  const EigDecomp e = sym_eig(gamma);
  return {Matrix::diagonal(e.values), e.basis.transpose()};
}

}  // namespace roughou
