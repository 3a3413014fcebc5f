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

#include "roughou/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"

#include "roughou/errors.hpp"
#include "roughou/kernels.hpp"

namespace roughou {

namespace {

Matrix numerator_sum(const LiftedPath& lift, const PathMatrix& path, std::size_t stride) {
  const std::size_t d = lift.dim();
  const std::size_t n = lift.intervals();
  std::vector<double> coarse(n);
  Matrix num(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto xi = path.component(i);
    for (std::size_t l = 0; l < n; ++l) coarse[l] = xi[l * stride];
    for (std::size_t j = 0; j < d; ++j)
      num(i, j) = kernels::dot(coarse, lift.increment_row(j)) + kernels::sum(lift.area_row(i, j));
  }
  return num;
}

Matrix gram_left(const PathMatrix& path) {
  const std::size_t d = path.dim();
  const double h = path.grid().mesh();
  Matrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      g(i, j) = h * kernels::dot(path.component(i), path.component(j));
      g(j, i) = g(i, j);
    }
  return g;
}

Matrix gram_trapezoid(const PathMatrix& path) {
  const std::size_t d = path.dim();
  const std::size_t last = path.grid().steps();
  const double h = path.grid().mesh();
  Matrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double ends = 0.5 * (path(i, 0) * path(j, 0) + path(i, last) * path(j, last));
      g(i, j) = h * (kernels::dot(path.component(i), path.component(j)) - ends);
      g(j, i) = g(i, j);
    }
  return g;
}

EstimationResult finish(const Matrix& gram, const Matrix& num, const SampleGrid& grid, Flavor flavor) {
  const EigDecomp e = sym_eig(SymMatrix(gram));
  const double lo = e.values.front();
  const double hi = e.values.back();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0) || !(condition < kMaxCondition))
    throw EstimationError("Gram matrix is singular or ill-conditioned (condition " + std::to_string(condition) + ")",
                          condition);
  std::vector<double> inv_diag(e.values.size());
  for (std::size_t k = 0; k < inv_diag.size(); ++k) inv_diag[k] = 1.0 / e.values[k];
  const Matrix inverse = e.basis * Matrix::diagonal(inv_diag) * e.basis.transpose();
  const Matrix gamma_t = -1.0 * (inverse * num);
  return {gamma_t.transpose(), gram, num, condition, grid, flavor};
}

void require_ito(const LiftedPath& lift) {
  if (lift.flavor() != Flavor::ito)
    throw FlavorError("the estimator needs the Itô lift; Stratonovich areas make it degenerate");
}

void require_match(const LiftedPath& lift, const PathMatrix& path, std::size_t refine) {
  if (path.dim() != lift.dim()) throw ShapeError("path and lift dimensions differ");
  if (path.grid() != lift.grid().refined(refine))
    throw ShapeError("path grid does not match the lift grid" +
                     std::string(refine > 1 ? " refined " + std::to_string(refine) + " times" : ""));
}

EstimationResult discrete_impl(const LiftedPath& lift, const PathMatrix& path) {
  require_match(lift, path, 1);
  return finish(gram_left(path), numerator_sum(lift, path, 1), lift.grid(), lift.flavor());
}

}  // namespace

EstimationResult estimate_discrete(const LiftedPath& lift, const PathMatrix& path) {
  require_ito(lift);
  return discrete_impl(lift, path);
}

EstimationResult testing::estimate_any_flavor(const LiftedPath& lift, const PathMatrix& path) {
  return discrete_impl(lift, path);
}

EstimationResult estimate_continuous(const LiftedPath& lift, const PathMatrix& path, std::size_t refine,
                                     GramRule rule) {
  require_ito(lift);
  if (refine == 0) throw ValidationError("refine must be at least 1");
  require_match(lift, path, refine);
  const Matrix gram = rule == GramRule::left ? gram_left(path) : gram_trapezoid(path);
  return finish(gram, numerator_sum(lift, path, refine), lift.grid(), lift.flavor());
}

EstimationResult closed_form_2d(const LiftedPath& lift, const PathMatrix& path) {
  require_ito(lift);
  require_match(lift, path, 1);
  if (lift.dim() != 2) throw ShapeError("closed_form_2d needs d = 2");
  const Matrix l = gram_left(path);
  const Matrix num = numerator_sum(lift, path, 1);
  const double v = l(0, 0) * l(1, 1) - l(0, 1) * l(0, 1);
  const double scale = l(0, 0) * l(1, 1);
  const double mean = 0.5 * (l(0, 0) + l(1, 1));
  const double gap = std::hypot(0.5 * (l(0, 0) - l(1, 1)), l(0, 1));
  const double lo = mean - gap;
  const double condition = lo > 0.0 ? (mean + gap) / lo : std::numeric_limits<double>::infinity();
  if (!(v > 1e-12 * scale)) throw EstimationError("Gram determinant vanishes", condition);
  Matrix g(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t o = 1 - j;
      g(i, j) = -(l(o, o) * num(j, i) - l(0, 1) * num(o, i)) / v;
    }
  return {g, l, num, condition, lift.grid(), lift.flavor()};
}

Matrix noise_integral(const PathMatrix& x, const PathMatrix& b, const CrossLift& cross) {
  if (x.grid() != b.grid() || x.dim() != b.dim() || x.dim() != cross.dim)
    throw ShapeError("noise_integral: path, driver and cross level must share grid and dimension");
  const std::size_t n = cross.grid.steps();
  if (x.grid().steps() % n != 0 || x.grid().horizon() != cross.grid.horizon())
    throw ShapeError("noise_integral: path grid is not a refinement of the cross grid");
  const std::size_t stride = x.grid().steps() / n;
  const std::size_t d = x.dim();
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        s += x(i, l * stride) * (b(j, (l + 1) * stride) - b(j, l * stride)) + cross.area(i, j, l);
      out(i, j) = s;
    }
  return out;
}

double chain_rule_check(const LiftedPath& lift_x, const LiftedPath& lift_b, const CrossLift& cross,
                        const ModelSpec& model) {
  if (lift_x.flavor() != lift_b.flavor() || lift_x.flavor() != cross.flavor)
    throw FlavorError("chain_rule_check: lifts and cross level must share flavor");
  if (lift_x.grid() != lift_b.grid() || lift_x.grid() != cross.grid)
    throw ShapeError("chain_rule_check: grids differ");
  const std::size_t d = lift_x.dim();
  if (lift_b.dim() != d || cross.dim != d || model.d != d) throw ShapeError("chain_rule_check: dimensions differ");
  const std::size_t n = lift_x.intervals();
  const double h = lift_x.grid().mesh();

  Matrix gram(d, d), lhs(d, d), noise(d, d);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = lift_x.base_point()[i] + lift_x.displacement(i, l);
      for (std::size_t j = 0; j < d; ++j) {
        const double xj = lift_x.base_point()[j] + lift_x.displacement(j, l);
        gram(i, j) += h * xi * xj;
        lhs(i, j) += xi * lift_x.increment(j, l) + lift_x.area(i, j, l);
        noise(i, j) += xi * lift_b.increment(j, l) + cross.area(i, j, l);
      }
    }
  const Matrix residual = lhs + gram * model.gamma.matrix().transpose() - model.sigma * noise;
  return residual.max_abs();
}

ScheduleCheck check_schedule(double horizon, std::size_t steps, double hurst, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  require_hurst(hurst);
  const SampleGrid grid(horizon, steps);
  const double p = 0.5 * (1.0 + (1.0 + hurst + beta) / (1.0 + beta));
  const double h = grid.mesh();
  const double value = static_cast<double>(steps) * std::pow(h, p);
  return {p, value, value < 1.0 && h < 1.0};
}

std::string result_json(const EstimationResult& result) {
  nlohmann::json j;
  j["gamma_hat"] = result.gamma_hat.to_rows();
  j["condition"] = result.condition;
  j["T"] = result.grid.horizon();
  j["n"] = result.grid.steps();
  j["h"] = result.grid.mesh();
  j["flavor"] = std::string(flavor_name(result.flavor));
  return j.dump(2);
}

}  // namespace roughou
