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

#include "roughou/rough.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csv_util.hpp"
#include "roughou/errors.hpp"
#include "roughou/kernels.hpp"

namespace roughou {

namespace {

double phi_scalar(double lambda, double hurst, double t) {
  if (t == 0.0) return 0.0;
  const double a = 2.0 * hurst;
  const double x = lambda * t;
  const double i1 = std::pow(lambda, -a) * lower_inc_gamma(a, x);
  const double i2 = std::pow(lambda, -a - 1.0) * lower_inc_gamma(a + 1.0, x);
  return hurst * i1 + hurst * lambda * t * i1 - hurst * lambda * i2;
}

void require_same_grid(const SampleGrid& a, const SampleGrid& b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": grids differ");
}

// S_ij = Σ_k (Y_i[k] - Y_i[start]) δ_j[k] + ½ δ_i[k] δ_j[k] over one coarse
// interval, for Y = x and δ the fine increments of y.
void fine_compose(const PathMatrix& x, const PathMatrix& y, std::size_t start, std::size_t substeps,
                  std::vector<double>& s) {
  const std::size_t d = x.dim();
  std::fill(s.begin(), s.end(), 0.0);
  for (std::size_t k = start; k < start + substeps; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      const double disp = x(i, k) - x(i, start);
      const double dxi = x(i, k + 1) - x(i, k);
      for (std::size_t j = 0; j < d; ++j) {
        const double dyj = y(j, k + 1) - y(j, k);
        s[i * d + j] += disp * dyj + 0.5 * dxi * dyj;
      }
    }
}

}  // namespace

std::string_view flavor_name(Flavor f) noexcept { return f == Flavor::ito ? "ito" : "stratonovich"; }

Flavor parse_flavor(std::string_view s) {
  if (s == "ito") return Flavor::ito;
  if (s == "stratonovich") return Flavor::stratonovich;
  throw ValidationError("unknown lift flavor '" + std::string(s) + "'");
}

LiftedPath::LiftedPath(SampleGrid grid, std::vector<double> base, std::vector<double> increments,
                       std::vector<double> areas, std::vector<double> running, Flavor flavor)
    : grid_(grid),
      base_(std::move(base)),
      increments_(std::move(increments)),
      areas_(std::move(areas)),
      running_(std::move(running)),
      flavor_(flavor) {
  const std::size_t d = base_.size();
  const std::size_t n = grid_.steps();
  if (d == 0) throw ValidationError("lift dimension must be positive");
  if (increments_.size() != d * n) throw ShapeError("lift increments must be d x n");
  if (areas_.size() != d * d * n) throw ShapeError("lift areas must be d*d x n");
  if (running_.size() != d * d * (n + 1)) throw ShapeError("lift running levels must be d*d x (n+1)");
  displacement_.assign(d * (n + 1), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      acc += increments_[i * n + l];
      displacement_[i * (n + 1) + l + 1] = acc;
    }
  }
}

LiftedPath LiftedPath::assemble(SampleGrid grid, std::vector<double> base_point, std::vector<double> increments,
                                std::vector<double> areas, std::vector<double> running, Flavor flavor) {
  return LiftedPath(grid, std::move(base_point), std::move(increments), std::move(areas), std::move(running), flavor);
}

LiftedPath LiftedPath::from_intervals(SampleGrid grid, std::vector<double> base_point, std::vector<double> increments,
                                      std::vector<double> areas, Flavor flavor) {
  const std::size_t d = base_point.size();
  const std::size_t n = grid.steps();
  LiftedPath lift(grid, std::move(base_point), std::move(increments), std::move(areas),
                  std::vector<double>(d * d * (n + 1), 0.0), flavor);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double* r = lift.running_.data() + (i * d + j) * (n + 1);
      const double* a = lift.areas_.data() + (i * d + j) * n;
      for (std::size_t l = 0; l < n; ++l)
        r[l + 1] = r[l] + a[l] + lift.displacement(i, l) * lift.increment(j, l);
    }
  return lift;
}

Matrix LiftedPath::interval_area(std::size_t l) const {
  const std::size_t d = dim();
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = area(i, j, l);
  return m;
}

Matrix LiftedPath::running_area(std::size_t l) const {
  const std::size_t d = dim();
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = running(i, j, l);
  return m;
}

Matrix LiftedPath::area_between(std::size_t s, std::size_t t) const {
  if (s > t || t > intervals()) throw ShapeError("area_between needs s <= t <= n");
  const std::size_t d = dim();
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(i, j) = running(i, j, t) - running(i, j, s) - displacement(i, s) * (displacement(j, t) - displacement(j, s));
  return m;
}

LiftedPath strat_lift(const PathMatrix& path, std::size_t substeps) {
  if (substeps == 0 || path.grid().steps() % substeps != 0)
    throw ShapeError("substeps must divide the number of path intervals");
  const std::size_t d = path.dim();
  const std::size_t n = path.grid().steps() / substeps;
  const SampleGrid coarse(path.grid().horizon(), n);

  std::vector<double> inc(d * n);
  for (std::size_t i = 0; i < d; ++i) {
    const auto row = path.component(i);
    if (substeps == 1) {
      kernels::difference(row, std::span<double>(inc.data() + i * n, n));
    } else {
      for (std::size_t c = 0; c < n; ++c) inc[i * n + c] = row[(c + 1) * substeps] - row[c * substeps];
    }
  }

  std::vector<double> areas(d * d * n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      kernels::scaled_product(std::span<const double>(inc.data() + i * n, n),
                              std::span<const double>(inc.data() + j * n, n), 0.5,
                              std::span<double>(areas.data() + (i * d + j) * n, n));

  if (substeps > 1 && d > 1) {
    std::vector<double> s(d * d);
    for (std::size_t c = 0; c < n; ++c) {
      fine_compose(path, path, c * substeps, substeps, s);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (i != j) areas[(i * d + j) * n + c] += 0.5 * (s[i * d + j] - s[j * d + i]);
    }
  }
  return LiftedPath::from_intervals(coarse, path.initial_state(), std::move(inc), std::move(areas),
                                    Flavor::stratonovich);
}

Matrix ito_correction_phi(const SymMatrix& gamma, double hurst, double t) {
  require_hurst(hurst);
  if (!(t >= 0.0)) throw DomainError("phi is defined for t >= 0");
  const std::size_t d = gamma.dim();
  if (hurst == 0.5) return (0.5 * t) * Matrix::identity(d);
  const EigDecomp e = sym_eig(gamma);
  if (!(e.values.front() > 0.0)) throw ValidationError("gamma must be positive definite");
  std::vector<double> diag(d);
  for (std::size_t k = 0; k < d; ++k) diag[k] = phi_scalar(e.values[k], hurst, t);
  return e.basis * Matrix::diagonal(diag) * e.basis.transpose();
}

Matrix ito_correction_slope(const SymMatrix& gamma, double hurst) {
  require_hurst(hurst);
  const EigDecomp e = sym_eig(gamma);
  if (!(e.values.front() > 0.0)) throw ValidationError("gamma must be positive definite");
  std::vector<double> diag(e.values.size());
  const double g = hurst * std::tgamma(2.0 * hurst);
  for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = g * std::pow(e.values[k], 1.0 - 2.0 * hurst);
  return e.basis * Matrix::diagonal(diag) * e.basis.transpose();
}

CorrectionTable::CorrectionTable(const SymMatrix& gamma, double hurst, const SampleGrid& grid)
    : gamma_(gamma), hurst_(hurst), grid_(grid) {
  require_hurst(hurst);
  const std::size_t d = gamma.dim();
  const std::size_t m = grid.steps() + 1;
  phi_.assign(d * d * m, 0.0);
  if (hurst == 0.5) {
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t i = 0; i < d; ++i) phi_[(i * d + i) * m + l] = 0.5 * grid.time(l);
    return;
  }
  const EigDecomp e = sym_eig(gamma);
  if (!(e.values.front() > 0.0)) throw ValidationError("gamma must be positive definite");
  std::vector<double> diag(d);
  for (std::size_t l = 0; l < m; ++l) {
    const double t = grid.time(l);
    for (std::size_t k = 0; k < d; ++k) diag[k] = phi_scalar(e.values[k], hurst, t);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += e.basis(i, k) * diag[k] * e.basis(j, k);
        phi_[(i * d + j) * m + l] = s;
      }
  }
}

Matrix CorrectionTable::phi_at(std::size_t l) const {
  const std::size_t d = dim();
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = phi(i, j, l);
  return m;
}

Matrix CorrectionTable::increment(std::size_t s, std::size_t t) const { return phi_at(t) - phi_at(s); }

namespace {

LiftedPath apply_correction(const LiftedPath& lift, const CorrectionTable& table, double sigma, double sign,
                            Flavor result) {
  require_same_grid(lift.grid(), table.grid(), "Itô correction");
  if (lift.dim() != table.dim()) throw ShapeError("Itô correction: dimension mismatch");
  const std::size_t d = lift.dim();
  const std::size_t n = lift.intervals();
  const double s2 = sign * sigma * sigma;
  std::vector<double> areas(lift.areas().begin(), lift.areas().end());
  std::vector<double> running(lift.running_levels().begin(), lift.running_levels().end());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double* a = areas.data() + (i * d + j) * n;
      double* r = running.data() + (i * d + j) * (n + 1);
      for (std::size_t l = 0; l < n; ++l) a[l] -= s2 * (table.phi(i, j, l + 1) - table.phi(i, j, l));
      for (std::size_t l = 0; l <= n; ++l) r[l] -= s2 * table.phi(i, j, l);
    }
  return LiftedPath::assemble(lift.grid(), std::vector<double>(lift.base_point().begin(), lift.base_point().end()),
                              std::vector<double>(lift.increments().begin(), lift.increments().end()),
                              std::move(areas), std::move(running), result);
}

}  // namespace

LiftedPath to_ito_lift(const LiftedPath& strat, const CorrectionTable& table, double sigma) {
  if (strat.flavor() != Flavor::stratonovich) throw FlavorError("to_ito_lift expects a Stratonovich lift");
  LiftedPath ito = apply_correction(strat, table, sigma, 1.0, Flavor::ito);
  ito.origin_ = std::make_shared<const LiftedPath::Origin>(LiftedPath::Origin{
      strat.areas_, strat.running_, table.gamma_used().matrix(), table.hurst(), sigma});
  return ito;
}

LiftedPath to_stratonovich_lift(const LiftedPath& ito, const CorrectionTable& table, double sigma) {
  if (ito.flavor() != Flavor::ito) throw FlavorError("to_stratonovich_lift expects an Itô lift");
  const auto& o = ito.origin_;
  if (o && o->sigma == sigma && o->hurst == table.hurst() && o->gamma == table.gamma_used().matrix() &&
      ito.grid() == table.grid())
    return LiftedPath::assemble(ito.grid(), ito.base_, ito.increments_, o->areas, o->running, Flavor::stratonovich);
  return apply_correction(ito, table, sigma, -1.0, Flavor::stratonovich);
}

double check_chen(const LiftedPath& lift) {
  const std::size_t d = lift.dim();
  const std::size_t n = lift.intervals();
  double worst = 0.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double step = lift.running(i, j, l + 1) - lift.running(i, j, l) - lift.area(i, j, l) -
                            lift.displacement(i, l) * lift.increment(j, l);
        worst = std::max(worst, std::abs(step));
        if (l == 0) continue;
        const double from_running =
            lift.running(i, j, l + 1) - lift.running(i, j, l - 1) -
            lift.displacement(i, l - 1) * (lift.displacement(j, l + 1) - lift.displacement(j, l - 1));
        const double composed =
            lift.area(i, j, l - 1) + lift.area(i, j, l) + lift.increment(i, l - 1) * lift.increment(j, l);
        worst = std::max(worst, std::abs(from_running - composed));
      }
  return worst;
}

double chen_scale(const LiftedPath& lift) {
  double disp = 0.0;
  for (std::size_t i = 0; i < lift.dim(); ++i)
    for (std::size_t l = 0; l <= lift.intervals(); ++l) disp = std::max(disp, std::abs(lift.displacement(i, l)));
  double level2 = 0.0;
  for (double v : lift.running_levels()) level2 = std::max(level2, std::abs(v));
  return std::max(disp * disp, level2);
}

PVarDistance p_var_levels(const LiftedPath& a, const LiftedPath& b, double p) {
  if (!(p > 2.0 && p < 3.0)) throw DomainError("p-variation distance needs 2 < p < 3");
  require_same_grid(a.grid(), b.grid(), "p-variation distance");
  if (a.dim() != b.dim()) throw ShapeError("p-variation distance: dimension mismatch");
  const std::size_t d = a.dim();
  const std::size_t n = a.intervals();

  std::vector<double> best1(n + 1, 0.0);
  std::vector<double> best2(n + 1, 0.0);
  std::vector<double> x1(d);
  std::vector<double> diff2(d * d);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(x1.begin(), x1.end(), 0.0);
    std::fill(diff2.begin(), diff2.end(), 0.0);
    // Running X^a_{s,t}, X^b_{s,t} are tracked through their displacement columns.
    for (std::size_t t = s; t < n; ++t) {
      // Extend [s, t] by interval t: D_{s,t+1} = D_{s,t} + ΔA_t + X^a_{s,t}⊗ΔX^a_t - X^b_{s,t}⊗ΔX^b_t.
      for (std::size_t i = 0; i < d; ++i) {
        const double xa = a.displacement(i, t) - a.displacement(i, s);
        const double xb = b.displacement(i, t) - b.displacement(i, s);
        for (std::size_t j = 0; j < d; ++j)
          diff2[i * d + j] += (a.area(i, j, t) - b.area(i, j, t)) + (xa * a.increment(j, t) - xb * b.increment(j, t));
      }
      double norm1 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        x1[i] += a.increment(i, t) - b.increment(i, t);
        norm1 += x1[i] * x1[i];
      }
      double norm2 = 0.0;
      for (double v : diff2) norm2 += v * v;
      best1[t + 1] = std::max(best1[t + 1], best1[s] + std::pow(norm1, 0.5 * p));
      best2[t + 1] = std::max(best2[t + 1], best2[s] + std::pow(norm2, 0.25 * p));
    }
  }
  return {std::pow(best1[n], 1.0 / p), std::pow(best2[n], 2.0 / p)};
}

double p_var_distance(const LiftedPath& a, const LiftedPath& b, double p) { return p_var_levels(a, b, p).distance(); }

double default_p(double hurst) {
  require_hurst(hurst);
  return std::clamp(1.0 / hurst + 0.1, 2.0 + 1e-9, 3.0 - 1e-9);
}

CrossLift cross_lift(const PathMatrix& x, const PathMatrix& b, std::size_t substeps) {
  require_same_grid(x.grid(), b.grid(), "cross lift");
  if (x.dim() != b.dim()) throw ShapeError("cross lift: dimension mismatch");
  if (substeps == 0 || x.grid().steps() % substeps != 0)
    throw ShapeError("substeps must divide the number of path intervals");
  const std::size_t d = x.dim();
  const std::size_t n = x.grid().steps() / substeps;
  CrossLift out{SampleGrid(x.grid().horizon(), n), d, std::vector<double>(d * d * n), Flavor::stratonovich};
  std::vector<double> s(d * d);
  for (std::size_t c = 0; c < n; ++c) {
    fine_compose(x, b, c * substeps, substeps, s);
    for (std::size_t k = 0; k < d * d; ++k) out.areas[k * n + c] = s[k];
  }
  return out;
}

CrossLift to_ito_cross(const CrossLift& strat, const CorrectionTable& table, double sigma) {
  if (strat.flavor != Flavor::stratonovich) throw FlavorError("to_ito_cross expects a Stratonovich cross lift");
  require_same_grid(strat.grid, table.grid(), "cross lift correction");
  CrossLift out = strat;
  const std::size_t d = strat.dim;
  const std::size_t n = strat.grid.steps();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < n; ++l)
        out.areas[(i * d + j) * n + l] -= sigma * (table.phi(i, j, l + 1) - table.phi(i, j, l));
  out.flavor = Flavor::ito;
  return out;
}

void write_lift_csv(const std::filesystem::path& file, const LiftedPath& lift) {
  const std::size_t d = lift.dim();
  auto out = detail::open_output(file);
  out << "l,t";
  for (std::size_t i = 0; i < d; ++i) out << ",dX" << (i + 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out << ",A" << (i + 1) << (j + 1);
  out << ",flavor\n";
  const std::string_view flavor = flavor_name(lift.flavor());
  for (std::size_t l = 0; l < lift.intervals(); ++l) {
    out << l << ',' << detail::format_double(lift.grid().time(l));
    for (std::size_t i = 0; i < d; ++i) out << ',' << detail::format_double(lift.increment(i, l));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out << ',' << detail::format_double(lift.area(i, j, l));
    out << ',' << flavor << '\n';
  }
  if (!out) throw Error("write failed: " + file.string());
}

LiftedPath read_lift_csv(const std::filesystem::path& file, std::span<const double> base_point) {
  auto in = detail::open_input(file);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(file.string() + ": empty file");
  const auto header = detail::split_csv(line);
  // 2 + d + d² + 1 columns
  std::size_t d = 0;
  while ((d + 1) * (d + 1) + (d + 1) + 3 <= header.size()) ++d;
  if (d == 0 || d * d + d + 3 != header.size() || header.front() != "l" || header.back() != "flavor")
    throw ValidationError(file.string() + ": expected header l,t,dX1..dXd,A11..Add,flavor");
  if (!base_point.empty() && base_point.size() != d) throw ShapeError("base point dimension differs from the lift");

  std::vector<double> times;
  std::vector<std::vector<double>> inc(d), area(d * d);
  Flavor flavor = Flavor::stratonovich;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv(line);
    if (f.size() != header.size())
      throw ValidationError(file.string() + ":" + std::to_string(lineno) + ": wrong field count");
    times.push_back(detail::parse_double(f[1], file, lineno));
    for (std::size_t i = 0; i < d; ++i) inc[i].push_back(detail::parse_double(f[2 + i], file, lineno));
    for (std::size_t k = 0; k < d * d; ++k) area[k].push_back(detail::parse_double(f[2 + d + k], file, lineno));
    const Flavor row_flavor = parse_flavor(f.back());
    if (times.size() == 1) flavor = row_flavor;
    else if (row_flavor != flavor) throw ValidationError(file.string() + ": mixed flavors");
  }
  const std::size_t n = times.size();
  if (n == 0) throw ValidationError(file.string() + ": no intervals");
  // Rows carry left endpoints; the horizon follows from the uniform mesh.
  const double mesh = n > 1 ? (times[n - 1] - times[0]) / static_cast<double>(n - 1) : 0.0;
  if (times.front() != 0.0 || (n > 1 && !(mesh > 0.0))) throw ValidationError(file.string() + ": malformed time column");
  if (n == 1) throw ValidationError(file.string() + ": a single interval does not determine the grid");
  const SampleGrid grid(mesh * static_cast<double>(n), n);
  for (std::size_t l = 0; l < n; ++l)
    if (std::abs(times[l] - grid.time(l)) > 1e-9 * grid.horizon())
      throw ValidationError(file.string() + ": grid is not uniform at row " + std::to_string(l + 2));

  std::vector<double> increments;
  for (auto& v : inc) increments.insert(increments.end(), v.begin(), v.end());
  std::vector<double> areas;
  for (auto& v : area) areas.insert(areas.end(), v.begin(), v.end());
  std::vector<double> base = base_point.empty() ? std::vector<double>(d, 0.0)
                                                : std::vector<double>(base_point.begin(), base_point.end());
  return LiftedPath::from_intervals(grid, std::move(base), std::move(increments), std::move(areas), flavor);
}

}  // namespace roughou
