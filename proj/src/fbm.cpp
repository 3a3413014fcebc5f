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

#include "roughou/fbm.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "csv_util.hpp"
#include "fft.hpp"
#include "roughou/errors.hpp"
#include "roughou/kernels.hpp"
#include "roughou/rng.hpp"

namespace roughou {

SampleGrid::SampleGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("grid horizon must be positive and finite");
  if (steps == 0) throw ValidationError("grid must have at least one step");
}

SampleGrid SampleGrid::refined(std::size_t factor) const {
  if (factor == 0) throw ValidationError("refinement factor must be positive");
  return SampleGrid(horizon_, steps_ * factor);
}

PathMatrix::PathMatrix(SampleGrid grid, std::size_t dim, std::vector<double> values, PathKind kind)
    : grid_(grid), dim_(dim), values_(std::move(values)), kind_(kind) {
  if (dim_ == 0) throw ValidationError("path dimension must be positive");
  if (values_.size() != dim_ * points()) throw ShapeError("path values do not match d x (n+1)");
  for (double v : values_)
    if (!std::isfinite(v)) throw NumericError("path contains non-finite values");
}

std::vector<double> PathMatrix::point(std::size_t l) const {
  std::vector<double> p(dim_);
  for (std::size_t i = 0; i < dim_; ++i) p[i] = (*this)(i, l);
  return p;
}

PathMatrix PathMatrix::subsample(std::size_t factor) const {
  if (factor == 0 || grid_.steps() % factor != 0) throw ShapeError("subsample factor must divide the step count");
  const SampleGrid coarse(grid_.horizon(), grid_.steps() / factor);
  const std::size_t m = coarse.steps() + 1;
  std::vector<double> v(dim_ * m);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t l = 0; l < m; ++l) v[i * m + l] = (*this)(i, l * factor);
  return PathMatrix(coarse, dim_, std::move(v), kind_);
}

void require_hurst(double hurst) {
  if (!(hurst > 1.0 / 3.0 && hurst <= 0.5)) {
    std::ostringstream os;
    os << "Hurst parameter " << hurst << " outside the supported range (1/3, 1/2]";
    throw DomainError(os.str());
  }
}

double fbm_cov(double hurst, double s, double t) {
  require_hurst(hurst);
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("fBM covariance needs non-negative times");
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

double fgn_autocov(double hurst, std::size_t lag, double mesh) {
  const double e = 2.0 * hurst;
  const double k = static_cast<double>(lag);
  const double unit = lag == 0 ? 1.0 : 0.5 * (std::pow(k + 1.0, e) + std::pow(k - 1.0, e) - 2.0 * std::pow(k, e));
  return unit * std::pow(mesh, e);
}

Matrix cholesky_lower(const Matrix& a, double* min_pivot) {
  if (!a.square()) throw ShapeError("Cholesky needs a square matrix");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    const double rel = diag / std::max(a(j, j), std::numeric_limits<double>::min());
    smallest = std::min(smallest, rel);
    if (rel < -1e-10) {
      std::ostringstream os;
      os << "matrix is not positive semidefinite: pivot " << j << " = " << diag;
      throw NumericError(os.str());
    }
    const double ljj = diag > 0.0 ? std::sqrt(diag) : 0.0;
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = ljj > 0.0 ? s / ljj : 0.0;
    }
  }
  if (min_pivot) *min_pivot = smallest;
  return l;
}

CholeskyFbmSampler::CholeskyFbmSampler(double hurst, const SampleGrid& grid) : hurst_(hurst), grid_(grid) {
  require_hurst(hurst);
  const std::size_t n = grid.steps();
  if (n > kCholeskyMaxSteps)
    throw SizeError("Cholesky sampler is limited to " + std::to_string(kCholeskyMaxSteps) +
                    " steps; use the circulant sampler (sample_fbm) for larger grids");
  Matrix cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = fbm_cov(hurst, grid.time(i + 1), grid.time(j + 1));
      cov(i, j) = c;
      cov(j, i) = c;
    }
  factor_ = cholesky_lower(cov);
}

PathMatrix CholeskyFbmSampler::sample(std::size_t dim, std::uint64_t seed, std::uint64_t path_index) const {
  const std::size_t n = grid_.steps();
  std::vector<double> values(dim * (n + 1), 0.0);
  std::vector<double> z(n);
  for (std::size_t c = 0; c < dim; ++c) {
    GaussianStream rng(stream_seed(seed, path_index, c));
    rng.fill(z);
    double* row = values.data() + c * (n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k <= i; ++k) s += factor_(i, k) * z[k];
      row[i + 1] = s;
    }
  }
  return PathMatrix(grid_, dim, std::move(values), PathKind::fbm);
}

PathMatrix sample_fbm_cholesky(double hurst, const SampleGrid& grid, std::size_t dim, std::uint64_t seed,
                               std::uint64_t path_index) {
  return CholeskyFbmSampler(hurst, grid).sample(dim, seed, path_index);
}

CirculantFbmSampler::CirculantFbmSampler(double hurst, const SampleGrid& grid) : hurst_(hurst), grid_(grid) {
  require_hurst(hurst);
  const std::size_t n = grid.steps();
  const std::size_t big_n = 2 * n;
  std::vector<std::complex<double>> c(big_n);
  for (std::size_t k = 0; k <= n; ++k) c[k] = fgn_autocov(hurst, k, grid.mesh());
  for (std::size_t k = 1; k < n; ++k) c[big_n - k] = c[k];
  detail::fft_forward(c);

  double lambda_max = 0.0;
  for (const auto& v : c) lambda_max = std::max(lambda_max, v.real());
  sqrt_eigenvalues_.resize(big_n);
  for (std::size_t k = 0; k < big_n; ++k) {
    double lambda = c[k].real();
    if (lambda < -1e-10 * lambda_max) {
      std::ostringstream os;
      os << "circulant embedding not nonnegative definite: eigenvalue " << k << " = " << lambda;
      throw NumericError(os.str());
    }
    lambda = std::max(lambda, 0.0);
    sqrt_eigenvalues_[k] = std::sqrt(lambda / static_cast<double>(big_n));
  }
}

std::vector<double> CirculantFbmSampler::increments(std::uint64_t stream) const {
  const std::size_t big_n = sqrt_eigenvalues_.size();
  std::vector<std::complex<double>> w(big_n);
  std::span<double> flat(reinterpret_cast<double*>(w.data()), 2 * big_n);
  GaussianStream rng(stream);
  rng.fill(flat);
  kernels::scale_interleaved(sqrt_eigenvalues_, flat);
  detail::fft_forward(w);
  std::vector<double> out(grid_.steps());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = w[k].real();
  return out;
}

PathMatrix CirculantFbmSampler::sample(std::size_t dim, std::uint64_t seed, std::uint64_t path_index) const {
  const std::size_t n = grid_.steps();
  std::vector<double> values(dim * (n + 1), 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::vector<double> inc = increments(stream_seed(seed, path_index, c));
    double* row = values.data() + c * (n + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += inc[k];
      row[k + 1] = acc;
    }
  }
  return PathMatrix(grid_, dim, std::move(values), PathKind::fbm);
}

PathMatrix sample_fbm(double hurst, const SampleGrid& grid, std::size_t dim, std::uint64_t seed,
                      std::uint64_t path_index) {
  return CirculantFbmSampler(hurst, grid).sample(dim, seed, path_index);
}

void write_path_csv(const std::filesystem::path& file, const PathMatrix& path) {
  auto out = detail::open_output(file);
  out << "t";
  for (std::size_t i = 0; i < path.dim(); ++i) out << ",x" << (i + 1);
  out << "\n";
  for (std::size_t l = 0; l < path.points(); ++l) {
    out << detail::format_double(path.grid().time(l));
    for (std::size_t i = 0; i < path.dim(); ++i) out << ',' << detail::format_double(path(i, l));
    out << "\n";
  }
  if (!out) throw Error("write failed: " + file.string());
}

PathMatrix read_path_csv(const std::filesystem::path& file, PathKind kind) {
  auto in = detail::open_input(file);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(file.string() + ": empty file");
  const auto header = detail::split_csv(line);
  if (header.size() < 2 || header[0] != "t") throw ValidationError(file.string() + ": expected header t,x1,...,xd");
  const std::size_t dim = header.size() - 1;

  std::vector<double> times;
  std::vector<std::vector<double>> cols(dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv(line);
    if (f.size() != dim + 1) throw ValidationError(file.string() + ":" + std::to_string(lineno) + ": wrong field count");
    times.push_back(detail::parse_double(f[0], file, lineno));
    for (std::size_t i = 0; i < dim; ++i) cols[i].push_back(detail::parse_double(f[i + 1], file, lineno));
  }
  if (times.size() < 2) throw ValidationError(file.string() + ": need at least two grid points");
  if (times.front() != 0.0) throw ValidationError(file.string() + ": grid must start at t=0");
  const SampleGrid grid(times.back(), times.size() - 1);
  for (std::size_t l = 0; l < times.size(); ++l)
    if (std::abs(times[l] - grid.time(l)) > 1e-9 * grid.horizon())
      throw ValidationError(file.string() + ": grid is not uniform at row " + std::to_string(l + 2));

  std::vector<double> values;
  values.reserve(dim * times.size());
  for (auto& c : cols) values.insert(values.end(), c.begin(), c.end());
  return PathMatrix(grid, dim, std::move(values), kind);
}

}  // namespace roughou
