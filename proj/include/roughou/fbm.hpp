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
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "roughou/matrix.hpp"

namespace roughou {

/// Uniform grid t_l = l h on [0, T] with h = T / n. t_n is T exactly.
class SampleGrid {
 public:
  SampleGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double mesh() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double time(std::size_t l) const noexcept {
    return l == steps_ ? horizon_ : static_cast<double>(l) * mesh();
  }

  /// Grid with `factor` times as many steps over the same horizon.
  SampleGrid refined(std::size_t factor) const;

  friend bool operator==(const SampleGrid&, const SampleGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
};

enum class PathKind { fbm, fou };

/// d components sampled on a grid; values stored component-major, one row of
/// n+1 values per component.
class PathMatrix {
 public:
  PathMatrix(SampleGrid grid, std::size_t dim, std::vector<double> values, PathKind kind);

  const SampleGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t points() const noexcept { return grid_.steps() + 1; }
  PathKind kind() const noexcept { return kind_; }

  std::span<const double> component(std::size_t i) const {
    return {values_.data() + i * points(), points()};
  }
  double operator()(std::size_t i, std::size_t l) const { return values_[i * points() + l]; }
  std::vector<double> point(std::size_t l) const;
  std::vector<double> initial_state() const { return point(0); }
  std::span<const double> values() const noexcept { return values_; }

  /// Every `factor`-th point, on the grid with steps / factor intervals.
  PathMatrix subsample(std::size_t factor) const;

 private:
  SampleGrid grid_;
  std::size_t dim_;
  std::vector<double> values_;
  PathKind kind_;
};

/// Throws DomainError unless 1/3 < H <= 1/2.
void require_hurst(double hurst);

/// fBM covariance ½(s^{2H} + t^{2H} - |t-s|^{2H}).
double fbm_cov(double hurst, double s, double t);

/// Autocovariance of fractional Gaussian noise with mesh h at integer lag k.
double fgn_autocov(double hurst, std::size_t lag, double mesh);

/// Exact sampler by Cholesky factorization of the fBM covariance on the grid.
/// Intended as a test oracle; rejects grids with more than 4096 steps.
PathMatrix sample_fbm_cholesky(double hurst, const SampleGrid& grid, std::size_t dim, std::uint64_t seed,
                               std::uint64_t path_index = 0);

inline constexpr std::size_t kCholeskyMaxSteps = 4096;

/// Cholesky sampler with the factor computed once and reused across paths.
/// `sample` returns the same paths as sample_fbm_cholesky.
class CholeskyFbmSampler {
 public:
  CholeskyFbmSampler(double hurst, const SampleGrid& grid);

  const SampleGrid& grid() const noexcept { return grid_; }
  double hurst() const noexcept { return hurst_; }

  PathMatrix sample(std::size_t dim, std::uint64_t seed, std::uint64_t path_index = 0) const;

 private:
  double hurst_;
  SampleGrid grid_;
  Matrix factor_;
};

/// Circulant-embedding (Davies–Harte) sampler of fGn increments. The
/// embedding spectrum is computed once per (H, grid) and reused across paths.
class CirculantFbmSampler {
 public:
  CirculantFbmSampler(double hurst, const SampleGrid& grid);

  const SampleGrid& grid() const noexcept { return grid_; }
  double hurst() const noexcept { return hurst_; }

  /// Independent components, component i drawing from stream_seed(seed, path_index, i).
  PathMatrix sample(std::size_t dim, std::uint64_t seed, std::uint64_t path_index = 0) const;

  /// The n fGn increments of one component from the given stream seed.
  std::vector<double> increments(std::uint64_t stream) const;

 private:
  double hurst_;
  SampleGrid grid_;
  std::vector<double> sqrt_eigenvalues_;  // sqrt(λ_k / N), N = 2n
};

PathMatrix sample_fbm(double hurst, const SampleGrid& grid, std::size_t dim, std::uint64_t seed,
                      std::uint64_t path_index = 0);

/// Lower Cholesky factor of a symmetric positive semidefinite matrix. Pivots
/// down to -1e-10 (relative to the diagonal) are clamped to zero; anything
/// more negative throws NumericError. `min_pivot` receives the smallest pivot.
Matrix cholesky_lower(const Matrix& a, double* min_pivot = nullptr);

/// CSV with header `t,x1,...,xd` and one row per grid point.
void write_path_csv(const std::filesystem::path& file, const PathMatrix& path);
PathMatrix read_path_csv(const std::filesystem::path& file, PathKind kind);

}  // namespace roughou
