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
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "roughou/fbm.hpp"
#include "roughou/matkernel.hpp"
#include "roughou/matrix.hpp"

namespace roughou {

enum class Flavor { stratonovich, ito };

std::string_view flavor_name(Flavor f) noexcept;
Flavor parse_flavor(std::string_view s);

class CorrectionTable;

/// Level-2 rough path on a grid: per-interval increments X_{t_l,t_{l+1}} and
/// second levels 𝕏_{t_l,t_{l+1}}, plus the running second level 𝕏_{0,t_l}.
///
/// Storage is structure-of-arrays: increments component-major (d rows of n),
/// second levels entry-major (d*d rows of n, entry (i,j) at row i*d+j), the
/// running second level entry-major with n+1 columns.
class LiftedPath {
 public:
  /// Builds the running second level from the interval data by Chen's identity.
  static LiftedPath from_intervals(SampleGrid grid, std::vector<double> base_point, std::vector<double> increments,
                                   std::vector<double> areas, Flavor flavor);

  /// Takes every array as given, including the running second level. Nothing
  /// ties the running level to the interval areas; check_chen measures that.
  static LiftedPath assemble(SampleGrid grid, std::vector<double> base_point, std::vector<double> increments,
                             std::vector<double> areas, std::vector<double> running, Flavor flavor);

  const SampleGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return base_.size(); }
  std::size_t intervals() const noexcept { return grid_.steps(); }
  Flavor flavor() const noexcept { return flavor_; }
  std::span<const double> base_point() const noexcept { return base_; }

  std::span<const double> increment_row(std::size_t i) const { return {increments_.data() + i * intervals(), intervals()}; }
  std::span<const double> area_row(std::size_t i, std::size_t j) const {
    return {areas_.data() + (i * dim() + j) * intervals(), intervals()};
  }
  double increment(std::size_t i, std::size_t l) const { return increments_[i * intervals() + l]; }
  double area(std::size_t i, std::size_t j, std::size_t l) const { return areas_[(i * dim() + j) * intervals() + l]; }
  double running(std::size_t i, std::size_t j, std::size_t l) const {
    return running_[(i * dim() + j) * (intervals() + 1) + l];
  }

  /// X_{t_l} - X_0, from the cumulative increments.
  double displacement(std::size_t i, std::size_t l) const { return displacement_[i * (intervals() + 1) + l]; }

  Matrix interval_area(std::size_t l) const;
  Matrix running_area(std::size_t l) const;

  /// 𝕏_{t_s,t_t} from the running level: 𝕏_{0,t} - 𝕏_{0,s} - X_{0,s} ⊗ X_{s,t}.
  Matrix area_between(std::size_t s, std::size_t t) const;

  std::span<const double> increments() const noexcept { return increments_; }
  std::span<const double> areas() const noexcept { return areas_; }
  std::span<const double> running_levels() const noexcept { return running_; }

 private:
  LiftedPath(SampleGrid grid, std::vector<double> base, std::vector<double> increments, std::vector<double> areas,
             std::vector<double> running, Flavor flavor);

  friend LiftedPath to_ito_lift(const LiftedPath&, const CorrectionTable&, double);
  friend LiftedPath to_stratonovich_lift(const LiftedPath&, const CorrectionTable&, double);

  // Second level before to_ito_lift; to_stratonovich_lift restores it when
  // called with the same correction.
  struct Origin {
    std::vector<double> areas;
    std::vector<double> running;
    Matrix gamma;
    double hurst;
    double sigma;
  };

  SampleGrid grid_;
  std::vector<double> base_;
  std::vector<double> increments_;
  std::vector<double> areas_;
  std::vector<double> running_;
  std::vector<double> displacement_;
  Flavor flavor_;
  std::shared_ptr<const Origin> origin_;
};

/// Stratonovich lift by the one-step trapezoid rule 𝕏 = ½ ΔX ⊗ ΔX on the
/// path's grid, composed by Chen's identity onto the grid with
/// path.steps / substeps intervals. The symmetric part of each coarse area is
/// ½ ΔX ⊗ ΔX of the coarse increment exactly; the fine steps contribute the
/// antisymmetric (Lévy area) part.
LiftedPath strat_lift(const PathMatrix& path, std::size_t substeps = 1);

/// φ^γ(t) = ½ I t^{2H} - U^γ(t), evaluated as
/// H ∫_0^t e^{-Γs}s^{2H-1}ds + HΓt ∫_0^t e^{-Γs}s^{2H-1}ds - HΓ ∫_0^t e^{-Γs}s^{2H}ds
/// through the eigendecomposition of Γ and lower incomplete gamma functions.
/// H = 1/2 returns (t/2) I exactly.
Matrix ito_correction_phi(const SymMatrix& gamma, double hurst, double t);

/// lim_{t→∞} φ^γ(t)/t = H G(2H) Q diag(λ_i^{1-2H}) Qᵀ.
Matrix ito_correction_slope(const SymMatrix& gamma, double hurst);

/// φ^γ tabulated on every grid point (entry-major, n+1 columns per entry).
class CorrectionTable {
 public:
  CorrectionTable(const SymMatrix& gamma, double hurst, const SampleGrid& grid);

  const SampleGrid& grid() const noexcept { return grid_; }
  const SymMatrix& gamma_used() const noexcept { return gamma_; }
  double hurst() const noexcept { return hurst_; }
  std::size_t dim() const noexcept { return gamma_.dim(); }

  double phi(std::size_t i, std::size_t j, std::size_t l) const {
    return phi_[(i * dim() + j) * (grid_.steps() + 1) + l];
  }
  Matrix phi_at(std::size_t l) const;
  /// φ_{t_s,t_t} = φ(t_t) - φ(t_s)
  Matrix increment(std::size_t s, std::size_t t) const;

 private:
  SymMatrix gamma_;
  double hurst_;
  SampleGrid grid_;
  std::vector<double> phi_;
};

/// Itô lift: areas - σ² φ_{t_l,t_{l+1}}, running levels - σ² φ(t_l).
LiftedPath to_ito_lift(const LiftedPath& strat, const CorrectionTable& table, double sigma);

/// Inverse of to_ito_lift: adds σ² φ back.
LiftedPath to_stratonovich_lift(const LiftedPath& ito, const CorrectionTable& table, double sigma);

/// Largest Chen defect, max-entry norm, over the triples (0, t_l, t_{l+1})
/// (running level against interval data) and (t_{l-1}, t_l, t_{l+1})
/// (two-interval second level from the running level against the
/// composition of the two interval second levels).
double check_chen(const LiftedPath& lift);

/// Magnitude the Chen defect is measured against: the square of the largest
/// displacement |X_t - X_0|, or the largest running second-level entry if bigger.
double chen_scale(const LiftedPath& lift);

struct PVarDistance {
  double level1;  // (sup_P Σ |ΔX^a - ΔX^b|^p)^{1/p}
  double level2;  // (sup_P Σ |𝕏^a - 𝕏^b|^{p/2})^{2/p}
  double distance() const noexcept { return level1 > level2 ? level1 : level2; }
};

/// Inhomogeneous p-variation distance with the supremum taken over partitions
/// by grid points (exact for that restricted supremum, O(n² d²) dynamic
/// programming). Euclidean norm at level 1, Frobenius at level 2.
PVarDistance p_var_levels(const LiftedPath& a, const LiftedPath& b, double p);
double p_var_distance(const LiftedPath& a, const LiftedPath& b, double p);

/// 1/H + 0.1 clipped into (2, 3).
double default_p(double hurst);

/// Joint second level ∫_s^t X_{s,u} ⊗ dB_u of the fOU path against its driver,
/// trapezoid rule on the fine grid composed onto the coarse grid.
struct CrossLift {
  SampleGrid grid;
  std::size_t dim;
  std::vector<double> areas;  // entry-major, d*d rows of n
  Flavor flavor;

  double area(std::size_t i, std::size_t j, std::size_t l) const { return areas[(i * dim + j) * grid.steps() + l]; }
};

CrossLift cross_lift(const PathMatrix& x, const PathMatrix& b, std::size_t substeps = 1);

/// ∫X ⊗ dB^{H,γ} = ∫X ⊗ ∘dB - σ φ^γ.
CrossLift to_ito_cross(const CrossLift& strat, const CorrectionTable& table, double sigma);

/// CSV rows `l,t,dX1..dXd,A11..Add,flavor`.
void write_lift_csv(const std::filesystem::path& file, const LiftedPath& lift);
LiftedPath read_lift_csv(const std::filesystem::path& file, std::span<const double> base_point = {});

}  // namespace roughou
