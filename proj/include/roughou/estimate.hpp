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
#include <string>

#include "roughou/fbm.hpp"
#include "roughou/fou.hpp"
#include "roughou/matrix.hpp"
#include "roughou/rough.hpp"

namespace roughou {

struct EstimationResult {
  Matrix gamma_hat;    // Γ̂, with Γ̂ᵀ = -𝓛⁻¹ N
  Matrix denominator;  // 𝓛 ≈ ∫X⊗X ds
  Matrix numerator;    // N = Σ X_l ⊗ ΔX_l + 𝕏_l
  double condition;    // λ_max / λ_min of 𝓛
  SampleGrid grid;
  Flavor flavor;
};

/// Gram matrices beyond this condition number are refused.
inline constexpr double kMaxCondition = 1e12;

/// Γ̂ᵀ = -(h Σ_{l=0}^{n} X_l⊗X_l)⁻¹ (Σ_{l=0}^{n-1} X_l⊗ΔX_l + 𝕏_l) with the
/// Itô lift. Throws FlavorError for a Stratonovich lift and EstimationError
/// when the Gram matrix is singular or too ill-conditioned.
EstimationResult estimate_discrete(const LiftedPath& lift, const PathMatrix& path);

enum class GramRule {
  left,       // h Σ_{k=0}^{N} X_k⊗X_k, the sum estimate_discrete uses
  trapezoid,  // h Σ ½(X_k⊗X_k + X_{k+1}⊗X_{k+1})
};

/// Same estimator with ∫X⊗X ds taken on `path`, sampled on the lift grid
/// refined `refine` times. The numerator uses the coarse points.
EstimationResult estimate_continuous(const LiftedPath& lift, const PathMatrix& path, std::size_t refine,
                                     GramRule rule = GramRule::trapezoid);

/// d = 2 via the explicit inverse of the 2x2 Gram matrix.
EstimationResult closed_form_2d(const LiftedPath& lift, const PathMatrix& path);

namespace testing {
/// estimate_discrete without the flavor guard.
EstimationResult estimate_any_flavor(const LiftedPath& lift, const PathMatrix& path);
}  // namespace testing

/// Σ_l X_l⊗ΔB_l + (cross second level)_l, the discrete ∫X⊗dB. `x` and `b`
/// may be sampled on a refinement of the cross grid.
Matrix noise_integral(const PathMatrix& x, const PathMatrix& b, const CrossLift& cross);

/// Largest entry of ∫X⊗d𝐗 + (∫X⊗X ds)Γᵀ - σ∫X⊗d𝐁 at the discrete level,
/// with a left-point Gram sum. Lifts and the cross level must share flavor and grid.
double chain_rule_check(const LiftedPath& lift_x, const LiftedPath& lift_b, const CrossLift& cross,
                        const ModelSpec& model);

struct ScheduleCheck {
  double p;      // exponent in n h^p -> 0
  double value;  // n h^p
  bool ok;       // value < 1 and h < 1
};

/// p = (1 + (1+H+β)/(1+β)) / 2, midway through the admissible range.
ScheduleCheck check_schedule(double horizon, std::size_t steps, double hurst, double beta = 0.5);

/// {"gamma_hat", "condition", "T", "n", "h", "flavor"} as a JSON document.
std::string result_json(const EstimationResult& result);

}  // namespace roughou
