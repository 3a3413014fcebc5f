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

#include "roughou/fbm.hpp"
#include "roughou/matkernel.hpp"

namespace roughou {

/// dX = -Γ X dt + σ dB^H, X_0 = x0.
struct ModelSpec {
  std::size_t d = 1;
  SymMatrix gamma;
  double sigma = 1.0;
  double hurst = 0.5;
  std::vector<double> x0;  // empty means the origin
};

/// Validated model: Γ symmetric positive definite, σ >= 0, 1/3 < H <= 1/2.
ModelSpec make_model(const SymMatrix& gamma, double sigma, double hurst, std::vector<double> x0 = {});

/// Throws ValidationError/DomainError if the model violates its invariants.
void validate_model(const ModelSpec& model);

std::vector<double> initial_state(const ModelSpec& model);

/// Euler scheme X_{l+1} = X_l - Γ X_l h + σ ΔB_l on the driver's grid.
/// Only shapes are checked here, so degenerate drifts (Γ = 0) are allowed.
PathMatrix euler_simulate(const ModelSpec& model, const SampleGrid& grid, const PathMatrix& driver);

/// Stationary covariance r(t) = Cov(X_0, X_t) of the scalar fOU process with
/// rate λ. Uses the cosh / 1F2 closed form for λt <= 20 and the large-t
/// asymptotic series beyond. Accepts 0 < H <= 1/2.
double stationary_cov(double hurst, double lambda, double sigma, double t);

inline constexpr double kStationaryCovSwitch = 20.0;

/// Closed form σ²/(2λ^{2H}) G(2H+1) cosh(λt) - σ²/2 t^{2H} 1F2(1; H+½, H+1; λ²t²/4).
/// Throws NumericError when the cancellation between the two terms costs more
/// than 1e-6 relative to r(0); use the asymptotic branch there.
double stationary_cov_hypergeometric(double hurst, double lambda, double sigma, double t);

/// ½σ² Σ_{m=1}^{terms} λ^{-2m} Π_{k=0}^{2m-1}(2H-k) t^{2H-2m}, valid for large λt.
double stationary_cov_asymptotic(double hurst, double lambda, double sigma, double t, int terms = 4);

/// Spectral representation evaluated by numerical quadrature; an independent
/// check of the closed form.
double stationary_cov_spectral(double hurst, double lambda, double sigma, double t);

/// Cov(X_{t2} - X_{t1}, X_{t4} - X_{t3}) for the stationary process.
double increment_covariance(double hurst, double lambda, double sigma, double t1, double t2, double t3, double t4);

/// Where r'' changes sign: r is convex on (0, t0) and concave after t1.
struct ConvexityChange {
  double t0;
  double t1;
};

/// Scans a central-difference r'' on a grid of spacing `step` over (0, t_max].
/// Throws NumericError if r'' never turns negative.
ConvexityChange find_convexity_change(double hurst, double lambda, double sigma, double t_max = 20.0,
                                      double step = 1e-3);

struct LimitConstants {
  Matrix c1;
  Matrix c2;
};

/// C1(H) = σ² H ∫_0^∞ x^{2H-1} e^{-Γx} dx, the ergodic limit of (1/T)∫X⊗X.
Matrix c1_limit(const ModelSpec& model);

/// C2(H) = -Γ C1(H), the ergodic limit of (1/T)∫X⊗dX in the Itô sense.
Matrix c2_limit(const ModelSpec& model);

LimitConstants limit_constants(const ModelSpec& model);

/// Γ = Sbarᵀ Λ Sbar with Λ diagonal ascending and Sbar orthogonal.
struct Orthogonalization {
  Matrix lambda;
  Matrix sbar;
};

Orthogonalization orthogonalize(const SymMatrix& gamma);

}  // namespace roughou
