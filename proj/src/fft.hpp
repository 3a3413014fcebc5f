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

#include <complex>
#include <vector>

namespace roughou::detail {

/// In-place forward DFT X_k = Σ_j x_j e^{-2πi jk/N} backed by FFTW. Plans are
/// created with FFTW_ESTIMATE (deterministic) and cached per size.
void fft_forward(std::vector<std::complex<double>>& data);

}  // namespace roughou::detail
