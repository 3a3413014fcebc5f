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
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a portable scalar reference and,
// where the build and CPU allow, an AVX2 variant picked at runtime. Reductions
// use the same eight-lane accumulation order in both variants and no fused
// multiply-add, so the variants agree bit for bit.
namespace roughou::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b) noexcept;
bool backend_available(Backend b) noexcept;
Backend active_backend() noexcept;

/// Switch the process-wide backend. Throws ValidationError if unavailable.
void set_backend(Backend b);

/// Σ a[i] b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// Σ a[i]
double sum(std::span<const double> a);

/// out[i] = (scale * a[i]) * b[i]
void scaled_product(std::span<const double> a, std::span<const double> b, double scale, std::span<double> out);

/// out[i] = x[i+1] - x[i]; out.size() == x.size() - 1
void difference(std::span<const double> x, std::span<double> out);

/// Multiplies interleaved complex values (re, im pairs) by real factors:
/// data[2i] *= f[i], data[2i+1] *= f[i].
void scale_interleaved(std::span<const double> factors, std::span<double> data);

// Direct access to each variant, for equivalence testing.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void scaled_product(const double* a, const double* b, double scale, double* out, std::size_t n);
void difference(const double* x, double* out, std::size_t n);
void scale_interleaved(const double* f, double* data, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void scaled_product(const double* a, const double* b, double scale, double* out, std::size_t n);
void difference(const double* x, double* out, std::size_t n);
void scale_interleaved(const double* f, double* data, std::size_t n);
}  // namespace avx2

}  // namespace roughou::kernels
