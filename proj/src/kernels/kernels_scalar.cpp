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

#include "roughou/kernels.hpp"

namespace roughou::kernels::scalar {

// Lane k of the eight accumulators receives elements i with i % 8 == k. The
// final fold mirrors the AVX2 variant: add the two 4-wide halves lane-wise,
// then (l0 + l1) + (l2 + l3), then the tail in order.
namespace {
double fold(const double (&acc)[8]) {
  const double l0 = acc[0] + acc[4];
  const double l1 = acc[1] + acc[5];
  const double l2 = acc[2] + acc[6];
  const double l3 = acc[3] + acc[7];
  return (l0 + l1) + (l2 + l3);
}
}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  double s = fold(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* a, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t k = 0; k < 8; ++k) acc[k] += a[i + k];
  double s = fold(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

void scaled_product(const double* a, const double* b, double scale, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (scale * a[i]) * b[i];
}

void difference(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i + 1] - x[i];
}

void scale_interleaved(const double* f, double* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    data[2 * i] *= f[i];
    data[2 * i + 1] *= f[i];
  }
}

}  // namespace roughou::kernels::scalar
