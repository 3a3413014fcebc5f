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


#include <immintrin.h>

#include "roughou/kernels.hpp"

// Compiled with -mavx2 only; callers reach these through the dispatcher after
// a CPU check. No FMA: products and sums round exactly like the scalar path.
namespace roughou::kernels::avx2 {

namespace {
double fold(__m256d lo, __m256d hi) {
  alignas(32) double l[4];
  _mm256_store_pd(l, _mm256_add_pd(lo, hi));
  return (l[0] + l[1]) + (l[2] + l[3]);
}
}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  double s = fold(acc0, acc1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
  }
  double s = fold(acc0, acc1);
  for (; i < n; ++i) s += a[i];
  return s;
}

void scaled_product(const double* a, const double* b, double scale, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(vs, _mm256_loadu_pd(a + i)), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = (scale * a[i]) * b[i];
}

void difference(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = x[i + 1] - x[i];
}

void scale_interleaved(const double* f, double* data, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // (f0, f1) -> (f0, f0, f1, f1)
    const __m256d fv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(f + i)), 0x50);
    _mm256_storeu_pd(data + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(data + 2 * i), fv));
  }
  for (; i < n; ++i) {
    data[2 * i] *= f[i];
    data[2 * i + 1] *= f[i];
  }
}

}  // namespace roughou::kernels::avx2
