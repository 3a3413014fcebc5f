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

#include <atomic>
#include <string>

#include "roughou/errors.hpp"
#include "roughou/kernels.hpp"

namespace roughou::kernels {

namespace {

struct Table {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*scaled_product)(const double*, const double*, double, double*, std::size_t);
  void (*difference)(const double*, double*, std::size_t);
  void (*scale_interleaved)(const double*, double*, std::size_t);
};

constexpr Table kScalar{Backend::scalar, scalar::dot, scalar::sum, scalar::scaled_product, scalar::difference,
                        scalar::scale_interleaved};
#if defined(ROUGHOU_HAVE_AVX2)
constexpr Table kAvx2{Backend::avx2, avx2::dot, avx2::sum, avx2::scaled_product, avx2::difference,
                      avx2::scale_interleaved};
#endif

bool cpu_has_avx2() noexcept {
#if defined(ROUGHOU_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* table_for(Backend b) noexcept {
#if defined(ROUGHOU_HAVE_AVX2)
  if (b == Backend::avx2) return &kAvx2;
#endif
  (void)b;
  return &kScalar;
}

const Table* initial_table() noexcept { return cpu_has_avx2() ? table_for(Backend::avx2) : &kScalar; }

std::atomic<const Table*> g_table{initial_table()};

const Table& active() noexcept { return *g_table.load(std::memory_order_relaxed); }

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": span sizes differ");
}

}  // namespace

std::string_view backend_name(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) noexcept { return b == Backend::scalar || cpu_has_avx2(); }

Backend active_backend() noexcept { return active().backend; }

void set_backend(Backend b) {
  if (!backend_available(b)) throw ValidationError("kernel backend '" + std::string(backend_name(b)) + "' unavailable");
  g_table.store(table_for(b), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  return active().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

void scaled_product(std::span<const double> a, std::span<const double> b, double scale, std::span<double> out) {
  require_same_size(a.size(), b.size(), "scaled_product");
  require_same_size(a.size(), out.size(), "scaled_product");
  active().scaled_product(a.data(), b.data(), scale, out.data(), a.size());
}

void difference(std::span<const double> x, std::span<double> out) {
  if (x.empty()) {
    require_same_size(out.size(), 0, "difference");
    return;
  }
  require_same_size(x.size() - 1, out.size(), "difference");
  active().difference(x.data(), out.data(), out.size());
}

void scale_interleaved(std::span<const double> factors, std::span<double> data) {
  require_same_size(2 * factors.size(), data.size(), "scale_interleaved");
  active().scale_interleaved(factors.data(), data.data(), factors.size());
}

}  // namespace roughou::kernels
