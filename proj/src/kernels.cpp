// Copyright 2026 The vecforecast Authors.
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

#include "vf/kernels.hpp"

#include <algorithm>

#include <omp.h>

namespace vf::kernels {

namespace {

// Row i of C = A(n,k) * B(k,m): c[i,j] = sum_p a[i,p] * b[p,j].
inline void gemm_row(const double* a, const double* b, double* c, std::size_t i, std::size_t k,
                     std::size_t m) {
  double* crow = c + i * m;
  std::fill(crow, crow + m, 0.0);
  const double* arow = a + i * k;
  for (std::size_t p = 0; p < k; ++p) {
    const double av = arow[p];
    const double* brow = b + p * m;
    for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
  }
}

// Row p of C = A(n,k)^T * B(n,m): c[p,j] = sum_i a[i,p] * b[i,j].
inline void gemm_tn_row(const double* a, const double* b, double* c, std::size_t p,
                        std::size_t n, std::size_t k, std::size_t m) {
  double* crow = c + p * m;
  std::fill(crow, crow + m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double av = a[i * k + p];
    const double* brow = b + i * m;
    for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
  }
}

// Row i of C = A(n,m) * B(k,m)^T: c[i,q] = sum_j a[i,j] * b[q,j].
inline void gemm_nt_row(const double* a, const double* b, double* c, std::size_t i,
                        std::size_t m, std::size_t k) {
  const double* arow = a + i * m;
  for (std::size_t q = 0; q < k; ++q) {
    const double* brow = b + q * m;
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += arow[j] * brow[j];
    c[i * k + q] = acc;
  }
}

bool use_parallel(std::size_t work) {
  return work >= kParallelWorkThreshold && !omp_in_parallel() && omp_get_max_threads() > 1;
}

}  // namespace

namespace serial {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) gemm_row(a.data(), b.data(), c.data(), i, k, m);
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t p = 0; p < k; ++p) gemm_tn_row(a.data(), b.data(), c.data(), p, n, k, m);
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t m, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) gemm_nt_row(a.data(), b.data(), c.data(), i, m, k);
}

}  // namespace serial

namespace parallel {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t n, std::size_t k, std::size_t m) {
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) gemm_row(pa, pb, pc, i, k, m);
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m) {
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < k; ++p) gemm_tn_row(pa, pb, pc, p, n, k, m);
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t m, std::size_t k) {
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) gemm_nt_row(pa, pb, pc, i, m, k);
}

}  // namespace parallel

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t n, std::size_t k, std::size_t m) {
  if (use_parallel(n * k * m)) {
    parallel::gemm(a, b, c, n, k, m);
  } else {
    serial::gemm(a, b, c, n, k, m);
  }
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m) {
  if (use_parallel(n * k * m)) {
    parallel::gemm_tn(a, b, c, n, k, m);
  } else {
    serial::gemm_tn(a, b, c, n, k, m);
  }
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t m, std::size_t k) {
  if (use_parallel(n * k * m)) {
    parallel::gemm_nt(a, b, c, n, m, k);
  } else {
    serial::gemm_nt(a, b, c, n, m, k);
  }
}

}  // namespace vf::kernels
