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

#ifndef VF_KERNELS_HPP_
#define VF_KERNELS_HPP_

#include <cstddef>
#include <span>

namespace vf::kernels {

// Dense products on row-major buffers. Each output element is accumulated
// over the inner dimension in ascending order, so the serial and OpenMP
// variants produce bit-identical results.
//
//   gemm:     C(n,m)  = A(n,k)   * B(k,m)
//   gemm_tn:  C(k,m)  = A(n,k)^T * B(n,m)
//   gemm_nt:  C(n,k)  = A(n,m)   * B(k,m)^T
//
// C is overwritten.
namespace serial {
void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t n, std::size_t k, std::size_t m);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t m, std::size_t k);
}  // namespace serial

namespace parallel {
void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t n, std::size_t k, std::size_t m);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t m, std::size_t k);
}  // namespace parallel

// Work (multiply-adds) above which the dispatching entry points use the
// OpenMP variants. Inside an enclosing parallel region they stay serial.
inline constexpr std::size_t kParallelWorkThreshold = 1 << 18;

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c,
          std::size_t n, std::size_t k, std::size_t m);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t k, std::size_t m);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t n, std::size_t m, std::size_t k);

}  // namespace vf::kernels

#endif  // VF_KERNELS_HPP_
