//
// Copyright 2026 The ngram-dp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef NGRAM_DP_KERNELS_H_
#define NGRAM_DP_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace ngram_dp {
namespace kernels {

// Dense double-precision loops over vocabulary-sized vectors. Every variant
// in a table computes the same quantity; only the accumulation order (and
// therefore the last few ulps) may differ between variants.
struct KernelTable {
  std::string_view name;
  double (*sum)(const double* x, size_t n);
  double (*dot)(const double* x, const double* y, size_t n);
  double (*sum_squares)(const double* x, size_t n);
  double (*sum_abs)(const double* x, size_t n);
  double (*max)(const double* x, size_t n);
  // out[i] = a * w[i] * x[i] + b * y[i]
  void (*weighted_blend)(double a, const double* w, const double* x, double b,
                         const double* y, double* out, size_t n);
  // x[i] += s
  void (*add_scalar)(double s, double* x, size_t n);
  // x[i] *= s
  void (*scale)(double s, double* x, size_t n);
  // out[i] = max(x[i] + y[i], 0)
  void (*add_relu)(const double* x, const double* y, double* out, size_t n);
};

const KernelTable& ScalarKernels();

// Returns nullptr when the binary or the running CPU lacks AVX2+FMA.
const KernelTable* Avx2Kernels();

// The table used by the library. Chosen once per process: AVX2 when
// available, unless the environment variable NGRAM_DP_KERNELS=scalar is set.
const KernelTable& Active();

inline double Sum(std::span<const double> x) {
  return Active().sum(x.data(), x.size());
}
inline double Dot(std::span<const double> x, std::span<const double> y) {
  return Active().dot(x.data(), y.data(), x.size());
}
inline double SumSquares(std::span<const double> x) {
  return Active().sum_squares(x.data(), x.size());
}
inline double SumAbs(std::span<const double> x) {
  return Active().sum_abs(x.data(), x.size());
}
inline double Max(std::span<const double> x) {
  return Active().max(x.data(), x.size());
}
inline void WeightedBlend(double a, std::span<const double> w,
                          std::span<const double> x, double b,
                          std::span<const double> y, std::span<double> out) {
  Active().weighted_blend(a, w.data(), x.data(), b, y.data(), out.data(),
                          out.size());
}
inline void AddScalar(double s, std::span<double> x) {
  Active().add_scalar(s, x.data(), x.size());
}
inline void Scale(double s, std::span<double> x) {
  Active().scale(s, x.data(), x.size());
}
inline void AddRelu(std::span<const double> x, std::span<const double> y,
                    std::span<double> out) {
  Active().add_relu(x.data(), y.data(), out.data(), out.size());
}

}  // namespace kernels
}  // namespace ngram_dp

#endif  // NGRAM_DP_KERNELS_H_
