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

// Reference implementations. Plain sequential loops; these define the
// expected values for the vectorized variants.

#include <cmath>
#include <limits>

#include "ngram_dp/kernels.h"

namespace ngram_dp {
namespace kernels {
namespace {

double SumScalar(const double* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double DotScalar(const double* x, const double* y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double SumSquaresScalar(const double* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double SumAbsScalar(const double* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double MaxScalar(const double* x, size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    if (x[i] > m) m = x[i];
  }
  return m;
}

void WeightedBlendScalar(double a, const double* w, const double* x, double b,
                         const double* y, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a * w[i] * x[i] + b * y[i];
}

void AddScalarScalar(double s, double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] += s;
}

void ScaleScalar(double s, double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= s;
}

void AddReluScalar(const double* x, const double* y, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const double v = x[i] + y[i];
    out[i] = v > 0.0 ? v : 0.0;
  }
}

}  // namespace

const KernelTable& ScalarKernels() {
  static constexpr KernelTable kTable = {
      .name = "scalar",
      .sum = SumScalar,
      .dot = DotScalar,
      .sum_squares = SumSquaresScalar,
      .sum_abs = SumAbsScalar,
      .max = MaxScalar,
      .weighted_blend = WeightedBlendScalar,
      .add_scalar = AddScalarScalar,
      .scale = ScaleScalar,
      .add_relu = AddReluScalar,
  };
  return kTable;
}

}  // namespace kernels
}  // namespace ngram_dp
