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

// AVX2 + FMA variants. Functions carry per-function target attributes so the
// rest of the translation unit (and any inline code it pulls in) stays
// baseline x86-64.

#include "ngram_dp/kernels.h"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define NGRAM_DP_HAVE_AVX2 1
#include <immintrin.h>
#else
#define NGRAM_DP_HAVE_AVX2 0
#endif

namespace ngram_dp {
namespace kernels {

#if NGRAM_DP_HAVE_AVX2
namespace {

#define NGRAM_DP_AVX2 __attribute__((target("avx2,fma")))

NGRAM_DP_AVX2 inline double HorizontalSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

NGRAM_DP_AVX2 inline double HorizontalMax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, shuf));
}

NGRAM_DP_AVX2 double SumAvx2(const double* x, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

NGRAM_DP_AVX2 double DotAvx2(const double* x, const double* y, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 =
        _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 =
        _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

NGRAM_DP_AVX2 double SumSquaresAvx2(const double* x, size_t n) {
  return DotAvx2(x, x, n);
}

NGRAM_DP_AVX2 double SumAbsAvx2(const double* x, size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0,
                         _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
    acc1 = _mm256_add_pd(
        acc1, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0,
                         _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] < 0.0 ? -x[i] : x[i];
  return s;
}

NGRAM_DP_AVX2 double MaxAvx2(const double* x, size_t n) {
  double m = -__builtin_inf();
  size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) {
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    }
    m = HorizontalMax(acc);
  }
  for (; i < n; ++i) {
    if (x[i] > m) m = x[i];
  }
  return m;
}

NGRAM_DP_AVX2 void WeightedBlendAvx2(double a, const double* w, const double* x,
                                     double b, const double* y, double* out,
                                     size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_mul_pd(va, _mm256_loadu_pd(w + i)),
                               _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), wx));
  }
  for (; i < n; ++i) out[i] = a * w[i] * x[i] + b * y[i];
}

NGRAM_DP_AVX2 void AddScalarAvx2(double s, double* x, size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vs));
  }
  for (; i < n; ++i) x[i] += s;
}

NGRAM_DP_AVX2 void ScaleAvx2(double s, double* x, size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  }
  for (; i < n; ++i) x[i] *= s;
}

NGRAM_DP_AVX2 void AddReluAvx2(const double* x, const double* y, double* out,
                               size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_max_pd(v, zero));
  }
  for (; i < n; ++i) {
    const double v = x[i] + y[i];
    out[i] = v > 0.0 ? v : 0.0;
  }
}

#undef NGRAM_DP_AVX2

}  // namespace

const KernelTable* Avx2Kernels() {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static constexpr KernelTable kTable = {
      .name = "avx2",
      .sum = SumAvx2,
      .dot = DotAvx2,
      .sum_squares = SumSquaresAvx2,
      .sum_abs = SumAbsAvx2,
      .max = MaxAvx2,
      .weighted_blend = WeightedBlendAvx2,
      .add_scalar = AddScalarAvx2,
      .scale = ScaleAvx2,
      .add_relu = AddReluAvx2,
  };
  return supported ? &kTable : nullptr;
}

#else

const KernelTable* Avx2Kernels() { return nullptr; }

#endif  // NGRAM_DP_HAVE_AVX2

}  // namespace kernels
}  // namespace ngram_dp
