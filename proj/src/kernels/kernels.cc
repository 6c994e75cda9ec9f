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

#include "ngram_dp/kernels.h"

#include <cstdlib>
#include <string_view>

namespace ngram_dp {
namespace kernels {

const KernelTable& Active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("NGRAM_DP_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") {
      return ScalarKernels();
    }
    if (const KernelTable* avx2 = Avx2Kernels(); avx2 != nullptr) {
      return *avx2;
    }
    return ScalarKernels();
  }();
  return table;
}

}  // namespace kernels
}  // namespace ngram_dp
