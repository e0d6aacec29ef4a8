// Copyright 2026 The bfmdp Authors.
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
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bfmdp/kernels.hpp"

namespace bfmdp::kernels {

#if !defined(BFMDP_HAVE_AVX2_KERNELS)
namespace avx2 {
void backup(StageShape, std::span<const double>, std::span<const double>,
            std::span<const double>, std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
void push(StageShape, std::span<const double>, std::span<const double>,
          std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
}  // namespace avx2
#endif

namespace {

constexpr KernelTable kScalarTable{Target::Scalar, &scalar::backup, &scalar::push};
constexpr KernelTable kAvx2Table{Target::Avx2, &avx2::backup, &avx2::push};

const KernelTable* detect() {
  if (const char* forced = std::getenv("BFMDP_KERNELS"); forced && *forced) {
    const Target target = parse_target(forced);
    if (target == Target::Avx2 && !avx2_available())
      throw std::runtime_error("BFMDP_KERNELS=avx2 but AVX2/FMA is unavailable");
    return &table(target);
  }
  return avx2_available() ? &kAvx2Table : &kScalarTable;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{detect()};
  return current;
}

}  // namespace

bool avx2_available() {
#if defined(BFMDP_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported;
#else
  return false;
#endif
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void select(Target target) {
  if (target == Target::Avx2 && !avx2_available())
    throw std::invalid_argument("AVX2 kernels are not available on this machine");
  slot().store(&table(target), std::memory_order_release);
}

const KernelTable& table(Target target) {
  return target == Target::Avx2 ? kAvx2Table : kScalarTable;
}

std::string_view name(Target target) {
  return target == Target::Avx2 ? "avx2" : "scalar";
}

Target parse_target(std::string_view text) {
  if (text == "scalar") return Target::Scalar;
  if (text == "avx2") return Target::Avx2;
  throw std::invalid_argument("unknown kernel target '" + std::string(text) +
                              "' (expected scalar or avx2)");
}

}  // namespace bfmdp::kernels
