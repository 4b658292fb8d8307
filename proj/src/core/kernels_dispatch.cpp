#include <atomic>
#include <cstdlib>
#include <string>

#include "absa/core/error.hpp"
#include "absa/core/kernels.hpp"

namespace absa::core::kernels {

#ifndef ABSA_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::scalar};
  if (avx2_table() != nullptr && cpu_supports(Isa::avx2)) out.push_back(Isa::avx2);
  return out;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (avx2_table() == nullptr || !cpu_supports(Isa::avx2)) {
      throw ArgumentError("avx2 kernels are not available on this build/CPU");
    }
    return *avx2_table();
  }
  return scalar_table();
}

namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("ABSA_KERNELS");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return &scalar_table();
  const auto isas = available();
  if (want == "avx2" || want == "auto") return &table_for(isas.back());
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table_for(isa), std::memory_order_release); }

}  // namespace absa::core::kernels
