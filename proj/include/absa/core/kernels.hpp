#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Flat double-precision inner loops used by the tensor ops. Each instruction
// set provides the same table; the active one is picked once at startup
// (override with ABSA_KERNELS=scalar|avx2) and can be switched by tests.

namespace absa::core::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = a[i] + b[i]; out may alias a or b
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = a[i] * b[i]; out may alias a or b
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] += a[i] * b[i]
  void (*mul_add)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = max(x[i], 0)
  void (*relu)(const double* x, double* out, std::size_t n);
  // dx[i] += y[i] > 0 ? dy[i] : 0
  void (*relu_backward)(const double* y, const double* dy, double* dx, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);
/// Instruction sets both compiled in and supported by this CPU.
std::vector<Isa> available();
const KernelTable& table_for(Isa isa);

const KernelTable& active();
/// Throws ArgumentError when `isa` is unavailable.
void select(Isa isa);
std::string_view isa_name(Isa isa);

}  // namespace absa::core::kernels
