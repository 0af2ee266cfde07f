#include <cstdlib>
#include <string>

#include "mlrank/kernels.hpp"

namespace mlrank::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(MLRANK_HAVE_AVX2) && defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct Table {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  void (*axpy)(double, const double*, double*, std::size_t) noexcept;
};

constexpr Table kScalar{Backend::scalar, &scalar::dot, &scalar::axpy};
constexpr Table kAvx2{Backend::avx2, &avx2::dot, &avx2::axpy};

const Table* initial_table() noexcept {
  if (const char* env = std::getenv("MLRANK_SIMD")) {
    if (std::string(env) == "scalar") return &kScalar;
  }
  return cpu_has_avx2() ? &kAvx2 : &kScalar;
}

const Table*& current() noexcept {
  static const Table* table = initial_table();
  return table;
}

}  // namespace

std::string_view to_string(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool available(Backend b) noexcept { return b == Backend::scalar || cpu_has_avx2(); }

Backend active_backend() noexcept { return current()->backend; }

bool set_backend(Backend b) noexcept {
  if (!available(b)) return false;
  current() = b == Backend::avx2 ? &kAvx2 : &kScalar;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return current()->dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  current()->axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace mlrank::kernels
