#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner loops of the network: dot products and axpy updates.
// Every kernel has a scalar reference in `kernels::scalar` and, on x86-64,
// an AVX2+FMA variant in `kernels::avx2`. The unqualified entry points
// dispatch to the backend selected at startup (best available, overridable
// through MLRANK_SIMD=scalar|avx2 or set_backend()).
namespace mlrank::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b) noexcept;

/// True when the backend was compiled in and the CPU supports it.
bool available(Backend b) noexcept;

Backend active_backend() noexcept;

/// Returns false (and changes nothing) if `b` is not available.
bool set_backend(Backend b) noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace avx2

}  // namespace mlrank::kernels
