#include <atomic>
#include <cstdlib>
#include <string>

#include "thermaloc/error.hpp"
#include "thermaloc/kernels.hpp"

namespace thermaloc::kernels {

namespace {

Backend initial_backend() noexcept {
  if (const char* forced = std::getenv("THERMALOC_KERNEL"); forced && std::string(forced) == "scalar")
    return Backend::scalar;
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

std::string_view to_string(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept {
#if defined(THERMALOC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) fail(ErrorKind::invalid_argument, "AVX2 kernels unavailable on this CPU");
  current().store(b, std::memory_order_relaxed);
}

std::complex<double> weighted_triple_sum(std::span<const double> w, std::span<const std::complex<double>> a,
                                         std::span<const std::complex<double>> b) {
  if (w.size() != a.size() || a.size() != b.size()) fail(ErrorKind::invalid_argument, "kernel operand sizes differ");
#ifdef THERMALOC_HAVE_AVX2
  if (active_backend() == Backend::avx2) return detail::weighted_triple_sum_avx2(w.data(), a.data(), b.data(), w.size());
#endif
  return detail::weighted_triple_sum_scalar(w.data(), a.data(), b.data(), w.size());
}

std::complex<double> weighted_sum(std::span<const double> w, std::span<const std::complex<double>> a) {
  if (w.size() != a.size()) fail(ErrorKind::invalid_argument, "kernel operand sizes differ");
#ifdef THERMALOC_HAVE_AVX2
  if (active_backend() == Backend::avx2) return detail::weighted_sum_avx2(w.data(), a.data(), w.size());
#endif
  return detail::weighted_sum_scalar(w.data(), a.data(), w.size());
}

}  // namespace thermaloc::kernels
