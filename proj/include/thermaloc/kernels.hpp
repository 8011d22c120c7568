#pragma once

#include <complex>
#include <span>
#include <string_view>

namespace thermaloc::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b) noexcept;

/// True when the CPU reports AVX2 and FMA and the AVX2 kernels were built.
bool avx2_available() noexcept;

/// Backend used by the dispatching entry points. Defaults to the fastest
/// available one; THERMALOC_KERNEL=scalar in the environment forces scalar.
Backend active_backend() noexcept;
/// Throws invalid_argument when asking for a backend the CPU lacks.
void set_backend(Backend b);

/// sum_i w[i] * a[i] * b[i] with real weights. This is the contraction
/// behind every eigenbasis covariance: W_jk A_jk B^T_jk summed over j, k.
std::complex<double> weighted_triple_sum(std::span<const double> w, std::span<const std::complex<double>> a,
                                         std::span<const std::complex<double>> b);

/// sum_i w[i] * a[i] with real weights.
std::complex<double> weighted_sum(std::span<const double> w, std::span<const std::complex<double>> a);

namespace detail {
std::complex<double> weighted_sum_scalar(const double* w, const std::complex<double>* a, std::size_t n) noexcept;
std::complex<double> weighted_sum_avx2(const double* w, const std::complex<double>* a, std::size_t n) noexcept;
std::complex<double> weighted_triple_sum_scalar(const double* w, const std::complex<double>* a,
                                                const std::complex<double>* b, std::size_t n) noexcept;
std::complex<double> weighted_triple_sum_avx2(const double* w, const std::complex<double>* a,
                                              const std::complex<double>* b, std::size_t n) noexcept;
}  // namespace detail

}  // namespace thermaloc::kernels
