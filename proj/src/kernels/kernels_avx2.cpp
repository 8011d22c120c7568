// Built with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "thermaloc/kernels.hpp"

namespace thermaloc::kernels::detail {

std::complex<double> weighted_triple_sum_avx2(const double* w, const std::complex<double>* a,
                                              const std::complex<double>* b, std::size_t n) noexcept {
  const auto* ap = reinterpret_cast<const double*>(a);
  const auto* bp = reinterpret_cast<const double*>(b);

  // Two complex numbers per register: [re0, im0, re1, im1].
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a0 = _mm256_loadu_pd(ap + 2 * i);
    const __m256d b0 = _mm256_loadu_pd(bp + 2 * i);
    const __m256d a1 = _mm256_loadu_pd(ap + 2 * i + 4);
    const __m256d b1 = _mm256_loadu_pd(bp + 2 * i + 4);

    const __m256d p0 = _mm256_addsub_pd(_mm256_mul_pd(_mm256_movedup_pd(a0), b0),
                                        _mm256_mul_pd(_mm256_permute_pd(a0, 0b1111), _mm256_permute_pd(b0, 0b0101)));
    const __m256d p1 = _mm256_addsub_pd(_mm256_mul_pd(_mm256_movedup_pd(a1), b1),
                                        _mm256_mul_pd(_mm256_permute_pd(a1, 0b1111), _mm256_permute_pd(b1, 0b0101)));

    // [w0, w0, w1, w1] and [w2, w2, w3, w3]
    const __m256d w01 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0b01010000);
    const __m256d w23 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i + 2)), 0b01010000);
    acc0 = _mm256_fmadd_pd(w01, p0, acc0);
    acc1 = _mm256_fmadd_pd(w23, p1, acc1);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  std::complex<double> sum(lanes[0] + lanes[2], lanes[1] + lanes[3]);

  if (i < n) sum += weighted_triple_sum_scalar(w + i, a + i, b + i, n - i);
  return sum;
}

std::complex<double> weighted_sum_avx2(const double* w, const std::complex<double>* a, std::size_t n) noexcept {
  const auto* ap = reinterpret_cast<const double*>(a);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w01 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0b01010000);
    const __m256d w23 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i + 2)), 0b01010000);
    acc0 = _mm256_fmadd_pd(w01, _mm256_loadu_pd(ap + 2 * i), acc0);
    acc1 = _mm256_fmadd_pd(w23, _mm256_loadu_pd(ap + 2 * i + 4), acc1);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  std::complex<double> sum(lanes[0] + lanes[2], lanes[1] + lanes[3]);

  if (i < n) sum += weighted_sum_scalar(w + i, a + i, n - i);
  return sum;
}

}  // namespace thermaloc::kernels::detail
