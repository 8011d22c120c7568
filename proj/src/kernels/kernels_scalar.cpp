#include "thermaloc/kernels.hpp"

namespace thermaloc::kernels::detail {

std::complex<double> weighted_triple_sum_scalar(const double* w, const std::complex<double>* a,
                                                const std::complex<double>* b, std::size_t n) noexcept {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += w[i] * (ar * br - ai * bi);
    im += w[i] * (ar * bi + ai * br);
  }
  return {re, im};
}

std::complex<double> weighted_sum_scalar(const double* w, const std::complex<double>* a, std::size_t n) noexcept {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += w[i] * a[i].real();
    im += w[i] * a[i].imag();
  }
  return {re, im};
}

}  // namespace thermaloc::kernels::detail
