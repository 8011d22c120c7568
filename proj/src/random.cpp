#include "thermaloc/random.hpp"

namespace thermaloc {

Matrix random_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      m(i, j) = cplx(re, normal(rng));
    }
  return m;
}

Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

}  // namespace thermaloc
