#pragma once

#include <random>

#include "thermaloc/opalg.hpp"

namespace thermaloc {

/// Complex matrix with independent standard normal real and imaginary parts.
Matrix random_matrix(Eigen::Index dim, std::mt19937_64& rng);
/// (M + M^dagger) / 2 for a random_matrix M.
Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace thermaloc
