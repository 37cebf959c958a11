#pragma once

#include <cstddef>
#include <vector>

#include "tlab/common/rng.h"

namespace tlab::tensor {

// U(-a, a) with a = sqrt(6 / (fan_in + fan_out)), row-major [fan_in, fan_out].
std::vector<double> glorot_uniform(Rng& rng, std::size_t fan_in, std::size_t fan_out);

// Glorot draw whose rows (or columns, whichever are fewer) are made
// orthonormal by modified Gram-Schmidt.
std::vector<double> orthogonal(Rng& rng, std::size_t rows, std::size_t cols);

}  // namespace tlab::tensor
