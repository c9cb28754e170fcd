#pragma once

#include <vector>

#include "complab/core.hpp"

namespace complab {

/// In-place iterative radix-2 FFT. Size must be a power of two.
/// inverse = true applies the conjugate transform and divides by n.
void fft_pow2(std::vector<cpx>& data, bool inverse);

}  // namespace complab
