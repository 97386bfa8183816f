#pragma once

#include "wds/common.hpp"

namespace wds::fft {

// Unnormalized transforms, any length (FFTW backend).
// forward: X_k = sum_n x_n exp(-j2*pi*nk/N)
// inverse: X_k = sum_n x_n exp(+j2*pi*nk/N)
CVec forward(const CVec& x);
CVec inverse(const CVec& x);

}  // namespace wds::fft
