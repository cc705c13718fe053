#pragma once

#include <complex>
#include <vector>

namespace prnls::detail {

/// Unnormalized in-place DFT over an n-dimensional cube of side N.
/// sign = -1 forward, +1 backward.
void dft(std::vector<std::complex<double>>& data, int n, int points, int sign);

}  // namespace prnls::detail
