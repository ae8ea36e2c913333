#ifndef ROFSIM_FFT_HPP
#define ROFSIM_FFT_HPP

#include <complex>
#include <vector>

namespace rofsim {
namespace fft {

using cvec = std::vector<std::complex<double>>;

/// In-place forward DFT, unnormalized (sum convention).
void forward(cvec& data);

/// In-place inverse DFT, normalized by 1/N.
void inverse(cvec& data);

cvec forward_copy(const cvec& data);
cvec inverse_copy(const cvec& data);

/// Signed baseband frequency of DFT bin k for an N-point transform at
/// sample rate fs: bins [0, N/2) map to [0, fs/2), the rest to negative
/// frequencies.
double bin_frequency(std::size_t k, std::size_t n, double sample_rate);

} // namespace fft
} // namespace rofsim

#endif
