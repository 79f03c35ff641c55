#pragma once

// Thin FFTW wrapper used by the fGn synthesizer.

#include <complex>
#include <span>
#include <vector>

namespace scalefit::detail {

/// Real parts of the DFT of a real, even (circulant) sequence:
/// out[k] = sum_j c[j] exp(-2 pi i jk / n) for k = 0..n/2.
std::vector<double> real_even_spectrum(std::span<const double> c);

/// Inverse of a Hermitian half spectrum of length n/2 + 1, unnormalized:
/// x[j] = sum_{k=0}^{n-1} W[k] exp(+2 pi i jk / n) with W[n-k] = conj(W[k]).
std::vector<double> hermitian_synthesis(std::span<const std::complex<double>> half,
                                        std::size_t n);

}  // namespace scalefit::detail
