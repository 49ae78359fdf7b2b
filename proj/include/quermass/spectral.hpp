#pragma once

// Trigonometric (Fourier) tools on uniformly sampled 2*pi-periodic data.
// Direct O(N^2) transforms: grids here are a few thousand points at most.

#include <complex>
#include <span>
#include <vector>

namespace quermass::spectral {

/// Coefficients c_j, j = 0..N-1, with f_i = sum_j c_j exp(i j x_i) for the
/// usual aliased frequencies (j > N/2 stands for j - N).
std::vector<std::complex<double>> forward(std::span<const double> f);

/// Inverse of forward on the same grid (real part).
std::vector<double> inverse(std::span<const std::complex<double>> c);

/// Spectral derivative of the given order. The Nyquist mode is dropped, so
/// derivative(derivative(f, 1), 1) == derivative(f, 2) up to rounding.
std::vector<double> derivative(std::span<const double> f, int order);

/// Evaluates the trigonometric interpolant of f at arbitrary abscissae.
std::vector<double> interpolate(std::span<const double> f,
                                std::span<const double> x);

/// Value and first derivative of the interpolant at a single abscissa.
struct ValueSlope {
  double value;
  double slope;
};
ValueSlope interpolate_with_slope(std::span<const std::complex<double>> coeffs,
                                  double x);

/// Resamples f onto m >= f.size() uniform points (zero padding).
std::vector<double> resample(std::span<const double> f, std::size_t m);

}  // namespace quermass::spectral
