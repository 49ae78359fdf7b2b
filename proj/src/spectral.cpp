#include "quermass/spectral.hpp"

#include <cmath>
#include <numbers>

namespace quermass::spectral {
namespace {

// Signed frequency of coefficient index j on an n-point grid.
int frequency(std::size_t j, std::size_t n) {
  const auto half = n / 2;
  return j <= half ? static_cast<int>(j)
                   : static_cast<int>(j) - static_cast<int>(n);
}

bool is_nyquist(std::size_t j, std::size_t n) {
  return n % 2 == 0 && j == n / 2;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    cos_table[i] = std::cos(a);
    sin_table[i] = std::sin(a);
  }
  std::vector<std::complex<double>> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      re += f[i] * cos_table[idx];
      im -= f[i] * sin_table[idx];
      idx += j;
      if (idx >= n) idx -= n;
    }
    c[j] = {re / n, im / n};
  }
  return c;
}

std::vector<double> inverse(std::span<const std::complex<double>> c) {
  const std::size_t n = c.size();
  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    cos_table[i] = std::cos(a);
    sin_table[i] = std::sin(a);
  }
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += c[j].real() * cos_table[idx] - c[j].imag() * sin_table[idx];
      idx += i;
      if (idx >= n) idx -= n;
    }
    f[i] = acc;
  }
  return f;
}

ValueSlope interpolate_with_slope(std::span<const std::complex<double>> coeffs,
                                  double x) {
  const std::size_t n = coeffs.size();
  double value = coeffs[0].real();
  double slope = 0.0;
  for (std::size_t j = 1; j <= n / 2; ++j) {
    const double k = static_cast<double>(j);
    const double ck = std::cos(k * x), sk = std::sin(k * x);
    if (is_nyquist(j, n)) {
      // Split evenly between +-N/2: only the cosine survives.
      value += coeffs[j].real() * ck;
      slope -= coeffs[j].real() * k * sk;
      continue;
    }
    // c_j e^{ikx} + c_{-j} e^{-ikx} for real data = 2 Re(c_j e^{ikx}).
    const std::complex<double> c = coeffs[j];
    value += 2.0 * (c.real() * ck - c.imag() * sk);
    slope += 2.0 * k * (-c.real() * sk - c.imag() * ck);
  }
  return {value, slope};
}

std::vector<double> interpolate(std::span<const double> f,
                                std::span<const double> x) {
  const auto c = forward(f);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = interpolate_with_slope(c, x[i]).value;
  }
  return out;
}

std::vector<double> derivative(std::span<const double> f, int order) {
  const std::size_t n = f.size();
  auto c = forward(f);
  for (std::size_t j = 0; j < n; ++j) {
    if (is_nyquist(j, n)) {
      c[j] = 0.0;
      continue;
    }
    const std::complex<double> ik(0.0, static_cast<double>(frequency(j, n)));
    std::complex<double> factor = 1.0;
    for (int p = 0; p < order; ++p) factor *= ik;
    c[j] *= factor;
  }
  return inverse(c);
}

std::vector<double> resample(std::span<const double> f, std::size_t m) {
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / m;
  }
  return interpolate(f, x);
}

}  // namespace quermass::spectral
