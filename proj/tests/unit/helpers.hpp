// Shared fixtures for the unit tests.
#pragma once

#include <cmath>
#include <complex>

#include "ksdk/noise/philox.hpp"
#include "ksdk/spectral/field.hpp"

namespace ksdk::test {

/// Real field with standard normal coefficients on |w_i| <= band, given mean.
inline FourierField random_field(int M, std::uint64_t seed, int band, double mean = 1.0, int components = 1) {
  const RandomStream rng(seed, 7);
  FourierField f(M, components, true);
  for (int c = 0; c < components; ++c)
    for_each_mode(M, [&](Mode w) {
      if (!in_upper_half(w) || std::abs(w.k1) > band || std::abs(w.k2) > band) return;
      const auto [a, b] = rng.normal_pair(static_cast<std::uint64_t>(c), static_cast<std::uint32_t>((w.k1 + 512) * 1024 + w.k2 + 512), 0);
      const double s = 1.0 / (1.0 + w.norm_sq());
      f.at(c, w) = Complex{a * s, b * s};
      f.at(c, -w) = Complex{a * s, -b * s};
    });
  for (int c = 0; c < components; ++c) f.at(c, 0, 0) = mean;
  return f;
}

/// Direct evaluation of the Fourier series at x.
inline double evaluate(const FourierField& f, double x1, double x2, int c = 0) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  Complex s{};
  const int M = f.resolution();
  for (int k1 = -M; k1 <= M; ++k1)
    for (int k2 = -M; k2 <= M; ++k2)
      s += f.at(c, k1, k2) * std::polar(1.0, two_pi * (k1 * x1 + k2 * x2));
  return s.real();
}

}  // namespace ksdk::test
