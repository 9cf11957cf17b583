// Truncated Fourier representation of real scalar/vector fields on the torus
// T^2 = R^2/Z^2.
//
// Convention: f(x) = sum_w fhat(w) exp(2 pi i <w, x>), fhat(w) = int f(x)
// exp(-2 pi i <w, x>) dx. Coefficients are kept for every mode with
// max(|w1|, |w2|) <= M and stored row-major in (component, w1, w2) with
// w_i running over -M..M.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ksdk {

using Complex = std::complex<double>;

struct Mode {
  int k1 = 0;
  int k2 = 0;

  friend bool operator==(const Mode&, const Mode&) = default;
  Mode operator-() const { return {-k1, -k2}; }
  int norm_sq() const { return k1 * k1 + k2 * k2; }
};

/// |2 pi w|^2, the symbol of -Laplacian.
inline double laplace_symbol(Mode w) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  return two_pi * two_pi * static_cast<double>(w.norm_sq());
}

class FourierField {
 public:
  FourierField() = default;
  FourierField(int resolution, int components = 1, bool is_real = true);

  static FourierField zeros(int resolution, int components = 1) {
    return FourierField(resolution, components, true);
  }
  static FourierField constant(int resolution, double value);
  /// amp * e_w + conj(amp) * e_{-w}; for w = 0 only the real part is kept.
  static FourierField real_mode(int resolution, Mode w, Complex amp);

  int resolution() const { return resolution_; }
  int components() const { return components_; }
  bool is_real() const { return is_real_; }
  void set_real(bool r) { is_real_ = r; }
  bool empty() const { return data_.empty(); }

  int side() const { return 2 * resolution_ + 1; }
  std::size_t modes() const {
    return static_cast<std::size_t>(side()) * static_cast<std::size_t>(side());
  }

  std::size_t index(int c, int k1, int k2) const {
    return (static_cast<std::size_t>(c) * side() + (k1 + resolution_)) * side() +
           (k2 + resolution_);
  }
  bool contains(Mode w) const {
    return w.k1 >= -resolution_ && w.k1 <= resolution_ && w.k2 >= -resolution_ &&
           w.k2 <= resolution_;
  }

  Complex& at(int c, int k1, int k2) { return data_[index(c, k1, k2)]; }
  const Complex& at(int c, int k1, int k2) const { return data_[index(c, k1, k2)]; }
  Complex& at(int c, Mode w) { return at(c, w.k1, w.k2); }
  const Complex& at(int c, Mode w) const { return at(c, w.k1, w.k2); }
  /// Coefficient of the first component, zero outside the retained lattice.
  Complex coeff(Mode w, int c = 0) const {
    return contains(w) ? at(c, w) : Complex{};
  }

  std::span<Complex> component_span(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * modes(), modes()};
  }
  std::span<const Complex> component_span(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * modes(), modes()};
  }
  std::span<Complex> coeffs() { return data_; }
  std::span<const Complex> coeffs() const { return data_; }

  FourierField component(int c) const;
  void set_component(int c, const FourierField& scalar);

  /// Mean over the torus of component c (the real part of the zero mode).
  double mean(int c = 0) const { return at(c, 0, 0).real(); }

  /// max |fhat(-w) - conj(fhat(w))| over all modes and components.
  double hermitian_defect() const;
  double max_abs() const;
  bool all_finite() const;
  /// Rebuilds fhat(-w) from fhat(w) on the half lattice and clears Im fhat(0).
  void symmetrize();

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(double s);

  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(FourierField a, double s) { return a *= s; }
  friend FourierField operator*(double s, FourierField a) { return a *= s; }

  friend bool operator==(const FourierField&, const FourierField&) = default;

 private:
  void require_same_shape(const FourierField& o) const;

  int resolution_ = 0;
  int components_ = 0;
  bool is_real_ = true;
  std::vector<Complex> data_;
};

/// Half-lattice representatives: w1 > 0, or w1 == 0 and w2 > 0.
inline bool in_upper_half(Mode w) { return w.k1 > 0 || (w.k1 == 0 && w.k2 > 0); }

/// Calls fn(Mode) for every retained mode of resolution M in storage order.
template <class Fn>
void for_each_mode(int M, Fn&& fn) {
  for (int k1 = -M; k1 <= M; ++k1)
    for (int k2 = -M; k2 <= M; ++k2) fn(Mode{k1, k2});
}

/// Largest retained index after 2/3-rule dealiasing.
inline int dealias_cutoff(int M) { return (2 * M) / 3; }

}  // namespace ksdk
