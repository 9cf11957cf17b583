#pragma once

#include <cstddef>
#include <vector>

#include "ksdk/spectral/field.hpp"

namespace ksdk {

/// Number of collocation points per direction for resolution M.
inline int grid_size(int M) { return 2 * M + 2; }

/// Real samples on the uniform grid x = (i1/n, i2/n), row-major (component, i1, i2).
class RealGrid {
 public:
  RealGrid() = default;
  RealGrid(int n, int components = 1)
      : n_(n), components_(components),
        values_(static_cast<std::size_t>(components) * n * n, 0.0) {}

  int n() const { return n_; }
  int components() const { return components_; }
  std::size_t points() const { return static_cast<std::size_t>(n_) * n_; }

  double& at(int c, int i1, int i2) {
    return values_[(static_cast<std::size_t>(c) * n_ + i1) * n_ + i2];
  }
  double at(int c, int i1, int i2) const {
    return values_[(static_cast<std::size_t>(c) * n_ + i1) * n_ + i2];
  }
  double* component(int c) { return values_.data() + static_cast<std::size_t>(c) * points(); }
  const double* component(int c) const {
    return values_.data() + static_cast<std::size_t>(c) * points();
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double min(int c = 0) const;
  double max(int c = 0) const;
  /// Quadrature mean (1/n^2) sum g, i.e. the integral over T^2.
  double mean(int c = 0) const;

 private:
  int n_ = 0;
  int components_ = 0;
  std::vector<double> values_;
};

/// Inverse transform of a real field onto its (2M+2)^2 grid, or onto a finer
/// n x n grid (n >= 2M+2) by zero padding.
/// Throws SymmetryError when the coefficients are not Hermitian.
RealGrid to_grid(const FourierField& f);
RealGrid to_grid(const FourierField& f, int n);

/// Forward transform of grid samples, truncated to |w_i| <= M.
/// The grid may be finer than 2M+2; the Nyquist line is dropped.
FourierField from_grid(const RealGrid& g, int M);

/// Transform of a single component into caller-provided storage (no Hermitian check).
void to_grid_component(const FourierField& f, int c, double* out, int n);
void from_grid_component(const double* in, int n, FourierField& out, int c);

/// Relative tolerance used by the Hermitian check in to_grid.
inline constexpr double kHermitianTolerance = 1e-9;

}  // namespace ksdk
