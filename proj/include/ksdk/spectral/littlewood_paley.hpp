// Dyadic Littlewood-Paley partition on Z^2 and the Besov / Bony calculus
// built on it.
//
// The radial profile is chi(r) = 1 for r <= a, 0 for r >= b, with a C^inf
// exp(-1/x) transition in between (a = 5/16, b = 15/32). Then
//   rho_{-1}(x) = chi(|x|),  rho_0(x) = chi(|x|/2) - chi(|x|),
//   rho_k(x)    = rho_0(2^{-k} x),
// so supp rho_{-1} lies in B(0, 1/2), supp rho_0 in {9/32 <= |x| <= 1} and
// the blocks telescope to 1.
#pragma once

#include <vector>

#include "ksdk/spectral/field.hpp"

namespace ksdk {

/// Smooth radial cutoff chi(r) described above.
double lp_radial_cutoff(double r);

/// rho_k(x) evaluated at a point of R^2 given through |x|.
double lp_symbol(int k, double radius);

inline constexpr double kLpInner = 5.0 / 16.0;
inline constexpr double kLpOuter = 15.0 / 32.0;

class LittlewoodPaley {
 public:
  explicit LittlewoodPaley(int resolution);

  int resolution() const { return resolution_; }
  /// Largest k whose block is non-empty on the retained lattice.
  int max_block() const { return max_block_; }
  /// rho_k(w); zero for k > max_block.
  double symbol(int k, Mode w) const;

  /// Delta_k f, applied per component. Blocks beyond max_block are zero fields.
  FourierField block(const FourierField& f, int k) const;

  /// l^q over k of 2^{k alpha} ||Delta_k f||_{L^p}, p, q in {1, 2, inf},
  /// L^p by grid quadrature.
  double besov_norm(const FourierField& f, double alpha, double p, double q) const;

  /// f (<) g = sum_k S_{k-1} f Delta_k g, with S_{k-1} = sum_{l <= k-2} Delta_l.
  FourierField paraproduct(const FourierField& f, const FourierField& g) const;
  /// f (.) g = sum_{|k-l| <= 1} Delta_l f Delta_k g.
  FourierField resonant(const FourierField& f, const FourierField& g) const;

 private:
  std::size_t table_index(int k, Mode w) const;

  int resolution_;
  int max_block_;
  std::vector<double> table_;  // (max_block + 2) x modes
};

}  // namespace ksdk
