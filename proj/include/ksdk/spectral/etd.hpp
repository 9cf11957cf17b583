// Per-mode exponential time differencing weights for (d/dt - Laplace) u = F.
//
//   decay(w) = exp(-lambda dt),
//   phi1(w)  = int_0^dt exp(-lambda s) ds = (1 - exp(-lambda dt)) / lambda,
//   phi2(w)  = int_0^dt exp(-lambda (dt - s)) s/dt ds
//            = (lambda dt - 1 + exp(-lambda dt)) / (lambda^2 dt),
// with lambda = |2 pi w|^2 and the limits dt, dt/2 at w = 0.
#pragma once

#include <vector>

#include "ksdk/spectral/field.hpp"

namespace ksdk {

class EtdWeights {
 public:
  EtdWeights(int resolution, double dt);

  int resolution() const { return resolution_; }
  double dt() const { return dt_; }

  double decay(std::size_t i) const { return decay_[i]; }
  double phi1(std::size_t i) const { return phi1_[i]; }
  double phi2(std::size_t i) const { return phi2_[i]; }

  /// decay * u (per component).
  FourierField propagate(const FourierField& u) const;
  /// u <- u + weight * f for weight in {phi1, phi2}.
  void add_phi1(FourierField& u, const FourierField& f, double scale = 1.0) const;
  void add_phi2(FourierField& u, const FourierField& f, double scale = 1.0) const;

 private:
  int resolution_;
  double dt_;
  std::vector<double> decay_;
  std::vector<double> phi1_;
  std::vector<double> phi2_;
};

/// Per-thread cache of weights keyed by (M, dt).
const EtdWeights& etd_weights(int resolution, double dt);

}  // namespace ksdk
