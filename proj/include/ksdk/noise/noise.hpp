// Vector space-time white noise on [0,T] x T^2 through its Fourier modes,
// the mollifier symbol phi(delta w), and the stochastic convolution
//   ti = div I[sigma xi^delta],  (d/dt - Laplace) ti = div(sigma xi^delta), ti_0 = 0.
#pragma once

#include <cstdint>
#include <vector>

#include "ksdk/noise/philox.hpp"
#include "ksdk/spectral/etd.hpp"
#include "ksdk/spectral/field.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {

/// phi(x) = exp(1 - 1/(1 - |x|^2)) for |x| < 1, else 0; given through |x|.
double cutoff_profile(double radius);

class MollifierSymbol {
 public:
  /// Throws DomainError unless delta > 0.
  MollifierSymbol(int resolution, double delta);
  /// Symbol 1 on every retained mode (unmollified noise).
  static MollifierSymbol identity(int resolution);

  int resolution() const { return resolution_; }
  /// 0 for the identity symbol.
  double delta() const { return delta_; }
  double operator()(Mode w) const { return values_[index(w)]; }
  /// Values in field order (k1, k2), k_i in -M..M.
  const std::vector<double>& values() const { return values_; }
  /// Number of modes with a nonzero symbol.
  std::size_t support_size() const;

 private:
  MollifierSymbol(int resolution, double delta, std::vector<double> values);
  std::size_t index(Mode w) const {
    const std::size_t side = 2 * static_cast<std::size_t>(resolution_) + 1;
    return static_cast<std::size_t>(w.k1 + resolution_) * side + (w.k2 + resolution_);
  }

  int resolution_;
  double delta_;
  std::vector<double> values_;
};

/// Complex Brownian increments dW^j(w) over one step, j = 0, 1.
struct ModeNoiseIncrement {
  double dt = 0.0;
  FourierField dW;  // 2 components, Hermitian

  int resolution() const { return dW.resolution(); }
};

/// Counter slot of a lattice mode; independent of the resolution.
std::uint32_t mode_slot(Mode w);

/// Re and Im of each upper-half mode ~ N(0, dt/2), the zero mode ~ N(0, dt),
/// lower half by conjugation. Modes where `support` vanishes are left at zero
/// without drawing, which does not change any other mode.
ModeNoiseIncrement sample_increment(const RandomStream& rng, std::uint64_t step, int M, double dt,
                                    const MollifierSymbol* support = nullptr);

/// Component j at w: phi(delta w) dW^j(w) / dt.
FourierField mollified_noise_field(const ModeNoiseIncrement& incr, const MollifierSymbol& moll);

/// sigma_t on the quadrature grid per solver step; a path with one entry is
/// used for every step.
class SigmaPath {
 public:
  SigmaPath() = default;
  explicit SigmaPath(const std::vector<FourierField>& fields);
  static SigmaPath constant(int resolution, double value);

  int resolution() const { return resolution_; }
  std::size_t size() const { return grids_.size(); }
  /// Grid at the left endpoint of step `step` (clamped to the last entry).
  const RealGrid& at(std::size_t step) const;
  /// Largest grid value over the path.
  double sup() const;

 private:
  int resolution_ = 0;
  std::vector<RealGrid> grids_;
};

/// div(dealias(sigma * xi^delta)) for one increment.
FourierField noise_divergence(const RealGrid& sigma, const ModeNoiseIncrement& incr,
                              const MollifierSymbol& moll);

/// ti_{t+dt} = decay ti_t + phi1 forcing, forcing = noise_divergence(...).
FourierField lolli_step(const FourierField& ti, const FourierField& forcing,
                        const EtdWeights& weights);
FourierField lolli_step(const FourierField& ti, const RealGrid& sigma,
                        const ModeNoiseIncrement& incr, const MollifierSymbol& moll,
                        const EtdWeights& weights);

struct LolliNormEstimate {
  double delta = 0.0;
  int n_samples = 0;
  double mean = 0.0;    // E ||ti||_{C_T H^gamma} + E ||ti||_{L^2_T H^{gamma+1}}
  double std_error = 0.0;
  double sup_part = 0.0;          // E sup_t ||ti_t||_{H^gamma}
  double l2_part_squared = 0.0;   // E int_0^T ||ti_t||^2_{H^{gamma+1}} dt
  double l2_part_squared_stderr = 0.0;
};

struct LolliScanConfig {
  double gamma = 0.0;
  double dt = 2.5e-4;
  int steps = 1000;
  int n_samples = 100;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Monte Carlo estimates of E ||ti^delta||_{C_T H^gamma cap L^2_T H^{gamma+1}} per delta.
/// Throws DomainError unless gamma is in [-1, 0].
std::vector<LolliNormEstimate> lolli_norm_scan(const std::vector<double>& deltas,
                                               const SigmaPath& sigma,
                                               const LolliScanConfig& cfg);

/// E int_0^T ||ti_t||^2_{H^s} dt at sigma = 1 for the continuous-time process.
double lolli_l2_h_oracle(int M, double delta, double s, double T);

}  // namespace ksdk
