// Periodic Keller-Segel particle system
//   dX^i = sqrt(2) dB^i + (chi/N) sum_{j != i} grad G(X^i - X^j) dt
// and its mollified empirical density.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ksdk/det/deterministic.hpp"
#include "ksdk/noise/noise.hpp"
#include "ksdk/noise/philox.hpp"
#include "ksdk/spectral/field.hpp"

namespace ksdk {

using Point = std::array<double, 2>;

struct ParticleState {
  double t = 0.0;
  std::vector<Point> positions;  // in [0, 1)^2

  std::size_t size() const { return positions.size(); }
};

/// Maps a coordinate into [0, 1).
double wrap_unit(double x);

/// Truncated series grad G(x) = -sum_{0 < max|w_i| <= M} w sin(2 pi w.x) / (2 pi |w|^2),
/// tabulated on an n x n grid (exact there) and interpolated bilinearly.
class InteractionKernel {
 public:
  /// table_size 0 means 8 * M_kernel.
  explicit InteractionKernel(int M_kernel = 32, int table_size = 0);

  int resolution() const { return resolution_; }
  int table_size() const { return n_; }
  /// Direct summation of the truncated series.
  Point exact(Point x) const;
  /// Bilinear lookup; odd in x.
  Point operator()(Point x) const;

 private:
  int resolution_;
  int n_;
  std::vector<double> table_;  // (component, i1, i2)
};

/// Euler-Maruyama step; noise keyed by (rng, step, particle index).
/// Interaction pairs are evaluated once and applied with opposite signs.
ParticleState particle_step(const ParticleState& state, double chi, double dt,
                            const InteractionKernel& kernel, const RandomStream& rng,
                            std::uint64_t step);

/// fhat(w) = phi(delta w) (1/N) sum_i exp(-2 pi i w.X^i). Particles are summed
/// in sorted order, so relabelling leaves the result bit-identical.
FourierField empirical_density(const ParticleState& state, const MollifierSymbol& moll);

/// N points drawn by inverse CDF from the grid density of rho0 (cell-uniform).
ParticleState sample_initial_positions(const FourierField& rho0, std::size_t N,
                                       const RandomStream& rng);

using ParticleObserver = std::function<void(int step, const ParticleState&)>;

/// Runs `steps` steps from `state`, calling observer at step 0 and after every step.
ParticleState simulate_particles(ParticleState state, double chi, double dt, int steps,
                                 const InteractionKernel& kernel, const RandomStream& rng,
                                 const ParticleObserver& observer = {});

/// ||empirical_density(X_t) - rho_det(t)||_{H^gamma} for each state; the
/// deterministic trajectory must contain every state time (ShapeError otherwise).
std::vector<double> mean_field_gap(const std::vector<ParticleState>& path, const Trajectory& det,
                                   const MollifierSymbol& moll, double gamma);

/// sum_{w != 0} phi(delta w)^2 (1 + |2 pi w|^2)^gamma / N: the expected squared
/// gap for N i.i.d. uniform particles against rho = 1.
double iid_gap_squared(int M, double delta, double gamma, std::size_t N);

}  // namespace ksdk
