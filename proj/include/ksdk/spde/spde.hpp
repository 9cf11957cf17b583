// Additive-noise Keller-Segel SPDE
//   rho = P rho_0 - chi div I[rho grad Phi_rho] - sqrt(eps) div I[sigma xi^delta],
// its linearisation v around rho_det (generalised Ornstein-Uhlenbeck), and the
// controlled skeleton equation. All three share the deterministic stepper.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ksdk/det/deterministic.hpp"
#include "ksdk/noise/noise.hpp"

namespace ksdk {

struct SpdeConfig {
  double eps = 1e-3;
  double delta = 0.1;
  double chi = 1.0;
  double T = 0.25;
  double dt = 2.5e-4;
  int M = 32;
  std::uint64_t seed = 1;
  double blowup_threshold = 1e3;
  double negativity_level_L = 1e3;
  double positivity_floor = 1e-8;
  /// Regularity used by the scaling diagnostic.
  double gamma = 0.0;
  TimeScheme scheme = TimeScheme::etdrk2;

  /// eps >= 0, delta > 0, dt > 0, T > 0, M >= 1; InputError otherwise.
  void validate() const;
  int steps() const;
  DetConfig det() const;
  /// eps^{1/2} delta^{-gamma-2}
  double regular_scaling() const;
  /// eps log(1/delta)
  double rough_scaling() const;
};

/// Read-only deterministic data shared by every Monte Carlo path.
struct DetBaseline {
  Trajectory det;
  SigmaPath sigma;
  /// rho_det and grad Phi_{rho_det} on the grid per step (filled on request).
  std::vector<RealGrid> rho_grid;
  std::vector<RealGrid> grad_phi_grid;

  /// Solves the deterministic problem on the config's grid. Throws InputError
  /// if it blows up before T; PositivityError if sqrt_det fails.
  static DetBaseline build(const FourierField& rho0, const SpdeConfig& cfg, bool with_ou_fields);
  /// sigma = 1 and rho_det = 1 without solving.
  static DetBaseline uniform(const SpdeConfig& cfg, bool with_ou_fields);
};

struct StoppedPath {
  Trajectory trajectory;
  /// min(T, L, first t with ||rho_t||_{L^2} > L).
  double stopping_time = 0.0;
  /// ||min(0, rho_t)||_{L^2} at every step (index 0 = t = 0).
  std::vector<double> negative_part_norm;
  /// ||rho_t||_{L^2} at every step.
  std::vector<double> l2_norm;
  /// True when an observer asked to stop before T.
  bool stopped_early = false;
};

struct SpdeStepView {
  int step;
  double t;
  const FourierField& rho;
  /// Stochastic convolution driven by the same increments, when tracked.
  const FourierField* lolli;
  /// ||min(0, rho)||_{L^2} and ||rho||_{L^2} at this step.
  double negative_part_l2;
  double l2_norm;
};

/// Returns false to end the path.
using SpdeObserver = std::function<bool(const SpdeStepView&)>;

struct SpdeRunOptions {
  /// Store every k-th field (and the last) in the trajectory; 0 stores t = 0 only.
  int store_stride = 0;
  bool track_lolli = false;
  SpdeObserver observer;
};

/// det_step(rho) - sqrt(eps) phi1 forcing, forcing = noise_divergence(...).
/// eps = 0 skips the noise term, reproducing det_step bit for bit.
FourierField spde_step(const FourierField& rho, const FourierField& forcing, double eps,
                       double chi, const EtdWeights& weights, TimeScheme scheme);
FourierField spde_step(const FourierField& rho, const RealGrid& sigma,
                       const ModeNoiseIncrement& incr, const MollifierSymbol& moll,
                       const SpdeConfig& cfg);

/// One path with noise keyed by (cfg.seed, trajectory_id).
StoppedPath solve_spde(const FourierField& rho0, const DetBaseline& base, const SpdeConfig& cfg,
                       std::uint64_t trajectory_id, const SpdeRunOptions& opts = {});

/// Linear drift of the fluctuation equation at one time:
/// -chi div(v grad Phi_det) - chi div(rho_det grad Phi_v), dealiased.
FourierField ou_drift(const FourierField& v, const RealGrid& rho_det, const RealGrid& grad_phi_det,
                      double chi);

/// ETD step of (d/dt - Laplace) v = ou_drift(v) - forcing, forcing being the
/// unmollified noise_divergence. The noise enters after the drift corrector,
/// as in spde_step, so the scheme is the linearisation of spde_step.
FourierField ou_step(const FourierField& v, const RealGrid& rho_det, const RealGrid& grad_phi_det,
                     const FourierField& forcing, double chi, const EtdWeights& weights,
                     TimeScheme scheme);

using FieldObserver = std::function<void(int step, double t, const FourierField& field)>;

/// v from v_0 = 0 with the same (seed, trajectory_id) keys as solve_spde,
/// so both are driven by one realisation of the noise on common modes.
/// Requires a baseline built with OU fields.
Trajectory solve_ou(const DetBaseline& base, const SpdeConfig& cfg, std::uint64_t trajectory_id,
                    int store_stride = 0, const FieldObserver& observer = {});

/// Control h: one 2-vector field per grid time (steps + 1 entries).
using ControlPath = std::vector<FourierField>;

/// rho^h = P rho_0 - chi div I[rho^h grad Phi] - div I[sigma h]; equals
/// solve_det when h = 0.
Trajectory skeleton_solve(const FourierField& rho0, const ControlPath& h, const DetBaseline& base,
                          const SpdeConfig& cfg);

/// 1/2 int_0^T ||h_t||^2_{L^2} dt, trapezoid rule on the grid times.
double rate_functional(const ControlPath& h, double dt);

/// Per time (rho_t - rho_det(t)) / sqrt(eps). Throws ShapeError on time-grid mismatch.
Trajectory fluctuation(const Trajectory& rho_path, const Trajectory& det, double eps);

}  // namespace ksdk
