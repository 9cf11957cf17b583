// Deterministic Keller-Segel dynamics on T^2,
//   (d/dt - Laplace) rho = -chi div(rho grad Phi_rho),  -Laplace Phi_rho = rho - mean(rho),
// solved in mild form with exponential time differencing.
#pragma once

#include <optional>
#include <vector>

#include "ksdk/spectral/etd.hpp"
#include "ksdk/spectral/field.hpp"

namespace ksdk {

enum class TimeScheme {
  etd1,    // nonlinearity frozen at the left endpoint
  etdrk2,  // Cox-Matthews predictor-corrector, second order
};

struct DetConfig {
  double chi = 1.0;
  double T = 0.25;
  double dt = 2.5e-4;
  int M = 32;
  double blowup_L2_threshold = 1e3;
  double positivity_floor = 1e-8;
  TimeScheme scheme = TimeScheme::etdrk2;

  /// Throws InputError on dt <= 0, T <= 0, M < 1.
  void validate() const;
  int steps() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FourierField> fields;
  /// Time of the first L^2 threshold crossing; no fields are stored from it on.
  std::optional<double> blew_up_at;
  /// Minimum grid value of component 0 per stored time.
  std::vector<double> min_value;
  /// Energy-identity residual per stored time (filled by solve_det).
  std::vector<double> energy_residual;

  std::size_t size() const { return fields.size(); }
  const FourierField& back() const { return fields.back(); }
};

/// -chi div(dealias(rho * grad Phi_rho)). Zero mean by construction.
FourierField ks_advection(const FourierField& rho, double chi);

/// One exponential-integrator step of the deterministic equation.
/// Throws OverflowError when the result is not finite.
FourierField det_step(const FourierField& rho, const DetConfig& cfg);
FourierField det_step(const FourierField& rho, double chi, const EtdWeights& weights,
                      TimeScheme scheme);

/// Integrates from rho0 on [0, T]. Requires a real scalar rho0 with mean 1 and
/// positive grid values (InputError otherwise). Stops at the first time the
/// L^2 norm exceeds cfg.blowup_L2_threshold.
Trajectory solve_det(const FourierField& rho0, const DetConfig& cfg);

/// ||f_t||^2 - ||f_0||^2 + 2 int ||grad f||^2 - chi int (||f||_{L3}^3 - ||f||_{L2}^2),
/// time integrals by the trapezoid rule, L^3 by grid quadrature.
std::vector<double> energy_residual(const Trajectory& traj, double chi);

/// Pointwise square root on the grid, re-transformed. Throws PositivityError if
/// any grid value is <= floor.
Trajectory sqrt_det(const Trajectory& traj, double floor);
FourierField sqrt_field(const FourierField& rho, double floor);

}  // namespace ksdk
