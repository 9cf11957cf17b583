#include "ksdk/det/deterministic.hpp"

#include <cmath>
#include <string>

#include "ksdk/error.hpp"
#include "ksdk/spectral/operators.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {
namespace {

void require_real_scalar(const FourierField& f, const char* op) {
  if (f.components() != 1 || !f.is_real())
    throw InputError(std::string(op) + ": expected a real scalar field");
}

}  // namespace

void DetConfig::validate() const {
  if (!(dt > 0.0)) throw InputError("det.dt must be positive");
  if (!(T > 0.0)) throw InputError("det.T must be positive");
  if (M < 1) throw InputError("det.M must be >= 1");
  if (!(positivity_floor >= 0.0)) throw InputError("det.positivity_floor must be >= 0");
}

int DetConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

FourierField ks_advection(const FourierField& rho, double chi) {
  require_real_scalar(rho, "ks_advection");
  const int M = rho.resolution();
  if (chi == 0.0) return FourierField(M);
  const int n = grid_size(M);
  const std::size_t pts = static_cast<std::size_t>(n) * n;
  const FourierField grad_phi = green_gradient(rho);
  std::vector<double> rho_g(pts), flux(pts);
  to_grid_component(rho, 0, rho_g.data(), n);
  FourierField flux_hat(M, 2);
  std::vector<double> gphi(pts);
  for (int j = 0; j < 2; ++j) {
    to_grid_component(grad_phi, j, gphi.data(), n);
    for (std::size_t i = 0; i < pts; ++i) flux[i] = rho_g[i] * gphi[i];
    from_grid_component(flux.data(), n, flux_hat, j);
  }
  dealias_in_place(flux_hat);
  FourierField out = divergence(flux_hat);
  out *= -chi;
  return out;
}

FourierField det_step(const FourierField& rho, double chi, const EtdWeights& weights,
                      TimeScheme scheme) {
  require_real_scalar(rho, "det_step");
  FourierField next = weights.propagate(rho);
  if (chi != 0.0) {
    const FourierField n0 = ks_advection(rho, chi);
    weights.add_phi1(next, n0);
    if (scheme == TimeScheme::etdrk2) {
      FourierField diff = ks_advection(next, chi);
      diff -= n0;
      weights.add_phi2(next, diff);
    }
  }
  if (!next.all_finite()) throw OverflowError("det_step: non-finite coefficients");
  return next;
}

FourierField det_step(const FourierField& rho, const DetConfig& cfg) {
  return det_step(rho, cfg.chi, etd_weights(cfg.M, cfg.dt), cfg.scheme);
}

Trajectory solve_det(const FourierField& rho0, const DetConfig& cfg) {
  cfg.validate();
  require_real_scalar(rho0, "solve_det");
  if (rho0.resolution() != cfg.M)
    throw InputError("solve_det: rho0 resolution " + std::to_string(rho0.resolution()) +
                     " differs from det.M = " + std::to_string(cfg.M));
  if (std::abs(rho0.mean() - 1.0) > 1e-12)
    throw InputError("solve_det: initial mean must be 1, got " + std::to_string(rho0.mean()));
  const double min0 = to_grid(rho0).min();
  if (!(min0 > 0.0))
    throw InputError("solve_det: initial data must be positive (min " + std::to_string(min0) + ")");
  if (!(cfg.blowup_L2_threshold > sobolev_norm(rho0, 0.0)))
    throw InputError("solve_det: blow-up threshold must exceed ||rho0||_L2");

  const EtdWeights& weights = etd_weights(cfg.M, cfg.dt);
  Trajectory traj;
  const int steps = cfg.steps();
  traj.times.reserve(steps + 1);
  traj.fields.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.fields.push_back(rho0);
  traj.min_value.push_back(min0);
  FourierField rho = rho0;
  for (int s = 1; s <= steps; ++s) {
    const double t = s * cfg.dt;
    try {
      rho = det_step(rho, cfg.chi, weights, cfg.scheme);
    } catch (const OverflowError&) {
      traj.blew_up_at = t;
      break;
    }
    if (sobolev_norm(rho, 0.0) > cfg.blowup_L2_threshold) {
      traj.blew_up_at = t;
      break;
    }
    traj.times.push_back(t);
    traj.min_value.push_back(to_grid(rho).min());
    traj.fields.push_back(rho);
  }
  traj.energy_residual = energy_residual(traj, cfg.chi);
  return traj;
}

std::vector<double> energy_residual(const Trajectory& traj, double chi) {
  std::vector<double> out;
  if (traj.fields.empty()) return out;
  out.reserve(traj.size());
  const double l2_0 = std::pow(sobolev_norm(traj.fields.front(), 0.0), 2);
  double diss = 0.0;  // int ||grad f||^2
  double react = 0.0;  // int (||f||_L3^3 - ||f||_L2^2)
  double prev_diss = 0.0, prev_react = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const FourierField& f = traj.fields[i];
    const double l2 = std::pow(sobolev_norm(f, 0.0), 2);
    const double grad2 = std::pow(sobolev_norm(gradient(f), 0.0), 2);
    const RealGrid g = to_grid(f);
    double l3 = 0.0;
    for (double v : g.values()) l3 += std::abs(v) * v * v;
    l3 /= static_cast<double>(g.points());
    const double cur_react = l3 - l2;
    if (i > 0) {
      const double h = traj.times[i] - traj.times[i - 1];
      diss += 0.5 * h * (prev_diss + grad2);
      react += 0.5 * h * (prev_react + cur_react);
    }
    prev_diss = grad2;
    prev_react = cur_react;
    out.push_back(l2 - l2_0 + 2.0 * diss - chi * react);
  }
  return out;
}

FourierField sqrt_field(const FourierField& rho, double floor) {
  require_real_scalar(rho, "sqrt_det");
  RealGrid g = to_grid(rho);
  for (double& v : g.values()) {
    if (!(v > floor))
      throw PositivityError("sqrt_det: density value " + std::to_string(v) +
                            " is not above the positivity floor " + std::to_string(floor));
    v = std::sqrt(v);
  }
  return from_grid(g, rho.resolution());
}

Trajectory sqrt_det(const Trajectory& traj, double floor) {
  Trajectory out;
  out.times = traj.times;
  out.blew_up_at = traj.blew_up_at;
  out.fields.reserve(traj.size());
  out.min_value.reserve(traj.size());
  for (const auto& f : traj.fields) {
    out.fields.push_back(sqrt_field(f, floor));
    out.min_value.push_back(to_grid(out.fields.back()).min());
  }
  return out;
}

}  // namespace ksdk
