#include "ksdk/spde/spde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ksdk/error.hpp"
#include "ksdk/spectral/operators.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {

void SpdeConfig::validate() const {
  if (!(eps >= 0.0)) throw InputError("spde.eps must be >= 0");
  if (!(delta > 0.0)) throw InputError("spde.delta must be positive");
  det().validate();
  if (!(negativity_level_L > 0.0)) throw InputError("spde.negativity_level_L must be positive");
}

int SpdeConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

DetConfig SpdeConfig::det() const {
  DetConfig d;
  d.chi = chi;
  d.T = T;
  d.dt = dt;
  d.M = M;
  d.blowup_L2_threshold = blowup_threshold;
  d.positivity_floor = positivity_floor;
  d.scheme = scheme;
  return d;
}

double SpdeConfig::regular_scaling() const { return std::sqrt(eps) * std::pow(delta, -gamma - 2.0); }

double SpdeConfig::rough_scaling() const { return eps * std::log(1.0 / delta); }

namespace {

void fill_ou_fields(DetBaseline& b) {
  b.rho_grid.clear();
  b.grad_phi_grid.clear();
  b.rho_grid.reserve(b.det.size());
  b.grad_phi_grid.reserve(b.det.size());
  for (const auto& f : b.det.fields) {
    b.rho_grid.push_back(to_grid(f));
    b.grad_phi_grid.push_back(to_grid(green_gradient(f)));
  }
}

}  // namespace

DetBaseline DetBaseline::build(const FourierField& rho0, const SpdeConfig& cfg, bool with_ou_fields) {
  cfg.validate();
  DetBaseline b;
  b.det = solve_det(rho0, cfg.det());
  if (b.det.blew_up_at)
    throw InputError("deterministic solution blows up at t = " + std::to_string(*b.det.blew_up_at) +
                     " before T = " + std::to_string(cfg.T));
  b.sigma = SigmaPath(sqrt_det(b.det, cfg.positivity_floor).fields);
  if (with_ou_fields) fill_ou_fields(b);
  return b;
}

DetBaseline DetBaseline::uniform(const SpdeConfig& cfg, bool with_ou_fields) {
  cfg.validate();
  DetBaseline b;
  const FourierField one = FourierField::constant(cfg.M, 1.0);
  const int steps = cfg.steps();
  b.det.times.reserve(steps + 1);
  for (int s = 0; s <= steps; ++s) {
    b.det.times.push_back(s * cfg.dt);
    b.det.fields.push_back(one);
    b.det.min_value.push_back(1.0);
    b.det.energy_residual.push_back(0.0);
  }
  b.sigma = SigmaPath::constant(cfg.M, 1.0);
  if (with_ou_fields) fill_ou_fields(b);
  return b;
}

FourierField spde_step(const FourierField& rho, const FourierField& forcing, double eps,
                       double chi, const EtdWeights& weights, TimeScheme scheme) {
  FourierField next = det_step(rho, chi, weights, scheme);
  if (eps != 0.0) weights.add_phi1(next, forcing, -std::sqrt(eps));
  return next;
}

FourierField spde_step(const FourierField& rho, const RealGrid& sigma,
                       const ModeNoiseIncrement& incr, const MollifierSymbol& moll,
                       const SpdeConfig& cfg) {
  const EtdWeights& w = etd_weights(cfg.M, cfg.dt);
  if (cfg.eps == 0.0) return det_step(rho, cfg.chi, w, cfg.scheme);
  return spde_step(rho, noise_divergence(sigma, incr, moll), cfg.eps, cfg.chi, w, cfg.scheme);
}

StoppedPath solve_spde(const FourierField& rho0, const DetBaseline& base, const SpdeConfig& cfg,
                       std::uint64_t trajectory_id, const SpdeRunOptions& opts) {
  cfg.validate();
  if (rho0.resolution() != cfg.M || rho0.components() != 1)
    throw InputError("solve_spde: rho0 must be a scalar field at resolution spde.M");
  const int steps = cfg.steps();
  if (base.det.size() < static_cast<std::size_t>(steps + 1))
    throw InputError("solve_spde: deterministic baseline shorter than the SPDE horizon");
  const EtdWeights& weights = etd_weights(cfg.M, cfg.dt);
  const MollifierSymbol moll(cfg.M, cfg.delta);
  const RandomStream rng(cfg.seed, trajectory_id);
  const bool noisy = cfg.eps != 0.0;
  const bool need_forcing = noisy || opts.track_lolli;

  StoppedPath out;
  out.stopping_time = std::min(cfg.T, cfg.negativity_level_L);
  bool stopped = false;
  out.trajectory.times.push_back(0.0);
  out.trajectory.fields.push_back(rho0);
  FourierField rho = rho0;
  FourierField ti;
  if (opts.track_lolli) ti = FourierField(cfg.M);

  auto record = [&](int s, double t) -> bool {
    const RealGrid g = to_grid(rho);
    const double l2 = sobolev_norm(rho, 0.0);
    const double neg = negative_part_l2(g);
    out.negative_part_norm.push_back(neg);
    out.l2_norm.push_back(l2);
    if (!stopped && l2 > cfg.negativity_level_L) {
      out.stopping_time = std::min(out.stopping_time, t);
      stopped = true;
    }
    if (opts.observer)
      return opts.observer(SpdeStepView{s, t, rho, opts.track_lolli ? &ti : nullptr, neg, l2});
    return true;
  };

  if (!record(0, 0.0)) {
    out.stopped_early = true;
    return out;
  }
  for (int s = 0; s < steps; ++s) {
    const double t = (s + 1) * cfg.dt;
    FourierField forcing;
    if (need_forcing) {
      const auto incr = sample_increment(rng, static_cast<std::uint64_t>(s), cfg.M, cfg.dt, &moll);
      forcing = noise_divergence(base.sigma.at(static_cast<std::size_t>(s)), incr, moll);
    }
    try {
      rho = spde_step(rho, forcing, cfg.eps, cfg.chi, weights, cfg.scheme);
    } catch (const OverflowError&) {
      out.trajectory.blew_up_at = t;
      break;
    }
    if (opts.track_lolli) ti = lolli_step(ti, forcing, weights);
    if (sobolev_norm(rho, 0.0) > cfg.blowup_threshold) {
      out.trajectory.blew_up_at = t;
      break;
    }
    const bool keep_going = record(s + 1, t);
    const bool store = opts.store_stride > 0 && ((s + 1) % opts.store_stride == 0 || s + 1 == steps);
    if (store) {
      out.trajectory.times.push_back(t);
      out.trajectory.fields.push_back(rho);
    }
    if (!keep_going) {
      out.stopped_early = s + 1 < steps;
      break;
    }
  }
  if (out.trajectory.blew_up_at)
    out.stopping_time = std::min(out.stopping_time, *out.trajectory.blew_up_at);
  return out;
}

FourierField ou_drift(const FourierField& v, const RealGrid& rho_det, const RealGrid& grad_phi_det,
                      double chi) {
  const int M = v.resolution();
  if (chi == 0.0) return FourierField(M);
  const int n = grid_size(M);
  if (rho_det.n() != n || grad_phi_det.n() != n || grad_phi_det.components() != 2)
    throw ShapeError("ou_drift: deterministic grids do not match resolution");
  const std::size_t pts = static_cast<std::size_t>(n) * n;
  const FourierField grad_phi_v = green_gradient(v);
  std::vector<double> vg(pts), buf(pts);
  to_grid_component(v, 0, vg.data(), n);
  const double* r = rho_det.component(0);
  FourierField flux(M, 2);
  for (int j = 0; j < 2; ++j) {
    to_grid_component(grad_phi_v, j, buf.data(), n);
    const double* gp = grad_phi_det.component(j);
    for (std::size_t i = 0; i < pts; ++i) buf[i] = vg[i] * gp[i] + r[i] * buf[i];
    from_grid_component(buf.data(), n, flux, j);
  }
  dealias_in_place(flux);
  FourierField out = divergence(flux);
  out *= -chi;
  return out;
}

FourierField ou_step(const FourierField& v, const RealGrid& rho_det, const RealGrid& grad_phi_det,
                     const FourierField& forcing, double chi, const EtdWeights& weights,
                     TimeScheme scheme) {
  FourierField n0 = ou_drift(v, rho_det, grad_phi_det, chi);
  FourierField next = weights.propagate(v);
  weights.add_phi1(next, n0);
  if (scheme == TimeScheme::etdrk2 && chi != 0.0) {
    FourierField diff = ou_drift(next, rho_det, grad_phi_det, chi);
    diff -= n0;
    weights.add_phi2(next, diff);
  }
  weights.add_phi1(next, forcing, -1.0);
  if (!next.all_finite()) throw OverflowError("ou_step: non-finite coefficients");
  return next;
}

Trajectory solve_ou(const DetBaseline& base, const SpdeConfig& cfg, std::uint64_t trajectory_id,
                    int store_stride, const FieldObserver& observer) {
  cfg.validate();
  const int steps = cfg.steps();
  if (base.rho_grid.size() < static_cast<std::size_t>(steps + 1))
    throw InputError("solve_ou: baseline lacks fluctuation-equation fields");
  const EtdWeights& weights = etd_weights(cfg.M, cfg.dt);
  const MollifierSymbol white = MollifierSymbol::identity(cfg.M);
  const RandomStream rng(cfg.seed, trajectory_id);
  Trajectory out;
  FourierField v(cfg.M);
  out.times.push_back(0.0);
  out.fields.push_back(v);
  if (observer) observer(0, 0.0, v);
  for (int s = 0; s < steps; ++s) {
    const double t = (s + 1) * cfg.dt;
    const auto incr = sample_increment(rng, static_cast<std::uint64_t>(s), cfg.M, cfg.dt);
    const FourierField forcing = noise_divergence(base.sigma.at(static_cast<std::size_t>(s)), incr, white);
    v = ou_step(v, base.rho_grid[s], base.grad_phi_grid[s], forcing, cfg.chi, weights, cfg.scheme);
    if (observer) observer(s + 1, t, v);
    if (store_stride > 0 && ((s + 1) % store_stride == 0 || s + 1 == steps)) {
      out.times.push_back(t);
      out.fields.push_back(v);
    }
  }
  return out;
}

Trajectory skeleton_solve(const FourierField& rho0, const ControlPath& h, const DetBaseline& base,
                          const SpdeConfig& cfg) {
  DetConfig dc = cfg.det();
  dc.validate();
  const int steps = cfg.steps();
  if (h.size() < static_cast<std::size_t>(steps))
    throw InputError("skeleton_solve: control path has " + std::to_string(h.size()) +
                     " entries, need at least " + std::to_string(steps));
  if (rho0.resolution() != cfg.M || rho0.components() != 1)
    throw InputError("skeleton_solve: rho0 must be a scalar field at resolution spde.M");
  const EtdWeights& weights = etd_weights(cfg.M, cfg.dt);
  const int n = grid_size(cfg.M);
  const std::size_t pts = static_cast<std::size_t>(n) * n;
  std::vector<double> buf(pts);
  Trajectory out;
  out.times.push_back(0.0);
  out.fields.push_back(rho0);
  out.min_value.push_back(to_grid(rho0).min());
  FourierField rho = rho0;
  for (int s = 0; s < steps; ++s) {
    const double t = (s + 1) * cfg.dt;
    const FourierField& hs = h[s];
    if (hs.resolution() != cfg.M || hs.components() != 2)
      throw ShapeError("skeleton_solve: control must be a 2-vector field at resolution spde.M");
    const double* sg = base.sigma.at(static_cast<std::size_t>(s)).component(0);
    FourierField flux(cfg.M, 2);
    for (int j = 0; j < 2; ++j) {
      to_grid_component(hs, j, buf.data(), n);
      for (std::size_t i = 0; i < pts; ++i) buf[i] *= sg[i];
      from_grid_component(buf.data(), n, flux, j);
    }
    dealias_in_place(flux);
    try {
      rho = det_step(rho, cfg.chi, weights, cfg.scheme);
    } catch (const OverflowError&) {
      out.blew_up_at = t;
      break;
    }
    weights.add_phi1(rho, divergence(flux), -1.0);
    if (!rho.all_finite() || sobolev_norm(rho, 0.0) > cfg.blowup_threshold) {
      out.blew_up_at = t;
      break;
    }
    out.times.push_back(t);
    out.fields.push_back(rho);
    out.min_value.push_back(to_grid(rho).min());
  }
  out.energy_residual = energy_residual(out, cfg.chi);
  return out;
}

double rate_functional(const ControlPath& h, double dt) {
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double cur = std::pow(sobolev_norm(h[i], 0.0), 2);
    if (i > 0) total += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return 0.5 * total;
}

Trajectory fluctuation(const Trajectory& rho_path, const Trajectory& det, double eps) {
  if (!(eps > 0.0)) throw DomainError("fluctuation: eps must be positive");
  const double scale = 1.0 / std::sqrt(eps);
  Trajectory out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < rho_path.size(); ++i) {
    const double t = rho_path.times[i];
    while (j < det.size() && det.times[j] < t - 1e-12) ++j;
    if (j == det.size() || std::abs(det.times[j] - t) > 1e-12)
      throw ShapeError("fluctuation: time " + std::to_string(t) +
                       " is not on the deterministic time grid");
    FourierField f = rho_path.fields[i];
    f -= det.fields[j];
    f *= scale;
    out.times.push_back(t);
    out.fields.push_back(std::move(f));
  }
  return out;
}

}  // namespace ksdk
