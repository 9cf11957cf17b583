#include "ksdk/spde/enhancement.hpp"

#include <limits>
#include <string>

#include "ksdk/error.hpp"
#include "ksdk/spectral/operators.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {
namespace {

// div(dealias(f grad Phi_f)) for a scalar f.
FourierField self_flux_divergence(const FourierField& f) {
  const int M = f.resolution();
  const int n = grid_size(M);
  const std::size_t pts = static_cast<std::size_t>(n) * n;
  const FourierField gp = green_gradient(f);
  std::vector<double> fg(pts), buf(pts);
  to_grid_component(f, 0, fg.data(), n);
  FourierField flux(M, 2);
  for (int j = 0; j < 2; ++j) {
    to_grid_component(gp, j, buf.data(), n);
    for (std::size_t i = 0; i < pts; ++i) buf[i] *= fg[i];
    from_grid_component(buf.data(), n, flux, j);
  }
  dealias_in_place(flux);
  return divergence(flux);
}

}  // namespace

EnhancementEvolution::EnhancementEvolution(int resolution, double dt)
    : resolution_(resolution),
      dt_(dt),
      weights_(&etd_weights(resolution, dt)),
      ti_(resolution),
      j_(resolution),
      ty_(resolution) {}

void EnhancementEvolution::step(const FourierField& forcing) {
  if (forcing.resolution() != resolution_ || forcing.components() != 1)
    throw ShapeError("EnhancementEvolution::step: forcing must be a scalar at the state resolution");
  const FourierField ty_rhs = self_flux_divergence(ti_);
  FourierField ty_next = weights_->propagate(ty_);
  weights_->add_phi1(ty_next, ty_rhs);
  FourierField j_next = weights_->propagate(j_);
  weights_->add_phi1(j_next, ti_);
  FourierField ti_next = weights_->propagate(ti_);
  weights_->add_phi1(ti_next, forcing);
  ty_ = std::move(ty_next);
  j_ = std::move(j_next);
  ti_ = std::move(ti_next);
  time_ += dt_;
}

EnhancementTuple EnhancementEvolution::tuple(const LittlewoodPaley& lp) const {
  return enhancement_products(ti_, j_, ty_, lp, time_);
}

EnhancementTuple enhancement_products(const FourierField& ti, const FourierField& lolli_integral,
                                      const FourierField& ty, const LittlewoodPaley& lp, double t) {
  const int M = ti.resolution();
  EnhancementTuple x;
  x.t = t;
  x.ti = ti;
  x.ty = ty;
  const FourierField grad_phi_ti = green_gradient(ti);
  const FourierField grad_phi_ty = green_gradient(ty);
  x.tp = FourierField(M, 2);
  for (int j = 0; j < 2; ++j) {
    FourierField c = lp.resonant(ty, grad_phi_ti.component(j));
    c += lp.resonant(grad_phi_ty.component(j), ti);
    x.tp.set_component(j, c);
  }
  const FourierField grad_j = gradient(lolli_integral);
  const FourierField hess_phi_j = hessian(green_potential(lolli_integral));
  x.tc = FourierField(M, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      FourierField c = lp.resonant(grad_j.component(i), grad_phi_ti.component(j));
      c += lp.resonant(hess_phi_j.component(2 * i + j), ti);
      x.tc.set_component(2 * i + j, c);
    }
  return x;
}

void enhancement_step(EnhancementEvolution& state, const RealGrid& sigma,
                      const ModeNoiseIncrement& incr, const MollifierSymbol& moll) {
  state.step(noise_divergence(sigma, incr, moll));
}

std::vector<EnhancementTuple> enhancement_from_h(const ControlPath& h, const SigmaPath& sigma,
                                                 const SpdeConfig& cfg, int stride) {
  const int steps = cfg.steps();
  if (h.size() < static_cast<std::size_t>(steps))
    throw InputError("enhancement_from_h: control path has " + std::to_string(h.size()) +
                     " entries, need at least " + std::to_string(steps));
  if (stride < 1) throw InputError("enhancement_from_h: stride must be >= 1");
  const int M = cfg.M;
  const int n = grid_size(M);
  const std::size_t pts = static_cast<std::size_t>(n) * n;
  const LittlewoodPaley lp(M);
  EnhancementEvolution state(M, cfg.dt);
  std::vector<EnhancementTuple> out;
  std::vector<double> buf(pts);
  for (int s = 0; s < steps; ++s) {
    if (h[s].resolution() != M || h[s].components() != 2)
      throw ShapeError("enhancement_from_h: control must be a 2-vector field at resolution spde.M");
    const double* sg = sigma.at(static_cast<std::size_t>(s)).component(0);
    FourierField flux(M, 2);
    for (int j = 0; j < 2; ++j) {
      to_grid_component(h[s], j, buf.data(), n);
      for (std::size_t i = 0; i < pts; ++i) buf[i] *= sg[i];
      from_grid_component(buf.data(), n, flux, j);
    }
    dealias_in_place(flux);
    state.step(divergence(flux));
    if ((s + 1) % stride == 0 || s + 1 == steps) out.push_back(state.tuple(lp));
  }
  return out;
}

EnhancementNorms enhancement_norms(const EnhancementTuple& x, const LittlewoodPaley& lp,
                                   const EnhancementRegularity& reg) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  EnhancementNorms n;
  n.ti = lp.besov_norm(x.ti, reg.ti, inf, inf);
  n.ty = lp.besov_norm(x.ty, reg.ty, inf, inf);
  n.tp = lp.besov_norm(x.tp, reg.tp, inf, inf);
  n.tc = lp.besov_norm(x.tc, reg.tc, inf, inf);
  return n;
}

}  // namespace ksdk
