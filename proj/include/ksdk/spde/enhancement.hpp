// Canonical enhancement of the stochastic convolution ti:
//   ty = div I[ti grad Phi_ti],
//   tp = ty (.) grad Phi_ti + grad Phi_ty (.) ti,
//   tc_ij = d_i I[ti] (.) d_j Phi_ti + d_i d_j I[Phi_ti] (.) ti,
// with (.) the resonant product applied per component. I[ti] and the
// integrand of ty are integrated alongside ti by the same ETD weights.
#pragma once

#include <cstdint>
#include <vector>

#include "ksdk/noise/noise.hpp"
#include "ksdk/spde/spde.hpp"
#include "ksdk/spectral/littlewood_paley.hpp"

namespace ksdk {

struct EnhancementTuple {
  double t = 0.0;
  FourierField ti;  // scalar
  FourierField ty;  // scalar
  FourierField tp;  // 2-vector
  FourierField tc;  // 2x2, row-major as 4 components
};

/// Running Duhamel integrals (ti, I[ti], ty) of one path.
class EnhancementEvolution {
 public:
  EnhancementEvolution(int resolution, double dt);

  int resolution() const { return resolution_; }
  double time() const { return time_; }
  const FourierField& lolli() const { return ti_; }
  const FourierField& lolli_integral() const { return j_; }
  const FourierField& ty() const { return ty_; }

  /// Advances by dt with ti forced by `forcing` (a scalar field, e.g. noise_divergence).
  void step(const FourierField& forcing);
  /// Products at the current time.
  EnhancementTuple tuple(const LittlewoodPaley& lp) const;

 private:
  int resolution_;
  double dt_;
  const EtdWeights* weights_;
  double time_ = 0.0;
  FourierField ti_, j_, ty_;
};

/// Resonant products of an evolved state (exposed for tests).
EnhancementTuple enhancement_products(const FourierField& ti, const FourierField& lolli_integral,
                                      const FourierField& ty, const LittlewoodPaley& lp,
                                      double t = 0.0);

/// One noise-driven step (same increment convention as solve_spde).
void enhancement_step(EnhancementEvolution& state, const RealGrid& sigma,
                      const ModeNoiseIncrement& incr, const MollifierSymbol& moll);

/// Deterministic tuple path with ti^h = div I[sigma h]; tuples at steps
/// that are multiples of `stride` (and the last one).
std::vector<EnhancementTuple> enhancement_from_h(const ControlPath& h, const SigmaPath& sigma,
                                                 const SpdeConfig& cfg, int stride);

/// Besov (inf, inf) surrogate norms of one tuple at the given regularities.
struct EnhancementNorms {
  double ti = 0.0, ty = 0.0, tp = 0.0, tc = 0.0;
};

struct EnhancementRegularity {
  double ti = -1.25;
  double ty = -0.5;
  double tp = -0.75;
  double tc = -0.5;
};

EnhancementNorms enhancement_norms(const EnhancementTuple& x, const LittlewoodPaley& lp,
                                   const EnhancementRegularity& reg = {});

}  // namespace ksdk
