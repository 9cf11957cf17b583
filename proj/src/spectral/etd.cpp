#include "ksdk/spectral/etd.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <utility>
#include <string>

#include "ksdk/error.hpp"

namespace ksdk {
namespace {

void require_shape(const FourierField& u, const FourierField& f, int M) {
  if (u.resolution() != M || f.resolution() != M || u.components() != f.components())
    throw ShapeError("EtdWeights: operand shape mismatch");
}

}  // namespace

EtdWeights::EtdWeights(int resolution, double dt) : resolution_(resolution), dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("EtdWeights: dt must be positive, got " + std::to_string(dt));
  const std::size_t n = static_cast<std::size_t>(2 * resolution + 1) * (2 * resolution + 1);
  decay_.resize(n);
  phi1_.resize(n);
  phi2_.resize(n);
  std::size_t i = 0;
  for_each_mode(resolution, [&](Mode w) {
    const double lam = laplace_symbol(w);
    const double z = lam * dt;
    decay_[i] = std::exp(-z);
    if (w == Mode{}) {
      phi1_[i] = dt;
      phi2_[i] = dt / 2.0;
    } else {
      phi1_[i] = -std::expm1(-z) / lam;
      // Series for small z avoids cancellation in z - 1 + e^{-z}.
      if (z < 1e-3)
        phi2_[i] = dt * (0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0);
      else
        phi2_[i] = (z + std::expm1(-z)) / (lam * z);
    }
    ++i;
  });
}

FourierField EtdWeights::propagate(const FourierField& u) const {
  if (u.resolution() != resolution_) throw ShapeError("EtdWeights::propagate: resolution mismatch");
  FourierField out = u;
  for (int c = 0; c < u.components(); ++c) {
    auto s = out.component_span(c);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= decay_[i];
  }
  return out;
}

void EtdWeights::add_phi1(FourierField& u, const FourierField& f, double scale) const {
  require_shape(u, f, resolution_);
  for (int c = 0; c < u.components(); ++c) {
    auto du = u.component_span(c);
    auto df = f.component_span(c);
    for (std::size_t i = 0; i < du.size(); ++i) du[i] += (scale * phi1_[i]) * df[i];
  }
}

void EtdWeights::add_phi2(FourierField& u, const FourierField& f, double scale) const {
  require_shape(u, f, resolution_);
  for (int c = 0; c < u.components(); ++c) {
    auto du = u.component_span(c);
    auto df = f.component_span(c);
    for (std::size_t i = 0; i < du.size(); ++i) du[i] += (scale * phi2_[i]) * df[i];
  }
}

const EtdWeights& etd_weights(int resolution, double dt) {
  thread_local std::map<std::pair<int, double>, std::unique_ptr<EtdWeights>> cache;
  auto& slot = cache[{resolution, dt}];
  if (!slot) slot = std::make_unique<EtdWeights>(resolution, dt);
  return *slot;
}

}  // namespace ksdk
