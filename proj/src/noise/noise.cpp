#include "ksdk/noise/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksdk/error.hpp"
#include "ksdk/parallel.hpp"
#include "ksdk/spectral/operators.hpp"

namespace ksdk {

double cutoff_profile(double radius) {
  const double r2 = radius * radius;
  if (!(r2 < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

MollifierSymbol::MollifierSymbol(int resolution, double delta, std::vector<double> values)
    : resolution_(resolution), delta_(delta), values_(std::move(values)) {}

MollifierSymbol::MollifierSymbol(int resolution, double delta)
    : resolution_(resolution), delta_(delta) {
  if (!(delta > 0.0))
    throw DomainError("MollifierSymbol: delta must be positive, got " + std::to_string(delta));
  values_.reserve(static_cast<std::size_t>(2 * resolution + 1) * (2 * resolution + 1));
  for_each_mode(resolution, [&](Mode w) {
    values_.push_back(cutoff_profile(delta * std::sqrt(static_cast<double>(w.norm_sq()))));
  });
}

MollifierSymbol MollifierSymbol::identity(int resolution) {
  return MollifierSymbol(
      resolution, 0.0,
      std::vector<double>(static_cast<std::size_t>(2 * resolution + 1) * (2 * resolution + 1), 1.0));
}

std::size_t MollifierSymbol::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

std::uint32_t mode_slot(Mode w) {
  return (static_cast<std::uint32_t>(w.k1 + 32768) << 16) |
         static_cast<std::uint32_t>(w.k2 + 32768);
}

ModeNoiseIncrement sample_increment(const RandomStream& rng, std::uint64_t step, int M, double dt,
                                    const MollifierSymbol* support) {
  if (!(dt > 0.0)) throw DomainError("sample_increment: dt must be positive");
  if (support && support->resolution() != M)
    throw ShapeError("sample_increment: support resolution mismatch");
  ModeNoiseIncrement incr{dt, FourierField(M, 2)};
  const double half_sd = std::sqrt(dt / 2.0);
  const double zero_sd = std::sqrt(dt);
  for (int j = 0; j < 2; ++j) {
    {
      const auto [z, unused] = rng.normal_pair(step, mode_slot({0, 0}), static_cast<std::uint32_t>(j));
      (void)unused;
      incr.dW.at(j, 0, 0) = zero_sd * z;
    }
    for_each_mode(M, [&](Mode w) {
      if (!in_upper_half(w)) return;
      if (support && (*support)(w) == 0.0) return;
      const auto [re, im] = rng.normal_pair(step, mode_slot(w), static_cast<std::uint32_t>(j));
      const Complex z{half_sd * re, half_sd * im};
      incr.dW.at(j, w) = z;
      incr.dW.at(j, -w) = std::conj(z);
    });
  }
  return incr;
}

FourierField mollified_noise_field(const ModeNoiseIncrement& incr, const MollifierSymbol& moll) {
  const int M = incr.resolution();
  if (moll.resolution() != M) throw ShapeError("mollified_noise_field: resolution mismatch");
  FourierField out = incr.dW;
  const auto& sym = moll.values();
  const double inv_dt = 1.0 / incr.dt;
  for (int j = 0; j < 2; ++j) {
    auto s = out.component_span(j);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= sym[i] * inv_dt;
  }
  return out;
}

SigmaPath::SigmaPath(const std::vector<FourierField>& fields) {
  if (fields.empty()) throw InputError("SigmaPath: empty path");
  resolution_ = fields.front().resolution();
  grids_.reserve(fields.size());
  for (const auto& f : fields) {
    if (f.resolution() != resolution_ || f.components() != 1)
      throw ShapeError("SigmaPath: fields must be scalars of one resolution");
    grids_.push_back(to_grid(f));
  }
}

SigmaPath SigmaPath::constant(int resolution, double value) {
  return SigmaPath({FourierField::constant(resolution, value)});
}

const RealGrid& SigmaPath::at(std::size_t step) const {
  if (grids_.empty()) throw InputError("SigmaPath: empty path");
  return grids_[std::min(step, grids_.size() - 1)];
}

double SigmaPath::sup() const {
  double s = 0.0;
  for (const auto& g : grids_) s = std::max(s, g.max());
  return s;
}

FourierField noise_divergence(const RealGrid& sigma, const ModeNoiseIncrement& incr,
                              const MollifierSymbol& moll) {
  const int M = incr.resolution();
  const int n = grid_size(M);
  if (sigma.n() != n) throw ShapeError("noise_divergence: sigma grid does not match resolution");
  const FourierField xi = mollified_noise_field(incr, moll);
  const std::size_t pts = static_cast<std::size_t>(n) * n;
  const double* s = sigma.component(0);
  if (std::all_of(s, s + pts, [](double v) { return v == 1.0; })) {
    FourierField flux = xi;
    dealias_in_place(flux);
    return divergence(flux);
  }
  std::vector<double> buf(pts);
  FourierField flux(M, 2);
  for (int j = 0; j < 2; ++j) {
    to_grid_component(xi, j, buf.data(), n);
    for (std::size_t i = 0; i < pts; ++i) buf[i] *= s[i];
    from_grid_component(buf.data(), n, flux, j);
  }
  dealias_in_place(flux);
  return divergence(flux);
}

FourierField lolli_step(const FourierField& ti, const FourierField& forcing,
                        const EtdWeights& weights) {
  FourierField next = weights.propagate(ti);
  weights.add_phi1(next, forcing);
  return next;
}

FourierField lolli_step(const FourierField& ti, const RealGrid& sigma,
                        const ModeNoiseIncrement& incr, const MollifierSymbol& moll,
                        const EtdWeights& weights) {
  return lolli_step(ti, noise_divergence(sigma, incr, moll), weights);
}

std::vector<LolliNormEstimate> lolli_norm_scan(const std::vector<double>& deltas,
                                               const SigmaPath& sigma,
                                               const LolliScanConfig& cfg) {
  if (!(cfg.gamma >= -1.0 && cfg.gamma <= 0.0))
    throw DomainError("lolli_norm_scan: gamma must lie in [-1, 0], got " + std::to_string(cfg.gamma));
  if (cfg.n_samples < 2) throw InputError("lolli_norm_scan: need at least 2 samples");
  const int M = sigma.resolution();
  const EtdWeights weights(M, cfg.dt);
  std::vector<LolliNormEstimate> out;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    const MollifierSymbol moll(M, deltas[d]);
    std::vector<double> sup_part(cfg.n_samples), l2_sq(cfg.n_samples);
    parallel_for(static_cast<std::size_t>(cfg.n_samples), cfg.workers, [&](std::size_t k) {
      const RandomStream rng(cfg.seed, k);
      FourierField ti(M);
      double sup = 0.0, integral = 0.0, prev = 0.0;
      for (int s = 0; s < cfg.steps; ++s) {
        const auto incr = sample_increment(rng, static_cast<std::uint64_t>(s), M, cfg.dt, &moll);
        ti = lolli_step(ti, sigma.at(static_cast<std::size_t>(s)), incr, moll, weights);
        sup = std::max(sup, sobolev_norm(ti, cfg.gamma));
        const double cur = std::pow(sobolev_norm(ti, cfg.gamma + 1.0), 2);
        integral += 0.5 * cfg.dt * (prev + cur);
        prev = cur;
      }
      sup_part[k] = sup;
      l2_sq[k] = integral;
    });
    LolliNormEstimate e;
    e.delta = deltas[d];
    e.n_samples = cfg.n_samples;
    const double n = cfg.n_samples;
    double m = 0.0, m2 = 0.0, q = 0.0, q2 = 0.0, sp = 0.0;
    for (int k = 0; k < cfg.n_samples; ++k) {
      const double v = sup_part[k] + std::sqrt(l2_sq[k]);
      m += v;
      m2 += v * v;
      q += l2_sq[k];
      q2 += l2_sq[k] * l2_sq[k];
      sp += sup_part[k];
    }
    m /= n;
    q /= n;
    e.mean = m;
    e.std_error = std::sqrt(std::max(0.0, (m2 / n - m * m) * n / (n - 1)) / n);
    e.sup_part = sp / n;
    e.l2_part_squared = q;
    e.l2_part_squared_stderr = std::sqrt(std::max(0.0, (q2 / n - q * q) * n / (n - 1)) / n);
    out.push_back(e);
  }
  return out;
}

double lolli_l2_h_oracle(int M, double delta, double s, double T) {
  const MollifierSymbol moll(M, delta);
  double total = 0.0;
  for_each_mode(M, [&](Mode w) {
    if (w == Mode{}) return;
    const double lam = laplace_symbol(w);
    const double phi = moll(w);
    total += std::pow(1.0 + lam, s) * phi * phi * (T / 2.0 + std::expm1(-2.0 * lam * T) / (4.0 * lam));
  });
  return total;
}

}  // namespace ksdk
