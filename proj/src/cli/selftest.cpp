#include <cmath>
#include <vector>

#include "ksdk/cli/commands.hpp"
#include "ksdk/noise/philox.hpp"
#include "ksdk/particles/particles.hpp"
#include "ksdk/spectral/operators.hpp"

namespace ksdk {
namespace {

FourierField random_field(int M, std::uint64_t seed, int band) {
  const RandomStream rng(seed, 0);
  FourierField f(M);
  for_each_mode(M, [&](Mode w) {
    if (!in_upper_half(w) || std::abs(w.k1) > band || std::abs(w.k2) > band) return;
    const auto [a, b] = rng.normal_pair(0, mode_slot(w), 0, StreamPurpose::auxiliary);
    f.at(0, w) = Complex{a, b};
    f.at(0, -w) = Complex{a, -b};
  });
  f.at(0, 0, 0) = 1.0;
  return f;
}

SelfCheck at_most(std::string name, double value, double tol) { return {std::move(name), value <= tol, value, tol}; }

}  // namespace

std::vector<SelfCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelfCheck> out;

  {
    const PhiloxCounter a = philox4x32_10({0, 0, 0, 0}, {0, 0});
    const PhiloxCounter b = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
    const bool ok = a == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8} &&
                    b == PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1};
    out.push_back({"philox_known_answer", ok, ok ? 0.0 : 1.0, 0.0});
  }

  const int M = 16;
  const FourierField f = random_field(M, seed, 5);
  {
    FourierField r = laplacian(green_potential(f)) * -1.0;
    r.at(0, 0, 0) += f.mean();
    out.push_back(at_most("green_round_trip", (r - f).max_abs(), 1e-10));
  }
  out.push_back(at_most("parseval", std::abs(sobolev_norm(f, 0.0) - lp_norm(f, 2.0)), 1e-10));
  {
    const FourierField a = heat_propagate(heat_propagate(f, 0.01), 0.02);
    out.push_back(at_most("heat_semigroup", (a - heat_propagate(f, 0.03)).max_abs(), 1e-12));
  }

  DetConfig dc;
  dc.M = M;
  dc.T = 0.02;
  {
    dc.chi = 5.0;
    const Trajectory t = solve_det(FourierField::constant(M, 1.0), dc);
    out.push_back(at_most("uniform_fixed_point", (t.back() - FourierField::constant(M, 1.0)).max_abs(), 1e-12));
  }
  {
    dc.chi = 0.0;
    const Mode w{1, 2};
    const FourierField rho0 = FourierField::constant(M, 1.0) + FourierField::real_mode(M, w, Complex{0.1, 0.05});
    const Trajectory t = solve_det(rho0, dc);
    const Complex expect = Complex{0.1, 0.05} * std::exp(-laplace_symbol(w) * t.times.back());
    out.push_back(at_most("heat_mode_decay", std::abs(t.back().at(0, w) - expect), 1e-8));
  }

  SpdeConfig sc;
  sc.M = M;
  sc.T = 0.02;
  sc.chi = 1.0;
  sc.seed = seed;
  const FourierField rho0 = FourierField::constant(M, 1.0) + FourierField::real_mode(M, {1, 0}, Complex{0.1, 0.0});
  const DetBaseline base = DetBaseline::build(rho0, sc, false);
  {
    const ControlPath zero(static_cast<std::size_t>(sc.steps()) + 1, FourierField(M, 2, true));
    const Trajectory s = skeleton_solve(rho0, zero, base, sc);
    bool same = s.size() == base.det.size();
    for (std::size_t i = 0; same && i < s.size(); ++i) same = s.fields[i] == base.det.fields[i];
    out.push_back({"skeleton_zero_control", same, same ? 0.0 : 1.0, 0.0});
  }
  {
    SpdeConfig z = sc;
    z.eps = 0.0;
    SpdeRunOptions o;
    o.store_stride = 1;
    const StoppedPath p = solve_spde(rho0, base, z, 0, o);
    bool same = p.trajectory.size() == base.det.size();
    for (std::size_t i = 0; same && i < p.trajectory.size(); ++i) same = p.trajectory.fields[i] == base.det.fields[i];
    out.push_back({"spde_zero_noise", same, same ? 0.0 : 1.0, 0.0});
  }
  {
    const ControlPath h(static_cast<std::size_t>(sc.steps()) + 1, gradient(f));
    ControlPath h3 = h;
    for (auto& x : h3) x *= 3.0;
    const double r1 = rate_functional(h, sc.dt), r3 = rate_functional(h3, sc.dt);
    out.push_back(at_most("rate_homogeneity", std::abs(r3 - 9.0 * r1) / r1, 1e-12));
  }
  {
    const double v = std::abs(wrap_unit(-0.25) - 0.75) + std::abs(wrap_unit(1.0)) + std::abs(wrap_unit(2.5) - 0.5);
    out.push_back(at_most("torus_wrap", v, 0.0));
  }
  {
    // per-mode variance of the stochastic convolution at sigma = 1
    const int m = 6, n = 400, steps = 40;
    const double dt = 2.5e-4, delta = 0.1;
    const Mode w{1, 0};
    const MollifierSymbol moll(m, delta);
    const SigmaPath one = SigmaPath::constant(m, 1.0);
    const EtdWeights& weights = etd_weights(m, dt);
    std::vector<double> sq(n);
    for (int k = 0; k < n; ++k) {
      const RandomStream rng(seed, static_cast<std::uint64_t>(k));
      FourierField ti(m);
      for (int s = 0; s < steps; ++s)
        ti = lolli_step(ti, one.at(0), sample_increment(rng, static_cast<std::uint64_t>(s), m, dt, &moll), moll, weights);
      sq[static_cast<std::size_t>(k)] = std::norm(ti.at(0, w));
    }
    double mean = 0.0, var = 0.0;
    for (double x : sq) mean += x / n;
    for (double x : sq) var += (x - mean) * (x - mean) / (n - 1);
    const double lam = laplace_symbol(w), phi = moll(w);
    const double oracle = phi * phi * (1.0 - std::exp(-2.0 * lam * steps * dt)) / 2.0;
    const double z = std::abs(mean - oracle) / std::sqrt(var / n);
    out.push_back(at_most("ito_isometry_z", z, 4.0));
  }
  return out;
}

}  // namespace ksdk
