#include "ksdk/particles/particles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksdk/error.hpp"
#include "ksdk/spectral/operators.hpp"
#include "ksdk/spectral/transform.hpp"

namespace ksdk {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

double wrap_unit(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y = 0.0;  // x slightly below an integer
  return y;
}

InteractionKernel::InteractionKernel(int M_kernel, int table_size)
    : resolution_(M_kernel), n_(table_size == 0 ? 8 * M_kernel : table_size) {
  if (M_kernel < 1) throw InputError("InteractionKernel: M_kernel must be >= 1");
  if (n_ < 2 * M_kernel + 2)
    throw InputError("InteractionKernel: table of size " + std::to_string(n_) +
                     " cannot resolve M_kernel = " + std::to_string(M_kernel));
  // Coefficients of grad G: i w / (2 pi |w|^2).
  FourierField g(M_kernel, 2);
  for_each_mode(M_kernel, [&](Mode w) {
    if (w == Mode{}) return;
    const double s = 1.0 / (kTwoPi * w.norm_sq());
    g.at(0, w) = Complex{0.0, s * w.k1};
    g.at(1, w) = Complex{0.0, s * w.k2};
  });
  const RealGrid grid = to_grid(g, n_);
  table_ = grid.values();
}

Point InteractionKernel::exact(Point x) const {
  const int M = resolution_;
  std::vector<double> s1(2 * M + 1), c1(2 * M + 1), s2(2 * M + 1), c2(2 * M + 1);
  for (int k = -M; k <= M; ++k) {
    s1[k + M] = std::sin(kTwoPi * k * x[0]);
    c1[k + M] = std::cos(kTwoPi * k * x[0]);
    s2[k + M] = std::sin(kTwoPi * k * x[1]);
    c2[k + M] = std::cos(kTwoPi * k * x[1]);
  }
  Point out{0.0, 0.0};
  for_each_mode(M, [&](Mode w) {
    if (w == Mode{}) return;
    const double sn = s1[w.k1 + M] * c2[w.k2 + M] + c1[w.k1 + M] * s2[w.k2 + M];
    const double f = -sn / (kTwoPi * w.norm_sq());
    out[0] += f * w.k1;
    out[1] += f * w.k2;
  });
  return out;
}

Point InteractionKernel::operator()(Point x) const {
  const double u = wrap_unit(x[0]) * n_;
  const double v = wrap_unit(x[1]) * n_;
  int i0 = static_cast<int>(u);
  int j0 = static_cast<int>(v);
  if (i0 >= n_) i0 = n_ - 1;
  if (j0 >= n_) j0 = n_ - 1;
  const double a = u - i0;
  const double b = v - j0;
  const int i1 = (i0 + 1) % n_;
  const int j1 = (j0 + 1) % n_;
  const std::size_t plane = static_cast<std::size_t>(n_) * n_;
  Point out;
  for (int c = 0; c < 2; ++c) {
    const double* t = table_.data() + c * plane;
    const double f00 = t[static_cast<std::size_t>(i0) * n_ + j0];
    const double f01 = t[static_cast<std::size_t>(i0) * n_ + j1];
    const double f10 = t[static_cast<std::size_t>(i1) * n_ + j0];
    const double f11 = t[static_cast<std::size_t>(i1) * n_ + j1];
    out[c] = (1 - a) * ((1 - b) * f00 + b * f01) + a * ((1 - b) * f10 + b * f11);
  }
  return out;
}

ParticleState particle_step(const ParticleState& state, double chi, double dt,
                            const InteractionKernel& kernel, const RandomStream& rng,
                            std::uint64_t step) {
  if (!(dt > 0.0)) throw DomainError("particle_step: dt must be positive");
  const std::size_t N = state.size();
  std::vector<Point> drift(N, Point{0.0, 0.0});
  if (chi != 0.0 && N > 1) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) {
        const Point d{state.positions[i][0] - state.positions[j][0],
                      state.positions[i][1] - state.positions[j][1]};
        const Point f = kernel(d);
        drift[i][0] += f[0];
        drift[i][1] += f[1];
        drift[j][0] -= f[0];
        drift[j][1] -= f[1];
      }
  }
  const double scale = chi / static_cast<double>(N) * dt;
  const double sd = std::sqrt(2.0 * dt);
  ParticleState next;
  next.t = state.t + dt;
  next.positions.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto [z1, z2] =
        rng.normal_pair(step, static_cast<std::uint32_t>(i), 0, StreamPurpose::particle_noise);
    next.positions[i] = {wrap_unit(state.positions[i][0] + sd * z1 + scale * drift[i][0]),
                         wrap_unit(state.positions[i][1] + sd * z2 + scale * drift[i][1])};
  }
  return next;
}

FourierField empirical_density(const ParticleState& state, const MollifierSymbol& moll) {
  const int M = moll.resolution();
  const std::size_t N = state.size();
  if (N == 0) throw InputError("empirical_density: empty particle state");
  std::vector<Point> pts = state.positions;
  std::sort(pts.begin(), pts.end());
  const int side = 2 * M + 1;
  std::vector<Complex> acc(static_cast<std::size_t>(side) * side, Complex{});
  std::vector<Complex> e1(side), e2(side);
  for (const Point& p : pts) {
    for (int k = -M; k <= M; ++k) {
      e1[k + M] = std::polar(1.0, -kTwoPi * k * p[0]);
      e2[k + M] = std::polar(1.0, -kTwoPi * k * p[1]);
    }
    for (int a = 0; a < side; ++a) {
      Complex* row = acc.data() + static_cast<std::size_t>(a) * side;
      const Complex ea = e1[a];
      for (int b = 0; b < side; ++b) row[b] += ea * e2[b];
    }
  }
  FourierField f(M);
  const double inv_n = 1.0 / static_cast<double>(N);
  for_each_mode(M, [&](Mode w) {
    const std::size_t i = static_cast<std::size_t>(w.k1 + M) * side + (w.k2 + M);
    f.at(0, w) = moll(w) * inv_n * acc[i];
  });
  // Exact Hermitian symmetry and mass.
  for_each_mode(M, [&](Mode w) {
    if (in_upper_half(w)) f.at(0, -w) = std::conj(f.at(0, w));
  });
  f.at(0, 0, 0) = 1.0;
  return f;
}

ParticleState sample_initial_positions(const FourierField& rho0, std::size_t N,
                                       const RandomStream& rng) {
  const RealGrid g = to_grid(rho0);
  const int n = g.n();
  std::vector<double> cdf(g.points());
  double total = 0.0;
  for (std::size_t i = 0; i < g.points(); ++i) {
    total += std::max(0.0, g.values()[i]);
    cdf[i] = total;
  }
  if (!(total > 0.0)) throw InputError("sample_initial_positions: density has no positive mass");
  ParticleState s;
  s.positions.resize(N);
  for (std::size_t p = 0; p < N; ++p) {
    const auto [u, unused] =
        rng.uniform_pair(0, static_cast<std::uint32_t>(p), 0, StreamPurpose::initial_positions);
    (void)unused;
    const auto [a, b] =
        rng.uniform_pair(0, static_cast<std::uint32_t>(p), 1, StreamPurpose::initial_positions);
    const double target = u * total;
    std::size_t cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin());
    if (cell >= cdf.size()) cell = cdf.size() - 1;
    const int i1 = static_cast<int>(cell / n);
    const int i2 = static_cast<int>(cell % n);
    // Cell centred on the grid node.
    s.positions[p] = {wrap_unit((i1 + a - 0.5) / n), wrap_unit((i2 + b - 0.5) / n)};
  }
  return s;
}

ParticleState simulate_particles(ParticleState state, double chi, double dt, int steps,
                                 const InteractionKernel& kernel, const RandomStream& rng,
                                 const ParticleObserver& observer) {
  if (observer) observer(0, state);
  for (int s = 0; s < steps; ++s) {
    state = particle_step(state, chi, dt, kernel, rng, static_cast<std::uint64_t>(s));
    if (observer) observer(s + 1, state);
  }
  return state;
}

std::vector<double> mean_field_gap(const std::vector<ParticleState>& path, const Trajectory& det,
                                   const MollifierSymbol& moll, double gamma) {
  std::vector<double> out;
  out.reserve(path.size());
  for (const auto& st : path) {
    std::size_t j = 0;
    while (j < det.size() && std::abs(det.times[j] - st.t) > 1e-9) ++j;
    if (j == det.size())
      throw ShapeError("mean_field_gap: time " + std::to_string(st.t) +
                       " is not on the deterministic time grid");
    FourierField d = empirical_density(st, moll);
    const FourierField& r = det.fields[j];
    if (r.resolution() != d.resolution())
      throw ShapeError("mean_field_gap: resolution mismatch between density and trajectory");
    d -= r;
    out.push_back(sobolev_norm(d, gamma));
  }
  return out;
}

double iid_gap_squared(int M, double delta, double gamma, std::size_t N) {
  const MollifierSymbol moll(M, delta);
  double s = 0.0;
  for_each_mode(M, [&](Mode w) {
    if (w == Mode{}) return;
    const double p = moll(w);
    s += p * p * std::pow(1.0 + laplace_symbol(w), gamma);
  });
  return s / static_cast<double>(N);
}

}  // namespace ksdk
