#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ksdk/error.hpp"
#include "ksdk/particles/particles.hpp"
#include "ksdk/spectral/operators.hpp"

using namespace ksdk;

namespace {

double torus_diff(double a, double b) {
  double d = a - b;
  return d - std::round(d);
}

ParticleState uniform_state(std::size_t N, std::uint64_t seed) {
  return sample_initial_positions(FourierField::constant(8, 1.0), N, RandomStream(seed, 0));
}

}  // namespace

TEST_CASE("wrap onto the unit interval") {
  CHECK(wrap_unit(0.25) == 0.25);
  CHECK(wrap_unit(-0.25) == 0.75);
  CHECK(wrap_unit(1.0) == 0.0);
  CHECK(wrap_unit(2.5) == 0.5);
  CHECK(wrap_unit(-1e-20) < 1.0);
}

TEST_CASE("kernel is the gradient of the Green function") {
  // grad G has Fourier coefficients 2 pi i w / |2 pi w|^2 = green_gradient of the point mass
  const int M = 8, n = 64;
  FourierField dirac(M);
  for (auto& z : dirac.coeffs()) z = 1.0;
  const RealGrid g = to_grid(green_gradient(dirac), n);
  const InteractionKernel k(M, n);
  for (int i1 : {0, 5, 17, 40})
    for (int i2 : {3, 31, 63}) {
      const Point x{double(i1) / n, double(i2) / n};
      const Point e = k.exact(x), t = k(x);
      CHECK(e[0] == doctest::Approx(g.at(0, i1, i2)).epsilon(1e-10).scale(1.0));
      CHECK(e[1] == doctest::Approx(g.at(1, i1, i2)).epsilon(1e-10).scale(1.0));
      CHECK(t[0] == doctest::Approx(e[0]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("kernel is odd") {
  const InteractionKernel k(16);
  for (const Point x : {Point{0.1, 0.3}, Point{0.77, 0.01}, Point{0.5, 0.5}, Point{0.013, 0.9}}) {
    const Point a = k(x), b = k({wrap_unit(-x[0]), wrap_unit(-x[1])});
    CHECK(a[0] == doctest::Approx(-b[0]).epsilon(1e-12).scale(1.0));
    CHECK(a[1] == doctest::Approx(-b[1]).epsilon(1e-12).scale(1.0));
    const Point e = k.exact(x);
    CHECK(a[0] == doctest::Approx(e[0]).epsilon(0.05).scale(1.0));
  }
}

TEST_CASE("interaction conserves the centre of mass") {
  const InteractionKernel k(16);
  const ParticleState s0 = uniform_state(200, 1);
  const RandomStream rng(1, 0);
  const ParticleState a = particle_step(s0, 25.0, 1e-3, k, rng, 0);
  const ParticleState b = particle_step(s0, 0.0, 1e-3, k, rng, 0);
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < s0.size(); ++i) {
    sx += torus_diff(a.positions[i][0], b.positions[i][0]);
    sy += torus_diff(a.positions[i][1], b.positions[i][1]);
    CHECK(a.positions[i][0] >= 0.0);
    CHECK(a.positions[i][0] < 1.0);
  }
  CHECK(std::abs(sx) <= 1e-10);
  CHECK(std::abs(sy) <= 1e-10);
  CHECK(a.t == doctest::Approx(1e-3));
}

TEST_CASE("two particles attract for chi > 0 and repel for chi < 0") {
  const InteractionKernel k(16);
  ParticleState s;
  s.positions = {{0.45, 0.5}, {0.55, 0.5}};
  const RandomStream rng(2, 0);
  const ParticleState free = particle_step(s, 0.0, 1e-4, k, rng, 0);
  const ParticleState att = particle_step(s, 5.0, 1e-4, k, rng, 0);
  const ParticleState rep = particle_step(s, -5.0, 1e-4, k, rng, 0);
  auto gap = [](const ParticleState& p) { return torus_diff(p.positions[1][0], p.positions[0][0]); };
  CHECK(gap(att) < gap(free));
  CHECK(gap(rep) > gap(free));
}

TEST_CASE("Brownian increments have variance 2 dt per coordinate") {
  const InteractionKernel k(4);
  const ParticleState s0 = uniform_state(20000, 3);
  const double dt = 1e-4;
  const ParticleState s1 = particle_step(s0, 0.0, dt, k, RandomStream(3, 0), 0);
  double m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < s0.size(); ++i) {
    const double d = torus_diff(s1.positions[i][0], s0.positions[i][0]) / std::sqrt(2 * dt);
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(s0.size());
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(4 * std::sqrt(2 / n)));
  CHECK(m4 / n == doctest::Approx(3.0).epsilon(4 * std::sqrt(96 / n) / 3));
}

TEST_CASE("empirical density is exchangeable and normalised") {
  const MollifierSymbol moll(8, 0.1);
  ParticleState s = uniform_state(300, 4);
  const FourierField a = empirical_density(s, moll);
  std::reverse(s.positions.begin(), s.positions.end());
  std::rotate(s.positions.begin(), s.positions.begin() + 17, s.positions.end());
  CHECK(empirical_density(s, moll) == a);
  CHECK(a.mean() == 1.0);
  CHECK(a.hermitian_defect() == 0.0);
  ParticleState one;
  one.positions = {{0.25, 0.0}};
  const FourierField d = empirical_density(one, MollifierSymbol::identity(4));
  CHECK(std::abs(d.at(0, 1, 0) - Complex{0.0, -1.0}) < 1e-15);
}

TEST_CASE("i.i.d. uniform particles: E|fhat(w)|^2 = phi^2 / N") {
  const std::size_t N = 50;
  const int reps = 2000;
  const MollifierSymbol moll(4, 0.2);
  const Mode w{1, 2};
  double s = 0, s2 = 0;
  for (int r = 0; r < reps; ++r) {
    const double x = std::norm(empirical_density(uniform_state(N, 1000 + r), moll).at(0, w));
    s += x;
    s2 += x * x;
  }
  const double mean = s / reps, se = std::sqrt((s2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - moll(w) * moll(w) / N) < 4 * se);
  double oracle = 0;
  for_each_mode(4, [&](Mode v) {
    if (!(v == Mode{})) oracle += std::pow(moll(v), 2) / (1 + laplace_symbol(v)) / N;
  });
  CHECK(iid_gap_squared(4, 0.2, -1.0, N) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("initial positions follow a cosine density") {
  const double a = 0.4;
  const FourierField rho0 = FourierField::constant(16, 1.0) + FourierField::real_mode(16, {1, 0}, Complex{a / 2, 0.0});
  const std::size_t N = 40000;
  const ParticleState s = sample_initial_positions(rho0, N, RandomStream(5, 0));
  double c = 0, c2 = 0;
  for (const auto& p : s.positions) {
    c += std::cos(6.283185307179586 * p[0]);
    c2 += std::cos(6.283185307179586 * p[1]);
  }
  CHECK(c / N == doctest::Approx(a / 2).epsilon(0.1));
  CHECK(std::abs(c2 / N) < 4 / std::sqrt(2.0 * N));
}

TEST_CASE("simulation and gaps") {
  const InteractionKernel k(8);
  const ParticleState s0 = uniform_state(100, 6);
  std::vector<ParticleState> path;
  const ParticleState end =
      simulate_particles(s0, 1.0, 1e-3, 5, k, RandomStream(6, 0), [&](int, const ParticleState& s) { path.push_back(s); });
  CHECK(path.size() == 6);
  CHECK(end.t == doctest::Approx(5e-3));
  Trajectory det;
  for (int i = 0; i <= 5; ++i) {
    det.times.push_back(i * 1e-3);
    det.fields.push_back(FourierField::constant(8, 1.0));
  }
  const MollifierSymbol moll(8, 0.1);
  const auto gaps = mean_field_gap(path, det, moll, -1.0);
  CHECK(gaps.size() == 6);
  CHECK(gaps[0] == doctest::Approx(sobolev_norm(empirical_density(s0, moll) - FourierField::constant(8, 1.0), -1.0)));
  det.times[3] = 0.5;
  CHECK_THROWS_AS(mean_field_gap(path, det, moll, -1.0), ShapeError);
}
