#include <doctest.h>

#include "helpers.hpp"
#include "ksdk/spde/enhancement.hpp"
#include "ksdk/spectral/operators.hpp"

using namespace ksdk;

namespace {

SpdeConfig small(int M = 10, double T = 0.01) {
  SpdeConfig c;
  c.M = M;
  c.T = T;
  c.dt = 2.5e-4;
  return c;
}

ControlPath control(const SpdeConfig& c, double scale) {
  FourierField h(c.M, 2, true);
  h.set_component(0, test::random_field(c.M, 1, 3, 0.0) * scale);
  h.set_component(1, test::random_field(c.M, 2, 3, 0.0) * scale);
  return ControlPath(static_cast<std::size_t>(c.steps()) + 1, h);
}

}  // namespace

TEST_CASE("evolution matches the stochastic convolution stepper") {
  const SpdeConfig c = small();
  const MollifierSymbol moll(c.M, 0.2);
  const SigmaPath one = SigmaPath::constant(c.M, 1.0);
  const RandomStream rng(3, 0);
  EnhancementEvolution ev(c.M, c.dt);
  FourierField ti(c.M);
  for (int s = 0; s < c.steps(); ++s) {
    const auto inc = sample_increment(rng, static_cast<std::uint64_t>(s), c.M, c.dt, &moll);
    enhancement_step(ev, one.at(0), inc, moll);
    ti = lolli_step(ti, one.at(0), inc, moll, etd_weights(c.M, c.dt));
  }
  CHECK((ev.lolli() - ti).max_abs() < 1e-14);
  CHECK(ev.time() == doctest::Approx(c.T));
}

TEST_CASE("time integral of a single forced mode") {
  // (d/dt - Laplace) ti = F constant: ti = F (1 - e^{-l t}) / l,
  // I[ti](t) = F / l ((1 - e^{-l t}) / l - t e^{-l t}).
  const int M = 4;
  const double dt = 1e-4, T = 0.05;
  const Mode w{1, 0};
  const FourierField F = FourierField::real_mode(M, w, Complex{1.0, 0.0});
  EnhancementEvolution ev(M, dt);
  const int steps = static_cast<int>(std::llround(T / dt));
  for (int s = 0; s < steps; ++s) ev.step(F);
  const double l = laplace_symbol(w);
  const double ti = -std::expm1(-l * T) / l;
  const double j = (ti - T * std::exp(-l * T)) / l;
  CHECK(ev.lolli().at(0, w).real() == doctest::Approx(ti).epsilon(1e-12));
  CHECK(ev.lolli_integral().at(0, w).real() == doctest::Approx(j).epsilon(1e-3));
}

TEST_CASE("zero control gives the zero tuple") {
  const SpdeConfig c = small();
  const auto tuples = enhancement_from_h(control(c, 0.0), SigmaPath::constant(c.M, 1.0), c, 10);
  REQUIRE(tuples.size() == 4);
  CHECK(tuples.front().t == doctest::Approx(10 * c.dt));
  const LittlewoodPaley lp(c.M);
  const EnhancementNorms n = enhancement_norms(tuples.back(), lp);
  CHECK(n.ti == 0.0);
  CHECK(n.ty == 0.0);
  CHECK(n.tp == 0.0);
  CHECK(n.tc == 0.0);
}

TEST_CASE("tuple homogeneity in the control") {
  const SpdeConfig c = small();
  const SigmaPath one = SigmaPath::constant(c.M, 1.0);
  const LittlewoodPaley lp(c.M);
  const auto a = enhancement_norms(enhancement_from_h(control(c, 1.0), one, c, 1000).back(), lp);
  const auto b = enhancement_norms(enhancement_from_h(control(c, 2.0), one, c, 1000).back(), lp);
  REQUIRE(a.ti > 0.0);
  CHECK(b.ti == doctest::Approx(2.0 * a.ti).epsilon(1e-10));
  CHECK(b.ty == doctest::Approx(4.0 * a.ty).epsilon(1e-10));
  CHECK(b.tp == doctest::Approx(8.0 * a.tp).epsilon(1e-10));
  CHECK(b.tc == doctest::Approx(4.0 * a.tc).epsilon(1e-10));
}

TEST_CASE("tp is the sum of two resonant products") {
  const int M = 8;
  const LittlewoodPaley lp(M);
  const FourierField ti = test::random_field(M, 5, 3, 0.0);
  const FourierField j = test::random_field(M, 6, 3, 0.0);
  const FourierField ty = test::random_field(M, 7, 3, 0.0);
  const EnhancementTuple x = enhancement_products(ti, j, ty, lp, 0.5);
  CHECK(x.t == 0.5);
  CHECK(x.tp.components() == 2);
  CHECK(x.tc.components() == 4);
  const FourierField gphi_ti = green_gradient(ti), gphi_ty = green_gradient(ty);
  FourierField tp_expect(M, 2, true);
  for (int c = 0; c < 2; ++c)
    tp_expect.set_component(c, lp.resonant(ty, gphi_ti.component(c)) + lp.resonant(gphi_ty.component(c), ti));
  CHECK((x.tp - tp_expect).max_abs() < 1e-13);
}

TEST_CASE("stochastic convolution energy matches the Ito mode sum") {
  const SpdeConfig c = small(6, 0.02);
  const double delta = 0.2;
  const MollifierSymbol moll(c.M, delta);
  const SigmaPath one = SigmaPath::constant(c.M, 1.0);
  const int n = 300;
  std::vector<double> e(n);
  for (int k = 0; k < n; ++k) {
    const RandomStream rng(11, static_cast<std::uint64_t>(k));
    EnhancementEvolution ev(c.M, c.dt);
    for (int s = 0; s < c.steps(); ++s)
      enhancement_step(ev, one.at(0), sample_increment(rng, static_cast<std::uint64_t>(s), c.M, c.dt, &moll), moll);
    e[static_cast<std::size_t>(k)] = std::pow(sobolev_norm(ev.lolli(), 0.0), 2);
  }
  double mean = 0, var = 0;
  for (double x : e) mean += x / n;
  for (double x : e) var += (x - mean) * (x - mean) / (n - 1);
  double oracle = 0.0;
  for_each_mode(c.M, [&](Mode w) {
    if (w == Mode{}) return;
    oracle += moll(w) * moll(w) * -std::expm1(-2.0 * laplace_symbol(w) * c.T) / 2.0;
  });
  CHECK(std::abs(mean - oracle) < 4.0 * std::sqrt(var / n) + 0.01 * oracle);
}
