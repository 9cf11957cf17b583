#include <doctest.h>

#include "helpers.hpp"
#include "ksdk/det/deterministic.hpp"
#include "ksdk/error.hpp"
#include "ksdk/spectral/operators.hpp"

using namespace ksdk;

namespace {

FourierField cosine_density(int M, double a1, double a2) {
  return FourierField::constant(M, 1.0) + FourierField::real_mode(M, {1, 0}, Complex{a1 / 2, 0.0}) +
         FourierField::real_mode(M, {0, 1}, Complex{a2 / 2, 0.0});
}

DetConfig small(double chi, double T, int M = 16) {
  DetConfig c;
  c.chi = chi;
  c.T = T;
  c.M = M;
  return c;
}

}  // namespace

TEST_CASE("advection matches its definition") {
  const FourierField rho = cosine_density(12, 0.3, -0.2) + test::random_field(12, 1, 3, 0.0) * 0.05;
  const FourierField expect = divergence(multiply(rho, gradient(green_potential(rho)))) * -2.0;
  const FourierField got = ks_advection(rho, 2.0);
  CHECK((got - expect).max_abs() < 1e-12);
  CHECK(std::abs(got.mean()) < 1e-15);
}

TEST_CASE("uniform data is a fixed point") {
  for (double chi : {0.0, 1.0, 10.0, -3.0}) {
    const Trajectory t = solve_det(FourierField::constant(16, 1.0), small(chi, 0.05));
    CHECK((t.back() - FourierField::constant(16, 1.0)).max_abs() <= 1e-12);
  }
}

TEST_CASE("chi = 0 reproduces heat decay") {
  const Mode w{2, 1};
  const Complex a{0.1, 0.07};
  const FourierField rho0 = FourierField::constant(16, 1.0) + FourierField::real_mode(16, w, a);
  for (TimeScheme s : {TimeScheme::etd1, TimeScheme::etdrk2}) {
    DetConfig c = small(0.0, 0.03);
    c.scheme = s;
    const Trajectory t = solve_det(rho0, c);
    CHECK(t.size() == 121);
    const Complex expect = a * std::exp(-laplace_symbol(w) * t.times.back());
    CHECK(std::abs(t.back().at(0, w) - expect) < 1e-8);
  }
}

TEST_CASE("mass is conserved") {
  const Trajectory t = solve_det(cosine_density(16, 0.4, 0.3), small(3.0, 0.1));
  for (const auto& f : t.fields) CHECK(std::abs(f.mean() - 1.0) <= 1e-13);
  CHECK(!t.blew_up_at);
  CHECK(t.min_value.size() == t.size());
}

TEST_CASE("energy residual converges at second order") {
  auto residual = [](double dt) {
    DetConfig c = small(1.0, 0.05);
    c.dt = dt;
    const Trajectory t = solve_det(cosine_density(16, 0.4, 0.4), c);
    double m = 0.0;
    for (double r : t.energy_residual) m = std::max(m, std::abs(r));
    return m;
  };
  const double r1 = residual(1e-3), r2 = residual(5e-4);
  CHECK(r1 / r2 >= 3.5);
}

TEST_CASE("ETDRK2 is second order in time") {
  auto final_field = [](double dt) {
    DetConfig c = small(2.0, 0.02, 12);
    c.dt = dt;
    return solve_det(cosine_density(12, 0.5, 0.3), c).back();
  };
  const FourierField ref = final_field(2.5e-5);
  const double e1 = (final_field(1e-3) - ref).max_abs();
  const double e2 = (final_field(5e-4) - ref).max_abs();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("strong aggregation crosses the blow-up threshold") {
  DetConfig c = small(100.0, 0.05);
  c.blowup_L2_threshold = 1.5;
  const Trajectory t = solve_det(cosine_density(16, 0.45, 0.45), c);
  REQUIRE(t.blew_up_at.has_value());
  CHECK(t.times.back() < *t.blew_up_at);
  CHECK(sobolev_norm(t.back(), 0.0) <= 1.5);
}

TEST_CASE("invalid initial data") {
  CHECK_THROWS_AS(solve_det(FourierField::constant(8, 2.0), small(1.0, 0.01, 8)), InputError);
  CHECK_THROWS_AS(solve_det(cosine_density(8, 0.9, 0.9), small(1.0, 0.01, 8)), InputError);
  DetConfig bad = small(1.0, 0.01, 8);
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("square root of the density") {
  const FourierField four = FourierField::constant(8, 4.0);
  CHECK((sqrt_field(four, 1e-8) - FourierField::constant(8, 2.0)).max_abs() < 1e-14);
  const FourierField rho = cosine_density(16, 0.3, 0.0);
  const RealGrid s = to_grid(sqrt_field(rho, 1e-8));
  const RealGrid g = to_grid(rho);
  for (std::size_t i = 0; i < g.values().size(); i += 17)
    CHECK(s.values()[i] == doctest::Approx(std::sqrt(g.values()[i])).epsilon(1e-6));
  CHECK_THROWS_AS(sqrt_field(FourierField::constant(8, 0.0) - FourierField::constant(8, 1.0), 1e-8), PositivityError);
}
