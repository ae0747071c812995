#include <cmath>
#include <numbers>

#include "doctest.h"
#include "swirl/background.hpp"

using namespace swirl;
using std::numbers::pi;

namespace {

// dt/dr of the upstream Mach equation, t = 1/M^2
double mach_rhs(double t, double w, double q, double r, double g) {
  if (r == 0.0) return 0.0;
  const double a = g - 1.0 + 2.0 * t;
  return (g - 1.0) / (4.0 * q * q) * (w * w / r) * ((g + 1.0) * (g + 1.0) / a - a);
}

}  // namespace

TEST_CASE("t profile: zero swirl keeps t constant") {
  GasModel gas(1.4, 1.0, 1.0);
  const auto w = RadialProfile::constant(1.0, 33, 0.0);
  const auto q = RadialProfile::constant(1.0, 33, 2.0);
  const auto t = solve_t_profile(w, q, 0.3, gas);
  for (std::size_t j = 0; j < t.size(); ++j) CHECK(t[j] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("t profile: w^2/q^2 = 2 r^2 reaches 0.58132 at r = 1") {
  GasModel gas(1.4, 1.0, 1.0);
  const std::size_t n = 257;
  const auto q = RadialProfile::constant(1.0, n, 1.0);
  const auto w = RadialProfile::from_function(1.0, n, [](double r) { return std::sqrt(2.0) * r; },
                                              Parity::odd);
  const auto t = solve_t_profile(w, q, 0.25, gas);
  CHECK(t.back() == doctest::Approx(0.58132).epsilon(2e-5));

  // RK4 on the Mach equation
  const int steps = 4000;
  const double h = 1.0 / steps;
  double y = 0.25;
  for (int k = 0; k < steps; ++k) {
    const double r = k * h;
    auto f = [&](double rr, double yy) { return mach_rhs(yy, std::sqrt(2.0) * rr, 1.0, rr, 1.4); };
    const double k1 = f(r, y), k2 = f(r + h / 2, y + h / 2 * k1), k3 = f(r + h / 2, y + h / 2 * k2),
                 k4 = f(r + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  CHECK(std::abs(y - t.back()) < 1e-8);
}

TEST_CASE("t profile errors") {
  GasModel gas(1.4, 1.0, 1.0);
  const auto q = RadialProfile::constant(1.0, 17, 2.0);
  const auto w = RadialProfile::constant(1.0, 17, 0.0);
  CHECK_THROWS_AS(solve_t_profile(w, q, 1.2, gas), SolverError);
  try {
    solve_t_profile(RadialProfile::constant(1.0, 17, 0.5), q, 0.3, gas);
    FAIL("expected axis error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::axis);
  }
}

TEST_CASE("forward background is an admissible transonic shock") {
  GasModel gas(1.4, 1.0, 1.0);
  const std::size_t n = 129;
  const auto w = RadialProfile::from_function(1.0, n, [](double r) { return 0.3 * std::sin(pi * r); },
                                              Parity::odd);
  const auto q = RadialProfile::constant(1.0, n, 2.0);
  const auto bg = construct_upstream_from_wq({w, q, 4.0, 1.0}, gas);
  CHECK(bg.diag.t_monotone);
  CHECK(bg.diag.upstream_supersonic);
  CHECK(bg.diag.downstream_subsonic);
  CHECK(bg.diag.entropy_increases);
  CHECK(bg.t.front() == doctest::Approx(0.25));
  CHECK(bg.upstream.p.front() == doctest::Approx(1.0));
  for (std::size_t j = 0; j < n; ++j) CHECK(bg.downstream.w[j] == bg.upstream.w[j]);
  CHECK(bg.diag.upstream_momentum_residual < 1e-6);
  CHECK(check_background_assumptions(bg).all_first_order_pass());
}

TEST_CASE("normal shock jump at M^2 = 2") {
  GasModel gas(1.4, 1.0, 1.0);
  RadialState up;
  const double c2 = 1.4;  // p = rho = 1
  up.p = RadialProfile::constant(1.0, 9, 1.0);
  up.rho = RadialProfile::constant(1.0, 9, 1.0);
  up.q = RadialProfile::constant(1.0, 9, std::sqrt(2.0 * c2));
  up.w = RadialProfile::constant(1.0, 9, 0.0);
  up.s = RadialProfile::constant(1.0, 9, 0.0);
  const auto dn = rh_jump(up, gas);
  // classical: p2/p1 = 1 + 2g/(g+1)(M^2-1)
  CHECK(dn.p[4] == doctest::Approx(1.0 + 2.8 / 2.4).epsilon(1e-14));
  CHECK(dn.rho[4] == doctest::Approx(2.4 * 2.0 / (0.4 * 2.0 + 2.0)).epsilon(1e-14));
  up.q = RadialProfile::constant(1.0, 9, 0.9 * std::sqrt(c2));
  CHECK_THROWS_AS(rh_jump(up, gas), SolverError);
}

TEST_CASE("inverse construction: Y potential inverts") {
  GasModel gas(1.4, 1.0, 1.0);
  for (double Y : {1.01, 1.5, 3.0, 5.9}) {
    CHECK(y_potential_inverse(y_potential(Y, gas), gas) == doctest::Approx(Y).epsilon(1e-12));
  }
}

TEST_CASE("inverse construction reproduces a uniform state") {
  GasModel gas(1.4, 1.0, 1.0);
  UpstreamSpecPS ps{RadialProfile::constant(1.0, 33, 1.0), RadialProfile::constant(1.0, 33, 0.0),
                    2.0};
  const auto bg = construct_upstream_from_ps(ps, gas);
  for (std::size_t j = 0; j < 33; ++j) {
    CHECK(bg.upstream.w[j] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bg.upstream.q[j] == doctest::Approx(2.0).epsilon(1e-12));
  }
  REQUIRE(bg.Y.has_value());
  CHECK(bg.Y->front() > 1.0);
}

TEST_CASE("inverse construction rejects pressure falling outward") {
  GasModel gas(1.4, 1.0, 1.0);
  auto p = RadialProfile::from_function(1.0, 65, [](double r) { return 1.0 - 0.01 * r * r; },
                                        Parity::even);
  UpstreamSpecPS ps{p, RadialProfile::constant(1.0, 65, 0.0), 2.0};
  try {
    construct_upstream_from_ps(ps, gas);
    FAIL("accepted");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}
