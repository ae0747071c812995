#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "swirl/shock_locator.hpp"
#include "swirl/subsonic.hpp"

using namespace swirl;
using namespace fixtures;
using std::numbers::pi;

namespace {

// d_z(a u_z) + (1/r) d_r(r b u_r) = rhs with u = cos(pi r)(1 + z^2) + z^3
double neumann_error(std::size_t n) {
  const double zlo = 0.3, zhi = 1.0;
  auto a = [](double r) { return 1.0 + 0.3 * r * r; };
  auto b = [](double r) { return 2.0 - r * r; };
  auto u = [](double z, double r) { return std::cos(pi * r) * (1 + z * z) + z * z * z; };
  auto uz = [](double z, double r) { return 2 * z * std::cos(pi * r) + 3 * z * z; };
  const auto A = RadialProfile::from_function(1.0, n, a, Parity::even);
  const auto B = RadialProfile::from_function(1.0, n, b, Parity::even);
  LinearField2D rhs(zlo, zhi, 1.0, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double z = rhs.z(i), r = rhs.r(j);
      const double urr = -pi * pi * std::cos(pi * r) * (1 + z * z);
      const double ur = -pi * std::sin(pi * r) * (1 + z * z);
      const double radial = r == 0.0 ? 2 * b(0) * urr : b(r) * urr + (b(r) / r - 2 * r) * ur;
      rhs(i, j) = a(r) * (2 * std::cos(pi * r) + 6 * z) + radial;
    }
  const auto flo = RadialProfile::from_function(1.0, n, [&](double r) { return uz(zlo, r); });
  const auto fhi = RadialProfile::from_function(1.0, n, [&](double r) { return uz(zhi, r); });
  // shift the source by a constant so the quadrature compatibility holds exactly
  double vol = 0, vol1 = 0;
  {
    std::vector<double> col(n), col1(n), rowv(n), rowv1(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        col[j] = rhs.r(j) * rhs(i, j);
        col1[j] = rhs.r(j);
      }
      rowv[i] = integrate(col, rhs.dr());
      rowv1[i] = integrate(col1, rhs.dr());
    }
    vol = integrate(rowv, rhs.dz());
    vol1 = integrate(rowv1, rhs.dz());
  }
  std::vector<double> fl(n);
  for (std::size_t j = 0; j < n; ++j) fl[j] = rhs.r(j) * A[j] * (fhi[j] - flo[j]);
  const double shift = (integrate(fl, rhs.dr()) - vol) / vol1;
  for (auto& v : rhs.values()) v += shift;
  double compat = 1.0;
  const auto phi = solve_neumann_potential(A, B, zlo, zhi, n, rhs, flo, fhi, 1e-9, &compat);
  CHECK(compat < 1e-12);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mean += phi(i, j) - u(phi.z(i), phi.r(j));
  mean /= static_cast<double>(n * n);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      e = std::max(e, std::abs(phi(i, j) - u(phi.z(i), phi.r(j)) - mean));
  return e;
}

}  // namespace

TEST_CASE("Neumann potential solver converges at second order") {
  const double e1 = neumann_error(17), e2 = neumann_error(33), e3 = neumann_error(65);
  CHECK(e1 / e2 > 3.0);
  CHECK(e2 / e3 > 3.5);
  CHECK(e3 < 1e-3);
}

TEST_CASE("Neumann incompatibility raises a solvability error") {
  const std::size_t n = 17;
  const auto one = RadialProfile::constant(1.0, n, 1.0);
  LinearField2D rhs(0.0, 1.0, 1.0, n, n, 1.0);
  try {
    solve_neumann_potential(one, one, 0.0, 1.0, n, rhs, {}, {});
    FAIL("expected solvability error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::solvability);
  }
}

TEST_CASE("stream elliptic solver: zero in, zero out") {
  const std::size_t n = 17;
  const auto bg = reference_background(n);
  const auto c = stream_coefficients(bg.downstream, bg.gas);
  LinearField2D rhs(0.3, 1.0, 1.0, n, n);
  const auto psi = solve_stream_elliptic(c.K1, c.K2, c.F0, 0.3, 1.0, n, rhs);
  CHECK(psi.max_abs() == 0.0);
}

TEST_CASE("characteristic traces") {
  auto zero = [](double, double) { return 0.0; };
  CHECK(characteristic_trace(zero, 0.8, 0.4, 0.2, 0.01, 1.0) == 0.4);
  auto lin = [](double, double r) { return 0.5 * r; };
  const double foot = characteristic_trace(lin, 0.8, 0.4, 0.2, 0.01, 1.0);
  CHECK(foot == doctest::Approx(0.4 * std::exp(-0.3)).epsilon(1e-10));
  auto out = [](double, double) { return -5.0; };
  try {
    characteristic_trace(out, 0.8, 0.9, 0.2, 0.01, 1.0);
    FAIL("expected trace error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::trace);
  }
}

TEST_CASE("coercivity check: zero swirl always passes, strong swirl fails on a wide nozzle") {
  const auto calm = reference_background(33, 0.0);
  CHECK(coercivity_radius_check(calm).margin > 0.0);
  GasModel gas(1.4, 1.0, 1.0);
  auto w = RadialProfile::from_function(1.0, 33, [](double r) { return 0.5 * r * std::exp(-r * r); },
                                        Parity::odd);
  const auto bg = construct_upstream_from_wq({w, constant(33, 2.0), 4.0, 1.0}, gas);
  CHECK(coercivity_radius_check(bg).margin < 0.0);
  SubsonicProblemData d;
  d.z_shock = 0.3;
  d.nz = 33;
  LinearField2D z0(0.3, 1.0, 1.0, 33, 33);
  try {
    solve_problem_II(d, bg, z0);
    FAIL("expected coercivity error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::coercivity);
  }
}

TEST_CASE("subsonic solve with zero data is zero and keeps wall values") {
  const std::size_t n = 33;
  const auto bg = reference_background(n);
  SubsonicProblemData d;
  d.z_shock = 0.25;
  d.nz = n;
  const auto sol = solve_subsonic(d, bg);
  for (const auto* f : {&sol.dp, &sol.dtheta, &sol.dw, &sol.dq, &sol.ds, &sol.dB, &sol.phi, &sol.psi})
    CHECK(f->max_abs() == 0.0);
}

TEST_CASE("composed solution: boundary identities") {
  const std::size_t n = 65;
  const auto bg = reference_background(n);
  const auto pert = reference_perturbation(n);
  const auto sup = solve_supersonic(bg, pert, 1.0, n);
  const auto kap = kappa_profiles(bg);
  ShockLocator loc(sup, bg, kap, pert);
  const auto rep = locate_shock(loc, 1.0);
  const auto tr = linearized_jump_traces(sup, bg, pert, rep.z_star);
  const auto sol = approximate_subsonic_solution(bg, sup, tr, pert, rep.z_star, 1.0, n);
  for (std::size_t i = 0; i < sol.dtheta.nz(); ++i) {
    CHECK(sol.dtheta(i, 0) == 0.0);
    CHECK(sol.dtheta(i, n - 1) == 0.0);
    CHECK(sol.dw(i, 0) == 0.0);
    CHECK(std::abs(sol.dw(i, n - 1)) < 1e-10);
  }
  CHECK(sol.solvability_residual < 1e-9);
  CHECK(sol.coercivity_margin > 0.0);
}
