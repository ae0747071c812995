#include <cmath>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"

using namespace swirl;
using namespace fixtures;

TEST_CASE("perturbation endpoint conditions are named") {
  auto p = reference_perturbation(33);
  p.w_en = constant(33, 1.0);
  try {
    validate_perturbation(p, false);
    FAIL("expected config error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("w_en(0)=0") != std::string::npos);
  }
  p = reference_perturbation(33);
  p.q_en = sin_bump(33, 1.0).with_parity(Parity::even);
  CHECK_THROWS_AS(validate_perturbation(p, false), SolverError);
  p = reference_perturbation(33);
  p.w_en = constant(33, 0.0);
  CHECK_NOTHROW(validate_perturbation(p, false));
  CHECK_THROWS_AS(validate_perturbation(p, true), SolverError);
}

TEST_CASE("parallel, serial and reference marches agree bitwise") {
  const std::size_t n = 33;
  const auto bg = reference_background(n);
  const auto prob = assemble_wave_problem(bg, reference_perturbation(n), 1.0);
  MarchOptions par, ser;
  ser.parallel = false;
  const auto a = march_stream_function(prob, n, n, par);
  const auto b = march_stream_function(prob, n, n, ser);
  const auto c = march_stream_function_reference(prob, n, n);
  CHECK(a.psi.values() == b.psi.values());
  CHECK(a.psi.values() == c.values());
  CHECK(a.psi.max_abs() > 0.0);
}

TEST_CASE("march honours the CFL limit") {
  const std::size_t n = 65;
  const auto bg = reference_background(n);
  const auto prob = assemble_wave_problem(bg, reference_perturbation(n), 1.0);
  const auto m = march_stream_function(prob, n, n);
  CHECK(m.psi.dz() <= max_stable_dz(prob.coef, m.psi.dr(), 0.8) + 1e-15);
  MarchOptions tight;
  tight.max_refine = 1;
  try {
    march_stream_function(prob, 9, n, tight);
    FAIL("expected step size error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::step_size);
  }
}

TEST_CASE("boundary values of the march") {
  const std::size_t n = 33;
  const auto bg = reference_background(n);
  const auto sol = solve_supersonic(bg, reference_perturbation(n), 1.0, n);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(sol.psi(0, j) == 0.0);
    CHECK(sol.theta_dot(0, j) == 0.0);
  }
  for (std::size_t i = 0; i < sol.psi.nz(); ++i) {
    CHECK(sol.psi(i, n - 1) == 0.0);
    CHECK(sol.theta_dot(i, 0) == 0.0);
    CHECK(sol.theta_dot(i, n - 1) == 0.0);
  }
}

TEST_CASE("zero sigma gives zero fields") {
  const std::size_t n = 33;
  const auto bg = reference_background(n);
  const auto sol = solve_supersonic(bg, reference_perturbation(n, 0.0), 1.0, n);
  for (const auto* f : {&sol.psi, &sol.p_dot, &sol.theta_dot, &sol.w_dot, &sol.q_dot, &sol.s_dot})
    CHECK(f->max_abs() == 0.0);
}

TEST_CASE("residuals are small on the reference data") {
  const std::size_t n = 65;
  const auto bg = reference_background(n);
  const auto sol = solve_supersonic(bg, reference_perturbation(n), 1.0, n);
  const auto r = residual_linearized_supersonic(sol, bg);
  CHECK(r.cde1 < 1e-5);
  CHECK(r.cde2 < 1e-5);
  CHECK(r.cde4 < 1e-12);
  CHECK(r.recovery < 1e-12);
}

TEST_CASE("a subsonic background is rejected") {
  GasModel gas(1.4, 1.0, 1.0);
  auto bg = reference_background(17);
  std::swap(bg.upstream, bg.downstream);
  CHECK_THROWS_AS(assemble_wave_problem(bg, reference_perturbation(17), 1.0), SolverError);
}
