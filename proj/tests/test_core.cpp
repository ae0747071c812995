#include <cmath>
#include <numbers>

#include "doctest.h"
#include "swirl/core.hpp"

using namespace swirl;
using std::numbers::pi;

TEST_CASE("derived quantities of a polytropic state") {
  GasModel gas(1.4, 1.0, 1.0);
  FlowState st{2.0, 0.0, 0.3, 1.5, 0.1};
  const auto d = derived_quantities(st, gas);
  const double rho = std::pow(2.0 / std::exp(0.1), 1.0 / 1.4);
  CHECK(d.rho == doctest::Approx(rho).epsilon(1e-14));
  CHECK(d.c2 == doctest::Approx(1.4 * 2.0 / rho).epsilon(1e-14));
  CHECK(d.M2 == doctest::Approx(1.5 * 1.5 / d.c2).epsilon(1e-14));
  CHECK(d.B == doctest::Approx(0.5 * (1.5 * 1.5 + 0.09) + d.c2 / 0.4).epsilon(1e-14));
  CHECK(entropy_from_pressure_density(2.0, rho, gas) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(density_from_pressure_entropy(2.0, 0.1, gas) == doctest::Approx(rho).epsilon(1e-14));
}

TEST_CASE("gas model rejects gamma <= 1") {
  CHECK_THROWS_AS(GasModel(1.0, 1.0, 1.0), SolverError);
}

TEST_CASE("stencils are fourth order") {
  auto err = [](std::size_t n) {
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::sin(2.0 * j * h);
    const auto d1 = diff1(f, h);
    const auto d2 = diff2(f, h);
    double e1 = 0, e2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      e1 = std::max(e1, std::abs(d1[j] - 2.0 * std::cos(2.0 * j * h)));
      e2 = std::max(e2, std::abs(d2[j] + 4.0 * std::sin(2.0 * j * h)));
    }
    return std::pair{e1, e2};
  };
  const auto a = err(33), b = err(65);
  CHECK(a.first / b.first > 12.0);
  CHECK(a.second / b.second > 6.0);  // one-sided second derivative ends are third order
}

TEST_CASE("quadrature is exact for cubics, odd and even point counts") {
  for (std::size_t n : {5u, 6u, 9u, 10u}) {
    const double h = 2.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = j * h;
      f[j] = 1 + x - 3 * x * x + x * x * x;
    }
    CHECK(integrate(f, h) == doctest::Approx(2 + 2 - 8 + 4).epsilon(1e-13));
    const auto F = cumulative(f, h);
    CHECK(F.front() == 0.0);
    CHECK(F.back() == doctest::Approx(0.0 + 2 + 2 - 8 + 4).epsilon(1e-12));
  }
}

TEST_CASE("radial profile helpers") {
  const auto f = RadialProfile::from_function(1.0, 65, [](double r) { return std::sin(pi * r); },
                                              Parity::odd);
  CHECK(f.front() == 0.0);
  const auto fr = f.over_r();
  CHECK(fr.front() == doctest::Approx(pi).epsilon(1e-6));
  CHECK(fr[10] == doctest::Approx(std::sin(pi * f.r(10)) / f.r(10)).epsilon(1e-14));
  CHECK(integrate(f) == doctest::Approx(2.0 / pi).epsilon(1e-7));
  CHECK(f.at(0.3) == doctest::Approx(std::sin(0.3 * pi)).epsilon(1e-6));

  const auto g = resample(f, 257);
  CHECK(g.size() == 257);
  CHECK(g.parity() == Parity::odd);
  double e = 0;
  for (std::size_t j = 0; j < g.size(); ++j) e = std::max(e, std::abs(g[j] - std::sin(pi * g.r(j))));
  CHECK(e < 1e-5);
  CHECK(resample(f, 65).values() == f.values());
}

TEST_CASE("2D field row interpolation") {
  LinearField2D F(0.0, 1.0, 1.0, 33, 9);
  for (std::size_t i = 0; i < F.nz(); ++i)
    for (std::size_t j = 0; j < F.nr(); ++j) F(i, j) = F.z(i) * F.z(i) * F.z(i) + F.r(j);
  const auto row = F.row_at(0.37);
  for (std::size_t j = 0; j < row.size(); ++j)
    CHECK(row[j] == doctest::Approx(0.37 * 0.37 * 0.37 + F.r(j)).epsilon(1e-13));
  const auto G = 2.0 * F + F;
  CHECK(G(5, 3) == doctest::Approx(3 * F(5, 3)));
}
