#include "swirl/background.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

namespace swirl {

RadialProfile RadialState::c2(const GasModel& gas) const {
  return zip(p, rho, [g = gas.gamma()](double pp, double rr) { return g * pp / rr; });
}

RadialProfile RadialState::M2(const GasModel& gas) const {
  return (q * q) / c2(gas);
}

RadialProfile RadialState::bernoulli(const GasModel& gas) const {
  const double g = gas.gamma();
  std::vector<double> b(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    b[j] = 0.5 * (q[j] * q[j] + w[j] * w[j]) + g * p[j] / ((g - 1.0) * rho[j]);
  return RadialProfile(p.r0(), std::move(b), Parity::even);
}

namespace {

double scale_of(const RadialProfile& f) { return std::max(1.0, f.max_abs()); }

void require_axis_zero(const RadialProfile& w, const char* name) {
  if (std::abs(w.front()) > 1e-12 * scale_of(w)) {
    std::ostringstream os;
    os << name << "(0) must vanish on the axis, got " << w.front();
    throw SolverError(ErrorKind::axis, os.str());
  }
}

void require_positive(const RadialProfile& f, const char* name) {
  if (!(f.min() > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive everywhere";
    throw SolverError(ErrorKind::domain, os.str());
  }
}

BackgroundShockSolution finish(RadialState up, RadialProfile t, const GasModel& gas) {
  BackgroundShockSolution sol;
  sol.gas = gas;
  sol.upstream = std::move(up);
  sol.t = std::move(t);
  const auto M2m = sol.upstream.M2(gas);
  for (std::size_t j = 0; j < M2m.size(); ++j) {
    if (!(M2m[j] > 1.0)) {
      std::ostringstream os;
      os << "upstream flow not quasi-supersonic at r=" << M2m.r(j) << " (M^2=" << M2m[j] << ")";
      throw SolverError(ErrorKind::admissibility, os.str());
    }
  }
  sol.downstream = rh_jump(sol.upstream, gas);

  auto& d = sol.diag;
  d.upstream_momentum_residual = radial_momentum_residual(sol.upstream).max_abs();
  const auto mo = mach_ode_residual(sol);
  d.mach_ode_residual = mo.mach.max_abs();
  d.downstream_momentum_residual = mo.downstream_momentum.max_abs();
  d.q_ode_residual = q_ode_residual(sol).max_abs();
  for (std::size_t j = 1; j < sol.t.size(); ++j)
    if (sol.t[j] < sol.t[j - 1] - 1e-13) d.t_monotone = false;
  d.upstream_supersonic = M2m.min() > 1.0;
  d.downstream_subsonic = sol.downstream.M2(gas).max() < 1.0;
  for (std::size_t j = 0; j < sol.t.size(); ++j)
    if (!(sol.downstream.s[j] > sol.upstream.s[j])) d.entropy_increases = false;
  if (!d.downstream_subsonic)
    throw SolverError(ErrorKind::admissibility, "downstream flow not quasi-subsonic");
  return sol;
}

RadialProfile entropy_profile(const RadialProfile& p, const RadialProfile& rho,
                              const GasModel& gas) {
  return zip(p, rho, [&gas](double pp, double rr) {
           return entropy_from_pressure_density(pp, rr, gas);
         }).with_parity(Parity::even);
}

}  // namespace

RadialProfile solve_t_profile(const RadialProfile& wbar, const RadialProfile& qbar, double t0,
                              const GasModel& gas) {
  if (!(t0 > 0.0 && t0 < 1.0)) throw SolverError(ErrorKind::domain, "t0 must lie in (0,1)");
  require_axis_zero(wbar, "wbar");
  require_positive(qbar, "qbar");
  const double g = gas.gamma();
  const double m = gas.mu2();
  const double T0 = 1.0 + 2.0 * t0 / (g - 1.0);
  const auto ratio = (wbar * wbar) / (qbar * qbar);
  const auto I = cumulative_integral(ratio, true);
  const double a = 1.0 - m * m * T0 * T0;
  return I.map([=](double x) {
            return 0.5 * (g + 1.0) * (std::sqrt(1.0 - a * std::exp(-(g - 1.0) * x)) - m);
          })
      .with_parity(Parity::even);
}

BackgroundShockSolution construct_upstream_from_wq(const UpstreamSpecWQ& spec,
                                                   const GasModel& gas) {
  if (!(spec.M0sq > 1.0)) throw SolverError(ErrorKind::admissibility, "M0sq must exceed 1");
  if (!(spec.p0 > 0.0)) throw SolverError(ErrorKind::domain, "p0 must be positive");
  if (!spec.wbar.same_grid(spec.qbar))
    throw SolverError(ErrorKind::domain, "wbar and qbar on different grids");
  const double g = gas.gamma();
  auto t = solve_t_profile(spec.wbar, spec.qbar, 1.0 / spec.M0sq, gas);
  const auto q2 = spec.qbar * spec.qbar;
  const auto integrand = (spec.wbar * spec.wbar) / (t * q2);
  const auto I = cumulative_integral(integrand, true);

  RadialState up;
  up.p = I.map([&](double x) { return spec.p0 * std::exp(g * x); }).with_parity(Parity::even);
  up.rho = zip(up.p, t * q2, [g](double pp, double d) { return g * pp / d; })
               .with_parity(Parity::even);
  up.s = entropy_profile(up.p, up.rho, gas);
  up.w = spec.wbar.with_parity(Parity::odd);
  up.q = spec.qbar.with_parity(Parity::even);
  return finish(std::move(up), std::move(t), gas);
}

// Y = 1 + 2t/(gamma-1) obeys dY/dr = (g-1)^2/4 (w^2 G / r)(Y-1)(1-m^2Y^2)/(m^2 Y), m = mu^2,
// G = rho/(g p). Since w^2 G / r = (ln p)'/g the ODE separates:
//   Phi(Y(r)) = Phi(Y(0)) + (g-1)^2/(4g) ln(p(r)/p(0)).
double y_potential(double Y, const GasModel& gas) {
  const double m = gas.mu2();
  const double A = m * m / (1.0 - m * m);
  const double B = m * m / (2.0 * (1.0 - m));
  const double C = m * m / (2.0 * (1.0 + m));
  return A * std::log(Y - 1.0) - (B / m) * std::log(1.0 - m * Y) + (C / m) * std::log(1.0 + m * Y);
}

double y_potential_inverse(double target, const GasModel& gas) {
  const double m = gas.mu2();
  const double lo = 1.0;
  const double hi = 1.0 / m;
  auto f = [&](double Y) {
    const double dphi = m * m * Y / ((Y - 1.0) * (1.0 - m * Y) * (1.0 + m * Y));
    return std::make_pair(y_potential(Y, gas) - target, dphi);
  };
  // bracket by bisection until Newton is safe
  double a = lo, b = hi;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x).first;
    if (fx > 0) b = x; else a = x;
    if ((b - a) < 1e-3 * (hi - lo)) break;
    x = 0.5 * (a + b);
  }
  std::uintmax_t iters = 100;
  const double eps_a = std::nextafter(a, hi);
  const double eps_b = std::nextafter(b, lo);
  return boost::math::tools::newton_raphson_iterate(f, 0.5 * (a + b), eps_a, eps_b, 52, iters);
}

BackgroundShockSolution construct_upstream_from_ps(const UpstreamSpecPS& spec,
                                                   const GasModel& gas) {
  require_positive(spec.pbar, "pbar");
  if (!spec.pbar.same_grid(spec.sbar))
    throw SolverError(ErrorKind::domain, "pbar and sbar on different grids");
  if (!(spec.q0 > 0.0)) throw SolverError(ErrorKind::domain, "q0 must be positive");
  const double g = gas.gamma();
  const double m = gas.mu2();

  RadialState up;
  up.p = spec.pbar.with_parity(Parity::even);
  up.s = spec.sbar.with_parity(Parity::even);
  up.rho = zip(up.p, up.s, [&gas](double pp, double ss) {
             return density_from_pressure_entropy(pp, ss, gas);
           }).with_parity(Parity::even);

  const auto dp = up.p.derivative();
  std::vector<double> w2(up.p.size());
  double w2max = 0.0, pscale = 0.0;
  for (std::size_t j = 0; j < w2.size(); ++j) {
    w2[j] = up.p.r(j) * dp[j] / up.rho[j];
    w2max = std::max(w2max, std::abs(w2[j]));
    pscale = std::max(pscale, up.p[j] / up.rho[j]);
  }
  // where w vanishes (the wall) the one-sided derivative leaves a small negative truncation error
  const double tol = 1e-3 * w2max + 1e-8 * pscale;
  for (std::size_t j = 0; j < w2.size(); ++j) {
    if (w2[j] < -tol) {
      std::ostringstream os;
      os << "non-physical upstream data: r dp/dr < 0 at r=" << up.p.r(j);
      throw SolverError(ErrorKind::domain, os.str());
    }
    w2[j] = std::max(w2[j], 0.0);
  }
  w2[0] = 0.0;
  std::vector<double> w(w2.size());
  std::transform(w2.begin(), w2.end(), w.begin(), [](double x) { return std::sqrt(x); });
  up.w = RadialProfile(up.p.r0(), std::move(w), Parity::odd);

  const auto G = zip(up.rho, up.p, [g](double rr, double pp) { return rr / (g * pp); });
  const double Y0 = 1.0 + 2.0 / ((g - 1.0) * G[0] * spec.q0 * spec.q0);
  if (!(Y0 > 1.0 && Y0 < 1.0 / m))
    throw SolverError(ErrorKind::admissibility, "axis state not quasi-supersonic (Y(0) out of range)");

  const double phi0 = y_potential(Y0, gas);
  const double k = (g - 1.0) * (g - 1.0) / (4.0 * g);
  const double p0 = up.p[0];
  std::vector<double> Y(up.p.size()), q(up.p.size()), t(up.p.size());
  Y[0] = Y0;
  for (std::size_t j = 1; j < Y.size(); ++j)
    Y[j] = y_potential_inverse(phi0 + k * std::log(up.p[j] / p0), gas);
  for (std::size_t j = 0; j < Y.size(); ++j) {
    const double Q = 0.5 * (g - 1.0) * (Y[j] - 1.0) * G[j];
    q[j] = 1.0 / std::sqrt(Q);
    t[j] = 0.5 * (g - 1.0) * (Y[j] - 1.0);
  }
  q[0] = spec.q0;
  up.q = RadialProfile(up.p.r0(), std::move(q), Parity::even);
  auto sol = finish(std::move(up), RadialProfile(spec.pbar.r0(), std::move(t), Parity::even), gas);
  sol.Y = RadialProfile(spec.pbar.r0(), std::move(Y), Parity::even);
  return sol;
}

RadialState rh_jump(const RadialState& up, const GasModel& gas) {
  const double g = gas.gamma();
  const double m = gas.mu2();
  const std::size_t n = up.p.size();
  std::vector<double> p(n), q(n), rho(n), s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double c2 = g * up.p[j] / up.rho[j];
    const double M2 = up.q[j] * up.q[j] / c2;
    if (!(M2 > 1.0)) {
      std::ostringstream os;
      os << "not a shock: upstream M^2=" << M2 << " <= 1 at r=" << up.p.r(j);
      throw SolverError(ErrorKind::admissibility, os.str());
    }
    p[j] = ((1.0 + m) * M2 - m) * up.p[j];
    q[j] = m * (up.q[j] + 2.0 * c2 / ((g - 1.0) * up.q[j]));
    rho[j] = up.rho[j] * up.q[j] / q[j];
    s[j] = entropy_from_pressure_density(p[j], rho[j], gas);
  }
  const double r0 = up.p.r0();
  RadialState dn;
  dn.p = RadialProfile(r0, std::move(p), Parity::even);
  dn.q = RadialProfile(r0, std::move(q), Parity::even);
  dn.rho = RadialProfile(r0, std::move(rho), Parity::even);
  dn.s = RadialProfile(r0, std::move(s), Parity::even);
  dn.w = up.w;
  return dn;
}

RadialProfile radial_momentum_residual(const RadialState& st) {
  return st.p.derivative() - st.rho * st.w * st.w.over_r();
}

MachOdeCheck mach_ode_residual(const BackgroundShockSolution& sol) {
  const auto& gas = sol.gas;
  const double g = gas.gamma();
  const auto& up = sol.upstream;
  const auto t = up.c2(gas) / (up.q * up.q);
  const auto dt = t.derivative();
  const auto w2r = up.w * up.w.over_r();
  std::vector<double> res(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double a = g - 1.0 + 2.0 * t[j];
    const double rhs =
        (g - 1.0) / (4.0 * up.q[j] * up.q[j]) * w2r[j] * ((g + 1.0) * (g + 1.0) / a - a);
    res[j] = dt[j] - rhs;
  }
  return {RadialProfile(t.r0(), std::move(res)), radial_momentum_residual(sol.downstream)};
}

RadialProfile q_ode_residual(const BackgroundShockSolution& sol) {
  const auto& gas = sol.gas;
  const double g = gas.gamma();
  const auto& up = sol.upstream;
  const auto Q = (up.q * up.q).map([](double x) { return 1.0 / x; });
  const auto dQ = Q.derivative();
  const auto c2 = up.c2(gas);
  const auto dc2 = c2.derivative();
  const auto w2r = up.w * up.w.over_r();
  std::vector<double> res(Q.size());
  const double k = (g - 1.0) * (g - 1.0) / 4.0;
  for (std::size_t j = 0; j < Q.size(); ++j) {
    const double G = 1.0 / c2[j];
    const double X = 1.0 + 2.0 * Q[j] * c2[j] / (g - 1.0);
    const double brace = w2r[j] * (-X + (g + 1.0) * (g + 1.0) / ((g - 1.0) * (g - 1.0) * X)) -
                         4.0 / ((g - 1.0) * (g - 1.0)) * dc2[j];
    res[j] = dQ[j] - k * G * brace * Q[j];
  }
  return RadialProfile(Q.r0(), std::move(res));
}

bool AssumptionReport::all_first_order_pass() const {
  for (const auto& e : entries)
    if (e.name.rfind("d3", 0) != 0 && !e.pass) return false;
  return true;
}

const AssumptionEntry& AssumptionReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw SolverError(ErrorKind::domain, "no assumption entry named " + name);
}

AssumptionReport check_background_assumptions(const BackgroundShockSolution& sol,
                                              double first_tol, double third_tol) {
  AssumptionReport rep;
  const auto& gas = sol.gas;
  auto first = [&](const std::string& name, const RadialProfile& f) {
    const auto d = f.derivative();
    const double tol = first_tol * scale_of(f);
    rep.entries.push_back({"d" + name + "(0)", std::abs(d.front()), tol, std::abs(d.front()) <= tol});
    rep.entries.push_back({"d" + name + "(r0)", std::abs(d.back()), tol, std::abs(d.back()) <= tol});
  };
  auto third = [&](const std::string& name, const RadialProfile& f) {
    const double v = std::abs(f.third_derivative_at_axis());
    const double tol = third_tol * scale_of(f);
    rep.entries.push_back({"d3" + name + "(0)", v, tol, v <= tol});
  };
  const auto M2m = sol.upstream.M2(gas);
  const auto M2p = sol.downstream.M2(gas);
  first("p_minus", sol.upstream.p);
  first("p_plus", sol.downstream.p);
  first("s_minus", sol.upstream.s);
  first("s_plus", sol.downstream.s);
  first("M2_minus", M2m);
  first("M2_plus", M2p);
  first("q_plus", sol.downstream.q);
  third("p_minus", sol.upstream.p);
  third("p_plus", sol.downstream.p);
  third("s_minus", sol.upstream.s);
  third("q_minus", sol.upstream.q);
  third("M2_minus", M2m);
  return rep;
}

}  // namespace swirl
