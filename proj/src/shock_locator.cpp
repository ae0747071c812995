#include "swirl/shock_locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace swirl {

namespace {

RadialProfile p_weight(const BackgroundShockSolution& bg, const KappaProfiles& kap) {
  const auto& gas = bg.gas;
  const auto P = pow(bg.downstream.p, 1.0 / gas.gamma());
  const auto M2m = bg.upstream.M2(gas);
  const std::size_t n = bg.size();
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = bg.t.r(j);
    v[j] = r * P[j] * (1.0 - kap.kappa1[j]) * (M2m[j] - 1.0) /
           (bg.upstream.rho[j] * bg.upstream.q[j] * bg.upstream.q[j]);
  }
  return RadialProfile(bg.r0(), std::move(v));
}

RadialProfile theta_weight(const BackgroundShockSolution& bg, const KappaProfiles& kap) {
  const auto P = pow(bg.downstream.p, 1.0 / bg.gas.gamma());
  return (P * kap.kappa3).times_r();
}

}  // namespace

double integral_I2(const PerturbationInput& pert, const KappaProfiles& kap,
                   const BackgroundShockSolution& bg) {
  const auto& gas = bg.gas;
  const auto& dn = bg.downstream;
  const std::size_t n = bg.size();
  const auto P = pow(dn.p, 1.0 / gas.gamma());
  const auto M2p = dn.M2(gas);
  const auto pex = resample(pert.p_ex, n), qen = resample(pert.q_en, n);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double rP = bg.t.r(j) * P[j];
    v[j] = (M2p[j] - 1.0) / (dn.rho[j] * dn.q[j] * dn.q[j]) * rP * pex[j] -
           rP * kap.kappa2[j] * qen[j];
  }
  return integrate(RadialProfile(bg.r0(), std::move(v)));
}

double integral_I3(const PerturbationInput& pert, const KappaProfiles& kap,
                   const BackgroundShockSolution& bg) {
  const auto& up = bg.upstream;
  const auto wr = up.w.over_r();
  const auto wen = resample(pert.w_en, bg.size());
  return integrate(kap.i1 / (up.q * up.q) * wr * wen);
}

double integral_I1(double z, const SupersonicLinearSolution& sup, const KappaProfiles& kap,
                   const BackgroundShockSolution& bg) {
  const auto pd = resample(sup.p_dot.row_at(z), bg.size());
  const auto Th = resample(sup.theta_time_integral.row_at(z), bg.size());
  return integrate(p_weight(bg, kap) * pd) + integrate(theta_weight(bg, kap) * Th);
}

ShockLocator::ShockLocator(const SupersonicLinearSolution& sup, const BackgroundShockSolution& bg,
                           const KappaProfiles& kap, const PerturbationInput& pert)
    : sup_(sup),
      wp_(resample(p_weight(bg, kap), sup.psi.nr())),
      wt_(resample(theta_weight(bg, kap), sup.psi.nr())),
      i1_(resample(kap.i1, sup.psi.nr())),
      I2_(integral_I2(pert, kap, bg)),
      I3_(integral_I3(pert, kap, bg)),
      sigma_(pert.sigma) {
  abs_i1_ = integrate(kap.i1.map([](double x) { return std::abs(x); }));
}

double ShockLocator::I1(double z) const {
  const auto pd = sup_.p_dot.row_at(z);
  const auto Th = sup_.theta_time_integral.row_at(z);
  return integrate(wp_ * pd) + integrate(wt_ * Th);
}

double ShockLocator::dI1(double z) const { return integrate(i1_ * sup_.theta_dot.row_at(z)); }

double ShockLocator::theta_curvature_bound() const {
  const auto& f = sup_.theta_dot;
  const double dz2 = f.dz() * f.dz();
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < f.nz(); ++i)
    for (std::size_t j = 0; j < f.nr(); ++j)
      m = std::max(m, std::abs(f(i + 1, j) - 2 * f(i, j) + f(i - 1, j)) / dz2);
  return m;
}

std::vector<double> ShockLocator::sample(const std::vector<double>& zs, bool parallel) const {
  std::vector<double> out(zs.size());
  const long n = static_cast<long>(zs.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (long k = 0; k < n; ++k) out[k] = I1(zs[k]);
  return out;
}

AdmissibleWindow admissible_window(double I3, double I2, double sigma, double curvature_bound,
                                   double abs_i1, double L) {
  if (!(I3 > 0.0)) {
    std::ostringstream os;
    os << "shock location condition I3 > 0 fails (I3 = " << I3 << ")";
    throw SolverError(ErrorKind::admissibility, os.str());
  }
  AdmissibleWindow w;
  w.curvature_bound = curvature_bound;
  const double c = curvature_bound * abs_i1;
  w.L_star = L;
  if (c > 0.0) w.L_star = std::min(L, (1.0 - 1e-6) * 4.0 * sigma * I3 / c);
  const double rhs = w.L_star * w.L_star * (sigma * I3 - c / 6.0 * w.L_star);
  w.ok = sigma * I2 > 0.0 && sigma * I2 <= rhs;
  return w;
}

RootResult locate_root(const std::function<double(double)>& I1,
                       const std::function<double(double)>& dI1, double target, double zhi,
                       std::size_t nsamples,
                       const std::function<std::vector<double>(const std::vector<double>&)>&
                           sampler) {
  if (nsamples < 3) nsamples = 3;
  RootResult res;
  std::vector<double> zs(nsamples);
  for (std::size_t k = 0; k < nsamples; ++k)
    zs[k] = zhi * static_cast<double>(k) / static_cast<double>(nsamples - 1);
  std::vector<double> vals;
  if (sampler) {
    vals = sampler(zs);
  } else {
    vals.resize(nsamples);
    for (std::size_t k = 0; k < nsamples; ++k) vals[k] = I1(zs[k]);
  }
  res.monotone = true;
  for (std::size_t k = 0; k < nsamples; ++k) {
    res.samples.emplace_back(zs[k], vals[k]);
    if (k > 0 && !(vals[k] > vals[k - 1])) res.monotone = false;
  }
  const double zlo = 1e-6 * zhi;
  auto f = [&](double z) { return I1(z) - target; };

  // brackets among the samples, with the first panel starting at zlo
  std::vector<std::pair<double, double>> brackets;
  double za = zlo, fa = f(zlo);
  for (std::size_t k = 1; k < nsamples; ++k) {
    const double zb = zs[k], fb = vals[k] - target;
    if (fa == 0.0) {
      brackets.emplace_back(za, za);
    } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
      brackets.emplace_back(za, zb);
    } else if (fb == 0.0 && k + 1 == nsamples) {
      brackets.emplace_back(zb, zb);
    }
    za = zb;
    fa = fb;
  }
  if (brackets.empty()) {
    std::ostringstream os;
    os << "no root of I1(z) = " << target << " in (" << zlo << ", " << zhi << ")";
    throw SolverError(ErrorKind::no_root, os.str());
  }
  if (brackets.size() > 1 || !res.monotone) {
    std::ostringstream os;
    os << "I1 not monotone on the window; brackets:";
    for (const auto& b : brackets) os << " [" << b.first << ", " << b.second << "]";
    throw SolverError(ErrorKind::ambiguous_root, os.str());
  }
  double a = brackets[0].first, b = brackets[0].second;
  double fa_ = f(a);
  for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * b; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fm < 0.0) == (fa_ < 0.0)) {
      a = m;
      fa_ = fm;
    } else {
      b = m;
    }
  }
  double z = 0.5 * (a + b);
  double fz = f(z);
  // Newton polish with the analytic derivative, kept inside the final bracket
  for (int it = 0; it < 4 && fz != 0.0; ++it) {
    const double d = dI1 ? dI1(z) : 0.0;
    if (!(d > 0.0)) break;
    const double zn = z - fz / d;
    if (!(zn >= a && zn <= b)) break;
    const double fn = f(zn);
    if (std::abs(fn) >= std::abs(fz)) break;
    z = zn;
    fz = fn;
  }
  res.z = z;
  res.residual = std::abs(fz);
  return res;
}

ShockLocationReport locate_shock(const ShockLocator& loc, double L, std::size_t nsamples) {
  ShockLocationReport rep;
  rep.I2 = loc.I2();
  rep.I3 = loc.I3();
  const auto win = admissible_window(rep.I3, rep.I2, loc.sigma(), loc.theta_curvature_bound(),
                                     loc.abs_i1_integral(), std::min(L, loc.zmax()));
  rep.L_star = win.L_star;
  rep.window_ok = win.ok;
  const double target = loc.sigma() * rep.I2;
  if (!(target > 0.0))
    throw SolverError(ErrorKind::no_root, "sigma*I2 <= 0: no shock position in (0, L*)");
  auto res = locate_root([&](double z) { return loc.I1(z); },
                         [&](double z) { return loc.dI1(z); }, target, rep.L_star, nsamples,
                         [&](const std::vector<double>& zs) { return loc.sample(zs); });
  rep.z_star = res.z;
  rep.root_residual = res.residual;
  rep.monotone_ok = res.monotone;
  rep.I1_samples = std::move(res.samples);
  rep.I1_at_root = loc.I1(res.z);
  return rep;
}

}  // namespace swirl
