#include "swirl/supersonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swirl {

namespace {

void endpoint_check(const RadialProfile& f, bool value, bool at_axis, const std::string& what,
                    double tol) {
  const double scale = std::max(1.0, f.max_abs());
  double v;
  if (value) {
    v = at_axis ? f.front() : f.back();
  } else {
    const auto d = f.derivative();
    v = at_axis ? d.front() : d.back();
  }
  if (std::abs(v) > tol * scale)
    throw SolverError(ErrorKind::config, "compatibility condition " + what + " violated");
}

}  // namespace

void validate_perturbation(const PerturbationInput& pert, bool require_swirl, double tol) {
  if (!(pert.sigma >= 0.0)) throw SolverError(ErrorKind::config, "sigma must be non-negative");
  endpoint_check(pert.w_en, true, true, "w_en(0)=0", tol);
  endpoint_check(pert.w_en, true, false, "w_en(r0)=0", tol);
  endpoint_check(pert.q_en, false, true, "q_en'(0)=0", tol);
  endpoint_check(pert.q_en, false, false, "q_en'(r0)=0", tol);
  endpoint_check(pert.p_ex, false, true, "p_ex'(0)=0", tol);
  endpoint_check(pert.p_ex, false, false, "p_ex'(r0)=0", tol);
  if (require_swirl && pert.w_en.max_abs() == 0.0)
    throw SolverError(ErrorKind::config, "compatibility condition w_en != 0 violated");
}

StreamCoefficients stream_coefficients(const RadialState& st, const GasModel& gas) {
  const double g = gas.gamma();
  StreamCoefficients c;
  c.P = pow(st.p, 1.0 / g).with_parity(Parity::even);
  const auto pm2 = pow(st.p, -2.0 / g);
  const auto M2 = st.M2(gas);
  c.K1 = (st.rho * st.q * st.q * pm2).with_parity(Parity::even);
  c.K2 = zip(c.K1, M2, [](double k, double m) { return k / (1.0 - m); }).with_parity(Parity::even);
  const auto wr = st.w.over_r();
  const auto dw = st.w.derivative();
  const auto ds = st.s.derivative();
  std::vector<double> sw(st.p.size());
  for (std::size_t j = 0; j < sw.size(); ++j)
    sw[j] = st.rho[j] * wr[j] * (ds[j] * st.w[j] / (g * gas.c_v()) - 2.0 * (dw[j] + wr[j]));
  c.swirl = RadialProfile(st.p.r0(), std::move(sw), Parity::even);
  c.F0 = (2.0 * c.K2.derivative().over_r() - c.swirl * pm2).with_parity(Parity::even);
  return c;
}

WaveProblem assemble_wave_problem(const BackgroundShockSolution& bg,
                                  const PerturbationInput& pert, double L) {
  if (!(L > 0.0)) throw SolverError(ErrorKind::domain, "nozzle length must be positive");
  const auto& gas = bg.gas;
  if (!(bg.upstream.M2(gas).min() > 1.0))
    throw SolverError(ErrorKind::domain, "background upstream is not quasi-supersonic");
  WaveProblem prob;
  prob.coef = stream_coefficients(bg.upstream, gas);
  prob.L = L;
  const auto& up = bg.upstream;
  const std::size_t n = up.p.size();
  const auto wr = up.w.over_r();
  const auto wen = resample(pert.w_en, n).over_r();
  std::vector<double> S(n);
  for (std::size_t j = 0; j < n; ++j)
    S[j] = 2.0 * up.rho[j] / prob.coef.P[j] * pert.sigma * wr[j] * wen[j];
  prob.S = RadialProfile(up.p.r0(), std::move(S), Parity::even);
  return prob;
}

double max_stable_dz(const StreamCoefficients& coef, double dr, double cfl) {
  double speed = 0.0;
  for (std::size_t j = 0; j < coef.K1.size(); ++j)
    speed = std::max(speed, std::sqrt(std::abs(coef.K2[j]) / coef.K1[j]));
  // the r^3-weighted radial operator has spectral radius ~8/h^2 at the axis
  return cfl * dr / (std::sqrt(2.0) * speed);
}

namespace {

struct RadialOperator {
  std::vector<double> a;     // flux weights at j+1/2
  std::vector<double> hv;    // h*V_j
  std::vector<double> k1, f0, s;
};

RadialOperator build_operator(const WaveProblem& prob, std::size_t nr) {
  const double r0 = prob.coef.K1.r0();
  const double h = r0 / static_cast<double>(nr - 1);
  RadialOperator op;
  op.a.resize(nr - 1);
  op.hv.resize(nr);
  op.k1.resize(nr);
  op.f0.resize(nr);
  op.s.resize(nr);
  for (std::size_t j = 0; j + 1 < nr; ++j) {
    const double rp = (static_cast<double>(j) + 0.5) * h;
    op.a[j] = prob.coef.K2.at(rp) * rp * rp * rp / h;
  }
  for (std::size_t j = 0; j < nr; ++j) {
    const double rp = (static_cast<double>(j) + 0.5) * h;
    const double rm = j == 0 ? 0.0 : (static_cast<double>(j) - 0.5) * h;
    op.hv[j] = (rp * rp * rp * rp - rm * rm * rm * rm) / 4.0;
    const double r = static_cast<double>(j) * h;
    op.k1[j] = prob.coef.K1.at(r);
    op.f0[j] = prob.coef.F0.at(r);
    op.s[j] = prob.S.empty() ? 0.0 : prob.S.at(r);
  }
  return op;
}

std::size_t refined_nz(const WaveProblem& prob, std::size_t nz, std::size_t nr,
                       const MarchOptions& opt, int& factor) {
  const double dr = prob.coef.K1.r0() / static_cast<double>(nr - 1);
  const double dzmax = max_stable_dz(prob.coef, dr, opt.cfl);
  factor = 1;
  while (prob.L / static_cast<double>((nz - 1) * factor) > dzmax) {
    factor *= 2;
    if (factor > opt.max_refine) {
      std::ostringstream os;
      os << "CFL condition needs dz <= " << dzmax << " beyond the refinement cap "
         << opt.max_refine;
      throw SolverError(ErrorKind::step_size, os.str());
    }
  }
  return (nz - 1) * static_cast<std::size_t>(factor) + 1;
}

}  // namespace

MarchResult march_stream_function(const WaveProblem& prob, std::size_t nz, std::size_t nr,
                                  const MarchOptions& opt) {
  MarchResult res;
  const std::size_t nzf = refined_nz(prob, nz, nr, opt, res.refine_factor);
  const auto op = build_operator(prob, nr);
  LinearField2D psi(0.0, prob.L, prob.coef.K1.r0(), nzf, nr);
  const double dz = psi.dz();
  const double dz2 = dz * dz;
  const long last = static_cast<long>(nr) - 1;  // Dirichlet node
  std::vector<double> src(nr);

  auto source_row = [&](std::size_t i) {
    if (prob.source_zr) {
      for (std::size_t j = 0; j < nr; ++j) src[j] = prob.source_zr(psi.z(i), psi.r(j));
    } else {
      std::copy(op.s.begin(), op.s.end(), src.begin());
    }
  };

  source_row(0);
  for (long j = 0; j < last; ++j) psi(1, j) = 0.5 * dz2 * src[j] / op.k1[j];

  res.ghost.assign(nr, 0.0);
  for (std::size_t i = 1; i < nzf; ++i) {
    source_row(i);
    const double* pm = psi.row(i - 1).data();
    const double* pc = psi.row(i).data();
    double* pn = i + 1 < nzf ? psi.row(i + 1).data() : res.ghost.data();
#pragma omp parallel for schedule(static) if (opt.parallel)
    for (long j = 0; j < last; ++j) {
      const double right = op.a[j] * (pc[j + 1] - pc[j]);
      const double left = j == 0 ? 0.0 : op.a[j - 1] * (pc[j] - pc[j - 1]);
      const double lap = (right - left) / op.hv[j];
      pn[j] = 2.0 * pc[j] - pm[j] + dz2 * (src[j] - lap - op.f0[j] * pc[j]) / op.k1[j];
    }
  }
  res.psi = std::move(psi);
  return res;
}

LinearField2D march_stream_function_reference(const WaveProblem& prob, std::size_t nz,
                                              std::size_t nr) {
  MarchOptions opt;
  opt.parallel = false;
  int factor = 1;
  const std::size_t nzf = refined_nz(prob, nz, nr, opt, factor);
  const auto op = build_operator(prob, nr);
  LinearField2D psi(0.0, prob.L, prob.coef.K1.r0(), nzf, nr);
  const double dz2 = psi.dz() * psi.dz();
  for (std::size_t i = 0; i + 1 < nzf; ++i) {
    for (std::size_t j = 0; j + 1 < nr; ++j) {
      const double s = prob.source_zr ? prob.source_zr(psi.z(i), psi.r(j)) : op.s[j];
      if (i == 0) {
        psi(1, j) = 0.5 * dz2 * s / op.k1[j];
        continue;
      }
      const double right = op.a[j] * (psi(i, j + 1) - psi(i, j));
      const double left = j == 0 ? 0.0 : op.a[j - 1] * (psi(i, j) - psi(i, j - 1));
      const double lap = (right - left) / op.hv[j];
      psi(i + 1, j) =
          2.0 * psi(i, j) - psi(i - 1, j) + dz2 * (s - lap - op.f0[j] * psi(i, j)) / op.k1[j];
    }
  }
  return psi;
}

SupersonicLinearSolution recover_fields(const LinearField2D& psi,
                                        const BackgroundShockSolution& bg,
                                        const PerturbationInput& pert,
                                        const std::vector<double>& ghost) {
  const auto& gas = bg.gas;
  const std::size_t nz = psi.nz(), nr = psi.nr();
  const auto& up = bg.upstream;
  const auto p = resample(up.p, nr), rho = resample(up.rho, nr), q = resample(up.q, nr);
  const auto w = resample(up.w, nr), s = resample(up.s, nr);
  const auto Pinv = pow(p, -1.0 / gas.gamma());
  const auto M2 = resample(up.M2(gas), nr);
  const auto wcoef = w.derivative() + w.over_r();
  const auto ds = s.derivative();
  const auto dq = q.derivative();
  const auto wen = resample(pert.w_en, nr), qen = resample(pert.q_en, nr);

  SupersonicLinearSolution out;
  out.psi = psi;
  out.p_dot = out.theta_dot = out.w_dot = out.q_dot = out.s_dot = out.theta_time_integral =
      LinearField2D(psi.zlo(), psi.zhi(), psi.r0(), nz, nr);
  const double dz = psi.dz();

  for (std::size_t i = 0; i < nz; ++i) {
    const auto dpsi_r = diff1(psi.row(i), psi.dr());
    for (std::size_t j = 0; j < nr; ++j) {
      const double r = psi.r(j);
      double pz;
      if (i == 0)
        pz = 0.0;
      else if (i + 1 == nz && ghost.size() == nr)
        pz = (ghost[j] - psi(i - 1, j)) / (2 * dz);
      else if (i + 1 == nz)
        pz = (4 * psi(i, j) - 7 * psi(i - 1, j) + 4 * psi(i - 2, j) - psi(i - 3, j)) / (2 * dz);
      else
        pz = (psi(i + 1, j) - psi(i - 1, j)) / (2 * dz);
      const double Th = r * Pinv[j] * psi(i, j);
      const double pd = rho[j] * q[j] * q[j] / (1.0 - M2[j]) * Pinv[j] *
                        (2.0 * psi(i, j) + r * dpsi_r[j]);
      out.theta_time_integral(i, j) = Th;
      out.theta_dot(i, j) = r * Pinv[j] * pz;
      out.p_dot(i, j) = pd;
      out.w_dot(i, j) = pert.sigma * wen[j] - wcoef[j] * Th;
      out.s_dot(i, j) = -ds[j] * Th;
      out.q_dot(i, j) = pert.sigma * qen[j] - pd / (rho[j] * q[j]) - dq[j] * Th;
    }
  }
  return out;
}

SupersonicLinearSolution solve_supersonic(const BackgroundShockSolution& bg,
                                          const PerturbationInput& pert, double L,
                                          std::size_t nz, const MarchOptions& opt) {
  const auto prob = assemble_wave_problem(bg, pert, L);
  auto m = march_stream_function(prob, nz, bg.size(), opt);
  auto sol = recover_fields(m.psi, bg, pert, m.ghost);
  sol.refine_factor = m.refine_factor;
  return sol;
}

SupersonicResiduals residual_linearized_supersonic(const SupersonicLinearSolution& sol,
                                                   const BackgroundShockSolution& bg) {
  const auto& gas = bg.gas;
  const double g = gas.gamma();
  const std::size_t nz = sol.psi.nz(), nr = sol.psi.nr();
  const auto& up = bg.upstream;
  const auto p = resample(up.p, nr), rho = resample(up.rho, nr), q = resample(up.q, nr);
  const auto w = resample(up.w, nr), s = resample(up.s, nr);
  const auto M2 = resample(up.M2(gas), nr);
  const auto Pinv = pow(p, -1.0 / g);
  const double dz = sol.psi.dz(), dr = sol.psi.dr();
  auto Dz = [&](const LinearField2D& f, std::size_t i, std::size_t j) {
    return (f(i + 1, j) - f(i - 1, j)) / (2 * dz);
  };
  auto Dr = [&](const LinearField2D& f, std::size_t i, std::size_t j) {
    return (f(i, j + 1) - f(i, j - 1)) / (2 * dr);
  };
  auto bgr = [&](const RadialProfile& f, std::size_t j) {
    return (f[j + 1] - f[j - 1]) / (2 * dr);
  };
  SupersonicResiduals R;
  for (std::size_t i = 1; i + 1 < nz; ++i) {
    for (std::size_t j = 1; j + 1 < nr; ++j) {
      const double r = sol.psi.r(j);
      const double a1 = (1.0 - M2[j]) / (rho[j] * q[j] * q[j]);
      const double sw = M2[j] * w[j] * w[j] / (q[j] * q[j]);
      const double e1 = a1 * Dz(sol.p_dot, i, j) -
                        (Dr(sol.theta_dot, i, j) + (1.0 + sw) * sol.theta_dot(i, j) / r);
      const double e2 = rho[j] * q[j] * q[j] * Dz(sol.theta_dot, i, j) + Dr(sol.p_dot, i, j) -
                        sw / r * sol.p_dot(i, j) - 2 * rho[j] * w[j] / r * sol.w_dot(i, j) +
                        rho[j] * w[j] * w[j] / (g * gas.c_v() * r) * sol.s_dot(i, j);
      const double drw = (sol.psi.r(j + 1) * w[j + 1] - sol.psi.r(j - 1) * w[j - 1]) / (2 * dr);
      const double e3 = r * Dz(sol.w_dot, i, j) + drw * sol.theta_dot(i, j);
      const double e4 = Dz(sol.p_dot, i, j) + rho[j] * q[j] * Dz(sol.q_dot, i, j) +
                        rho[j] * q[j] * bgr(q, j) * sol.theta_dot(i, j);
      const double e5 = Dz(sol.s_dot, i, j) + bgr(s, j) * sol.theta_dot(i, j);
      R.cde1 = std::max(R.cde1, std::abs(e1));
      R.cde2 = std::max(R.cde2, std::abs(e2));
      R.cde3 = std::max(R.cde3, std::abs(e3));
      R.cde4 = std::max(R.cde4, std::abs(e4));
      R.cde5 = std::max(R.cde5, std::abs(e5));
    }
  }
  for (std::size_t i = 0; i < nz; ++i) {
    const auto dpsi_r = diff1(sol.psi.row(i), dr);
    for (std::size_t j = 0; j < nr; ++j) {
      const double pd = rho[j] * q[j] * q[j] / (1.0 - M2[j]) * Pinv[j] *
                        (2.0 * sol.psi(i, j) + sol.psi.r(j) * dpsi_r[j]);
      R.recovery = std::max(R.recovery, std::abs(pd - sol.p_dot(i, j)));
    }
  }
  return R;
}

}  // namespace swirl
