#include "swirl/rh_linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swirl {

std::array<JumpRow, 5> jump_rows(const FlowState& st, const GasModel& gas) {
  const auto th = derived_quantities(st, gas);
  const double g = gas.gamma(), cv = gas.c_v();
  const double rho = th.rho, q = st.q;
  std::array<JumpRow, 5> a;
  a[0] << q / th.c2, 0, 0, rho, -rho * q / (g * cv);
  a[1] << 1 + th.M2, 0, 0, 2 * rho * q, -rho * q * q / (g * cv);
  a[2] << 0, 0, 1, 0, 0;
  a[3] << 1 / rho, 0, 0, q, st.p / ((g - 1) * cv * rho);
  a[4] << 0, rho * q * q, 0, 0, 0;
  return a;
}

ShockMatrix assemble_shock_matrix(const FlowState& plus, const GasModel& gas) {
  const auto th = derived_quantities(plus, gas);
  if (std::abs(1.0 - th.M2) < 1e-10)
    throw SolverError(ErrorKind::singular, "shock matrix singular: downstream Mach number is 1");
  const auto rows = jump_rows(plus, gas);
  ShockMatrix m;
  for (int k = 0; k < 4; ++k) {
    // drop the flow-angle column
    m.entries(k, 0) = rows[k](0);
    m.entries(k, 1) = rows[k](2);
    m.entries(k, 2) = rows[k](3);
    m.entries(k, 3) = rows[k](4);
  }
  m.det = m.entries.determinant();
  m.det_closed = plus.p * (1.0 - th.M2) / ((gas.gamma() - 1.0) * gas.c_v());
  if (std::abs(m.det - m.det_closed) > 1e-10 * std::abs(m.det_closed)) {
    std::ostringstream os;
    os << "shock matrix determinant " << m.det << " disagrees with " << m.det_closed;
    throw SolverError(ErrorKind::numerical, os.str());
  }
  m.inverse = m.entries.inverse();
  return m;
}

KappaProfiles kappa_profiles(const BackgroundShockSolution& bg) {
  const auto& gas = bg.gas;
  const double g = gas.gamma(), cv = gas.c_v();
  const auto& up = bg.upstream;
  const auto& dn = bg.downstream;
  const auto c2m = up.c2(gas), c2p = dn.c2(gas);
  const auto dsm = up.s.derivative(), dqm = up.q.derivative();
  const std::size_t n = bg.size();
  std::vector<double> k1(n), k2(n), k3(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jump = dn.p[j] - up.p[j];
    const double qp = dn.q[j], qm = up.q[j];
    k1[j] = (1.0 / (dn.rho[j] * qp * qp) + (g - 1.0) / (g * dn.p[j])) * jump;
    k2[j] = (1.0 / (qp * qm) - (g - 1.0) / c2p[j]) * (qp - qm) - k1[j] / qm;
    k3[j] = (1.0 - k1[j] - dn.rho[j] * up.p[j] / (up.rho[j] * dn.p[j])) * dsm[j] / (g * cv) +
            (k1[j] + (1.0 / qp - (g - 1.0) * qm / c2p[j]) * (qm - qp)) * dqm[j] / qm;
  }
  KappaProfiles K;
  K.kappa1 = RadialProfile(bg.r0(), std::move(k1), Parity::even);
  K.kappa2 = RadialProfile(bg.r0(), std::move(k2), Parity::even);
  K.kappa3 = RadialProfile(bg.r0(), std::move(k3), Parity::odd);
  const auto dk1 = K.kappa1.derivative();
  const auto P = pow(dn.p, 1.0 / g);
  std::vector<double> i1(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = bg.t.r(j);
    const double swirl = dn.w[j] * dn.w[j] / c2p[j] - up.w[j] * up.w[j] / c2m[j];
    i1[j] = P[j] * ((1.0 - K.kappa1[j]) * swirl + r * K.kappa3[j] - r * dk1[j]);
  }
  K.i1 = RadialProfile(bg.r0(), std::move(i1), Parity::even);
  return K;
}

UpstreamTrace upstream_trace(const SupersonicLinearSolution& sup, double z) {
  UpstreamTrace t;
  t.p = sup.p_dot.row_at(z, Parity::even);
  t.theta = sup.theta_dot.row_at(z, Parity::odd);
  t.w = sup.w_dot.row_at(z, Parity::odd);
  t.q = sup.q_dot.row_at(z, Parity::even);
  t.s = sup.s_dot.row_at(z, Parity::even);
  t.theta_integral = sup.theta_time_integral.row_at(z, Parity::odd);
  return t;
}

JumpTraces linearized_jump_traces(const UpstreamTrace& ut, const BackgroundShockSolution& bg,
                                  const PerturbationInput& pert, const KappaProfiles& kap) {
  const auto& gas = bg.gas;
  const double g = gas.gamma(), cv = gas.c_v();
  const auto& up = bg.upstream;
  const auto& dn = bg.downstream;
  const std::size_t n = bg.size();
  const auto M2m = up.M2(gas), M2p = dn.M2(gas);
  const auto wcoef = up.w.derivative() + up.w.over_r();
  const auto dsm = up.s.derivative(), dqm = up.q.derivative();
  const auto qen = resample(pert.q_en, n), wen = resample(pert.w_en, n);
  const auto pd = resample(ut.p, n), wd = resample(ut.w, n), qd = resample(ut.q, n),
             sd = resample(ut.s, n), Th = resample(ut.theta_integral, n);
  const double sig = pert.sigma;

  std::vector<double> g1(n), g2(n), g3(n), g4(n), c1(n), c2(n), c3(n), c4(n);
  JumpTraces out;
  for (std::size_t j = 0; j < n; ++j) {
    const FlowState minus{up.p[j], 0.0, up.w[j], up.q[j], up.s[j]};
    const FlowState plus{dn.p[j], 0.0, dn.w[j], dn.q[j], dn.s[j]};
    const auto A = assemble_shock_matrix(plus, gas);
    const auto am = jump_rows(minus, gas);
    JumpRow U;
    U << pd[j], 0.0, wd[j], qd[j], sd[j];
    Eigen::Vector4d G;
    for (int k = 0; k < 4; ++k) G(k) = am[k].dot(U);
    const Eigen::Vector4d x = A.inverse * G;
    g1[j] = x(0);
    g2[j] = x(1);
    g3[j] = x(2);
    g4[j] = x(3);
    out.consistency = std::max(out.consistency, (A.entries * x - G).cwiseAbs().maxCoeff());

    // closed-form evaluation
    const double rp = dn.rho[j], qp = dn.q[j], rm = up.rho[j], qm = up.q[j];
    const double jump = dn.p[j] - up.p[j];
    const double k1 = kap.kappa1[j], k2 = kap.kappa2[j], k3 = kap.kappa3[j];
    const double lead = rp * qp * qp / (M2p[j] - 1.0);
    const double sup = (M2m[j] - 1.0) / (rm * qm * qm);
    const double th = Th[j];
    c1[j] = lead * (sup * (1.0 - k1) * pd[j] + k2 * sig * qen[j] + k3 * th);
    c2[j] = sig * wen[j] - wcoef[j] * th;
    c3[j] = sup * (jump - lead * (1.0 - k1)) * pd[j] / (rp * qp) +
            (1.0 + jump / (rm * qm * qm) - lead * k2 / (rp * qp)) * sig * qen[j] +
            ((dsm[j] / (g * cv) - dqm[j] / qm) * jump / (rp * qp) - dqm[j] - lead * k3 / (rp * qp)) *
                th;
    const double f = (g - 1.0) * cv / dn.p[j];
    const double mix = rp * qm - rm * qm - jump / qm;
    c4[j] = -f * sup * jump * pd[j] + f * mix * sig * qen[j] -
            f * ((rp * up.p[j] / ((g - 1.0) * cv * rm) + jump / (g * cv)) * dsm[j] + mix * dqm[j]) *
                th;
  }
  const double r0 = bg.r0();
  out.g1 = RadialProfile(r0, std::move(g1), Parity::even);
  out.g2 = RadialProfile(r0, std::move(g2), Parity::odd);
  out.g3 = RadialProfile(r0, std::move(g3), Parity::even);
  out.g4 = RadialProfile(r0, std::move(g4), Parity::even);
  out.g1_closed = RadialProfile(r0, std::move(c1), Parity::even);
  out.g2_closed = RadialProfile(r0, std::move(c2), Parity::odd);
  out.g3_closed = RadialProfile(r0, std::move(c3), Parity::even);
  out.g4_closed = RadialProfile(r0, std::move(c4), Parity::even);
  auto gap = [](const RadialProfile& a, const RadialProfile& b) {
    const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
    return (a - b).max_abs() / scale;
  };
  out.path_mismatch = std::max({gap(out.g1, out.g1_closed), gap(out.g2, out.g2_closed),
                                gap(out.g3, out.g3_closed), gap(out.g4, out.g4_closed)});
  if (out.g1.max_abs() + out.g2.max_abs() + out.g3.max_abs() + out.g4.max_abs() == 0.0)
    out.path_mismatch = 0.0;
  return out;
}

JumpTraces linearized_jump_traces(const SupersonicLinearSolution& sup,
                                  const BackgroundShockSolution& bg,
                                  const PerturbationInput& pert, double z_shock) {
  if (!(z_shock > sup.psi.zlo() && z_shock < sup.psi.zhi()))
    throw SolverError(ErrorKind::domain, "shock position outside the supersonic region");
  return linearized_jump_traces(upstream_trace(sup, z_shock), bg, pert, kappa_profiles(bg));
}

RadialProfile linearized_shock_slope(const RadialProfile& theta_plus,
                                     const RadialProfile& theta_minus,
                                     const BackgroundShockSolution& bg) {
  const auto& up = bg.upstream;
  const auto& dn = bg.downstream;
  const std::size_t n = bg.size();
  const auto tp = resample(theta_plus, n), tm = resample(theta_minus, n);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jump = dn.p[j] - up.p[j];
    if (std::abs(jump) < 1e-8)
      throw SolverError(ErrorKind::singular, "pressure jump vanishes across the shock");
    v[j] = (dn.rho[j] * dn.q[j] * dn.q[j] * tp[j] - up.rho[j] * up.q[j] * up.q[j] * tm[j]) / jump;
  }
  return RadialProfile(bg.r0(), std::move(v), Parity::odd);
}

}  // namespace swirl
