#include "swirl/subsonic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace swirl {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

bool is_zero(const LinearField2D& f) { return f.empty() || f.max_abs() == 0.0; }

double at_or_zero(const LinearField2D& f, std::size_t i, std::size_t j) {
  return f.empty() ? 0.0 : f(i, j);
}

double at_or_zero(const RadialProfile& f, std::size_t j) { return f.empty() ? 0.0 : f[j]; }

void check_grid(const LinearField2D& f, const LinearField2D& ref, const char* what) {
  if (!f.empty() && !f.same_grid(ref))
    throw SolverError(ErrorKind::domain, std::string("field ") + what + " is on a different grid");
}

// r-measure of the vertex cells
std::vector<double> r_cells(std::size_t nr, double h) {
  std::vector<double> m(nr);
  for (std::size_t j = 0; j < nr; ++j) {
    const double lo = j == 0 ? 0.0 : (static_cast<double>(j) - 0.5) * h;
    const double hi = j + 1 == nr ? static_cast<double>(j) * h : (static_cast<double>(j) + 0.5) * h;
    m[j] = 0.5 * (hi * hi - lo * lo);
  }
  return m;
}

double simpson2d(const LinearField2D& f, const std::function<double(std::size_t, std::size_t)>& g) {
  std::vector<double> col(f.nz()), row(f.nr());
  for (std::size_t i = 0; i < f.nz(); ++i) {
    for (std::size_t j = 0; j < f.nr(); ++j) row[j] = g(i, j);
    col[i] = integrate(row, f.dr());
  }
  return integrate(col, f.dz());
}

Eigen::VectorXd solve_spd(const SpMat& A, const Eigen::VectorXd& b) {
  if (A.rows() > 200000) {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-13);
    cg.setMaxIterations(20 * static_cast<int>(A.rows()));
    cg.compute(A);
    Eigen::VectorXd x = cg.solve(b);
    if (cg.info() != Eigen::Success)
      throw SolverError(ErrorKind::numerical, "conjugate gradient did not converge");
    return x;
  }
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd x = ldlt.solve(b);
    if (ldlt.info() == Eigen::Success && (A * x - b).norm() <= 1e-9 * std::max(1.0, b.norm()))
      return x;
  }
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SolverError(ErrorKind::numerical, "sparse factorization failed: " + lu.lastErrorMessage());
  return lu.solve(b);
}

// Cumulative trapezoid along z, column by column.
LinearField2D cumulative_z(const LinearField2D& f) {
  LinearField2D F(f.zlo(), f.zhi(), f.r0(), f.nz(), f.nr());
  const double dz = f.dz();
  for (std::size_t i = 1; i < f.nz(); ++i)
    for (std::size_t j = 0; j < f.nr(); ++j)
      F(i, j) = F(i - 1, j) + 0.5 * dz * (f(i, j) + f(i - 1, j));
  return F;
}

double dz_at(const LinearField2D& f, std::size_t i, std::size_t j) {
  const double dz = f.dz();
  const std::size_t n = f.nz();
  // ends: central difference against a cubic-extrapolated ghost row, so the error
  // expansion matches the interior stencil and differences of the result stay second order
  if (i == 0) return (-4 * f(0, j) + 7 * f(1, j) - 4 * f(2, j) + f(3, j)) / (2 * dz);
  if (i + 1 == n)
    return (4 * f(n - 1, j) - 7 * f(n - 2, j) + 4 * f(n - 3, j) - f(n - 4, j)) / (2 * dz);
  return (f(i + 1, j) - f(i - 1, j)) / (2 * dz);
}

double sample_row(std::span<const double> row, double r, double dr) {
  return interp_cubic(row, std::clamp(r / dr, 0.0, static_cast<double>(row.size() - 1)));
}

double sample_field(const LinearField2D& f, double z, double r) {
  const double tz = std::clamp((z - f.zlo()) / f.dz(), 0.0, static_cast<double>(f.nz() - 1));
  const long base = std::clamp(static_cast<long>(std::floor(tz)) - 1, 0L,
                               static_cast<long>(f.nz()) - 4);
  double v[4];
  for (int m = 0; m < 4; ++m) v[m] = sample_row(f.row(base + m), r, f.dr());
  return interp_cubic(std::span<const double>(v, 4), tz - static_cast<double>(base));
}

// R at every grid row from z_i down to zlo along dR/dtau = H
std::vector<double> trace_path(const LinearField2D& H, std::size_t i, double r) {
  std::vector<double> R(i + 1);
  R[i] = r;
  const double dz = H.dz(), r0 = H.r0();
  const double tol = 1e-10 * r0;
  auto h = [&](double z, double rr) { return sample_field(H, z, rr); };
  for (std::size_t k = i; k > 0; --k) {
    const double z = H.z(k), x = R[k];
    const double s = -dz;
    const double k1 = h(z, x);
    const double k2 = h(z + 0.5 * s, x + 0.5 * s * k1);
    const double k3 = h(z + 0.5 * s, x + 0.5 * s * k2);
    const double k4 = h(z + s, x + s * k3);
    double y = x + s / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (y < -tol || y > r0 + tol) {
      std::ostringstream os;
      os << "characteristic left the domain at z=" << z + s << ", r=" << y;
      throw SolverError(ErrorKind::trace, os.str());
    }
    R[k - 1] = std::clamp(y, 0.0, r0);
  }
  return R;
}

}  // namespace

LinearField2D solve_neumann_potential(const RadialProfile& a, const RadialProfile& b, double zlo,
                                      double zhi, std::size_t nz, const LinearField2D& rhs,
                                      const RadialProfile& flux_lo, const RadialProfile& flux_hi,
                                      double rhs_integral_tol, double* compat_residual) {
  const std::size_t nr = a.size();
  const double r0 = a.r0(), h = a.h();
  LinearField2D phi(zlo, zhi, r0, nz, nr);
  check_grid(rhs, phi, "rhs");
  const double dz = phi.dz();

  // continuous compatibility by Simpson
  const double vol = simpson2d(phi, [&](std::size_t i, std::size_t j) {
    return phi.r(j) * at_or_zero(rhs, i, j);
  });
  const double vol_abs = simpson2d(phi, [&](std::size_t i, std::size_t j) {
    return std::abs(phi.r(j) * at_or_zero(rhs, i, j));
  });
  std::vector<double> fl(nr), fla(nr);
  for (std::size_t j = 0; j < nr; ++j) {
    const double ra = phi.r(j) * a[j];
    fl[j] = ra * (at_or_zero(flux_hi, j) - at_or_zero(flux_lo, j));
    fla[j] = std::abs(ra * at_or_zero(flux_hi, j)) + std::abs(ra * at_or_zero(flux_lo, j));
  }
  const double mismatch = vol - integrate(fl, h);
  const double scale = vol_abs + integrate(fla, h);
  const double rel = scale > 0.0 ? std::abs(mismatch) / scale : 0.0;
  if (compat_residual) *compat_residual = rel;
  if (rel > rhs_integral_tol) {
    std::ostringstream os;
    os << "Neumann compatibility violated: relative mismatch " << rel << " > " << rhs_integral_tol;
    throw SolverError(ErrorKind::solvability, os.str());
  }

  const auto m = r_cells(nr, h);
  std::vector<double> rb(nr - 1);
  for (std::size_t j = 0; j + 1 < nr; ++j) {
    const double rh = (static_cast<double>(j) + 0.5) * h;
    rb[j] = rh * b.at(rh) / h;
  }
  const std::size_t N = nz * nr;
  std::vector<Trip> trips;
  trips.reserve(6 * N);
  Eigen::VectorXd B = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N + 1));
  auto id = [nr](std::size_t i, std::size_t j) { return static_cast<int>(i * nr + j); };
  const int lag = static_cast<int>(N);
  for (std::size_t i = 0; i < nz; ++i) {
    const double len = (i == 0 || i + 1 == nz) ? 0.5 * dz : dz;
    for (std::size_t j = 0; j < nr; ++j) {
      const int k = id(i, j);
      double diag = 0.0;
      const double cz = a[j] * m[j] / dz;
      if (i + 1 < nz) {
        trips.emplace_back(k, id(i + 1, j), cz);
        diag -= cz;
      }
      if (i > 0) {
        trips.emplace_back(k, id(i - 1, j), cz);
        diag -= cz;
      }
      if (j + 1 < nr) {
        trips.emplace_back(k, id(i, j + 1), len * rb[j]);
        diag -= len * rb[j];
      }
      if (j > 0) {
        trips.emplace_back(k, id(i, j - 1), len * rb[j - 1]);
        diag -= len * rb[j - 1];
      }
      trips.emplace_back(k, k, diag);
      const double w = len * m[j];
      trips.emplace_back(k, lag, w);
      trips.emplace_back(lag, k, w);
      double rhs_k = w * at_or_zero(rhs, i, j);
      if (i == 0) rhs_k += a[j] * m[j] * at_or_zero(flux_lo, j);
      if (i + 1 == nz) rhs_k -= a[j] * m[j] * at_or_zero(flux_hi, j);
      B(k) = rhs_k;
    }
  }
  SpMat A(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N + 1));
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SolverError(ErrorKind::numerical, "Neumann system factorization failed");
  const Eigen::VectorXd x = lu.solve(B);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SolverError(ErrorKind::numerical, "Neumann system solve failed");
  for (std::size_t k = 0; k < N; ++k) phi.values()[k] = x(static_cast<Eigen::Index>(k));
  return phi;
}

LinearField2D solve_stream_elliptic(const RadialProfile& K1, const RadialProfile& K2,
                                    const RadialProfile& F0, double zlo, double zhi,
                                    std::size_t nz, const LinearField2D& rhs) {
  const std::size_t nr = K1.size();
  const double h = K1.h();
  LinearField2D psi(zlo, zhi, K1.r0(), nz, nr);
  check_grid(rhs, psi, "rhs");
  if (is_zero(rhs)) return psi;
  const double dz = psi.dz();
  const std::size_t mz = nz - 2, mr = nr - 1;
  std::vector<double> a(mr), M(mr);
  for (std::size_t j = 0; j < mr; ++j) {
    const double rp = (static_cast<double>(j) + 0.5) * h;
    const double rm = j == 0 ? 0.0 : (static_cast<double>(j) - 0.5) * h;
    a[j] = K2.at(rp) * rp * rp * rp / h;
    M[j] = (rp * rp * rp * rp - rm * rm * rm * rm) / 4.0;
  }
  auto id = [mr](std::size_t i, std::size_t j) { return static_cast<int>((i - 1) * mr + j); };
  std::vector<Trip> trips;
  trips.reserve(5 * mz * mr);
  Eigen::VectorXd B(static_cast<Eigen::Index>(mz * mr));
  for (std::size_t i = 1; i + 1 < nz; ++i) {
    for (std::size_t j = 0; j < mr; ++j) {
      const int k = id(i, j);
      const double cz = M[j] * K1[j] / dz;
      double diag = 2 * cz - dz * M[j] * F0[j];
      if (i > 1) trips.emplace_back(k, id(i - 1, j), -cz);
      if (i + 2 < nz) trips.emplace_back(k, id(i + 1, j), -cz);
      diag += dz * a[j];
      if (j + 1 < mr) trips.emplace_back(k, id(i, j + 1), -dz * a[j]);
      if (j > 0) {
        diag += dz * a[j - 1];
        trips.emplace_back(k, id(i, j - 1), -dz * a[j - 1]);
      }
      trips.emplace_back(k, k, diag);
      B(k) = -dz * M[j] * rhs(i, j);
    }
  }
  SpMat A(static_cast<Eigen::Index>(mz * mr), static_cast<Eigen::Index>(mz * mr));
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  const Eigen::VectorXd x = solve_spd(A, B);
  if (!x.allFinite()) throw SolverError(ErrorKind::numerical, "stream-function solve failed");
  for (std::size_t i = 1; i + 1 < nz; ++i)
    for (std::size_t j = 0; j < mr; ++j) psi(i, j) = x(id(i, j));
  return psi;
}

CoercivityReport coercivity_radius_check(const BackgroundShockSolution& bg) {
  const auto& gas = bg.gas;
  const double g = gas.gamma();
  const auto coef = stream_coefficients(bg.downstream, gas);
  const double r0 = bg.r0();
  CoercivityReport rep;
  rep.margin = coef.K1.min() / (4.0 * r0 * r0) - coef.F0.max();

  const auto& up = bg.upstream;
  const auto Pm = pow(bg.downstream.p, -1.0 / g);
  const auto wr = up.w.over_r();
  const auto dw = up.w.derivative();
  double num = std::numeric_limits<double>::infinity(), den = 0.0;
  for (std::size_t j = 0; j < bg.size(); ++j) {
    const double sr = std::sqrt(up.rho[j]);
    num = std::min(num, sr * up.q[j] * Pm[j]);
    const double t = bg.t[j];
    const double inner = wr[j] * wr[j] *
                             (2 * (g - 1) / (1 - t) + g +
                              0.5 * (g - 1) * up.w[j] * up.w[j] / (up.q[j] * up.q[j])) +
                         wr[j] * dw[j];
    den = std::max(den, sr * Pm[j] * std::sqrt(std::max(0.0, inner)));
  }
  rep.r_star = den > 0.0 ? std::sqrt(2.0) * gas.mu2() * num / (4.0 * den)
                         : std::numeric_limits<double>::infinity();
  return rep;
}

ProblemIResult solve_problem_I(const SubsonicProblemData& data, const BackgroundShockSolution& bg,
                               double solvability_tol) {
  const auto& gas = bg.gas;
  const auto& dn = bg.downstream;
  const std::size_t nr = bg.size(), nz = data.nz;
  const auto P = pow(dn.p, 1.0 / gas.gamma());
  const auto M2 = dn.M2(gas);
  const auto rq2 = dn.rho * dn.q * dn.q;
  const auto b = (P * P / rq2).with_parity(Parity::even);
  const auto a = zip(b, M2, [](double x, double m) { return (1.0 - m) * x; });
  LinearField2D rhs;
  if (!is_zero(data.f1)) {
    rhs = LinearField2D(data.z_shock, data.L, bg.r0(), nz, nr);
    check_grid(data.f1, rhs, "f1");
    for (std::size_t i = 0; i < nz; ++i)
      for (std::size_t j = 0; j < nr; ++j) rhs(i, j) = P[j] * data.f1(i, j);
  }
  const RadialProfile zero = RadialProfile::constant(bg.r0(), nr, 0.0);
  const auto g1 = data.g1.empty() ? zero : resample(data.g1, nr);
  const auto pex = data.p_ex_scaled.empty() ? zero : resample(data.p_ex_scaled, nr);
  ProblemIResult res;
  res.phi = solve_neumann_potential(a, b, data.z_shock, data.L, nz, rhs, g1 / P, pex / P,
                                    solvability_tol, &res.solvability_residual);
  const auto& phi = res.phi;
  res.dp1 = res.dtheta1 = LinearField2D(data.z_shock, data.L, bg.r0(), nz, nr);
  const double dz = phi.dz(), h = phi.dr();
  for (std::size_t i = 0; i < nz; ++i) {
    for (std::size_t j = 0; j < nr; ++j) {
      double pz;
      if (i == 0)
        pz = g1[j] / P[j];
      else if (i + 1 == nz)
        pz = pex[j] / P[j];
      else
        pz = (phi(i + 1, j) - phi(i - 1, j)) / (2 * dz);
      res.dp1(i, j) = P[j] * pz;
      if (j > 0 && j + 1 < nr)
        res.dtheta1(i, j) = -P[j] / rq2[j] * (phi(i, j + 1) - phi(i, j - 1)) / (2 * h);
    }
  }
  return res;
}

ProblemIIResult solve_problem_II(const SubsonicProblemData& data,
                                 const BackgroundShockSolution& bg,
                                 const LinearField2D& dtheta1) {
  const auto& gas = bg.gas;
  const auto& dn = bg.downstream;
  const std::size_t nr = bg.size(), nz = data.nz;
  ProblemIIResult res;
  const auto cr = coercivity_radius_check(bg);
  res.coercivity_margin = cr.margin;
  if (cr.margin < 0.0) {
    std::ostringstream os;
    os << "coercivity condition fails: max F0 exceeds min K1/(4 r0^2) by " << -cr.margin
       << " (r* estimate " << cr.r_star << ", r0 = " << bg.r0() << ")";
    throw SolverError(ErrorKind::coercivity, os.str());
  }
  const auto coef = stream_coefficients(dn, gas);
  LinearField2D grid(data.z_shock, data.L, bg.r0(), nz, nr);
  check_grid(data.f2, grid, "f2");
  check_grid(dtheta1, grid, "dtheta1");
  const auto Pinv = pow(dn.p, -1.0 / gas.gamma());
  LinearField2D Fs(data.z_shock, data.L, bg.r0(), nz, nr);
  const bool has_nonlocal = !is_zero(dtheta1) && coef.swirl.max_abs() > 0.0;
  const LinearField2D It = has_nonlocal ? cumulative_z(dtheta1) : LinearField2D();
  for (std::size_t i = 0; i < nz; ++i) {
    std::vector<double> F2(nr);
    for (std::size_t j = 0; j < nr; ++j)
      F2[j] = at_or_zero(data.f2, i, j) + (has_nonlocal ? coef.swirl[j] * It(i, j) : 0.0);
    const auto over = RadialProfile(bg.r0(), std::move(F2)).over_r();
    for (std::size_t j = 0; j < nr; ++j) Fs(i, j) = Pinv[j] * over[j];
  }
  res.psi = solve_stream_elliptic(coef.K1, coef.K2, coef.F0, data.z_shock, data.L, nz, Fs);
  const auto& psi = res.psi;
  res.dp2 = res.dtheta2 = LinearField2D(data.z_shock, data.L, bg.r0(), nz, nr);
  const auto M2 = dn.M2(gas);
  for (std::size_t i = 0; i < nz; ++i) {
    const auto pr = diff1(psi.row(i), psi.dr());
    for (std::size_t j = 0; j < nr; ++j) {
      const double r = psi.r(j);
      res.dtheta2(i, j) = r * Pinv[j] * dz_at(psi, i, j);
      res.dp2(i, j) = dn.rho[j] * dn.q[j] * dn.q[j] / (1.0 - M2[j]) * Pinv[j] *
                      (r * pr[j] + 2.0 * psi(i, j));
    }
  }
  return res;
}

double characteristic_trace(const std::function<double(double, double)>& H, double z, double r,
                            double z_from, double step, double r0) {
  if (z == z_from) return r;
  if (!(step > 0.0)) throw SolverError(ErrorKind::domain, "trace step must be positive");
  const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(z_from - z) / step - 1e-12)));
  const double s = (z_from - z) / static_cast<double>(n);
  const double tol = 1e-10 * r0;
  double x = r, t = z;
  for (long k = 0; k < n; ++k) {
    const double k1 = H(t, x);
    const double k2 = H(t + 0.5 * s, x + 0.5 * s * k1);
    const double k3 = H(t + 0.5 * s, x + 0.5 * s * k2);
    const double k4 = H(t + s, x + s * k3);
    x += s / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t = z + static_cast<double>(k + 1) * s;
    if (x < -tol || x > r0 + tol) {
      std::ostringstream os;
      os << "characteristic left the domain at z=" << t << ", r=" << x;
      throw SolverError(ErrorKind::trace, os.str());
    }
    x = std::clamp(x, 0.0, r0);
  }
  return x;
}

double characteristic_trace(const LinearField2D& H, double z, double r, double z_from) {
  return characteristic_trace([&H](double t, double x) { return sample_field(H, t, x); }, z, r,
                              z_from, H.dz(), H.r0());
}

TransportResult transport_downstream(const SubsonicProblemData& data,
                                     const BackgroundShockSolution& bg,
                                     const LinearField2D& dtheta, const LinearField2D& dp) {
  const auto& gas = bg.gas;
  const auto& dn = bg.downstream;
  const std::size_t nz = dtheta.nz(), nr = dtheta.nr();
  for (const auto* f : {&data.f3, &data.f4, &data.f5, &data.H}) check_grid(*f, dtheta, "source");
  check_grid(dp, dtheta, "dp");
  const RadialProfile zero = RadialProfile::constant(bg.r0(), nr, 0.0);
  auto prof = [&](const RadialProfile& p) { return p.empty() ? zero : resample(p, nr); };
  const auto g1 = prof(data.g1), g2 = prof(data.g2), g3 = prof(data.g3), g4 = prof(data.g4);
  const double T = 1.0 / ((gas.gamma() - 1.0) * gas.c_v());
  std::vector<double> b0(nr);
  for (std::size_t j = 0; j < nr; ++j)
    b0[j] = g1[j] / dn.rho[j] + dn.q[j] * g3[j] + dn.p[j] * T / dn.rho[j] * g4[j] +
            dn.w[j] * g2[j];
  const RadialProfile B0(bg.r0(), std::move(b0));
  const auto rw = dn.w.times_r();
  const auto drw = rw.derivative();  // (r w)'
  const auto wcoef = dn.w.derivative() + dn.w.over_r();
  const auto ds = dn.s.derivative();
  const auto dB = dn.bernoulli(gas).derivative();

  TransportResult out;
  out.dw = out.ds = out.dB = out.dq =
      LinearField2D(dtheta.zlo(), dtheta.zhi(), dtheta.r0(), nz, nr);

  if (is_zero(data.H)) {
    const auto It = cumulative_z(dtheta);
    const bool f3 = !is_zero(data.f3), f4 = !is_zero(data.f4), f5 = !is_zero(data.f5);
    const auto I3 = f3 ? cumulative_z(data.f3) : LinearField2D();
    const auto I4 = f4 ? cumulative_z(data.f4) : LinearField2D();
    const auto I5 = f5 ? cumulative_z(data.f5) : LinearField2D();
    for (std::size_t i = 0; i < nz; ++i) {
      RadialProfile i3r = zero;
      if (f3) i3r = I3.row_profile(i).over_r();
      for (std::size_t j = 0; j < nr; ++j) {
        out.dw(i, j) = g2[j] + i3r[j] - wcoef[j] * It(i, j);
        out.ds(i, j) = g4[j] + (f5 ? I5(i, j) : 0.0) - ds[j] * It(i, j);
        out.dB(i, j) = B0[j] + (f4 ? I4(i, j) : 0.0) - dB[j] * It(i, j);
      }
    }
  } else {
    const double dz = dtheta.dz(), h = dtheta.dr();
    const long total = static_cast<long>(nz * nr);
    SolverError first(ErrorKind::trace, "");
    bool failed = false;
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < total; ++k) {
      const std::size_t i = static_cast<std::size_t>(k) / nr, j = static_cast<std::size_t>(k) % nr;
      std::vector<double> R;
      try {
        R = trace_path(data.H, i, dtheta.r(j));
      } catch (const SolverError& e) {
#pragma omp critical
        {
          if (!failed) first = e;
          failed = true;
        }
        continue;
      }
      auto along = [&](auto&& fn) {
        double acc = 0.0;
        for (std::size_t m = 0; m < i; ++m) acc += 0.5 * dz * (fn(m, R[m]) + fn(m + 1, R[m + 1]));
        return acc;
      };
      auto fld = [&](const LinearField2D& f, std::size_t m, double x) {
        return f.empty() ? 0.0 : sample_row(f.row(m), x, h);
      };
      const double R0 = R[0];
      const double rdw = R0 * g2.at(R0) + along([&](std::size_t m, double x) {
                           return fld(data.f3, m, x) - drw.at(x) * fld(dtheta, m, x);
                         });
      const double r = dtheta.r(j);
      out.dw(i, j) = r > 0.0 ? rdw / r : 0.0;
      out.ds(i, j) = g4.at(R0) + along([&](std::size_t m, double x) {
                       return fld(data.f5, m, x) - ds.at(x) * fld(dtheta, m, x);
                     });
      out.dB(i, j) = B0.at(R0) + along([&](std::size_t m, double x) {
                       return fld(data.f4, m, x) - dB.at(x) * fld(dtheta, m, x);
                     });
    }
    if (failed) throw first;
  }
  for (std::size_t i = 0; i < nz; ++i)
    for (std::size_t j = 0; j < nr; ++j)
      out.dq(i, j) = (out.dB(i, j) - dn.w[j] * out.dw(i, j) - dp(i, j) / dn.rho[j] -
                      dn.p[j] * T / dn.rho[j] * out.ds(i, j)) /
                     dn.q[j];
  return out;
}

LinearField2D approximate_f2(const JumpTraces& traces, const BackgroundShockSolution& bg,
                             double z_shock, double L, std::size_t nz) {
  const auto& dn = bg.downstream;
  const std::size_t nr = bg.size();
  const auto wr = dn.w.over_r();
  const double gcv = bg.gas.gamma() * bg.gas.c_v();
  const auto g2 = resample(traces.g2, nr), g4 = resample(traces.g4, nr);
  LinearField2D f(z_shock, L, bg.r0(), nz, nr);
  for (std::size_t j = 0; j < nr; ++j) {
    const double v = 2 * dn.rho[j] * wr[j] * g2[j] - dn.rho[j] * dn.w[j] * wr[j] / gcv * g4[j];
    for (std::size_t i = 0; i < nz; ++i) f(i, j) = v;
  }
  return f;
}

SubsonicLinearSolution solve_subsonic(const SubsonicProblemData& data,
                                      const BackgroundShockSolution& bg,
                                      double solvability_tol) {
  if (!(data.L > data.z_shock)) throw SolverError(ErrorKind::domain, "empty subsonic region");
  if (data.nz < 4) throw SolverError(ErrorKind::domain, "subsonic grid needs nz >= 4");
  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const SolverError& e) {
      throw SolverError(e.kind(), std::string(name) + ": " + e.what());
    }
  };
  SubsonicLinearSolution sol;
  auto p1 = stage("problem I", [&] { return solve_problem_I(data, bg, solvability_tol); });
  auto p2 = stage("problem II", [&] { return solve_problem_II(data, bg, p1.dtheta1); });
  sol.dp = p1.dp1 + p2.dp2;
  sol.dtheta = p1.dtheta1 + p2.dtheta2;
  auto tr = stage("transport", [&] { return transport_downstream(data, bg, sol.dtheta, sol.dp); });
  sol.dw = std::move(tr.dw);
  sol.ds = std::move(tr.ds);
  sol.dB = std::move(tr.dB);
  sol.dq = std::move(tr.dq);
  sol.dp1 = std::move(p1.dp1);
  sol.dtheta1 = std::move(p1.dtheta1);
  sol.phi = std::move(p1.phi);
  sol.dp2 = std::move(p2.dp2);
  sol.dtheta2 = std::move(p2.dtheta2);
  sol.psi = std::move(p2.psi);
  sol.solvability_residual = p1.solvability_residual;
  sol.coercivity_margin = p2.coercivity_margin;
  return sol;
}

SubsonicProblemData approximate_problem_data(const BackgroundShockSolution& bg,
                                             const JumpTraces& traces,
                                             const PerturbationInput& pert, double z_star,
                                             double L, std::size_t nz) {
  SubsonicProblemData data;
  data.z_shock = z_star;
  data.L = L;
  data.nz = nz;
  data.f2 = approximate_f2(traces, bg, z_star, L, nz);
  data.g1 = traces.g1;
  data.g2 = traces.g2;
  data.g3 = traces.g3;
  data.g4 = traces.g4;
  data.p_ex_scaled = pert.sigma * resample(pert.p_ex, bg.size());
  return data;
}

SubsonicLinearSolution approximate_subsonic_solution(const BackgroundShockSolution& bg,
                                                     const SupersonicLinearSolution& sup,
                                                     const JumpTraces& traces,
                                                     const PerturbationInput& pert, double z_star,
                                                     double L, std::size_t nz,
                                                     double solvability_tol) {
  const auto data = approximate_problem_data(bg, traces, pert, z_star, L, nz);
  auto sol = solve_subsonic(data, bg, solvability_tol);
  sol.dphi_prime = linearized_shock_slope(sol.dtheta.row_profile(0),
                                          sup.theta_dot.row_at(z_star), bg);
  return sol;
}

SubsonicResiduals residual_linearized_subsonic(const SubsonicLinearSolution& sol,
                                               const SubsonicProblemData& data,
                                               const BackgroundShockSolution& bg) {
  const auto& gas = bg.gas;
  const auto& dn = bg.downstream;
  const std::size_t nz = sol.dp.nz(), nr = sol.dp.nr();
  const double dz = sol.dp.dz(), h = sol.dp.dr();
  const auto P = pow(dn.p, 1.0 / gas.gamma());
  const auto M2 = dn.M2(gas);
  const auto coef = stream_coefficients(dn, gas);
  const auto drw = dn.w.times_r().derivative();
  const auto dB = dn.bernoulli(gas).derivative();
  const auto ds = dn.s.derivative();
  const auto It = cumulative_z(sol.dtheta);
  const bool H = !is_zero(data.H);
  SubsonicResiduals R;
  auto Dz = [&](const LinearField2D& f, std::size_t i, std::size_t j) {
    return (f(i + 1, j) - f(i - 1, j)) / (2 * dz);
  };
  auto Dr = [&](const LinearField2D& f, std::size_t i, std::size_t j) {
    return (f(i, j + 1) - f(i, j - 1)) / (2 * h);
  };
  for (std::size_t i = 1; i + 1 < nz; ++i) {
    for (std::size_t j = 1; j + 1 < nr; ++j) {
      const double r = sol.dp.r(j), rl = sol.dp.r(j - 1), ru = sol.dp.r(j + 1);
      const double rq2 = dn.rho[j] * dn.q[j] * dn.q[j];
      const double e1 = (1 - M2[j]) / rq2 * r * P[j] * Dz(sol.dp, i, j) -
                        (ru * P[j + 1] * sol.dtheta(i, j + 1) - rl * P[j - 1] * sol.dtheta(i, j - 1)) /
                            (2 * h) -
                        r * P[j] * at_or_zero(data.f1, i, j);
      const double e2 = rq2 / P[j] * Dz(sol.dtheta, i, j) +
                        (sol.dp(i, j + 1) / P[j + 1] - sol.dp(i, j - 1) / P[j - 1]) / (2 * h) -
                        coef.swirl[j] / P[j] * It(i, j) - at_or_zero(data.f2, i, j) / P[j];
      const double hh = H ? data.H(i, j) : 0.0;
      const double rdw_z = (r * sol.dw(i + 1, j) - r * sol.dw(i - 1, j)) / (2 * dz);
      const double rdw_r = (ru * sol.dw(i, j + 1) - rl * sol.dw(i, j - 1)) / (2 * h);
      const double e3 = rdw_z + hh * rdw_r + drw[j] * sol.dtheta(i, j) - at_or_zero(data.f3, i, j);
      const double e4 = Dz(sol.dB, i, j) + hh * Dr(sol.dB, i, j) + dB[j] * sol.dtheta(i, j) -
                        at_or_zero(data.f4, i, j);
      const double e5 = Dz(sol.ds, i, j) + hh * Dr(sol.ds, i, j) + ds[j] * sol.dtheta(i, j) -
                        at_or_zero(data.f5, i, j);
      R.eq1 = std::max(R.eq1, std::abs(e1));
      R.eq2 = std::max(R.eq2, std::abs(e2));
      R.eq3 = std::max(R.eq3, std::abs(e3));
      R.eq4 = std::max(R.eq4, std::abs(e4));
      R.eq5 = std::max(R.eq5, std::abs(e5));
    }
  }
  return R;
}

}  // namespace swirl
