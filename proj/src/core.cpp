#include "swirl/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swirl {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::axis: return "axis";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::singular: return "singular";
    case ErrorKind::solvability: return "solvability";
    case ErrorKind::no_root: return "no_root";
    case ErrorKind::ambiguous_root: return "ambiguous_root";
    case ErrorKind::coercivity: return "coercivity";
    case ErrorKind::step_size: return "step_size";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::trace: return "trace";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

GasModel::GasModel(double gamma, double c_v, double A) : gamma_(gamma), c_v_(c_v), A_(A) {
  if (!(gamma > 1.0)) throw SolverError(ErrorKind::domain, "gas: gamma must exceed 1");
  if (!(c_v > 0.0)) throw SolverError(ErrorKind::domain, "gas: c_v must be positive");
  if (!(A > 0.0)) throw SolverError(ErrorKind::domain, "gas: A must be positive");
}

double density_from_pressure_entropy(double p, double s, const GasModel& gas) {
  if (!(p > 0.0)) throw SolverError(ErrorKind::domain, "non-positive pressure");
  return std::pow(p / (gas.A() * std::exp(s / gas.c_v())), 1.0 / gas.gamma());
}

double entropy_from_pressure_density(double p, double rho, const GasModel& gas) {
  if (!(p > 0.0) || !(rho > 0.0))
    throw SolverError(ErrorKind::domain, "entropy needs positive pressure and density");
  return gas.c_v() * std::log(p / (gas.A() * std::pow(rho, gas.gamma())));
}

Thermo derived_quantities(const FlowState& st, const GasModel& gas) {
  const double g = gas.gamma();
  const double rho = density_from_pressure_entropy(st.p, st.s, gas);
  const double c2 = g * st.p / rho;
  return {rho, c2, st.q * st.q / c2,
          0.5 * (st.q * st.q + st.w * st.w) + g * st.p / ((g - 1.0) * rho)};
}

// ---- stencils ---------------------------------------------------------------

namespace {

void need(std::size_t n, std::size_t m, const char* what) {
  if (n < m) {
    std::ostringstream os;
    os << what << ": need at least " << m << " samples, got " << n;
    throw SolverError(ErrorKind::domain, os.str());
  }
}

}  // namespace

std::vector<double> diff1(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  need(n, 5, "diff1");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  d[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = c * (f[j - 2] - 8 * f[j - 1] + 8 * f[j + 1] - f[j + 2]);
  const std::size_t e = n - 1;
  d[e - 1] = -c * (-3 * f[e] - 10 * f[e - 1] + 18 * f[e - 2] - 6 * f[e - 3] + f[e - 4]);
  d[e] = -c * (-25 * f[e] + 48 * f[e - 1] - 36 * f[e - 2] + 16 * f[e - 3] - 3 * f[e - 4]);
  return d;
}

std::vector<double> diff2(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  need(n, 6, "diff2");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h * h);
  auto edge0 = [&](auto at) {
    return c * (45 * at(0) - 154 * at(1) + 214 * at(2) - 156 * at(3) + 61 * at(4) - 10 * at(5));
  };
  auto edge1 = [&](auto at) {
    return c * (10 * at(0) - 15 * at(1) - 4 * at(2) + 14 * at(3) - 6 * at(4) + at(5));
  };
  auto lo = [&](std::size_t k) { return f[k]; };
  auto hi = [&](std::size_t k) { return f[n - 1 - k]; };
  d[0] = edge0(lo);
  d[1] = edge1(lo);
  d[n - 1] = edge0(hi);
  d[n - 2] = edge1(hi);
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = c * (-f[j - 2] + 16 * f[j - 1] - 30 * f[j] + 16 * f[j + 1] - f[j + 2]);
  return d;
}

double diff3_first(std::span<const double> f, double h) {
  need(f.size(), 5, "diff3");
  return (-5 * f[0] + 18 * f[1] - 24 * f[2] + 14 * f[3] - 3 * f[4]) / (2.0 * h * h * h);
}

std::vector<double> cumulative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  need(n, 4, "cumulative");
  std::vector<double> F(n, 0.0);
  F[1] = h / 24.0 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
  for (std::size_t j = 2; j < n; ++j)
    F[j] = F[j - 2] + h / 3.0 * (f[j - 2] + 4 * f[j - 1] + f[j]);
  return F;
}

double integrate(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  need(n, 4, "integrate");
  double s = 0.0;
  std::size_t end = n - 1;
  if (n % 2 == 0) {
    // 3/8 rule on the last three panels
    s += 3.0 * h / 8.0 * (f[n - 4] + 3 * f[n - 3] + 3 * f[n - 2] + f[n - 1]);
    end = n - 4;
  }
  double acc = 0.0;
  for (std::size_t j = 0; j + 2 <= end; j += 2) acc += f[j] + 4 * f[j + 1] + f[j + 2];
  return s + h / 3.0 * acc;
}

double interp_cubic(std::span<const double> f, double t) {
  const std::size_t n = f.size();
  need(n, 4, "interp_cubic");
  const double tmax = static_cast<double>(n - 1);
  if (t < -1e-9 * tmax || t > tmax * (1 + 1e-9))
    throw SolverError(ErrorKind::domain, "interpolation point outside grid");
  t = std::clamp(t, 0.0, tmax);
  std::size_t k = static_cast<std::size_t>(std::floor(t));
  k = (k >= 1) ? k - 1 : 0;
  k = std::min(k, n - 4);
  const double x = t - static_cast<double>(k);
  const double w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double w1 = x * (x - 2) * (x - 3) / 2.0;
  const double w2 = -x * (x - 1) * (x - 3) / 2.0;
  const double w3 = x * (x - 1) * (x - 2) / 6.0;
  return w0 * f[k] + w1 * f[k + 1] + w2 * f[k + 2] + w3 * f[k + 3];
}

// ---- RadialProfile ----------------------------------------------------------

RadialProfile::RadialProfile(double r0, std::vector<double> samples, Parity parity)
    : r0_(r0), v_(std::move(samples)), parity_(parity) {
  if (!(r0 > 0.0)) throw SolverError(ErrorKind::domain, "profile: r0 must be positive");
  if (v_.size() < 9) throw SolverError(ErrorKind::domain, "profile: need at least 9 samples");
  if (parity_ == Parity::odd) v_[0] = 0.0;
}

RadialProfile RadialProfile::from_function(double r0, std::size_t n,
                                           const std::function<double(double)>& f,
                                           Parity parity) {
  std::vector<double> v(n);
  const double h = r0 / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(j == n - 1 ? r0 : static_cast<double>(j) * h);
  return RadialProfile(r0, std::move(v), parity);
}

RadialProfile RadialProfile::constant(double r0, std::size_t n, double c) {
  return RadialProfile(r0, std::vector<double>(n, c), Parity::even);
}

double RadialProfile::at(double r) const { return interp_cubic(v_, r / h()); }
double RadialProfile::max() const { return *std::max_element(v_.begin(), v_.end()); }
double RadialProfile::min() const { return *std::min_element(v_.begin(), v_.end()); }
double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

namespace {
Parity flip(Parity p) {
  if (p == Parity::even) return Parity::odd;
  if (p == Parity::odd) return Parity::even;
  return Parity::none;
}
}  // namespace

RadialProfile RadialProfile::derivative() const {
  return RadialProfile(r0_, diff1(v_, h()), flip(parity_));
}

RadialProfile RadialProfile::second_derivative() const {
  return RadialProfile(r0_, diff2(v_, h()), parity_);
}

double RadialProfile::third_derivative_at_axis() const { return diff3_first(v_, h()); }

RadialProfile RadialProfile::over_r() const {
  std::vector<double> out(v_.size());
  const auto d = diff1(v_, h());
  out[0] = d[0];
  for (std::size_t j = 1; j < v_.size(); ++j) out[j] = v_[j] / r(j);
  return RadialProfile(r0_, std::move(out), flip(parity_));
}

RadialProfile RadialProfile::times_r() const {
  std::vector<double> out(v_.size());
  for (std::size_t j = 0; j < v_.size(); ++j) out[j] = v_[j] * r(j);
  return RadialProfile(r0_, std::move(out), flip(parity_));
}

RadialProfile RadialProfile::map(const std::function<double(double)>& fn) const {
  std::vector<double> out(v_.size());
  std::transform(v_.begin(), v_.end(), out.begin(), fn);
  return RadialProfile(r0_, std::move(out), Parity::none);
}

RadialProfile RadialProfile::with_parity(Parity p) const {
  return RadialProfile(r0_, v_, p);
}

bool RadialProfile::same_grid(const RadialProfile& o) const {
  return v_.size() == o.v_.size() && std::abs(r0_ - o.r0_) <= 1e-14 * r0_;
}

RadialProfile cumulative_integral(const RadialProfile& f, bool divide_by_r) {
  if (!divide_by_r) return RadialProfile(f.r0(), cumulative(f.span(), f.h()), Parity::none);
  const double scale = std::max(1.0, f.max_abs());
  if (std::abs(f.front()) > 1e-12 * scale)
    throw SolverError(ErrorKind::axis, "integrand f/r is singular: f(0) != 0");
  return RadialProfile(f.r0(), cumulative(f.over_r().span(), f.h()), Parity::none);
}

double integrate(const RadialProfile& f) { return integrate(f.span(), f.h()); }

RadialProfile zip(const RadialProfile& a, const RadialProfile& b,
                  const std::function<double(double, double)>& fn) {
  if (!a.same_grid(b)) throw SolverError(ErrorKind::domain, "profiles on different grids");
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = fn(a[j], b[j]);
  return RadialProfile(a.r0(), std::move(out), Parity::none);
}

RadialProfile operator+(const RadialProfile& a, const RadialProfile& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
RadialProfile operator-(const RadialProfile& a, const RadialProfile& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
RadialProfile operator*(const RadialProfile& a, const RadialProfile& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
RadialProfile operator/(const RadialProfile& a, const RadialProfile& b) {
  return zip(a, b, [](double x, double y) { return x / y; });
}
RadialProfile operator*(double c, const RadialProfile& a) {
  return a.map([c](double x) { return c * x; }).with_parity(a.parity());
}
RadialProfile operator*(const RadialProfile& a, double c) { return c * a; }
RadialProfile operator+(const RadialProfile& a, double c) {
  return a.map([c](double x) { return x + c; });
}
RadialProfile operator-(const RadialProfile& a) { return -1.0 * a; }
RadialProfile pow(const RadialProfile& a, double e) {
  return a.map([e](double x) { return std::pow(x, e); });
}

// ---- LinearField2D ----------------------------------------------------------

LinearField2D::LinearField2D(double zlo, double zhi, double r0, std::size_t nz, std::size_t nr,
                             double fill)
    : zlo_(zlo), zhi_(zhi), r0_(r0), nz_(nz), nr_(nr), v_(nz * nr, fill) {
  if (!(zlo < zhi)) throw SolverError(ErrorKind::domain, "field: zlo must be below zhi");
  if (!(r0 > 0.0)) throw SolverError(ErrorKind::domain, "field: r0 must be positive");
  if (nz < 4 || nr < 9) throw SolverError(ErrorKind::domain, "field: grid too small");
}

RadialProfile LinearField2D::row_profile(std::size_t i, Parity parity) const {
  auto rw = row(i);
  return RadialProfile(r0_, std::vector<double>(rw.begin(), rw.end()), parity);
}

RadialProfile LinearField2D::row_at(double z, Parity parity) const {
  const double t = (z - zlo_) / dz();
  std::vector<double> out(nr_);
  const double tmax = static_cast<double>(nz_ - 1);
  if (t < -1e-9 * tmax || t > tmax * (1 + 1e-9))
    throw SolverError(ErrorKind::domain, "row_at: z outside field extent");
  const double tc = std::clamp(t, 0.0, tmax);
  std::size_t k = static_cast<std::size_t>(std::floor(tc));
  k = (k >= 1) ? k - 1 : 0;
  k = std::min(k, nz_ - 4);
  const double x = tc - static_cast<double>(k);
  const double w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double w1 = x * (x - 2) * (x - 3) / 2.0;
  const double w2 = -x * (x - 1) * (x - 3) / 2.0;
  const double w3 = x * (x - 1) * (x - 2) / 6.0;
  for (std::size_t j = 0; j < nr_; ++j)
    out[j] = w0 * (*this)(k, j) + w1 * (*this)(k + 1, j) + w2 * (*this)(k + 2, j) +
             w3 * (*this)(k + 3, j);
  return RadialProfile(r0_, std::move(out), parity);
}

double LinearField2D::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool LinearField2D::same_grid(const LinearField2D& o) const {
  return nz_ == o.nz_ && nr_ == o.nr_ && zlo_ == o.zlo_ && zhi_ == o.zhi_ && r0_ == o.r0_;
}

LinearField2D operator+(const LinearField2D& a, const LinearField2D& b) {
  if (!a.same_grid(b)) throw SolverError(ErrorKind::domain, "fields on different grids");
  LinearField2D out = a;
  for (std::size_t k = 0; k < out.values().size(); ++k) out.values()[k] += b.values()[k];
  return out;
}

LinearField2D operator*(double c, const LinearField2D& a) {
  LinearField2D out = a;
  for (double& x : out.values()) x *= c;
  return out;
}

RadialProfile resample(const RadialProfile& f, std::size_t n) {
  if (f.size() == n) return f;
  return RadialProfile::from_function(f.r0(), n, [&f](double r) { return f.at(r); }, f.parity());
}

}  // namespace swirl
