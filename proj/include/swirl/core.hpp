#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swirl {

enum class ErrorKind {
  domain,         // bad argument to a thermodynamic or grid primitive
  axis,           // axis regularity violated (f(0) != 0 where required)
  admissibility,  // background not a transonic shock, I3 <= 0, ...
  singular,       // linearized shock matrix not invertible
  solvability,    // Neumann compatibility violated
  no_root,
  ambiguous_root,
  coercivity,
  step_size,      // CFL could not be met within the refinement cap
  numerical,      // solver breakdown
  trace,          // characteristic left the domain
  config,
  io
};

const char* to_string(ErrorKind k);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Polytropic gas p = A e^{s/c_v} rho^gamma.
class GasModel {
 public:
  GasModel() = default;
  GasModel(double gamma, double c_v, double A);

  double gamma() const { return gamma_; }
  double c_v() const { return c_v_; }
  double A() const { return A_; }
  double mu2() const { return (gamma_ - 1.0) / (gamma_ + 1.0); }

 private:
  double gamma_ = 1.4;
  double c_v_ = 1.0;
  double A_ = 1.0;
};

struct FlowState {
  double p = 1.0;
  double theta = 0.0;
  double w = 0.0;
  double q = 0.0;
  double s = 0.0;
};

struct Thermo {
  double rho;
  double c2;
  double M2;  // quasi-Mach squared, q^2/c^2
  double B;   // Bernoulli
};

Thermo derived_quantities(const FlowState& state, const GasModel& gas);
double density_from_pressure_entropy(double p, double s, const GasModel& gas);
double entropy_from_pressure_density(double p, double rho, const GasModel& gas);

// ---- uniform-grid stencils --------------------------------------------------

/// 4th order first derivative; one-sided at the ends.
std::vector<double> diff1(std::span<const double> f, double h);
/// 4th order second derivative; one-sided at the ends.
std::vector<double> diff2(std::span<const double> f, double h);
/// One-sided third derivative at the first node.
double diff3_first(std::span<const double> f, double h);
/// Cumulative integral from the first node, F[0]=0, O(h^4).
std::vector<double> cumulative(std::span<const double> f, double h);
/// Definite integral over the whole grid (Simpson, 3/8 rule for the odd panel).
double integrate(std::span<const double> f, double h);
/// 4-point Lagrange interpolation at x = x0 + t*h with t in [0, n-1].
double interp_cubic(std::span<const double> f, double t);

// ---- radial profiles --------------------------------------------------------

enum class Parity { even, odd, none };

/// Samples on r_j = j*r0/(N-1), j = 0..N-1.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(double r0, std::vector<double> samples, Parity parity = Parity::none);

  static RadialProfile from_function(double r0, std::size_t n,
                                     const std::function<double(double)>& f,
                                     Parity parity = Parity::none);
  static RadialProfile constant(double r0, std::size_t n, double c);

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double r0() const { return r0_; }
  double h() const { return r0_ / static_cast<double>(v_.size() - 1); }
  double r(std::size_t j) const { return static_cast<double>(j) * h(); }
  Parity parity() const { return parity_; }
  double operator[](std::size_t j) const { return v_[j]; }
  double& operator[](std::size_t j) { return v_[j]; }
  const std::vector<double>& values() const { return v_; }
  std::span<const double> span() const { return v_; }

  double at(double r) const;
  double front() const { return v_.front(); }
  double back() const { return v_.back(); }
  double max() const;
  double min() const;
  double max_abs() const;

  RadialProfile derivative() const;
  RadialProfile second_derivative() const;
  double third_derivative_at_axis() const;
  /// f/r with the axis value replaced by f'(0).
  RadialProfile over_r() const;
  RadialProfile times_r() const;
  RadialProfile map(const std::function<double(double)>& fn) const;
  RadialProfile with_parity(Parity p) const;
  bool same_grid(const RadialProfile& o) const;

 private:
  double r0_ = 1.0;
  std::vector<double> v_;
  Parity parity_ = Parity::none;
};

/// Same profile on an n-point grid (cubic interpolation; identity when sizes match).
RadialProfile resample(const RadialProfile& f, std::size_t n);

/// F(0)=0, F' = f (or f/r when divide_by_r).
RadialProfile cumulative_integral(const RadialProfile& f, bool divide_by_r = false);
double integrate(const RadialProfile& f);

RadialProfile operator+(const RadialProfile& a, const RadialProfile& b);
RadialProfile operator-(const RadialProfile& a, const RadialProfile& b);
RadialProfile operator*(const RadialProfile& a, const RadialProfile& b);
RadialProfile operator/(const RadialProfile& a, const RadialProfile& b);
RadialProfile operator*(double c, const RadialProfile& a);
RadialProfile operator*(const RadialProfile& a, double c);
RadialProfile operator+(const RadialProfile& a, double c);
RadialProfile operator-(const RadialProfile& a);
RadialProfile pow(const RadialProfile& a, double e);
RadialProfile zip(const RadialProfile& a, const RadialProfile& b,
                  const std::function<double(double, double)>& fn);

// ---- 2D fields --------------------------------------------------------------

/// Samples on a uniform (z, r) grid, z-outer row-major.
class LinearField2D {
 public:
  LinearField2D() = default;
  LinearField2D(double zlo, double zhi, double r0, std::size_t nz, std::size_t nr,
                double fill = 0.0);

  double zlo() const { return zlo_; }
  double zhi() const { return zhi_; }
  double r0() const { return r0_; }
  std::size_t nz() const { return nz_; }
  std::size_t nr() const { return nr_; }
  double dz() const { return (zhi_ - zlo_) / static_cast<double>(nz_ - 1); }
  double dr() const { return r0_ / static_cast<double>(nr_ - 1); }
  double z(std::size_t i) const { return zlo_ + static_cast<double>(i) * dz(); }
  double r(std::size_t j) const { return static_cast<double>(j) * dr(); }
  bool empty() const { return v_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return v_[i * nr_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * nr_ + j]; }
  std::span<double> row(std::size_t i) { return {v_.data() + i * nr_, nr_}; }
  std::span<const double> row(std::size_t i) const { return {v_.data() + i * nr_, nr_}; }
  RadialProfile row_profile(std::size_t i, Parity parity = Parity::none) const;
  /// Row at arbitrary z by cubic interpolation along z.
  RadialProfile row_at(double z, Parity parity = Parity::none) const;
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  double max_abs() const;
  bool same_grid(const LinearField2D& o) const;

 private:
  double zlo_ = 0.0, zhi_ = 1.0, r0_ = 1.0;
  std::size_t nz_ = 0, nr_ = 0;
  std::vector<double> v_;
};

LinearField2D operator+(const LinearField2D& a, const LinearField2D& b);
LinearField2D operator*(double c, const LinearField2D& a);

}  // namespace swirl
