#ifndef HARDYCONE_SPECTRAL_HPP_
#define HARDYCONE_SPECTRAL_HPP_

#include <functional>
#include <optional>
#include <stdexcept>

#include "hardycone/geometry.hpp"

// Sturm-Liouville eigenvalues on geodesic caps, Hardy constants of cones and
// the critical-exponent formulas built from them.

namespace hardycone {

struct search_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axisymmetric nonnegative weight V(theta) on a cap, with a known bound.
struct AngularWeight {
  std::function<double(double)> profile;
  double max_value = 0.0;

  static AngularWeight constant(double v) {
    return {[v](double) { return v; }, v};
  }
};

struct ShootingOptions {
  int rk_steps = 10000;
  double lambda_tol = 1e-10;
  int scan_points = 400;
  double start_angle = 1e-6;
};

// First Dirichlet eigenvalue of the cap problem
//   (sin^{N-2} t Phi')' + (lambda + V(t)) sin^{N-2} t Phi = 0 on (0, theta0),
// regular at t = 0, Phi(theta0) = 0. Shooting with bisection on lambda.
double cap_eigenvalue(int N, double theta0,
                      const std::optional<AngularWeight>& V = std::nullopt,
                      const ShootingOptions& opts = {});

// Shooting endpoint value Phi(theta0; lambda); roots are the eigenvalues.
double cap_shooting_endpoint(int N, double theta0, double lambda,
                             const std::optional<AngularWeight>& V = std::nullopt,
                             const ShootingOptions& opts = {});

double cap_lambda1(const CapSpec& cap,
                   const std::optional<AngularWeight>& V = std::nullopt,
                   const ShootingOptions& opts = {});

// mu(C_Sigma) = (N-2)^2/4 + lambda1(Sigma)
double hardy_constant(int N, double lambda1);

// Smaller root of alpha^2 - (N-2) alpha + c - lambda1 = 0.
double alpha_minus(int N, double c, double lambda1);

// p = 1 + (2 - s)/alpha, the critical exponent (weighted variant for s != 0).
double critical_exponent(double alpha, double s = 0.0);

// Threshold (N-k+2)/(N-k-2) of the distance-weighted tube problem at unit
// weight, obtained from alpha = (N-k-2)/2.
double tube_critical_exponent(int N, int k);

struct HardyProblem {
  int N = 3;
  double c = 0.0;
  double s = 0.0;
  CapSpec cap;
};

struct RegimeFlags {
  bool c_above_lambda1 = false;
  bool c_at_most_mu = false;
  bool valid() const { return c_above_lambda1 && c_at_most_mu; }
};

struct ExponentReport {
  double lambda1 = 0.0;
  double mu = 0.0;
  double alpha_minus = 0.0;  // NaN outside the valid regime
  double p_critical = 0.0;   // NaN outside the valid regime
  double q_critical = 0.0;   // NaN outside the valid regime
  RegimeFlags flags;
};

// Full report; exponent fields are NaN (with flags recording why) when the
// regime lambda1 < c <= mu does not hold.
ExponentReport exponent_report(const HardyProblem& problem,
                               const ShootingOptions& opts = {});

}  // namespace hardycone

#endif  // HARDYCONE_SPECTRAL_HPP_
