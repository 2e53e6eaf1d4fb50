#include "hardycone/spectral.hpp"

#include <cmath>
#include <limits>

namespace hardycone {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CapOde {
  int N;
  std::function<double(double)> V;  // may be null
  double lambda;

  double v(double t) const { return V ? V(t) : 0.0; }

  // state (phi, dphi)
  void deriv(double t, double phi, double dphi, double& f0, double& f1) const {
    f0 = dphi;
    f1 = -(N - 2) * (std::cos(t) / std::sin(t)) * dphi - (lambda + v(t)) * phi;
  }
};

}  // namespace

double cap_shooting_endpoint(int N, double theta0, double lambda,
                             const std::optional<AngularWeight>& V,
                             const ShootingOptions& opts) {
  if (N < 3) throw std::domain_error("cap_eigenvalue: N >= 3 required");
  if (!(theta0 > 0.0 && theta0 < M_PI))
    throw std::domain_error("cap_eigenvalue: theta0 must lie in (0, pi)");

  CapOde ode{N, V ? V->profile : std::function<double(double)>(), lambda};

  // Frobenius start at t0: Phi = 1 - (lambda + V(0)) t^2 / (2(N-1)) + O(t^4).
  // sin^{N-2} t vanishes at 0, so the series launch keeps O(h^2) accuracy.
  const double t0 = opts.start_angle;
  const double q0 = lambda + ode.v(0.0);
  double phi = 1.0 - q0 * t0 * t0 / (2.0 * (N - 1));
  double dphi = -q0 * t0 / (N - 1);

  const int n = opts.rk_steps;
  const double h = (theta0 - t0) / n;
  double t = t0;
  for (int i = 0; i < n; ++i) {
    double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d;
    ode.deriv(t, phi, dphi, k1p, k1d);
    ode.deriv(t + 0.5 * h, phi + 0.5 * h * k1p, dphi + 0.5 * h * k1d, k2p, k2d);
    ode.deriv(t + 0.5 * h, phi + 0.5 * h * k2p, dphi + 0.5 * h * k2d, k3p, k3d);
    ode.deriv(t + h, phi + h * k3p, dphi + h * k3d, k4p, k4d);
    phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dphi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    t += h;
  }
  return phi;
}

double cap_eigenvalue(int N, double theta0, const std::optional<AngularWeight>& V,
                      const ShootingOptions& opts) {
  const double vmax = V ? V->max_value : 0.0;
  double lo = -vmax - 1.0;
  double hi = 4.0 * N * N;

  auto endpoint = [&](double lam) {
    return cap_shooting_endpoint(N, theta0, lam, V, opts);
  };

  // Find the first sign change of Phi(theta0; lambda) scanning upward;
  // widen the bracket geometrically if the default range misses it.
  double a = kNaN, b = kNaN;
  for (int widen = 0; widen <= 3; ++widen) {
    double prev_lam = lo;
    double prev_val = endpoint(lo);
    const int m = opts.scan_points;
    for (int i = 1; i <= m; ++i) {
      const double lam = lo + (hi - lo) * i / m;
      const double val = endpoint(lam);
      if (prev_val > 0.0 && val <= 0.0) {
        a = prev_lam;
        b = lam;
        break;
      }
      prev_lam = lam;
      prev_val = val;
    }
    if (!std::isnan(a)) break;
    hi *= 2.0;
  }
  if (std::isnan(a))
    throw search_error("cap_eigenvalue: no sign change within the lambda bracket");

  double fa = endpoint(a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = endpoint(mid);
    if ((fa > 0.0) == (fm > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a <= opts.lambda_tol) return 0.5 * (a + b);
  }
  throw convergence_error("cap_eigenvalue: bisection did not converge");
}

double cap_lambda1(const CapSpec& cap, const std::optional<AngularWeight>& V,
                   const ShootingOptions& opts) {
  if (cap.is_full_sphere()) {
    // Punctured sphere: the puncture has zero capacity, lambda1 = 0,
    // shifted by a constant weight if one is given.
    if (V) return -V->profile(0.0);
    return 0.0;
  }
  return cap_eigenvalue(cap.dimension, cap.polar_angle(), V, opts);
}

double hardy_constant(int N, double lambda1) {
  if (N < 3) throw std::domain_error("hardy_constant: N >= 3 required");
  return 0.25 * (N - 2) * (N - 2) + lambda1;
}

double alpha_minus(int N, double c, double lambda1) {
  const double mu = hardy_constant(N, lambda1);
  if (c > mu)
    throw std::domain_error(
        "alpha_minus: c exceeds the Hardy constant; no nontrivial nonnegative "
        "supersolution exists in this regime");
  return 0.5 * (N - 2) - std::sqrt(mu - c);
}

double critical_exponent(double alpha, double s) {
  if (!(alpha > 0.0))
    throw std::domain_error(
        "critical_exponent: undefined for alpha <= 0 (c <= lambda1)");
  if (s >= 2.0)
    throw std::domain_error("critical_exponent: weight exponent must satisfy s < 2");
  return 1.0 + (2.0 - s) / alpha;
}

double tube_critical_exponent(int N, int k) {
  if (k < 1 || k >= N - 2)
    throw std::domain_error("tube_critical_exponent: need 1 <= k < N-2");
  return critical_exponent(0.5 * (N - k - 2));
}

ExponentReport exponent_report(const HardyProblem& problem,
                               const ShootingOptions& opts) {
  ExponentReport rep;
  rep.lambda1 = cap_lambda1(problem.cap, std::nullopt, opts);
  rep.mu = hardy_constant(problem.N, rep.lambda1);
  rep.flags.c_above_lambda1 = problem.c > rep.lambda1;
  rep.flags.c_at_most_mu = problem.c <= rep.mu;
  if (rep.flags.valid()) {
    rep.alpha_minus = alpha_minus(problem.N, problem.c, rep.lambda1);
    rep.p_critical = critical_exponent(rep.alpha_minus, 0.0);
    rep.q_critical = critical_exponent(rep.alpha_minus, problem.s);
  } else {
    rep.alpha_minus = kNaN;
    rep.p_critical = kNaN;
    rep.q_critical = kNaN;
  }
  return rep;
}

}  // namespace hardycone
