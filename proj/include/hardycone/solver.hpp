#ifndef HARDYCONE_SOLVER_HPP_
#define HARDYCONE_SOLVER_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "hardycone/geometry.hpp"
#include "hardycone/spectral.hpp"

// 1-D singular elliptic solvers after separation of variables. Radial
// problems on shells are solved in the variable t = -log r, where the
// operator -u'' - (N-1)/r u' + (lambda - c)/r^2 u becomes
// -psi'' + ((N-2)^2/4 + lambda - c) psi with u = r^{(2-N)/2} psi(t).

namespace hardycone {

struct coercivity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RadialProblem {
  int N = 3;
  double lambda = 0.0;  // angular eigenvalue folded into the radial operator
  double c = 0.0;       // inverse-square coefficient
  double r_inner = 1e-4;
  double r_outer = 0.5;
  std::function<double(double)> rhs = [](double) { return 0.0; };
  double inner_value = 0.0;  // Dirichlet data for u at r_inner
  double outer_value = 0.0;  // Dirichlet data for u at r_outer
};

// Uniform grid in t = -log r with values of the radial profile u.
struct Grid1D {
  std::vector<double> t;
  std::vector<double> values;

  std::size_t size() const { return t.size(); }
  double r(std::size_t i) const { return std::exp(-t[i]); }
  double spacing() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

Grid1D make_log_grid(double r_inner, double r_outer, int nodes_per_decade);

struct EfCoefficients {
  double mass_coefficient;  // (N-2)^2/4 + lambda - c
  std::function<double(double)> rhs_t;  // t -> e^{-2t} e^{-(N-2)t/2} f(e^{-t})
};

EfCoefficients ef_transform(const RadialProblem& problem);

// Direct tridiagonal solve of the transformed problem; throws
// coercivity_error if the discrete form is not positive definite.
Grid1D radial_solve(const RadialProblem& problem, int nodes_per_decade = 4096);

// Same geometry/data but with a general radial potential b(r) in place of
// c/r^2 (the operator is -Delta - b with the lambda mode folded in).
Grid1D radial_solve_with_potential(const RadialProblem& problem,
                                   const std::function<double(double)>& b,
                                   int nodes_per_decade = 4096);

struct PotentialField {
  std::function<double(double)> b = [](double) { return 0.0; };  // b(r) >= 0
  std::optional<double> truncation;                              // level k

  double value(double r) const {
    double v = b(r);
    return truncation ? std::min(v, *truncation) : v;
  }
};

struct IterationTrace {
  Grid1D grid;  // t-nodes; values hold the final iterate
  std::vector<double> k_schedule;
  std::vector<std::vector<double>> outer_iterates;  // v^k per truncation level
  std::vector<bool> inner_monotone;  // per k: inner iterates nondecreasing
  std::vector<bool> outer_monotone;  // per k > first: v^k >= v^{previous}
  std::vector<int> inner_iterations;
  double final_residual = 0.0;  // sup difference of the last two v^k
};

std::vector<double> default_truncation_schedule();  // 2^0 .. 2^20

// Lemma-1.3-style scheme: for each truncation level k solve
//   v_0 = (-Delta)^{-1} f,  v_n = (-Delta)^{-1} (min(b,k) v_{n-1} + f)
// until the sup-difference drops below 1e-10, recording monotonicity flags.
IterationTrace monotone_truncated_solve(
    const RadialProblem& problem, const PotentialField& potential,
    std::vector<double> k_schedule = default_truncation_schedule(),
    int inner_cap = 10000, int nodes_per_decade = 4096);

// Trapezoid value of int (phi'^2 - b phi^2) r^{N-1} dr on the shell; phi must
// vanish at both ends.
double quadratic_form(const std::function<double(double)>& b, const Grid1D& phi,
                      int N);

enum class RayleighWeight {
  inverse_square,      // r^{-2}
  log_inverse_square,  // r^{-2} |log r|^{-2}, needs r_outer < 1
  unweighted           // 1
};

struct ShellSpec {
  int N = 3;
  double lambda = 0.0;
  double r_inner = 1e-4;
  double r_outer = 0.5;
  int nodes_per_decade = 4096;
};

// Smallest generalized eigenvalue of the form int |grad u|^2 - int b u^2
// against the chosen weighted mass, over the shell with Dirichlet ends.
// Computed by Sturm-count bisection on the tridiagonal pencil.
double rayleigh_min(const ShellSpec& shell,
                    const std::function<double(double)>& b,
                    RayleighWeight weight);

// Allegretto-Piepenbrink consistency check: u must be a positive discrete
// supersolution of -Delta u >= V u; then the form with potential V has
// nonnegative smallest eigenvalue (>= -1e-8).
bool ap_check(const Grid1D& u, const std::function<double(double)>& V,
              const ShellSpec& shell);

struct Zeta0Result {
  bool divergent = false;
  double gamma = 0.0;      // fitted growth exponent, zeta0 ~ r^{-gamma}
  double r_squared = 0.0;  // log-log fit quality
  double p_flip = 0.0;     // verdict boundary in p
  double lambda1 = 0.0;
};

// Divergence test for the truncated-potential source solution zeta0 on the
// cone over the cap: solves the separated problem, fits the growth exponent
// near the vertex and classifies int zeta0^{p+1} together with the growth of
// the linearized potential zeta0^{p-1}|x|^2.
// lambda1_hint skips the shooting solve when the cap eigenvalue is already
// known (sweeps reuse it across cells).
Zeta0Result zeta0_divergence(int N, double c, double p, const CapSpec& cap,
                             const ShootingOptions& opts = {},
                             std::optional<double> lambda1_hint = {});

struct ScaledQuotientResult {
  std::vector<double> epsilons;
  std::vector<double> quotients;
  double flat_quotient = 0.0;
};

// Rayleigh quotients of the scaled test functions
// phi_eps(x) = eps^{(2-N)/2} w(eps^{-1} Y^{-1}(x)) on the circle tube,
// converging to the flat cylindrical quotient as eps -> 0.
ScaledQuotientResult scaled_test_quotient(
    const TubeSpec& tube, const std::function<double(const Point&)>& w,
    double support_radius, const std::vector<double>& eps_schedule,
    int quad_points_per_dim = 15, double c0 = 0.0);

// Flat cylindrical quotient of the near-optimal family
// w_m = |ytilde|^{-(N-k-2)/2 + 1/m} x log-cutoffs; approaches (N-k-2)^2/4.
double flat_cylinder_quotient_power(int N, int k, int m);

}  // namespace hardycone

#endif  // HARDYCONE_SOLVER_HPP_
