#ifndef HARDYCONE_BARRIERS_HPP_
#define HARDYCONE_BARRIERS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "hardycone/geometry.hpp"

// Closed-form barrier families on the half-space and on circle tubes, with
// hand-derived residual identities, finite-difference cross-checks and the
// supersolution certifiers built from them.

namespace hardycone {

// X_a(t) = |log t|^a, defined for t in (0, 1).
double log_power(double t, double a);

struct BarrierSpec {
  int N = 3;
  double c = 2.0;  // inverse-square coefficient, c <= N^2/4
  double a = 0.0;  // log power
  double K = 0.0;  // exponential tilt
  std::optional<FermiChart> chart;  // flat half-space when absent

  // s = sqrt(N^2/4 - c), the shift in the barrier exponent -N/2 + s.
  double root() const;
};

// omega_bar_a(y) = y^1 |y|^{-N/2 + s} X_a(|y|) on the upper half-space.
double omega_bar(const BarrierSpec& spec, const Point& y, double a);
double omega_bar(const BarrierSpec& spec, const Point& y);

// omega_{a,K}(y) = e^{K y^1} omega_bar_a(y).
double omega_tilted(const BarrierSpec& spec, const Point& y);

// Closed-form value of L_y omega_{a,K} with
//   L_y = -Delta - c|y|^{-2} + a(a-1)|y|^{-2} X_{-2}(|y|):
// the four-term right-hand side
//   -(2K/y^1) omega + 2 a s |y|^{-2} X_{-1} omega
//   + 2K (N/2 - s + a X_{-1}) (y^1/|y|^2) omega - K^2 omega.
double residual_flat(const BarrierSpec& spec, const Point& y);

// Same operator applied through fd_laplacian; oracle for residual_flat.
double flat_operator_fd(const BarrierSpec& spec, const Point& y, double h);

// One pulled-back residual sample: L_x W_{a,K}(x) with W = omega_{a,K} o F^-1
// evaluated by finite differences, minus the two leading closed-form terms
//   -((2K + h_M(x))/d_M(x)) W  and  2 a s |x|^{-2} X_{-1}(|x|) W,
// with the remainder reported relative to |x|^{-1} W(x). The contract is
// boundedness of that ratio as |x| -> 0, not a closed-form value.
struct PullbackSample {
  Point x;
  double operator_value = 0.0;  // L_x W by finite differences
  double leading = 0.0;         // sum of the two closed-form leading terms
  double remainder_ratio = 0.0;
};

PullbackSample residual_pullback(const BarrierSpec& spec, const Point& x,
                                 double h_rel = 1e-3);

struct ResidualReport {
  std::vector<Point> points;
  std::vector<double> closed_form;
  std::vector<double> fd_values;
  std::vector<double> ratios;
  double max_relative_mismatch = 0.0;
  double tolerance = 0.0;
  double h_value = 0.0;
  bool analytic_stage = false;
  bool numeric_stage = false;
  bool passed = false;
  double threshold = 0.0;  // certifier-specific (flip exponent, largest beta)
  std::string detail;

  std::string to_json_string() const;
};

// Richardson cross-check of residual_flat against flat_operator_fd at h and
// h/2 on a deterministic log-radius x direction fan: every sample must show
// second-order convergence (error ratio in [3.6, 4.4]) or agreement at
// roundoff level.
ResidualReport verify_flat_identity(const BarrierSpec& spec, int n_samples = 50,
                                    double h_rel = 1e-3);

struct SamplingSpec {
  int radii = 9;       // log-spaced between r/100 and r
  int directions = 9;  // fan in the y^1 >= 0 half
};

// Two-stage supersolution certificate for the exterior-ball model with the
// tilted barrier at a = 1/(2p), K = 1-N: analytic exponent condition
// -alpha - 2 + p alpha < 0 (alpha from the hemisphere cone), then pointwise
// finite-difference verification of -Delta w - c|x|^{-2} w - w^p >= 0 on a
// log-spaced sample grid of radii up to r.
ResidualReport certify_prop32(int N, double c, double p, double r,
                              const SamplingSpec& grid = {});

struct TubeBarrierSpec {
  TubeSpec tube;
  double a = 0.0;
};

// alpha(x) = m - sqrt(m^2 (1 - q(sigma(x)) + delta(x))), m = (N-k-2)/2.
double tube_alpha(const TubeSpec& tube, const Point& x);

// omega_a(x) = delta(x)^{-alpha(x)} X_a(delta(x)).
double tube_barrier(const TubeBarrierSpec& spec, const Point& x);

// Deterministic sample fan: for each requested distance delta, points spread
// over the circle parameter and over in-plane/out-of-plane normal directions.
std::vector<Point> tube_sample_points(const TubeSpec& tube,
                                      const std::vector<double>& deltas,
                                      int per_delta);

// Residual bound check on the circle tube: the combination
//   L_q omega_a - 2 a sqrt(alphatilde) delta^{-2} X_{-1} omega_a
//   + a(a-1) delta^{-2} X_{-2} omega_a,
// L_q = -Delta - m^2 q(sigma) delta^{-2}, measured against
// |log delta| delta^{-3/2} omega_a. Pass: per-decade maxima of the ratio span
// >= 3 decades with max/min <= 10.
ResidualReport verify_lemma43(const TubeBarrierSpec& spec,
                              const std::vector<Point>& samples);

// Certificate for the tube supersolution u = omega_0 - omega_{-1}: analytic
// exponent stage p < (N-k+2)/(N-k-2), then the pointwise inequality
// delta^{-2+(p-1)alpha} X_{-5}(delta) (1 - X_{-1}(delta))^{1-p} >= 1 and
// positivity of u on the samples; threshold reports the largest sampled
// delta below which everything passes.
ResidualReport certify_prop44(const TubeSpec& tube, double p, double beta,
                              const std::vector<Point>& samples);

struct GammaIntegral {
  bool divergent = false;
  double value = 0.0;        // meaningful when finite
  double local_order = 0.0;  // fitted vanishing order of 1-q at touch points
};

// int_Gamma (1 - q)^{-1/2} dsigma with divergence classification: where q
// attains 1 at isolated parameters, the local order m of 1 - q decides
// integrability (finite iff m < 2).
GammaIntegral gamma_weight_integral(const TubeSpec& tube);

}  // namespace hardycone

#endif  // HARDYCONE_BARRIERS_HPP_
