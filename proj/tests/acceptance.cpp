// End-to-end acceptance gate: one pass/fail line per criterion, with timing.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hardycone/barriers.hpp"
#include "hardycone/solver.hpp"
#include "hardycone/spectral.hpp"
#include "hardycone/sweep.hpp"

using namespace hardycone;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool ok, double seconds) {
  std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", id,
              what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void run(int id, const std::string& what, const std::function<bool()>& body) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = std::string(" [exception: ") + e.what() + "]";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(id, what + note, ok, seconds);
}

bool criterion1_hemisphere_eigenvalues() {
  bool ok = true;
  for (int N : {3, 4, 5, 7})
    ok = ok && std::abs(cap_eigenvalue(N, M_PI / 2) - (N - 1.0)) <= 1e-8;
  return ok;
}

bool criterion2_hardy_constants() {
  bool ok = true;
  // exact closed forms
  for (int N : {3, 4, 5, 7, 9}) {
    ok = ok && hardy_constant(N, N - 1.0) == 0.25 * N * N;
    ok = ok && hardy_constant(N, 0.0) == 0.25 * (N - 2.0) * (N - 2.0);
  }
  auto zero_b = [](double) { return 0.0; };
  // discrete minima on the reference shell, monotone from above in the
  // shell width, within 2% at (2^-12, 1/2)
  struct Setup {
    int N;
    double lambda;
    double mu;
  };
  for (const Setup& s : {Setup{7, 6.0, 12.25}, Setup{9, 0.0, 12.25}}) {
    double prev = 1e300;
    for (int j : {6, 9, 12}) {
      ShellSpec shell;
      shell.N = s.N;
      shell.lambda = s.lambda;
      shell.r_inner = std::pow(2.0, -j);
      shell.r_outer = 0.5;
      shell.nodes_per_decade = 4096;
      const double val = rayleigh_min(shell, zero_b, RayleighWeight::inverse_square);
      ok = ok && val >= s.mu - 1e-9 && val <= prev + 1e-12;
      prev = val;
      if (j == 12) ok = ok && std::abs(val - s.mu) <= 0.02 * s.mu;
    }
  }
  return ok;
}

bool criterion3_exponent_identities() {
  bool ok = true;
  for (int N = 3; N <= 8; ++N) {
    const double mu = 0.25 * N * N;
    const double p = critical_exponent(alpha_minus(N, mu, N - 1.0));
    ok = ok && std::abs(p - (N + 2.0) / (N - 2.0)) <= 1e-12;
  }
  ok = ok && std::abs(tube_critical_exponent(5, 1) - 3.0) <= 1e-12;
  ok = ok && std::abs(tube_critical_exponent(6, 1) - 7.0 / 3.0) <= 1e-12;
  ok = ok && std::abs(tube_critical_exponent(7, 2) - 7.0 / 3.0) <= 1e-12;
  return ok;
}

bool criterion4_barrier_identity_suite() {
  struct Config {
    int N;
    double c, a, K;
  };
  const std::vector<Config> configs{{3, 2.0, 0.0, 0.0},  {3, 2.25, -1.0, 2.0},
                                    {4, 3.0, 0.5, -3.0}, {4, 4.0, 1.0, 1.0},
                                    {5, 5.0, -0.5, 0.0}, {5, 6.25, 0.0, -4.0}};
  bool ok = true;
  for (const Config& cfg : configs) {
    BarrierSpec spec;
    spec.N = cfg.N;
    spec.c = cfg.c;
    spec.a = cfg.a;
    spec.K = cfg.K;
    const ResidualReport rep = verify_flat_identity(spec, 50);
    ok = ok && rep.passed;
    for (double r : rep.ratios) ok = ok && r >= 3.6 && r <= 4.4;
  }
  // a = 0, K = 0: the barrier is annihilated by the operator
  BarrierSpec harmonic;
  harmonic.N = 3;
  harmonic.c = 2.0;
  for (int i = 0; i < 50; ++i) {
    const double rho = 0.4 * std::pow(10.0, -2.0 * (i % 10) / 9.0);
    const double phi = 0.15 + 1.2 * ((i / 10) % 5) / 4.0;
    const Point y{rho * std::cos(phi), rho * std::sin(phi), 0.0};
    const double val = flat_operator_fd(harmonic, y, 1e-4 * rho);
    const double scale = omega_bar(harmonic, y) / (rho * rho);
    ok = ok && std::abs(val) <= 1e-5 * scale;
  }
  return ok;
}

bool criterion5_criticality_flip() {
  bool ok = true;
  struct Pair {
    int N;
    double c;
  };
  // the pointwise inequality has a logarithmic deficit at unit amplitude, so
  // the numeric stage only clears zero once the zeroth-order terms carry a
  // large coefficient: moderate-to-large N, coupling well above lambda1, and
  // sample radii at 1e-4 and below
  for (const Pair& pr :
       {Pair{14, 36.04}, Pair{14, 43.24}, Pair{20, 70.84}, Pair{30, 154.4}}) {
    const double lambda1 = pr.N - 1.0;
    const double pc = critical_exponent(alpha_minus(pr.N, pr.c, lambda1));
    // bisect the analytic flip of the exterior-ball certificate
    double lo = pc - 0.1, hi = pc + 0.1;
    if (!certify_prop32(pr.N, pr.c, lo, 1e-4).analytic_stage) return false;
    if (certify_prop32(pr.N, pr.c, hi, 1e-4).analytic_stage) return false;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      (certify_prop32(pr.N, pr.c, mid, 1e-4).analytic_stage ? lo : hi) = mid;
    }
    ok = ok && std::abs(0.5 * (lo + hi) - pc) <= 1e-12;
    // analytic stage fails at (and just past) the critical exponent
    ok = ok && !certify_prop32(pr.N, pr.c, pc * (1.0 + 1e-12), 1e-4).analytic_stage;
    // numeric stage passes strictly below it
    const ResidualReport sub = certify_prop32(pr.N, pr.c, 0.95 * pc, 1e-4);
    ok = ok && sub.analytic_stage && sub.numeric_stage && sub.passed;
  }
  // tube counterpart: the analytic stage of the tube certificate flips at the
  // tube threshold
  TubeSpec tube(5, 1, 1.0, 0.2, [](double) { return 1.0; });
  const std::vector<double> deltas{1e-2, 1e-3};
  const auto samples = tube_sample_points(tube, deltas, 4);
  const double pt = tube_critical_exponent(5, 1);
  double lo = pt - 0.1, hi = pt + 0.1;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (certify_prop44(tube, mid, 0.1, samples).analytic_stage ? lo : hi) = mid;
  }
  ok = ok && std::abs(0.5 * (lo + hi) - pt) <= 1e-12;
  return ok;
}

bool criterion6_monotone_iteration() {
  RadialProblem problem;
  problem.N = 3;
  problem.r_inner = 1e-3;
  problem.r_outer = 0.5;
  problem.rhs = [](double) { return 1.0; };
  PotentialField field;
  field.b = [](double r) { return 0.5 * 0.25 / (r * r); };
  const IterationTrace trace = monotone_truncated_solve(problem, field);
  bool ok = true;
  for (bool f : trace.inner_monotone) ok = ok && f;
  for (bool f : trace.outer_monotone) ok = ok && f;
  // dominated by the closed-form supersolution 2 r^{-1/2}
  for (const std::vector<double>& level : trace.outer_iterates)
    for (std::size_t i = 0; i < level.size(); ++i)
      ok = ok && level[i] <= 2.0 / std::sqrt(trace.grid.r(i)) + 1e-8;
  const Grid1D direct = radial_solve_with_potential(problem, field.b);
  for (std::size_t i = 0; i < direct.size(); ++i) {
    const double scale = std::max(1.0, std::abs(direct.values[i]));
    ok = ok && std::abs(trace.grid.values[i] - direct.values[i]) <= 1e-8 * scale;
  }
  return ok;
}

bool criterion7_zeta0_dichotomy() {
  bool ok = true;
  struct Setup {
    int N;
    double c;
  };
  for (const Setup& s : {Setup{3, 0.25}, Setup{4, 1.0}, Setup{3, 0.225}}) {
    const CapSpec cap = CapSpec::sphere(s.N);
    const double alpha = alpha_minus(s.N, s.c, 0.0);
    const double pc = 1.0 + 2.0 / alpha;
    int flips = 0;
    double flip_at = 0.0;
    bool prev = false;
    const int n_scan = 50;
    for (int i = 0; i < n_scan; ++i) {
      const double p = pc * (0.8 + 0.4 * i / (n_scan - 1.0));
      const bool cur = zeta0_divergence(s.N, s.c, p, cap, {}, 0.0).divergent;
      if (i == 0) {
        ok = ok && !cur;
      } else if (cur != prev) {
        ++flips;
        flip_at = pc * (0.8 + 0.4 * (i - 0.5) / (n_scan - 1.0));
      }
      prev = cur;
    }
    ok = ok && flips == 1 && prev;
    ok = ok && std::abs(flip_at - pc) <= 0.02 * pc + 0.5 * pc * 0.4 / (n_scan - 1.0);
  }
  return ok;
}

bool criterion8_tube_residual_bound() {
  std::vector<double> deltas;
  for (int j = 0; j <= 12; ++j) deltas.push_back(1e-1 * std::pow(10.0, -0.25 * j));
  bool ok = true;
  auto flat_q = [](double) { return 1.0; };
  auto bump_q = [](double sigma) {
    const double s = std::sin(0.5 * sigma);
    return 1.0 - 0.2 * s * s;  // attains its maximum 1 at sigma = 0
  };
  const std::vector<std::function<double(double)>> profiles{flat_q, bump_q};
  for (std::size_t qi = 0; qi < profiles.size(); ++qi) {
    TubeSpec tube(5, 1, 1.0, 0.2, profiles[qi]);
    auto samples = tube_sample_points(tube, deltas, 5);
    if (qi == 1) {
      // the bump profile reaches its maximum only at sigma = 0, and the
      // residual bound is sharp only there; away from the touch point the
      // ratio decays like sqrt(delta), so the per-decade maxima must come
      // from normal rays based at the touch point
      const Point base = tube_gamma_point(tube, 0.0);
      for (double d : deltas) {
        for (int dir = 0; dir < 4; ++dir) {
          Point x = base;
          switch (dir) {
            case 0: x[0] += d; break;
            case 1: x[2] += d; break;
            case 2: x[0] += d * M_SQRT1_2; x[3] += d * M_SQRT1_2; break;
            case 3: x[2] += d * M_SQRT1_2; x[4] += d * M_SQRT1_2; break;
          }
          samples.push_back(x);
        }
      }
    }
    for (double a : {0.0, -1.0}) {
      TubeBarrierSpec spec{tube, a};
      const ResidualReport rep = verify_lemma43(spec, samples);
      ok = ok && rep.passed && rep.max_relative_mismatch <= 10.0;
    }
  }
  return ok;
}

bool criterion9_scaled_test_limit() {
  TubeSpec tube(5, 1, 1.0, 0.35, [](double) { return 1.0; });
  auto w = [](const Point& y) {
    double trans = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) trans += y[i] * y[i];
    const double rho = std::sqrt(trans);
    const double zr = (rho - 0.45) / 0.4;
    const double za = y[0] / 0.85;
    if (std::abs(zr) >= 1.0 || std::abs(za) >= 1.0) return 0.0;
    return std::pow((1.0 - zr * zr) * (1.0 - za * za), 2);
  };
  const ScaledQuotientResult res =
      scaled_test_quotient(tube, w, 0.9, {4e-2, 2e-2, 1e-2}, 16);
  bool ok = res.quotients.size() == 3;
  if (ok)
    ok = std::abs(res.quotients[2] - res.flat_quotient) <=
         0.05 * res.flat_quotient;
  // flat infimum over the near-optimal family approaches (N-k-2)^2/4
  for (auto [N, k] : {std::pair{5, 1}, std::pair{7, 2}}) {
    const double target = 0.25 * (N - k - 2.0) * (N - k - 2.0);
    const double q30 = flat_cylinder_quotient_power(N, k, 30);
    ok = ok && std::abs(q30 - target) <= 0.03 * target;
  }
  return ok;
}

bool criterion10_sweep_boundary() {
  SweepConfig cfg;  // defaults: 20x20 hemisphere sweep, certifier + zeta0 on
  const SweepResult result = run_sweep(cfg);
  if (result.cells.size() != 400) return false;
  const double cell_p = (cfg.p_max - cfg.p_min) / (cfg.p_count - 1.0);
  bool ok = true;
  for (int ci = 0; ci < cfg.c_count; ++ci) {
    const SweepCell& first = result.cells[ci * cfg.p_count];
    const double pc = first.p_critical;
    int flips = 0;
    double lo = 0.0, hi = 0.0;
    for (int pi = 1; pi < cfg.p_count; ++pi) {
      const SweepCell& prev = result.cells[ci * cfg.p_count + pi - 1];
      const SweepCell& cur = result.cells[ci * cfg.p_count + pi];
      if (prev.zeta0_verdict != -1 && cur.zeta0_verdict != -1 &&
          cur.zeta0_verdict != prev.zeta0_verdict) {
        ++flips;
        lo = prev.p;
        hi = cur.p;
      }
    }
    if (flips == 1) {
      ok = ok && pc >= lo - cell_p && pc <= hi + cell_p;
    } else if (flips == 0) {
      // the critical curve misses this row: it must lie within one cell of
      // the grid edge on the side matching the uniform verdict
      const int verdict = first.zeta0_verdict;
      if (verdict == 1)
        ok = ok && pc <= cfg.p_min + cell_p;
      else if (verdict == 0)
        ok = ok && pc >= cfg.p_max - cell_p;
    } else {
      ok = false;
    }
  }
  return ok;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  run(1, "hemisphere eigenvalues match N-1 within 1e-8",
      criterion1_hemisphere_eigenvalues);
  run(2, "Hardy constants exact and discretely attained within 2%",
      criterion2_hardy_constants);
  run(3, "critical-exponent identities at the endpoint couplings",
      criterion3_exponent_identities);
  run(4, "barrier residual identity matches finite differences",
      criterion4_barrier_identity_suite);
  run(5, "certifier verdicts flip exactly at the critical exponent",
      criterion5_criticality_flip);
  run(6, "monotone truncated iteration: flags, domination, limit",
      criterion6_monotone_iteration);
  run(7, "source-solution divergence flips once at the critical exponent",
      criterion7_zeta0_dichotomy);
  run(8, "tube residual ratio bounded over three decades",
      criterion8_tube_residual_bound);
  run(9, "scaled test functions reach the flat cylindrical quotient",
      criterion9_scaled_test_limit);
  run(10, "sweep boundary brackets the critical curve on every row",
      criterion10_sweep_boundary);
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%d/10 criteria passed (total %.2f s)\n", 10 - g_failures, total);
  return g_failures;
}
