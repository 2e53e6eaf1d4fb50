#include "hardycone/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardycone {

namespace {

double half_order(int N) { return 0.5 * (N - 2); }

std::vector<double> uniform_nodes(double t_lo, double t_hi, int nodes_per_decade) {
  if (!(t_hi > t_lo)) throw std::domain_error("grid: empty t-interval");
  if (nodes_per_decade < 8)
    throw std::domain_error("grid: need at least 8 nodes per decade");
  const double decades = (t_hi - t_lo) / std::log(10.0);
  const int n = std::max(3, static_cast<int>(std::lround(decades * nodes_per_decade)) + 1);
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = t_lo + (t_hi - t_lo) * i / (n - 1);
  return t;
}

// Solve (-D2 + kappa(t)) psi = g with Dirichlet values bc_lo/bc_hi at the
// ends, checking positivity of the LDL^T pivots and the backward residual.
std::vector<double> solve_psi(const std::vector<double>& t,
                              const std::function<double(double)>& kappa,
                              const std::vector<double>& g, double bc_lo,
                              double bc_hi) {
  const int n = static_cast<int>(t.size());
  const double h = t[1] - t[0];
  const double ih2 = 1.0 / (h * h);
  const int m = n - 2;  // interior unknowns
  if (m < 1) throw std::domain_error("solve_psi: grid too small");

  std::vector<double> diag(m), rhs(m);
  for (int i = 0; i < m; ++i) {
    diag[i] = 2.0 * ih2 + kappa(t[i + 1]);
    rhs[i] = g[i + 1];
  }
  rhs[0] += ih2 * bc_lo;
  rhs[m - 1] += ih2 * bc_hi;

  // Thomas elimination; pivots of the LDL^T factorization must stay positive
  // or the discrete form is not coercive.
  std::vector<double> d(m), y(m);
  d[0] = diag[0];
  if (d[0] <= 0.0)
    throw coercivity_error("radial solve: nonpositive pivot, form not coercive");
  y[0] = rhs[0];
  for (int i = 1; i < m; ++i) {
    d[i] = diag[i] - ih2 * ih2 / d[i - 1];  // off-diagonal is -1/h^2
    if (d[i] <= 0.0)
      throw coercivity_error("radial solve: nonpositive pivot, form not coercive");
    y[i] = rhs[i] + ih2 * y[i - 1] / d[i - 1];
  }
  std::vector<double> psi(n);
  psi[0] = bc_lo;
  psi[n - 1] = bc_hi;
  std::vector<double> x(m);
  x[m - 1] = y[m - 1] / d[m - 1];
  for (int i = m - 2; i >= 0; --i) x[i] = (y[i] + ih2 * x[i + 1]) / d[i];
  for (int i = 0; i < m; ++i) psi[i + 1] = x[i];

  // Backward residual check against the row scale.
  double worst = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    const double lhs =
        (-psi[i - 1] + 2.0 * psi[i] - psi[i + 1]) * ih2 + kappa(t[i]) * psi[i];
    const double scale = std::max({1.0, std::abs(lhs), std::abs(g[i]),
                                   ih2 * (std::abs(psi[i - 1]) + std::abs(psi[i + 1]))});
    worst = std::max(worst, std::abs(lhs - g[i]) / scale);
  }
  if (worst > 1e-10)
    throw convergence_error("radial solve: backward residual above 1e-10");
  return psi;
}

std::vector<double> sample_rhs_t(const std::vector<double>& t,
                                 const std::function<double(double)>& rhs_t) {
  std::vector<double> g(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) g[i] = rhs_t(t[i]);
  return g;
}

Grid1D psi_to_grid(const std::vector<double>& t, const std::vector<double>& psi,
                   int N) {
  const double gamma = half_order(N);
  Grid1D grid;
  grid.t = t;
  grid.values.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    grid.values[i] = std::exp(gamma * t[i]) * psi[i];  // u = r^{-gamma} psi
  return grid;
}

Grid1D solve_shell(const RadialProblem& problem,
                   const std::function<double(double)>& kappa,
                   int nodes_per_decade) {
  if (!(problem.r_inner > 0.0 && problem.r_inner < problem.r_outer))
    throw std::domain_error("radial solve: need 0 < r_inner < r_outer");
  const double gamma = half_order(problem.N);
  const auto t = uniform_nodes(-std::log(problem.r_outer),
                               -std::log(problem.r_inner), nodes_per_decade);
  const auto& f = problem.rhs;
  auto rhs_t = [&](double tt) {
    const double r = std::exp(-tt);
    return std::pow(r, gamma + 2.0) * f(r);
  };
  const auto g = sample_rhs_t(t, rhs_t);
  const double bc_lo = problem.outer_value * std::pow(problem.r_outer, gamma);
  const double bc_hi = problem.inner_value * std::pow(problem.r_inner, gamma);
  const auto psi = solve_psi(t, kappa, g, bc_lo, bc_hi);
  return psi_to_grid(t, psi, problem.N);
}

struct FitResult {
  double slope = 0.0;
  double r_squared = 0.0;
};

FitResult ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3) throw fit_error("ols_fit: too few samples");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace

Grid1D make_log_grid(double r_inner, double r_outer, int nodes_per_decade) {
  if (!(r_inner > 0.0 && r_inner < r_outer))
    throw std::domain_error("make_log_grid: need 0 < r_inner < r_outer");
  Grid1D grid;
  grid.t = uniform_nodes(-std::log(r_outer), -std::log(r_inner), nodes_per_decade);
  grid.values.assign(grid.t.size(), 0.0);
  return grid;
}

EfCoefficients ef_transform(const RadialProblem& problem) {
  const double gamma = half_order(problem.N);
  EfCoefficients ef;
  ef.mass_coefficient = gamma * gamma + problem.lambda - problem.c;
  auto f = problem.rhs;
  ef.rhs_t = [gamma, f](double t) {
    const double r = std::exp(-t);
    return std::pow(r, gamma + 2.0) * f(r);
  };
  return ef;
}

Grid1D radial_solve(const RadialProblem& problem, int nodes_per_decade) {
  const double kappa0 =
      half_order(problem.N) * half_order(problem.N) + problem.lambda - problem.c;
  return solve_shell(problem, [kappa0](double) { return kappa0; },
                     nodes_per_decade);
}

Grid1D radial_solve_with_potential(const RadialProblem& problem,
                                   const std::function<double(double)>& b,
                                   int nodes_per_decade) {
  const double kappa0 =
      half_order(problem.N) * half_order(problem.N) + problem.lambda;
  auto kappa = [kappa0, &b](double t) {
    const double r = std::exp(-t);
    return kappa0 - r * r * b(r);
  };
  return solve_shell(problem, kappa, nodes_per_decade);
}

std::vector<double> default_truncation_schedule() {
  std::vector<double> ks;
  for (int e = 0; e <= 20; ++e) ks.push_back(std::ldexp(1.0, e));
  return ks;
}

IterationTrace monotone_truncated_solve(const RadialProblem& problem,
                                        const PotentialField& potential,
                                        std::vector<double> k_schedule,
                                        int inner_cap, int nodes_per_decade) {
  if (k_schedule.empty())
    throw std::domain_error("monotone solve: empty truncation schedule");
  const double gamma = half_order(problem.N);
  const double kappa0 = gamma * gamma + problem.lambda;
  const auto t = uniform_nodes(-std::log(problem.r_outer),
                               -std::log(problem.r_inner), nodes_per_decade);
  const int n = static_cast<int>(t.size());
  auto ef = ef_transform(RadialProblem{problem.N, problem.lambda, 0.0,
                                       problem.r_inner, problem.r_outer,
                                       problem.rhs});
  const auto g = sample_rhs_t(t, ef.rhs_t);
  const double bc_lo = problem.outer_value * std::pow(problem.r_outer, gamma);
  const double bc_hi = problem.inner_value * std::pow(problem.r_inner, gamma);
  auto kappa_free = [kappa0](double) { return kappa0; };

  std::vector<double> scale(n);  // u_i = scale_i * psi_i
  for (int i = 0; i < n; ++i) scale[i] = std::exp(gamma * t[i]);
  auto sup_diff = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, scale[i] * std::abs(a[i] - b[i]));
    return s;
  };

  IterationTrace trace;
  trace.k_schedule = k_schedule;

  std::vector<double> prev_level;  // psi of the previous truncation level
  for (std::size_t kk = 0; kk < k_schedule.size(); ++kk) {
    const double klevel = k_schedule[kk];
    auto bk = [&](double r) { return std::min(potential.b(r), klevel); };

    std::vector<double> psi = solve_psi(t, kappa_free, g, bc_lo, bc_hi);
    bool inner_mono = true;
    int iters = 0;
    for (; iters < inner_cap; ++iters) {
      std::vector<double> rhs(n);
      for (int i = 0; i < n; ++i) {
        const double r = std::exp(-t[i]);
        rhs[i] = g[i] + r * r * bk(r) * psi[i];
      }
      std::vector<double> next = solve_psi(t, kappa_free, rhs, bc_lo, bc_hi);
      for (int i = 0; i < n && inner_mono; ++i)
        if (next[i] < psi[i] - 1e-14 * std::max(1.0, std::abs(psi[i])))
          inner_mono = false;
      const double diff = sup_diff(next, psi);
      psi.swap(next);
      if (diff <= 1e-10) {
        ++iters;
        break;
      }
    }
    trace.inner_iterations.push_back(iters);
    trace.inner_monotone.push_back(inner_mono);
    if (!prev_level.empty()) {
      bool outer_mono = true;
      for (int i = 0; i < n && outer_mono; ++i)
        if (psi[i] < prev_level[i] - 1e-14 * std::max(1.0, std::abs(psi[i])))
          outer_mono = false;
      trace.outer_monotone.push_back(outer_mono);
      trace.final_residual = sup_diff(psi, prev_level);
    }
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = scale[i] * psi[i];
    trace.outer_iterates.push_back(std::move(u));
    prev_level = psi;
  }
  trace.grid.t = t;
  trace.grid.values = trace.outer_iterates.back();
  return trace;
}

double quadratic_form(const std::function<double(double)>& b, const Grid1D& phi,
                      int N) {
  const std::size_t n = phi.size();
  if (n < 3) throw std::domain_error("quadratic_form: grid too small");
  const double h = phi.spacing();
  // In t = -log r: int phi_r'^2 r^{N-1} dr = int (dphi/dt)^2 e^{-(N-2)t} dt,
  // int b phi^2 r^{N-1} dr = int b phi^2 e^{-Nt} dt.
  double grad = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = (phi.values[i + 1] - phi.values[i]) / h;
    const double tm = 0.5 * (phi.t[i] + phi.t[i + 1]);
    grad += d * d * std::exp(-(N - 2) * tm) * h;
  }
  double pot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    const double r = phi.r(i);
    pot += w * b(r) * phi.values[i] * phi.values[i] * std::exp(-N * phi.t[i]) * h;
  }
  return grad - pot;
}

namespace {

// Number of eigenvalues of the pencil (A, M) below theta, by counting
// negative pivots of the LDL^T factorization of A - theta M. A is the
// tridiagonal with constant off-diagonal `off`.
int sturm_count(const std::vector<double>& diag, double off,
                const std::vector<double>& mass, double theta) {
  int count = 0;
  double d = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double center = diag[i] - theta * mass[i];
    if (i > 0) {
      if (d == 0.0) d = 1e-300;
      center -= off * off / d;
    }
    d = center;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

double rayleigh_min(const ShellSpec& shell,
                    const std::function<double(double)>& b,
                    RayleighWeight weight) {
  if (weight == RayleighWeight::log_inverse_square && shell.r_outer >= 1.0)
    throw std::domain_error(
        "rayleigh_min: log-weighted mass needs r_outer < 1");
  const auto t = uniform_nodes(-std::log(shell.r_outer),
                               -std::log(shell.r_inner), shell.nodes_per_decade);
  const int n = static_cast<int>(t.size());
  const int m = n - 2;
  const double h = t[1] - t[0];
  const double ih2 = 1.0 / (h * h);
  const double gamma = half_order(shell.N);
  const double kappa0 = gamma * gamma + shell.lambda;

  std::vector<double> diag(m), mass(m);
  for (int i = 0; i < m; ++i) {
    const double tt = t[i + 1];
    const double r = std::exp(-tt);
    diag[i] = 2.0 * ih2 + kappa0 - (b ? r * r * b(r) : 0.0);
    switch (weight) {
      case RayleighWeight::inverse_square:
        mass[i] = 1.0;
        break;
      case RayleighWeight::log_inverse_square:
        mass[i] = 1.0 / (tt * tt);
        break;
      case RayleighWeight::unweighted:
        mass[i] = std::exp(-2.0 * tt);
        break;
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < m; ++i) {
    lo = std::min(lo, (diag[i] - 2.0 * ih2) / mass[i]);
    hi = std::max(hi, (diag[i] + 2.0 * ih2) / mass[i]);
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, -ih2, mass, mid) >= 1)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-11 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

bool ap_check(const Grid1D& u, const std::function<double(double)>& V,
              const ShellSpec& shell) {
  const int n = static_cast<int>(u.size());
  if (n < 3) throw std::domain_error("ap_check: grid too small");
  const double gamma = half_order(shell.N);
  const double kappa0 = gamma * gamma + shell.lambda;
  const double h = u.spacing();
  const double ih2 = 1.0 / (h * h);

  std::vector<double> psi(n);
  for (int i = 0; i < n; ++i) {
    if (!(u.values[i] > 0.0))
      throw std::domain_error("ap_check: supersolution must be positive");
    psi[i] = std::exp(-gamma * u.t[i]) * u.values[i];
  }
  // The candidate must be a discrete supersolution of -Delta u >= V u.
  for (int i = 1; i < n - 1; ++i) {
    const double r = u.r(i);
    const double lhs =
        (-psi[i - 1] + 2.0 * psi[i] - psi[i + 1]) * ih2 + kappa0 * psi[i];
    const double rhs = r * r * V(r) * psi[i];
    const double scale =
        std::max({1.0, std::abs(lhs), std::abs(rhs),
                  ih2 * (std::abs(psi[i - 1]) + std::abs(psi[i + 1]))});
    if (lhs - rhs < -1e-10 * scale)
      throw std::domain_error("ap_check: candidate is not a discrete supersolution");
  }

  const int m = n - 2;
  std::vector<double> diag(m), mass(m);
  for (int i = 0; i < m; ++i) {
    const double tt = u.t[i + 1];
    const double r = std::exp(-tt);
    diag[i] = 2.0 * ih2 + kappa0 - r * r * V(r);
    mass[i] = std::exp(-2.0 * tt);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < m; ++i) {
    lo = std::min(lo, (diag[i] - 2.0 * ih2) / mass[i]);
    hi = std::max(hi, (diag[i] + 2.0 * ih2) / mass[i]);
  }
  for (int it = 0; it < 300 && hi - lo > 1e-11 * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, -ih2, mass, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi) >= -1e-8;
}

Zeta0Result zeta0_divergence(int N, double c, double p, const CapSpec& cap,
                             const ShootingOptions& opts,
                             std::optional<double> lambda1_hint) {
  Zeta0Result res;
  res.lambda1 = lambda1_hint ? *lambda1_hint : cap_lambda1(cap, std::nullopt, opts);
  const double gamma = half_order(N);
  const double mu = gamma * gamma + res.lambda1;
  // lambda1 carries the eigensolver tolerance; allow c to sit at mu within it
  const double slack = 1e-7 * std::max(1.0, std::abs(mu));
  if (!(c > res.lambda1 && c <= mu + slack))
    throw std::domain_error("zeta0_divergence: need lambda1 < c <= mu");
  if (!(p > 1.0))
    throw std::domain_error("zeta0_divergence: need p > 1");

  // Separated first-mode profile on a deep shell, solved in the bounded
  // variable psi = r^{(N-2)/2} u to avoid overflow near the vertex. The
  // source decays fast in t, so the growth exponent is read off well inside
  // the domain, away from both Dirichlet layers.
  const double t_lo = std::log(2.0);
  const double t_hi = 158.0;
  const double kappa = std::max(mu - c, 0.0);  // zero at the critical coupling
  const auto t = uniform_nodes(t_lo, t_hi, 2048);
  std::vector<double> g(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    g[i] = std::exp(-(gamma + 2.0) * t[i]);
  const auto psi = solve_psi(t, [kappa](double) { return kappa; }, g, 0.0, 0.0);

  std::vector<double> xs, ys;  // log r vs log u
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 5.69 || t[i] > 8.0) continue;
    if (!(psi[i] > 0.0))
      throw fit_error("zeta0_divergence: profile not positive in fit window");
    xs.push_back(-t[i]);
    ys.push_back(std::log(psi[i]) + gamma * t[i]);
  }
  const FitResult fit = ols_fit(xs, ys);
  res.gamma = -fit.slope;
  res.r_squared = fit.r_squared;
  if (res.r_squared < 0.999)
    throw fit_error("zeta0_divergence: log-log fit quality below 0.999");
  if (!(res.gamma > 0.0))
    throw fit_error("zeta0_divergence: fitted exponent not positive");

  // zeta0 ~ r^{-gamma}: the source integral int zeta0^{p+1} dx diverges when
  // gamma (p+1) >= N, and the linearized potential zeta0^{p-1} |x|^2 escapes
  // every inverse-square bound when gamma (p-1) >= 2.
  res.p_flip = 1.0 + 2.0 / res.gamma;
  res.divergent =
      res.gamma * (p + 1.0) >= static_cast<double>(N) || res.gamma * (p - 1.0) >= 2.0;
  return res;
}

namespace {

double tube_sigma_weight(const TubeSpec& tube, double sigma) {
  double s = std::fmod(sigma, tube.circumference());
  if (s < 0.0) s += tube.circumference();
  return tube.weight(s);
}

}  // namespace

ScaledQuotientResult scaled_test_quotient(
    const TubeSpec& tube, const std::function<double(const Point&)>& w,
    double support_radius, const std::vector<double>& eps_schedule,
    int quad_points_per_dim, double c0) {
  const int n = tube.ambient_dim;
  if (support_radius <= 0.0)
    throw std::domain_error("scaled_test_quotient: support radius must be positive");
  if (quad_points_per_dim < 4 || quad_points_per_dim % 2 != 0)
    throw std::domain_error(
        "scaled_test_quotient: need an even cell count >= 4 per dimension");
  const double a = support_radius;
  const double R = tube.ring_radius;
  const int q = quad_points_per_dim;
  const double cell = 2.0 * a / q;
  const double fd = 1e-4 * a;

  // quotient(eps): numerator and denominator of the scaled Hardy quotient in
  // tube coordinates y = (normal components, arc length), delta = eps |ytilde|,
  // sigma = eps * y_N, metric factor 1 + eps y^1 / R.
  auto quotient = [&](double eps) {
    long total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    double num = 0.0, den = 0.0;
    std::vector<int> idx(n, 0);
    Point y(n), yp(n);
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      for (int i = 0; i < n; ++i) {
        idx[i] = static_cast<int>(rem % q);
        rem /= q;
        y[i] = -a + (idx[i] + 0.5) * cell;
      }
      const double wy = w(y);
      const double jac = 1.0 + eps * y[0] / R;
      double grad_tan = 0.0, grad_arc = 0.0;
      for (int i = 0; i < n; ++i) {
        yp = y;
        yp[i] = y[i] + fd;
        const double fp = w(yp);
        yp[i] = y[i] - fd;
        const double fm = w(yp);
        const double d = (fp - fm) / (2.0 * fd);
        if (i == n - 1)
          grad_arc = d;
        else
          grad_tan += d * d;
      }
      num += (grad_tan + grad_arc * grad_arc / (jac * jac)) * jac;
      double tilde2 = 0.0;
      for (int i = 0; i + 1 < n; ++i) tilde2 += y[i] * y[i];
      if (tilde2 > 0.0 && wy != 0.0) {
        const double qv = eps > 0.0 ? tube_sigma_weight(tube, eps * y[n - 1])
                                    : tube_sigma_weight(tube, 0.0);
        double weight = qv;
        if (c0 != 0.0) {
          const double gap = std::max(0.0, 1.0 - qv);
          if (gap < 1e-15)
            weight += c0;
          else if (eps > 0.0)
            weight += c0 * std::pow(eps * std::sqrt(tilde2), 2.0 * std::sqrt(gap));
        }
        den += weight * wy * wy / tilde2;
      }
    }
    if (den <= 0.0)
      throw std::domain_error("scaled_test_quotient: degenerate denominator");
    return num / den;  // common cell volume cancels
  };

  ScaledQuotientResult out;
  out.epsilons = eps_schedule;
  for (double eps : eps_schedule) {
    if (!(eps > 0.0) || eps * std::sqrt(static_cast<double>(n)) * a >= tube.tube_radius)
      throw std::domain_error(
          "scaled_test_quotient: eps must keep the support inside the tube");
    out.quotients.push_back(quotient(eps));
  }
  out.flat_quotient = quotient(0.0);
  return out;
}

double flat_cylinder_quotient_power(int N, int k, int m) {
  if (k < 1 || k >= N - 2)
    throw std::domain_error("flat_cylinder_quotient_power: need 1 <= k < N-2");
  if (m < 1) throw std::domain_error("flat_cylinder_quotient_power: need m >= 1");
  const int codim = N - k;
  const double s = 0.5 * (codim - 2);
  const double im = 1.0 / m;

  // Radial factor g(delta) = delta^{-s + 1/m} chi(tau), tau = -log delta,
  // with smooth ramps of width ramp and a plateau of length m. All integrals
  // are reduced by the common factor delta^{2s}, so nothing overflows.
  const double ramp = std::max(2.0, static_cast<double>(m));
  const double tau0 = 2.0;
  const double tau1 = tau0 + ramp;          // plateau start
  const double tau2 = tau1 + m;             // plateau end
  const double tau3 = tau2 + ramp;          // support end
  auto chi = [&](double tau) -> double {
    if (tau <= tau0 || tau >= tau3) return 0.0;
    if (tau < tau1) {
      const double x = (tau - tau0) / ramp;
      const double sn = std::sin(0.5 * M_PI * x);
      return sn * sn;
    }
    if (tau > tau2) {
      const double x = (tau3 - tau) / ramp;
      const double sn = std::sin(0.5 * M_PI * x);
      return sn * sn;
    }
    return 1.0;
  };
  auto dchi = [&](double tau) -> double {
    if (tau <= tau0 || tau >= tau3) return 0.0;
    if (tau < tau1) {
      const double x = (tau - tau0) / ramp;
      return 0.5 * M_PI * std::sin(M_PI * x) / ramp;
    }
    if (tau > tau2) {
      const double x = (tau3 - tau) / ramp;
      return -0.5 * M_PI * std::sin(M_PI * x) / ramp;
    }
    return 0.0;
  };

  const int nq = 200000;
  const double h = (tau3 - tau0) / nq;
  double i_grad = 0.0, i_w = 0.0, i_mass2 = 0.0;
  for (int i = 0; i <= nq; ++i) {
    const double tau = tau0 + i * h;
    const double wq = (i == 0 || i == nq) ? 0.5 : 1.0;
    const double ch = chi(tau);
    const double dg = (s - im) * ch + dchi(tau);
    const double e = std::exp(-2.0 * im * tau);
    i_grad += wq * e * dg * dg * h;
    i_w += wq * e * ch * ch * h;
    i_mass2 += wq * std::exp(-(2.0 * im + 2.0) * tau) * ch * ch * h;
  }

  // Transverse bump h1(y) = cos^2(pi y / 2) on [-1, 1] in each of the k
  // tangential directions.
  double h0 = 0.0, h1g = 0.0;
  const int nb = 20000;
  const double hb = 2.0 / nb;
  for (int i = 0; i <= nb; ++i) {
    const double y = -1.0 + i * hb;
    const double wq = (i == 0 || i == nb) ? 0.5 : 1.0;
    const double cs = std::cos(0.5 * M_PI * y);
    const double bump = cs * cs;
    const double dbump = -0.5 * M_PI * std::sin(M_PI * y);
    h0 += wq * bump * bump * hb;
    h1g += wq * dbump * dbump * hb;
  }
  return (i_grad + i_mass2 * k * h1g / h0) / i_w;
}

}  // namespace hardycone
