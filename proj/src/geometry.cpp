#include "hardycone/geometry.hpp"

#include <cmath>

namespace hardycone {

double norm(const Point& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

CapSpec::CapSpec(int n, double delta) : dimension(n), aperture(delta) {
  if (n < 3) throw std::domain_error("CapSpec: dimension must be >= 3");
  if (delta >= 1.0 || delta < -1.0)
    throw std::domain_error("CapSpec: aperture must lie in [-1, 1)");
}

CapSpec CapSpec::sphere(int n) {
  CapSpec cap(n, -1.0 + 1e-30);
  cap.aperture = -1.0;
  return cap;
}

double CapSpec::polar_angle() const {
  if (is_full_sphere())
    throw std::domain_error("CapSpec: full sphere has no cap angle");
  return std::acos(aperture);
}

Point FermiChart::center() const {
  Point c(dimension, 0.0);
  c[0] = orientation == ChartOrientation::interior ? 1.0 : -1.0;
  return c;
}

namespace {

void check_chart_args(const FermiChart& chart, const Point& y) {
  if (static_cast<int>(y.size()) != chart.dimension)
    throw std::domain_error("fermi chart: dimension mismatch");
  if (y[0] < 0.0) throw std::domain_error("fermi chart: y^1 must be >= 0");
  if (norm(y) >= chart.radius)
    throw std::domain_error("fermi chart: point outside chart radius");
}

}  // namespace

Point fermi_map(const FermiChart& chart, const Point& y) {
  check_chart_args(chart, y);
  const int n = chart.dimension;
  double s2 = 0.0;
  for (int i = 1; i < n; ++i) s2 += y[i] * y[i];
  const double s = std::sqrt(s2);
  // sinc(s) = sin(s)/s, stable near 0
  const double sinc = s < 1e-8 ? 1.0 - s2 / 6.0 : std::sin(s) / s;
  const double one_m_cos = 2.0 * std::pow(std::sin(0.5 * s), 2);

  Point x(n, 0.0);
  if (chart.orientation == ChartOrientation::interior) {
    // x = E1 + (1 - y1)(Exp_0(ybar) - E1), sphere dB_1(E1)
    const double scale = 1.0 - y[0];
    x[0] = one_m_cos + y[0] * std::cos(s);  // 1 - scale*cos(s), stable
    for (int i = 1; i < n; ++i) x[i] = scale * sinc * y[i];
  } else {
    // x = -E1 + (1 + y1)(Exp_0(ybar) + E1), sphere dB_1(-E1)
    const double scale = 1.0 + y[0];
    x[0] = -one_m_cos + y[0] * std::cos(s);  // scale*cos(s) - 1, stable
    for (int i = 1; i < n; ++i) x[i] = scale * sinc * y[i];
  }
  return x;
}

Point fermi_inverse(const FermiChart& chart, const Point& x) {
  const int n = chart.dimension;
  if (static_cast<int>(x.size()) != n)
    throw std::domain_error("fermi chart: dimension mismatch");
  const bool interior = chart.orientation == ChartOrientation::interior;

  double tang2 = 0.0;
  for (int i = 1; i < n; ++i) tang2 += x[i] * x[i];
  const double tang = std::sqrt(tang2);
  // component of x - center along E1 is x1 -/+ 1
  const double axial = interior ? x[0] - 1.0 : x[0] + 1.0;
  const double rho = std::sqrt(axial * axial + tang2);
  if (rho == 0.0)
    throw std::domain_error("fermi chart: sphere center not in chart image");

  const double d = interior ? 1.0 - rho : rho - 1.0;
  if (d < 0.0)
    throw std::domain_error("fermi chart: point on the wrong side of the sphere");
  // arc length from the base point 0 to the projection of x
  const double s = interior ? std::atan2(tang, -axial) : std::atan2(tang, axial);

  Point y(n, 0.0);
  y[0] = d;
  if (tang > 0.0)
    for (int i = 1; i < n; ++i) y[i] = s * x[i] / tang;
  if (norm(y) >= chart.radius)
    throw std::domain_error("fermi chart: point outside chart image");
  return y;
}

double fermi_distance(const FermiChart& chart, const Point& x) {
  return fermi_inverse(chart, x)[0];
}

double curvature_term(const FermiChart& chart, const Point& x) {
  const double d = fermi_distance(chart, x);
  const int n = chart.dimension;
  if (chart.orientation == ChartOrientation::exterior)
    return (n - 1) / (1.0 + d);
  if (d >= 1.0)
    throw std::domain_error("curvature_term: interior model requires d < 1");
  return -(n - 1) / (1.0 - d);
}

std::vector<std::vector<double>> fermi_metric(const FermiChart& chart,
                                              const Point& y, double h) {
  const int n = chart.dimension;
  std::vector<Point> tangents;
  tangents.reserve(n - 1);
  for (int i = 1; i < n; ++i) {
    Point yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    const Point xp = fermi_map(chart, yp);
    const Point xm = fermi_map(chart, ym);
    Point t(n);
    for (int j = 0; j < n; ++j) t[j] = (xp[j] - xm[j]) / (2.0 * h);
    tangents.push_back(std::move(t));
  }
  std::vector<std::vector<double>> g(n - 1, std::vector<double>(n - 1));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) g[i][j] = dot(tangents[i], tangents[j]);
  return g;
}

TubeSpec::TubeSpec(int n, int k, double ring, double beta,
                   std::function<double(double)> q)
    : ambient_dim(n),
      submanifold_dim(k),
      ring_radius(ring),
      tube_radius(beta),
      weight(std::move(q)) {
  if (k < 1 || k >= n - 2)
    throw std::domain_error("TubeSpec: need 1 <= k < N-2");
  if (k != 1) throw std::domain_error("TubeSpec: only k = 1 (circle) is implemented");
  if (n < 4) throw std::domain_error("TubeSpec: need N >= 4");
  if (ring <= 0.0 || beta <= 0.0)
    throw std::domain_error("TubeSpec: radii must be positive");
  if (beta >= ring)
    throw std::domain_error("TubeSpec: tube radius must stay below ring radius");
}

double TubeSpec::circumference() const { return 2.0 * M_PI * ring_radius; }

TubePoint tube_distance_projection(const TubeSpec& tube, const Point& x) {
  const int n = tube.ambient_dim;
  if (static_cast<int>(x.size()) != n)
    throw std::domain_error("tube: dimension mismatch");
  const double rho = std::hypot(x[0], x[1]);
  if (rho < 1e-14 * tube.ring_radius)
    throw std::domain_error("tube: projection not unique on the circle axis");
  double off2 = (rho - tube.ring_radius) * (rho - tube.ring_radius);
  for (int i = 2; i < n; ++i) off2 += x[i] * x[i];
  const double delta = std::sqrt(off2);
  if (delta >= tube.tube_radius)
    throw std::domain_error("tube: point outside the tube");
  const double phi = std::atan2(x[1], x[0]);
  double sigma = tube.ring_radius * phi;
  if (sigma < 0.0) sigma += tube.circumference();
  return {delta, sigma};
}

Point tube_gamma_point(const TubeSpec& tube, double sigma) {
  Point p(tube.ambient_dim, 0.0);
  const double phi = sigma / tube.ring_radius;
  p[0] = tube.ring_radius * std::cos(phi);
  p[1] = tube.ring_radius * std::sin(phi);
  return p;
}

double fd_laplacian(const std::function<double(const Point&)>& field,
                    const Point& x, double h) {
  if (h <= 0.0) throw std::domain_error("fd_laplacian: step must be positive");
  const double center = field(x);
  double acc = 0.0;
  Point p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double fp = field(p);
    p[i] = x[i] - h;
    const double fm = field(p);
    p[i] = x[i];
    acc += fp + fm - 2.0 * center;
  }
  return acc / (h * h);
}

double default_fd_step(const Point& x) {
  return 1e-4 * std::max(1.0, norm(x));
}

}  // namespace hardycone
