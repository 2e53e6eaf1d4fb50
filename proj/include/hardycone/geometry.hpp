#ifndef HARDYCONE_GEOMETRY_HPP_
#define HARDYCONE_GEOMETRY_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

// Exact model geometries: geodesic caps on the unit sphere, the unit ball
// with its boundary chart, and circular tubes. Everything here has a closed
// form, so chart and projection correctness is testable to machine precision.

namespace hardycone {

using Point = std::vector<double>;

double norm(const Point& v);
double dot(const Point& a, const Point& b);

// Geodesic cap {sigma in S^{N-1} : sigma . E1 > aperture}. aperture = 0 is the
// hemisphere; aperture = -1 marks the punctured full sphere (lambda1 = 0).
struct CapSpec {
  int dimension = 3;
  double aperture = 0.0;

  CapSpec() = default;
  CapSpec(int n, double delta);
  static CapSpec hemisphere(int n) { return CapSpec(n, 0.0); }
  static CapSpec sphere(int n);

  bool is_full_sphere() const { return aperture <= -1.0; }
  double polar_angle() const;  // theta0 = arccos(aperture)
};

enum class ChartOrientation { interior, exterior };

// Boundary-adapted chart for the unit sphere through the origin. The normal
// coordinate y^1 equals the exact distance to the sphere, and the tangential
// coordinates are great-circle arc lengths from the base point 0.
// Interior model: ball B_1(E1); exterior model: complement of B_1(-E1).
struct FermiChart {
  int dimension = 3;
  double radius = 0.5;
  ChartOrientation orientation = ChartOrientation::interior;

  Point center() const;  // +E1 (interior) or -E1 (exterior)
};

Point fermi_map(const FermiChart& chart, const Point& y);
Point fermi_inverse(const FermiChart& chart, const Point& x);

// Distance to the sphere measured from x, positive inside the chart.
double fermi_distance(const FermiChart& chart, const Point& x);

// Delta d_M(x) in closed form: (N-1)/(1+d) outside the ball,
// -(N-1)/(1-d) inside.
double curvature_term(const FermiChart& chart, const Point& x);

// Tangential metric g_ij(y) = <dF/dy^i, dF/dy^j>, i,j = 2..N, by central
// differences of the chart map. Test utility for the g = Id + O(|y|) control.
std::vector<std::vector<double>> fermi_metric(const FermiChart& chart,
                                              const Point& y, double h);

// Circle of radius ring_radius in the (x1,x2) coordinate plane, tube of
// radius beta around it. weight is the profile q on the arc-length parameter,
// normalized so that max q = 1 when the critical Hardy coefficient is meant.
struct TubeSpec {
  int ambient_dim = 5;   // N
  int submanifold_dim = 1;  // k; only k = 1 (circles) is implemented
  double ring_radius = 1.0;
  double tube_radius = 0.2;  // beta
  std::function<double(double)> weight = [](double) { return 1.0; };

  TubeSpec() = default;
  TubeSpec(int n, int k, double ring, double beta,
           std::function<double(double)> q);

  int codim() const { return ambient_dim - submanifold_dim; }  // N - k
  double circumference() const;
};

struct TubePoint {
  double delta;  // dist(x, Gamma)
  double sigma;  // arc-length parameter of the nearest point on Gamma
};

TubePoint tube_distance_projection(const TubeSpec& tube, const Point& x);

// Point of Gamma at arc-length parameter sigma.
Point tube_gamma_point(const TubeSpec& tube, double sigma);

// Central second-difference Laplacian, error O(h^2) for C^4 fields.
double fd_laplacian(const std::function<double(const Point&)>& field,
                    const Point& x, double h);

double default_fd_step(const Point& x);

}  // namespace hardycone

#endif  // HARDYCONE_GEOMETRY_HPP_
