#include <cmath>
#include <random>

#include "doctest.h"
#include "hardycone/barriers.hpp"
#include "hardycone/spectral.hpp"

using namespace hardycone;

TEST_CASE("log factor domain") {
  CHECK(log_power(std::exp(-1.0), 3.0) == doctest::Approx(1.0));
  CHECK(log_power(0.1, -1.0) == doctest::Approx(1.0 / std::log(10.0)));
  CHECK_THROWS_AS(log_power(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(log_power(0.0, 1.0), std::domain_error);
}

TEST_CASE("omega_bar closed form and boundary vanishing") {
  BarrierSpec spec;
  spec.N = 3;
  spec.c = 2.0;

  Point y{0.0, 0.5, 0.0};
  CHECK(omega_bar(spec, y, 1.0) == 0.0);

  // exponent collapse at the critical coefficient
  BarrierSpec crit;
  crit.N = 4;
  crit.c = 4.0;
  for (double t : {0.1, 0.3, 0.6}) {
    Point axis{t, 0.0, 0.0, 0.0};
    CHECK(omega_bar(crit, axis, 0.0) ==
          doctest::Approx(std::pow(t, 1.0 - 2.0)).epsilon(1e-14));
  }

  // dual-evaluation oracle through the exp/log path
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.05, 0.3);
  BarrierSpec gen;
  gen.N = 3;
  gen.c = 2.0;
  gen.a = -1.0;
  gen.K = 0.7;
  for (int i = 0; i < 50; ++i) {
    Point p{unit(rng), unit(rng), unit(rng)};
    const double rho = norm(p);
    const double s = std::sqrt(0.25 * 9.0 - 2.0);
    const double logval = std::exp(gen.K * p[0] + std::log(p[0]) +
                                   (-1.5 + s) * std::log(rho) +
                                   gen.a * std::log(-std::log(rho)));
    CHECK(omega_tilted(gen, p) == doctest::Approx(logval).epsilon(1e-13));
    CHECK(omega_tilted(gen, p) / omega_bar(gen, p) ==
          doctest::Approx(std::exp(gen.K * p[0])).epsilon(1e-14));
  }
  CHECK_THROWS_AS(omega_bar(spec, Point{0.8, 0.8, 0.0}, 1.0), std::domain_error);
}

TEST_CASE("flat residual identity special cases") {
  BarrierSpec spec;
  spec.N = 4;
  spec.c = 3.0;
  Point y{0.1, 0.05, 0.02, 0.0};

  spec.a = 0.0;
  spec.K = 0.0;
  CHECK(residual_flat(spec, y) == 0.0);

  spec.a = 1.0;
  const double s = std::sqrt(4.0 - 3.0);
  const double rho = norm(y);
  CHECK(residual_flat(spec, y) ==
        doctest::Approx(2.0 * s / (rho * rho) * log_power(rho, -1.0) *
                        omega_bar(spec, y, 1.0))
            .epsilon(1e-14));
  CHECK_THROWS_AS(residual_flat(spec, Point{0.0, 0.1, 0.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("flat residual matches finite differences at second order") {
  for (auto [N, c, a, K] : {std::tuple{3, 2.0, 0.0, 0.0},
                            std::tuple{4, 3.0, -1.0, 2.0},
                            std::tuple{5, 5.0, 0.5, -4.0}}) {
    BarrierSpec spec;
    spec.N = N;
    spec.c = c;
    spec.a = a;
    spec.K = K;
    const ResidualReport rep = verify_flat_identity(spec);
    CHECK(rep.passed);
    for (double ratio : rep.ratios) {
      CHECK(ratio >= 3.6);
      CHECK(ratio <= 4.4);
    }
  }
}

TEST_CASE("harmonicity of the untilted barrier at a = 0") {
  for (int N : {3, 4, 5}) {
    for (double c : {0.25 * N * N, 0.25 * N * N - 1.0}) {
      BarrierSpec spec;
      spec.N = N;
      spec.c = c;
      std::mt19937 rng(N * 100 + static_cast<int>(c));
      std::uniform_real_distribution<double> unit(0.05, 0.25);
      for (int i = 0; i < 50; ++i) {
        Point y(N);
        for (int j = 0; j < N; ++j) y[j] = unit(rng);
        const double rho = norm(y);
        const double val = flat_operator_fd(spec, y, 1e-4 * rho);
        const double scale = omega_bar(spec, y, 0.0) / (rho * rho);
        CHECK(std::abs(val) <= 1e-5 * scale);
      }
    }
  }
}

TEST_CASE("pullback residual: flat chart reduces to the flat identity") {
  BarrierSpec spec;
  spec.N = 3;
  spec.c = 2.0;
  const Point x{0.05, 0.03, 0.0};
  const PullbackSample sample = residual_pullback(spec, x);
  CHECK(std::abs(sample.remainder_ratio) <= 1e-5);
}

TEST_CASE("pullback residual stays bounded along dyadic sequences") {
  for (auto [N, c, a] : {std::tuple{3, 2.0, 0.0}, std::tuple{4, 4.0, -1.0}}) {
    BarrierSpec spec;
    spec.N = N;
    spec.c = c;
    spec.a = a;
    spec.K = 1.0 - N;
    spec.chart = FermiChart{N, 0.5, ChartOrientation::exterior};
    double lo = 1e300, hi = 0.0;
    for (int j = 3; j <= 10; ++j) {
      const double rho = std::pow(2.0, -j);
      Point y(N, 0.0);
      y[0] = rho * std::cos(0.7);
      y[1] = rho * std::sin(0.7);
      const Point x = fermi_map(*spec.chart, y);
      const PullbackSample sample = residual_pullback(spec, x);
      const double mag = std::abs(sample.remainder_ratio);
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    CHECK(hi / lo <= 10.0);
  }
}

TEST_CASE("prop32 certifier stages") {
  const ResidualReport below = certify_prop32(3, 2.25, 4.5, 1e-2);
  CHECK(below.analytic_stage);
  const ResidualReport at = certify_prop32(3, 2.25, 5.0 + 1e-12, 1e-2);
  CHECK_FALSE(at.analytic_stage);
  CHECK(at.threshold == doctest::Approx(5.0).epsilon(1e-12).scale(1));
  CHECK_THROWS_AS(certify_prop32(3, 1.9, 2.0, 1e-2), std::domain_error);
  CHECK_THROWS_AS(certify_prop32(3, 2.3, 2.0, 1e-2), std::domain_error);
}

TEST_CASE("tube alpha closed form") {
  TubeSpec tube(5, 1, 1.0, 0.2, [](double) { return 0.75; });
  // place a point at delta = 0.05
  Point x{1.05, 0.0, 0.0, 0.0, 0.0};
  const double alpha = tube_alpha(tube, x);
  CHECK(alpha == doctest::Approx(1.0 - std::sqrt(0.3)).epsilon(1e-14).scale(1));
  const double m = 1.0;
  const double alphatilde = m * m * (1.0 - 0.75 + 0.05);
  CHECK(std::abs((m - alpha) * (m - alpha) - alphatilde) <= 1e-14);

  TubeSpec flat(5, 1, 1.0, 0.2, [](double) { return 1.0; });
  Point near{1.0 + 1e-8, 0.0, 0.0, 0.0, 0.0};
  CHECK(tube_alpha(flat, near) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("tube barrier values") {
  TubeSpec tube(5, 1, 1.0, 0.45, [](double) { return 1.0; });
  TubeBarrierSpec w0{tube, 0.0};
  Point x{1.0, 0.0, 0.05, 0.0, 0.0};
  const double alpha = tube_alpha(tube, x);
  CHECK(tube_barrier(w0, x) == doctest::Approx(std::pow(0.05, -alpha)).epsilon(1e-14));

  // theta = omega_0 + omega_{-1} doubles at delta = 1/e
  TubeBarrierSpec wm1{tube, -1.0};
  Point xe{1.0, 0.0, std::exp(-1.0), 0.0, 0.0};
  CHECK(tube_barrier(wm1, xe) == doctest::Approx(tube_barrier(w0, xe)).epsilon(1e-13));
}

TEST_CASE("tube residual bound has bounded per-decade ratios") {
  TubeSpec tube(5, 1, 1.0, 0.2, [](double) { return 1.0; });
  TubeBarrierSpec spec{tube, 0.0};
  std::vector<double> deltas;
  for (int j = 0; j <= 12; ++j) deltas.push_back(1e-1 * std::pow(10.0, -0.25 * j));
  const auto samples = tube_sample_points(tube, deltas, 5);
  const ResidualReport rep = verify_lemma43(spec, samples);
  CHECK(rep.passed);
  CHECK(rep.max_relative_mismatch <= 10.0);
}

TEST_CASE("prop44 certifier") {
  TubeSpec tube(5, 1, 1.0, 0.2, [](double) { return 1.0; });
  // the pointwise inequality only kicks in deep inside the tube, where the
  // log factors are beaten by the delta power
  const std::vector<double> deltas{1e-6, 3e-7, 1e-7};
  const auto samples = tube_sample_points(tube, deltas, 8);
  const ResidualReport pass = certify_prop44(tube, 2.0, 0.1, samples);
  CHECK(pass.analytic_stage);
  CHECK(pass.numeric_stage);
  CHECK(pass.passed);

  const ResidualReport fail = certify_prop44(tube, 3.0, 0.1, samples);
  CHECK_FALSE(fail.analytic_stage);

  // exponent -2 + (p-1) alpha stays negative below the threshold
  for (double ratio : pass.ratios) CHECK(ratio < 0.0);

  CHECK_THROWS_AS(
      certify_prop44(tube, 2.0, 0.1,
                     std::vector<Point>{Point{1.0, 0.0, 0.5, 0.0, 0.0}}),
      std::domain_error);
}

TEST_CASE("weight integral classification") {
  TubeSpec all_one(5, 1, 1.0, 0.2, [](double) { return 1.0; });
  CHECK(gamma_weight_integral(all_one).divergent);

  TubeSpec all_zero(5, 1, 1.0, 0.2, [](double) { return 0.0; });
  const GammaIntegral len = gamma_weight_integral(all_zero);
  CHECK_FALSE(len.divergent);
  CHECK(len.value == doctest::Approx(2.0 * M_PI).epsilon(1e-6));

  // quadratic touch of 1: order 2 => divergent
  TubeSpec quad(5, 1, 1.0, 0.2, [](double s) {
    const double x = std::sin(0.5 * s);
    return 1.0 - x * x;
  });
  const GammaIntegral div = gamma_weight_integral(quad);
  CHECK(div.divergent);
  CHECK(div.local_order == doctest::Approx(2.0).epsilon(0.05));

  // order-1 touch: integrable, value close to a refined direct quadrature
  TubeSpec lin(5, 1, 1.0, 0.2, [](double s) {
    const double x = std::sin(0.5 * s);
    return 1.0 - std::pow(x * x, 0.5);
  });
  const GammaIntegral fin = gamma_weight_integral(lin);
  CHECK_FALSE(fin.divergent);
  CHECK(fin.local_order == doctest::Approx(1.0).epsilon(0.05));
  double ref = 0.0;
  const int n = 4000000;
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * M_PI * (i + 0.5) / n;
    ref += 2.0 * M_PI / n / std::sqrt(std::abs(std::sin(0.5 * s)));
  }
  CHECK(fin.value == doctest::Approx(ref).epsilon(0.05));

  TubeSpec bad(5, 1, 1.0, 0.2, [](double) { return 1.1; });
  CHECK_THROWS_AS(gamma_weight_integral(bad), std::domain_error);
}

TEST_CASE("barrier energy grows with the divergence order of the weight") {
  // Gradient energy of theta_{-1} on the tube versus the vanishing order of
  // 1 - q: higher order (more divergent weight integral) gives larger energy.
  auto energy = [](double order) {
    TubeSpec tube(5, 1, 1.0, 0.2, [order](double s) {
      const double x = std::sin(0.5 * s);
      return 1.0 - std::pow(x * x, 0.5 * order);
    });
    TubeBarrierSpec spec{tube, -1.0};
    double acc = 0.0;
    const int ns = 48, nd = 60;
    for (int i = 0; i < ns; ++i) {
      const double sigma = tube.circumference() * (i + 0.5) / ns;
      for (int j = 0; j < nd; ++j) {
        const double ldelta = -6.0 + 4.0 * (j + 0.5) / nd;  // log10 delta
        const double delta = std::pow(10.0, ldelta);
        auto at = [&](double d) {
          Point x = tube_gamma_point(tube, sigma);
          const double scale = (tube.ring_radius + d) / tube.ring_radius;
          x[0] *= scale;
          x[1] *= scale;
          return tube_barrier(spec, x);
        };
        const double h = 1e-4 * delta;
        const double dtheta = (at(delta + h) - at(delta - h)) / (2.0 * h);
        const double wlog = delta * std::log(10.0) * 4.0 / nd;  // d(delta)
        acc += dtheta * dtheta * std::pow(delta, 3) * wlog *
               tube.circumference() / ns;
      }
    }
    return acc;
  };
  const double e_low = energy(1.0);   // integrable weight integral
  const double e_mid = energy(2.0);   // marginally divergent
  const double e_high = energy(4.0);  // strongly divergent
  CHECK(e_low < e_mid);
  CHECK(e_mid < e_high);
}

TEST_CASE("residual report serializes to json") {
  BarrierSpec spec;
  spec.N = 3;
  spec.c = 2.0;
  const ResidualReport rep = verify_flat_identity(spec, 4);
  const std::string text = rep.to_json_string();
  CHECK(text.find("\"passed\"") != std::string::npos);
  CHECK(text.find("\"ratios\"") != std::string::npos);
}
