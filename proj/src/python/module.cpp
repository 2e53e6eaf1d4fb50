#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardycone/barriers.hpp"
#include "hardycone/solver.hpp"
#include "hardycone/spectral.hpp"

namespace py = pybind11;
using namespace hardycone;

namespace {

CapSpec make_cap(int N, double aperture) {
  return aperture == -1.0 ? CapSpec::sphere(N) : CapSpec(N, aperture);
}

py::dict report_to_dict(const ExponentReport& rep) {
  py::dict d;
  d["lambda1"] = rep.lambda1;
  d["mu"] = rep.mu;
  d["alpha_minus"] = rep.alpha_minus;
  d["p_critical"] = rep.p_critical;
  d["q_critical"] = rep.q_critical;
  d["valid"] = rep.flags.valid();
  d["c_above_lambda1"] = rep.flags.c_above_lambda1;
  d["c_at_most_mu"] = rep.flags.c_at_most_mu;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hardycone, m) {
  m.doc() =
      "Spectral quantities, critical exponents and supersolution "
      "certificates for inverse-square Hardy potentials on cones and tubes";

  m.def("cap_eigenvalue",
        [](int N, double theta0) { return cap_eigenvalue(N, theta0); },
        py::arg("N"), py::arg("theta0"),
        "First Dirichlet eigenvalue of the spherical Laplacian on the cap of "
        "polar angle theta0");
  m.def("cap_lambda1",
        [](int N, double aperture) { return cap_lambda1(make_cap(N, aperture)); },
        py::arg("N"), py::arg("aperture"),
        "Cap eigenvalue by aperture cosine; aperture = -1 is the full sphere, "
        "0 the hemisphere");
  m.def("hardy_constant", &hardy_constant, py::arg("N"), py::arg("lambda1"),
        "(N-2)^2/4 + lambda1, the Hardy constant of the cone over the cap");
  m.def("alpha_minus", &alpha_minus, py::arg("N"), py::arg("c"),
        py::arg("lambda1"),
        "Smaller root of alpha^2 - (N-2) alpha + c - lambda1 = 0");
  m.def("critical_exponent", &critical_exponent, py::arg("alpha"),
        py::arg("s") = 0.0,
        "1 + (2-s)/alpha, the supersolution existence threshold");
  m.def("tube_critical_exponent", &tube_critical_exponent, py::arg("N"),
        py::arg("k"),
        "(N-k+2)/(N-k-2), the threshold for codimension N-k tubes with unit "
        "weight");
  m.def(
      "exponent_report",
      [](int N, double c, double aperture, double s) {
        HardyProblem problem;
        problem.N = N;
        problem.c = c;
        problem.cap = make_cap(N, aperture);
        problem.s = s;
        return report_to_dict(exponent_report(problem));
      },
      py::arg("N"), py::arg("c"), py::arg("aperture") = 0.0, py::arg("s") = 0.0,
      "Full exponent summary with regime flags; invalid regimes give NaN "
      "entries");
  m.def(
      "zeta0_divergence",
      [](int N, double c, double p, double aperture) {
        const Zeta0Result res = zeta0_divergence(N, c, p, make_cap(N, aperture));
        py::dict d;
        d["divergent"] = res.divergent;
        d["gamma"] = res.gamma;
        d["r_squared"] = res.r_squared;
        d["p_flip"] = res.p_flip;
        d["lambda1"] = res.lambda1;
        return d;
      },
      py::arg("N"), py::arg("c"), py::arg("p"), py::arg("aperture") = -1.0,
      "Divergence verdict for the truncated-potential source solution");
  m.def(
      "certify_supersolution",
      [](int N, double c, double p, double r) {
        const ResidualReport rep = certify_prop32(N, c, p, r);
        py::dict d;
        d["analytic_stage"] = rep.analytic_stage;
        d["numeric_stage"] = rep.numeric_stage;
        d["passed"] = rep.passed;
        d["threshold"] = rep.threshold;
        d["max_relative_mismatch"] = rep.max_relative_mismatch;
        return d;
      },
      py::arg("N"), py::arg("c"), py::arg("p"), py::arg("r") = 1e-2,
      "Two-stage exterior-ball supersolution certificate");
  m.def(
      "rayleigh_min",
      [](int N, double lambda, double r_inner, double r_outer,
         int nodes_per_decade) {
        ShellSpec shell;
        shell.N = N;
        shell.lambda = lambda;
        shell.r_inner = r_inner;
        shell.r_outer = r_outer;
        shell.nodes_per_decade = nodes_per_decade;
        return rayleigh_min(shell, [](double) { return 0.0; },
                            RayleighWeight::inverse_square);
      },
      py::arg("N"), py::arg("lambda1") = 0.0, py::arg("r_inner") = 1e-4,
      py::arg("r_outer") = 0.5, py::arg("nodes_per_decade") = 4096,
      "Discrete Hardy quotient minimum on a shell with Dirichlet ends");
}
