#ifndef HARDYCONE_SWEEP_HPP_
#define HARDYCONE_SWEEP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hardycone/geometry.hpp"

// Dichotomy sweeps over (c, p): per-cell exponent reports, supersolution
// certificates and divergence verdicts, with deterministic CSV/SVG output.

namespace hardycone {

struct SweepConfig {
  int N = 3;
  bool tube_mode = false;
  int k = 1;                           // tube mode only
  CapSpec cap = CapSpec::hemisphere(3);
  double c_min = 2.05, c_max = 2.25;
  int c_count = 20;
  double p_min = 3.0, p_max = 6.0;
  int p_count = 20;
  double s = 0.0;                      // weight exponent for q_critical
  bool run_certifier = true;
  bool run_zeta0 = true;
  std::string out_csv;
  std::string out_svg;
};

struct SweepCell {
  double c = 0.0, p = 0.0;
  double lambda1 = 0.0, mu = 0.0;
  double alpha_minus = 0.0, p_critical = 0.0;  // NaN when skipped
  int cert_analytic = -1;  // 1 pass, 0 fail, -1 skipped
  int cert_numeric = -1;
  int zeta0_verdict = -1;  // 1 divergent, 0 finite, -1 skipped
  double max_residual = 0.0;
  std::string skip_reason;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;  // sorted by (c, p)
};

// Evaluates every cell; worker count from HARDYCONE_THREADS (default:
// hardware concurrency), results merged in deterministic (c, p) order.
SweepResult run_sweep(const SweepConfig& config);

// FNV-1a hash of the canonical config serialization; embedded in the CSV
// metadata header so identical configs give byte-identical files.
std::uint64_t config_hash(const SweepConfig& config);

std::string sweep_csv(const SweepResult& result);
std::string sweep_svg(const SweepResult& result);

// Minimal flat TOML subset: key = value pairs, '#' comments, optional
// [section] headers (ignored), quoted strings, numbers, booleans.
SweepConfig parse_toml_config(const std::string& text);

}  // namespace hardycone

#endif  // HARDYCONE_SWEEP_HPP_
