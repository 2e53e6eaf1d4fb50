#include "hardycone/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "hardycone/barriers.hpp"
#include "hardycone/solver.hpp"
#include "hardycone/spectral.hpp"

namespace hardycone {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string canonical_config(const SweepConfig& cfg) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "N=%d mode=%s k=%d cap=%.17g c=[%.17g,%.17g,%d] "
                "p=[%.17g,%.17g,%d] s=%.17g cert=%d zeta0=%d",
                cfg.N, cfg.tube_mode ? "tube" : "cap", cfg.k, cfg.cap.aperture,
                cfg.c_min, cfg.c_max, cfg.c_count, cfg.p_min, cfg.p_max,
                cfg.p_count, cfg.s, cfg.run_certifier ? 1 : 0,
                cfg.run_zeta0 ? 1 : 0);
  return buf;
}

double grid_value(double lo, double hi, int count, int i) {
  return count > 1 ? lo + (hi - lo) * i / (count - 1) : lo;
}

int worker_count() {
  if (const char* env = std::getenv("HARDYCONE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 2;
}

SweepCell evaluate_cap_cell(const SweepConfig& cfg, double c, double p,
                            double lambda1) {
  SweepCell cell;
  cell.c = c;
  cell.p = p;
  cell.lambda1 = lambda1;
  cell.mu = hardy_constant(cfg.N, lambda1);
  cell.alpha_minus = kNaN;
  cell.p_critical = kNaN;
  cell.max_residual = kNaN;
  // lambda1 (and so mu) carries the eigensolver tolerance; keep cells sitting
  // exactly at the critical coupling in play.
  const double slack = 1e-7 * std::max(1.0, std::abs(cell.mu));
  if (!(c > lambda1 && c <= cell.mu + slack)) {
    cell.skip_reason = "c outside (lambda1, mu]";
    return cell;
  }
  cell.alpha_minus = alpha_minus(cfg.N, std::min(c, cell.mu), lambda1);
  cell.p_critical = critical_exponent(cell.alpha_minus, cfg.s);

  if (cfg.run_certifier) {
    if (cfg.cap.aperture == 0.0 && c > cfg.N - 1.0) {
      try {
        SamplingSpec grid;
        grid.radii = 5;
        grid.directions = 5;
        const ResidualReport rep = certify_prop32(cfg.N, c, p, 1e-2, grid);
        cell.cert_analytic = rep.analytic_stage ? 1 : 0;
        cell.cert_numeric = rep.numeric_stage ? 1 : 0;
        double worst = 0.0;
        for (double r : rep.ratios) worst = std::max(worst, std::abs(r));
        cell.max_residual = worst;
      } catch (const std::exception& e) {
        cell.skip_reason = e.what();
      }
    } else {
      cell.skip_reason = "certifier needs the hemisphere cap and c > N-1";
    }
  }
  if (cfg.run_zeta0 && p > 1.0) {
    try {
      const Zeta0Result z =
          zeta0_divergence(cfg.N, c, p, cfg.cap, ShootingOptions{}, lambda1);
      cell.zeta0_verdict = z.divergent ? 1 : 0;
    } catch (const std::exception& e) {
      if (!cell.skip_reason.empty()) cell.skip_reason += "; ";
      cell.skip_reason += e.what();
    }
  }
  return cell;
}

SweepCell evaluate_tube_cell(const SweepConfig& cfg, double c, double p) {
  SweepCell cell;
  cell.c = c;
  cell.p = p;
  cell.lambda1 = kNaN;
  cell.mu = kNaN;
  cell.alpha_minus = 0.5 * (cfg.N - cfg.k - 2);
  cell.p_critical = tube_critical_exponent(cfg.N, cfg.k);
  cell.max_residual = kNaN;
  cell.cert_analytic = p < cell.p_critical ? 1 : 0;
  if (cfg.run_certifier && cfg.k == 1) {
    try {
      TubeSpec tube(cfg.N, 1, 1.0, 0.2, [](double) { return 1.0; });
      const std::vector<double> deltas{1e-2, 3e-3, 1e-3};
      const auto samples = tube_sample_points(tube, deltas, 6);
      const ResidualReport rep = certify_prop44(tube, p, 0.1, samples);
      cell.cert_numeric = rep.numeric_stage ? 1 : 0;
      cell.max_residual = rep.threshold;
    } catch (const std::exception& e) {
      cell.skip_reason = e.what();
    }
  } else if (cfg.run_certifier) {
    cell.skip_reason = "numeric tube certifier implemented for k = 1 only";
  }
  return cell;
}

}  // namespace

std::uint64_t config_hash(const SweepConfig& cfg) {
  const std::string s = canonical_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.c_count < 1 || cfg.p_count < 1)
    throw std::domain_error("run_sweep: ranges must be nonempty");
  SweepResult result;
  result.config = cfg;
  result.cells.resize(static_cast<std::size_t>(cfg.c_count) * cfg.p_count);

  double lambda1 = 0.0;
  if (!cfg.tube_mode) lambda1 = cap_lambda1(cfg.cap);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= result.cells.size()) return;
      const int ci = static_cast<int>(idx) / cfg.p_count;
      const int pi = static_cast<int>(idx) % cfg.p_count;
      const double c = grid_value(cfg.c_min, cfg.c_max, cfg.c_count, ci);
      const double p = grid_value(cfg.p_min, cfg.p_max, cfg.p_count, pi);
      result.cells[idx] = cfg.tube_mode
                              ? evaluate_tube_cell(cfg, c, p)
                              : evaluate_cap_cell(cfg, c, p, lambda1);
    }
  };
  const int workers = std::min<int>(worker_count(),
                                    static_cast<int>(result.cells.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(result.config)));
  out << "# config_hash=" << buf << "\n";
  out << "# " << canonical_config(result.config) << "\n";
  out << "c,p,lambda1,mu,alpha_minus,p_critical,cert_analytic,cert_numeric,"
         "zeta0_verdict,max_residual\n";
  for (const SweepCell& cell : result.cells) {
    out << fmt(cell.c) << ',' << fmt(cell.p) << ',' << fmt(cell.lambda1) << ','
        << fmt(cell.mu) << ',' << fmt(cell.alpha_minus) << ','
        << fmt(cell.p_critical) << ',' << cell.cert_analytic << ','
        << cell.cert_numeric << ',' << cell.zeta0_verdict << ','
        << fmt(cell.max_residual) << "\n";
  }
  return out.str();
}

std::string sweep_svg(const SweepResult& result) {
  const SweepConfig& cfg = result.config;
  const int width = 720, height = 540;
  const int ml = 70, mr = 20, mt = 20, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto xpos = [&](double c) {
    return cfg.c_max > cfg.c_min
               ? ml + pw * (c - cfg.c_min) / (cfg.c_max - cfg.c_min)
               : ml + 0.5 * pw;
  };
  auto ypos = [&](double p) {
    return cfg.p_max > cfg.p_min
               ? mt + ph * (1.0 - (p - cfg.p_min) / (cfg.p_max - cfg.p_min))
               : mt + 0.5 * ph;
  };
  const double cw = pw / std::max(1, cfg.c_count);
  const double chh = ph / std::max(1, cfg.p_count);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  for (const SweepCell& cell : result.cells) {
    std::string color = "#bbbbbb";  // skipped / indeterminate
    if (cell.zeta0_verdict == 1 || cell.cert_analytic == 0)
      color = "#d6604d";  // nonexistence side
    else if (cell.cert_analytic == 1 &&
             (cell.cert_numeric != 0))
      color = "#4393c3";  // supersolution side
    const double x = xpos(cell.c) - 0.5 * cw;
    const double y = ypos(cell.p) - 0.5 * chh;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw
        << "\" height=\"" << chh << "\" fill=\"" << color
        << "\" stroke=\"none\"/>\n";
  }
  // Critical-curve overlay p = p_critical(c) from the computed cells.
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
  for (int ci = 0; ci < cfg.c_count; ++ci) {
    for (const SweepCell& cell : result.cells) {
      const double c = cfg.c_count > 1
                           ? cfg.c_min + (cfg.c_max - cfg.c_min) * ci /
                                             (cfg.c_count - 1)
                           : cfg.c_min;
      if (cell.c == c && std::isfinite(cell.p_critical)) {
        out << xpos(cell.c) << ',' << ypos(cell.p_critical) << ' ';
        break;
      }
    }
  }
  out << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml + 0.5 * pw << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">c</text>\n";
  out << "<text x=\"18\" y=\"" << mt + 0.5 * ph
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
      << mt + 0.5 * ph << ")\">p</text>\n";
  out << "<text x=\"" << ml << "\" y=\"" << height - 32
      << "\" font-size=\"12\">" << cfg.c_min << "</text>\n";
  out << "<text x=\"" << ml + pw << "\" y=\"" << height - 32
      << "\" text-anchor=\"end\" font-size=\"12\">" << cfg.c_max << "</text>\n";
  out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph
      << "\" text-anchor=\"end\" font-size=\"12\">" << cfg.p_min << "</text>\n";
  out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10
      << "\" text-anchor=\"end\" font-size=\"12\">" << cfg.p_max << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

SweepConfig parse_toml_config(const std::string& text) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') continue;  // section headers carry no data here
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    auto as_double = [&]() {
      try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) fail("bad number: " + value);
        return v;
      } catch (const std::invalid_argument&) {
        fail("bad number: " + value);
        return 0.0;
      }
    };
    auto as_bool = [&]() {
      if (value == "true") return true;
      if (value == "false") return false;
      fail("bad boolean: " + value);
      return false;
    };
    if (key == "N") cfg.N = static_cast<int>(as_double());
    else if (key == "mode") cfg.tube_mode = (value == "tube");
    else if (key == "k") cfg.k = static_cast<int>(as_double());
    else if (key == "cap") {
      if (value == "hemisphere") cfg.cap.aperture = 0.0;
      else if (value == "sphere") cfg.cap.aperture = -1.0;
      else cfg.cap.aperture = as_double();
    } else if (key == "c_min") cfg.c_min = as_double();
    else if (key == "c_max") cfg.c_max = as_double();
    else if (key == "c_count") cfg.c_count = static_cast<int>(as_double());
    else if (key == "p_min") cfg.p_min = as_double();
    else if (key == "p_max") cfg.p_max = as_double();
    else if (key == "p_count") cfg.p_count = static_cast<int>(as_double());
    else if (key == "s") cfg.s = as_double();
    else if (key == "certifier") cfg.run_certifier = as_bool();
    else if (key == "zeta0") cfg.run_zeta0 = as_bool();
    else if (key == "out") cfg.out_csv = value;
    else if (key == "plot") cfg.out_svg = value;
    else fail("unknown key: " + key);
  }
  cfg.cap.dimension = cfg.N;
  return cfg;
}

}  // namespace hardycone
