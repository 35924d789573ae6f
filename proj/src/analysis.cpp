#include "herald/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "herald/errors.hpp"

namespace herald {

namespace {

constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
double wrap(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

bool plus_family(ConstraintKind k) { return k == ConstraintKind::sum_plus || k == ConstraintKind::diff_plus; }

}  // namespace

std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::sum_plus: return "sum_plus";
    case ConstraintKind::sum_minus: return "sum_minus";
    case ConstraintKind::diff_plus: return "diff_plus";
    case ConstraintKind::diff_minus: return "diff_minus";
    case ConstraintKind::violated: return "violated";
  }
  return "violated";
}

ConstraintKind parse_constraint_kind(std::string_view name) {
  for (auto k : {ConstraintKind::sum_plus, ConstraintKind::sum_minus, ConstraintKind::diff_plus,
                 ConstraintKind::diff_minus}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown constraint case '" + std::string(name) + "'");
}

ConstraintCase classify_constraint(double phi1, double phi2, double theta1, double theta2, double tolerance) {
  const double diff = phi1 - phi2;
  const double nu_real = std::round(diff / kPi);
  ConstraintCase c;
  c.nu = static_cast<long>(nu_real);
  if (std::abs(diff - nu_real * kPi) > tolerance) return c;

  const bool even = (c.nu % 2) == 0;
  const double s = wrap(even ? theta1 + theta2 : theta1 - theta2);
  if (std::abs(s - kPi / 2.0) <= tolerance) {
    c.kind = even ? ConstraintKind::sum_plus : ConstraintKind::diff_plus;
  } else if (std::abs(s + kPi / 2.0) <= tolerance) {
    c.kind = even ? ConstraintKind::sum_minus : ConstraintKind::diff_minus;
  }
  return c;
}

std::pair<SplitterAngles, SplitterAngles> constrained_splitters(double theta1, ConstraintKind kind) {
  SplitterAngles bs1{theta1, 0.0};
  switch (kind) {
    case ConstraintKind::sum_plus: return {bs1, {kPi / 2.0 - theta1, 0.0}};
    case ConstraintKind::sum_minus: return {bs1, {-kPi / 2.0 - theta1, 0.0}};
    case ConstraintKind::diff_plus: return {bs1, {theta1 - kPi / 2.0, kPi}};
    case ConstraintKind::diff_minus: return {bs1, {theta1 + kPi / 2.0, kPi}};
    case ConstraintKind::violated: break;
  }
  throw ConfigError("no splitter pair for a violated constraint");
}

double closed_form_ps(Complex beta, double theta1, ConstraintKind kind) {
  if (kind == ConstraintKind::violated) throw ConfigError("closed form undefined off the null-condition manifold");
  const double c2 = std::pow(std::cos(theta1), 2);
  const double s2 = std::pow(std::sin(theta1), 2);
  const double loss = std::norm(1.0 - beta);
  return plus_family(kind) ? loss * c2 * c2 * c2 * s2 : loss * s2 * s2 * s2 * c2;
}

double simulated_ps(const FormulaPoint& point, int cutoff) {
  SchemeConfig cfg;
  cfg.source.p = 1.0;
  cfg.cutoff = cutoff;
  std::tie(cfg.bs1, cfg.bs2) = constrained_splitters(point.theta1, point.kind);
  cfg.tpam = GenericTpam::unitary_from_beta(point.beta);
  return run_main_scheme(cfg).p_success;
}

double verify_formula_against_simulator(std::span<const FormulaPoint> grid, Execution exec) {
  std::vector<double> deviation(grid.size(), 0.0);
  parallel_for(grid.size(), exec, [&](std::size_t i) {
    const auto& pt = grid[i];
    deviation[i] = std::abs(closed_form_ps(pt.beta, pt.theta1, pt.kind) - simulated_ps(pt));
  });
  return deviation.empty() ? 0.0 : *std::max_element(deviation.begin(), deviation.end());
}

std::vector<FormulaPoint> formula_grid(std::size_t theta_steps, std::size_t beta_steps, double beta_min,
                                       double beta_max, ConstraintKind kind) {
  std::vector<FormulaPoint> grid;
  for (std::size_t i = 0; i < theta_steps; ++i) {
    const double theta = (kPi / 2.0) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(1, theta_steps - 1));
    for (std::size_t j = 0; j < beta_steps; ++j) {
      const double t = beta_steps > 1 ? static_cast<double>(j) / static_cast<double>(beta_steps - 1) : 0.0;
      grid.push_back({theta, Complex{beta_min + t * (beta_max - beta_min), 0.0}, kind});
    }
  }
  return grid;
}

// Optimisation ------------------------------------------------------------------

Optimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tolerance; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

Optimum maximize_1d(const std::function<double(double)>& f, double lo, double hi, std::size_t grid_points) {
  if (grid_points < 2) throw ConfigError("grid scan needs at least two points");
  const double step = (hi - lo) / static_cast<double>(grid_points);
  std::size_t best = 0;
  double best_value = f(lo);
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double v = f(lo + step * static_cast<double>(i));
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  const double centre = lo + step * static_cast<double>(best);
  Optimum refined = golden_section_maximize(f, centre - step, centre + step);
  if (refined.value < best_value) return {centre, best_value};
  return refined;
}

Optimum optimize_ps(Complex beta, ConstraintKind kind, Objective objective) {
  if (std::abs(beta) > 1.0 + 1e-12) throw ConfigError("|beta| must not exceed 1");
  if (kind == ConstraintKind::violated) throw ConfigError("cannot optimise off the null-condition manifold");
  if (objective == Objective::closed_form) {
    return maximize_1d([&](double t) { return closed_form_ps(beta, t, kind); }, 0.0, 2.0 * kPi, 720);
  }
  return maximize_1d([&](double t) { return simulated_ps({t, beta, kind}); }, 0.0, 2.0 * kPi, 144);
}

std::vector<double> optimal_theta_set(ConstraintKind kind) {
  const double deg = kPi / 180.0;
  if (plus_family(kind)) return {30 * deg, 150 * deg, 210 * deg, 330 * deg};
  return {60 * deg, 120 * deg, 240 * deg, 300 * deg};
}

double distance_to_optimal_set(double theta, ConstraintKind kind) {
  double best = 2.0 * kPi;
  for (double t : optimal_theta_set(kind)) best = std::min(best, std::abs(wrap(theta - t)));
  return best;
}

// Medium-length scans -------------------------------------------------------------

std::vector<JfScanRow> jf_length_scan(std::span<const double> lengths, JfScanTarget target) {
  std::vector<JfScanRow> rows;
  rows.reserve(lengths.size());
  double running = 0.0;
  for (double m : lengths) {
    if (!(m > 0.0)) throw ConfigError("medium length multiple must be positive");
    const JfCoefficients c = jf_coefficients(JfParams{m, 0.0, true});
    JfScanRow row{m, {}, 0.0, 0.0};
    switch (target) {
      case JfScanTarget::main_scheme:
        row.coefficient = c.beta;
        row.ps_over_p2 = closed_form_ps(c.beta, kPi / 6.0, ConstraintKind::sum_plus);
        break;
      case JfScanTarget::appendix_a:
        row.coefficient = c.alpha1;
        row.ps_over_p2 = std::norm(c.alpha1) / 2.0;
        break;
      case JfScanTarget::appendix_b:
        row.coefficient = c.beta;
        row.ps_over_p2 = std::norm(c.beta) / 4.0;
        break;
    }
    running = std::max(running, row.ps_over_p2);
    row.running_max = running;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> jf_lengths(JfScanTarget target, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    out.push_back(target == JfScanTarget::appendix_b ? (2.0 * static_cast<double>(k) - 1.0) / 2.0
                                                     : static_cast<double>(k));
  }
  return out;
}

// Sweeps --------------------------------------------------------------------------

void validate(const SweepSpec& spec) {
  auto axis = [](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ConfigError(std::string("sweep axis '") + name + "' is empty");
    if (!std::is_sorted(v.begin(), v.end()) && !std::is_sorted(v.begin(), v.end(), std::greater<>{})) throw ConfigError(std::string("sweep axis '") + name + "' is not monotone");
  };
  axis(spec.theta0, "theta0");
  axis(spec.theta1, "theta1");
  axis(spec.p, "p");
  if (spec.beta.empty()) throw ConfigError("sweep axis 'beta' is empty");
  for (double p : spec.p) {
    if (p < 0.0 || p > 1.0) throw ConfigError("sweep p values must lie in [0, 1]");
  }
  for (const auto& b : spec.beta) {
    if (std::abs(b) > 1.0 + 1e-12) throw ConfigError("sweep beta values must satisfy |beta| <= 1");
  }
  if (spec.scheme != SchemeVariant::main && spec.scheme != SchemeVariant::doubled) {
    throw ConfigError("sweeps support the main and doubled schemes");
  }
  if (spec.constraint == ConstraintKind::violated) throw ConfigError("sweep needs a valid constraint case");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, Execution exec) {
  validate(spec);
  const std::size_t n1 = spec.theta1.size();
  const std::size_t nb = spec.beta.size();
  const std::size_t np = spec.p.size();
  std::vector<SweepRow> rows(spec.theta0.size() * n1 * nb * np);

  parallel_for(rows.size(), exec, [&](std::size_t idx) {
    const std::size_t ip = idx % np;
    const std::size_t ib = (idx / np) % nb;
    const std::size_t i1 = (idx / (np * nb)) % n1;
    const std::size_t i0 = idx / (np * nb * n1);

    SchemeConfig cfg;
    cfg.variant = spec.scheme;
    cfg.cutoff = spec.cutoff;
    cfg.source.p = spec.p[ip];
    cfg.bs0 = {spec.theta0[i0], 0.0};
    std::tie(cfg.bs1, cfg.bs2) = constrained_splitters(spec.theta1[i1], spec.constraint);
    cfg.tpam = GenericTpam::unitary_from_beta(spec.beta[ib]);
    const SchemeResult r = run_scheme(cfg);

    SweepRow& row = rows[idx];
    row.theta0 = cfg.bs0.theta;
    row.theta1 = cfg.bs1.theta;
    row.theta2 = cfg.bs2.theta;
    row.phi1 = cfg.bs1.phi;
    row.phi2 = cfg.bs2.phi;
    row.beta = spec.beta[ib];
    row.p = cfg.source.p;
    row.p_success = r.p_success;
    row.ps_over_p2 = cfg.source.p > 0.0 ? r.p_success / (cfg.source.p * cfg.source.p) : 0.0;
    row.fidelity = r.fidelity;
  });
  return rows;
}

}  // namespace herald
