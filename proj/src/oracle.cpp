#include "herald/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "herald/errors.hpp"

namespace herald::oracle {

using dense::DensityMatrix;
using dense::Subsystem;

namespace {

std::vector<Complex> matmul(const std::vector<Complex>& a, const std::vector<Complex>& b, std::size_t n) {
  std::vector<Complex> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex x = a[i * n + k];
      if (x == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += x * b[k * n + j];
    }
  }
  return c;
}

}  // namespace

std::vector<Complex> expm(std::span<const Complex> a, std::size_t n) {
  double norm1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a[i * n + j]);
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  std::vector<Complex> x(a.begin(), a.end());
  for (auto& v : x) v *= scale;

  std::vector<Complex> result(n * n);
  std::vector<Complex> term(n * n);
  for (std::size_t i = 0; i < n; ++i) result[i * n + i] = term[i * n + i] = 1.0;
  for (int k = 1; k <= 24; ++k) {
    term = matmul(term, x, n);
    for (auto& v : term) v /= static_cast<double>(k);
    for (std::size_t i = 0; i < n * n; ++i) result[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result, n);
  return result;
}

LocalOperator beam_splitter_operator(const std::string& m1, const std::string& m2, double theta, double phi,
                                     int cutoff) {
  const auto d = static_cast<std::size_t>(cutoff + 1);
  const std::size_t n = d * d;
  std::vector<Complex> g(n * n);
  auto idx = [d](std::size_t a, std::size_t b) { return a * d + b; };
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      // a2^dag a1 |a, b> = sqrt(a (b+1)) |a-1, b+1>
      if (a > 0 && b + 1 < d) {
        g[idx(a - 1, b + 1) * n + idx(a, b)] += theta * std::polar(1.0, -phi) * std::sqrt(double(a) * double(b + 1));
      }
      // a1^dag a2 |a, b> = sqrt((a+1) b) |a+1, b-1>
      if (b > 0 && a + 1 < d) {
        g[idx(a + 1, b - 1) * n + idx(a, b)] -= theta * std::polar(1.0, phi) * std::sqrt(double(a + 1) * double(b));
      }
    }
  }
  return {{m1, m2}, n, expm(g, n)};
}

LocalOperator phase_operator(const std::string& mode, double phi, int cutoff) {
  const auto d = static_cast<std::size_t>(cutoff + 1);
  LocalOperator op{{mode}, d, std::vector<Complex>(d * d)};
  for (std::size_t k = 0; k < d; ++k) op.matrix[k * d + k] = std::polar(1.0, phi * double(k));
  return op;
}

LocalOperator generic_tpam_operator(const std::string& mode, const std::string& medium, const GenericTpam& t,
                                    int cutoff) {
  const auto d = static_cast<std::size_t>(cutoff + 1);
  const std::size_t n = 2 * d;
  LocalOperator op{{mode, medium}, n, std::vector<Complex>(n * n)};
  const Complex phase = std::polar(1.0, t.common_phase);
  auto idx = [](std::size_t photons, std::size_t level) { return photons * 2 + level; };
  for (std::size_t k = 0; k < std::min<std::size_t>(2, d); ++k) {
    op.matrix[idx(k, 0) * n + idx(k, 0)] = phase;
    op.matrix[idx(k, 1) * n + idx(k, 1)] = phase;
  }
  if (d > 2) {
    op.matrix[idx(0, 1) * n + idx(2, 0)] = phase * t.alpha;
    op.matrix[idx(2, 0) * n + idx(2, 0)] = phase * t.beta;
  }
  return op;
}

LocalOperator jf_operator(const std::string& omega, const std::string& e1, const std::string& e2, const JfParams& p,
                          int cutoff) {
  const auto d = static_cast<std::size_t>(cutoff + 1);
  const std::size_t n = d * d * d;
  auto idx = [d](std::size_t w, std::size_t a, std::size_t b) { return (w * d + a) * d + b; };
  std::vector<Complex> h(n * n);
  auto couple = [&](std::size_t from, std::size_t to, Complex g) {
    h[to * n + from] += g;
    h[from * n + to] += std::conj(g);
  };
  const Complex pump = std::polar(1.0, p.pump_phase);
  couple(idx(1, 0, 0), idx(0, 1, 1), 1.0);
  if (d > 2) {
    couple(idx(2, 0, 0), idx(1, 1, 1), std::sqrt(0.5) * pump);
    couple(idx(1, 1, 1), idx(0, 2, 2), pump);
  }
  const double t = p.length_multiple * std::numbers::pi;
  for (auto& v : h) v *= Complex{0.0, -t};
  return {{omega, e1, e2}, n, expm(h, n)};
}

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix source_pair(double p, int cutoff) {
  const int d = cutoff + 1;
  return dense::diagonal_mixture({{"A", d}, {"B", d}}, {{{1, 1}, p * p},
                                                         {{1, 0}, p * (1.0 - p)},
                                                         {{0, 1}, (1.0 - p) * p},
                                                         {{0, 0}, (1.0 - p) * (1.0 - p)}});
}

struct ArmNames {
  std::string path, partner, e1, e2;
};

bool odd_integer(const JfParams& p) {
  return p.integer_length() && std::llround(p.length_multiple) % 2 != 0;
}

/// Kraus operators <s| U |g> on the photon mode for a medium that starts in
/// its ground state and is discarded afterwards.
std::vector<LocalOperator> medium_kraus(const std::string& mode, const GenericTpam& t, int cutoff) {
  const LocalOperator u = generic_tpam_operator(mode, "medium", t, cutoff);
  const auto d = static_cast<std::size_t>(cutoff + 1);
  std::vector<LocalOperator> out;
  for (std::size_t level = 0; level < 2; ++level) {
    LocalOperator k{{mode}, d, std::vector<Complex>(d * d)};
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) k.matrix[r * d + c] = u(r * 2 + level, c * 2);
    }
    out.push_back(std::move(k));
  }
  return out;
}

/// Appends the arm's ancillas and runs BS1, absorber, BS2. A generic medium is
/// folded into a Kraus channel since it is never measured.
void run_arm(DensityMatrix& rho, const ArmNames& arm, const SchemeConfig& cfg, Execution exec) {
  const int c = cfg.cutoff;
  rho = dense::append_ground(rho, {arm.partner, c + 1});
  const bool generic = std::holds_alternative<GenericTpam>(cfg.tpam);
  if (!generic) {
    rho = dense::append_ground(rho, {arm.e1, c + 1});
    rho = dense::append_ground(rho, {arm.e2, c + 1});
  }
  dense::apply_local(rho, beam_splitter_operator(arm.path, arm.partner, cfg.bs1.theta, cfg.bs1.phi, c), exec);
  if (generic) {
    dense::apply_channel(rho, medium_kraus(arm.path, std::get<GenericTpam>(cfg.tpam), c), exec);
  } else {
    const auto& jf = std::get<JfTpam>(cfg.tpam);
    dense::apply_local(rho, jf_operator(arm.path, arm.e1, arm.e2, jf.params, c), exec);
    if (jf.params.compensate_odd_phase && odd_integer(jf.params)) {
      dense::apply_local(rho, phase_operator(arm.path, kPi, c), exec);
    }
  }
  dense::apply_local(rho, beam_splitter_operator(arm.path, arm.partner, cfg.bs2.theta, cfg.bs2.phi, c), exec);
}

DensityMatrix project_all(DensityMatrix rho, const std::vector<std::pair<std::string, int>>& require) {
  for (const auto& [mode, n] : require) rho = dense::project(rho, mode, n);
  return rho;
}

void finish(OracleResult& r, const DensityMatrix& out_unnormalized) {
  r.p_success = out_unnormalized.trace();
  r.fidelity = r.p_success > 0.0 ? out_unnormalized(1, 1).real() / r.p_success : 0.0;
}

std::vector<std::pair<std::string, int>> arm_conditions(const ArmNames& arm, const SchemeConfig& cfg,
                                                       std::vector<std::string>& detectors) {
  std::vector<std::pair<std::string, int>> req;
  detectors.push_back(arm.path);
  if (const auto* jf = std::get_if<JfTpam>(&cfg.tpam)) {
    detectors.push_back(arm.e1);
    detectors.push_back(arm.e2);
    req.emplace_back(arm.e1, jf->condition.first);
    req.emplace_back(arm.e2, jf->condition.second);
  }
  return req;
}

OracleResult dense_main(const SchemeConfig& cfg, Execution exec) {
  const int c = cfg.cutoff;
  DensityMatrix rho = source_pair(cfg.source.p, c);
  dense::apply_local(rho, beam_splitter_operator("A", "B", cfg.bs0.theta, cfg.bs0.phi, c), exec);
  rho = dense::trace_out(rho, "A");
  const ArmNames arm{"B", "C", "E1", "E2"};
  run_arm(rho, arm, cfg, exec);

  OracleResult r;
  auto req = arm_conditions(arm, cfg, r.detector_modes);
  r.outcomes = dense::joint_distribution(rho, r.detector_modes);
  req.emplace_back("B", 1);
  finish(r, dense::keep_only(project_all(rho, req), "C"));
  return r;
}

OracleResult dense_doubled(const SchemeConfig& cfg, Execution exec) {
  if (!std::holds_alternative<GenericTpam>(cfg.tpam)) {
    throw UnsupportedInputError("dense doubled scheme supports the generic absorber only");
  }
  const int c = cfg.cutoff;
  DensityMatrix rho = source_pair(cfg.source.p, c);
  dense::apply_local(rho, beam_splitter_operator("A", "B", cfg.bs0.theta, cfg.bs0.phi, c), exec);
  const ArmNames upper{"A", "CA", "", ""};
  const ArmNames lower{"B", "CB", "", ""};
  run_arm(rho, upper, cfg, exec);
  run_arm(rho, lower, cfg, exec);

  OracleResult r;
  r.detector_modes = {"A", "B"};
  r.outcomes = dense::joint_distribution(rho, r.detector_modes);

  auto herald = [&](const std::string& click, const std::string& other, const std::string& output) {
    const DensityMatrix clicked = dense::project(rho, click, 1);
    DensityMatrix acc = dense::keep_only(dense::project(clicked, other, 0), output);
    for (int n = 2; n <= c; ++n) acc = dense::add(acc, dense::keep_only(dense::project(clicked, other, n), output));
    return acc;
  };
  const DensityMatrix up = herald("A", "B", "CA");
  const DensityMatrix down = herald("B", "A", "CB");
  r.p_success = up.trace() + down.trace();
  r.fidelity = r.p_success > 0.0 ? (up(1, 1).real() + down(1, 1).real()) / r.p_success : 0.0;
  return r;
}

DensityMatrix jf_prefix(double p, double length, int cutoff, Execution exec) {
  DensityMatrix rho = source_pair(p, cutoff);
  dense::apply_local(rho, beam_splitter_operator("A", "B", kPi / 4.0, 0.0, cutoff), exec);
  rho = dense::trace_out(rho, "A");
  rho = dense::append_ground(rho, {"E1", cutoff + 1});
  rho = dense::append_ground(rho, {"E2", cutoff + 1});
  dense::apply_local(rho, jf_operator("B", "E1", "E2", JfParams{length, 0.0, true}, cutoff), exec);
  return rho;
}

OracleResult dense_appendix_a(const SchemeConfig& cfg, Execution exec) {
  const DensityMatrix rho = jf_prefix(cfg.source.p, cfg.appendix_length.value_or(2.0), cfg.cutoff, exec);
  OracleResult r;
  r.detector_modes = {"E1", "E2"};
  r.outcomes = dense::joint_distribution(rho, r.detector_modes);
  finish(r, project_all(rho, {{"E1", 1}, {"E2", 1}}));
  return r;
}

OracleResult dense_appendix_b(const SchemeConfig& cfg, Execution exec) {
  DensityMatrix rho = jf_prefix(cfg.source.p, cfg.appendix_length.value_or(1.5), cfg.cutoff, exec);
  rho = dense::append_ground(rho, {"F", cfg.cutoff + 1});
  dense::apply_local(rho, beam_splitter_operator("B", "F", kPi / 4.0, 0.0, cfg.cutoff), exec);
  OracleResult r;
  r.detector_modes = {"E1", "E2", "B"};
  r.outcomes = dense::joint_distribution(rho, r.detector_modes);
  finish(r, project_all(rho, {{"E1", 0}, {"E2", 0}, {"B", 1}}));
  return r;
}

}  // namespace

OracleResult run_dense(const SchemeConfig& cfg, Execution exec) {
  if (!(cfg.source.p >= 0.0 && cfg.source.p <= 1.0)) throw ConfigError("source efficiency p must lie in [0, 1]");
  switch (cfg.variant) {
    case SchemeVariant::main: return dense_main(cfg, exec);
    case SchemeVariant::doubled: return dense_doubled(cfg, exec);
    case SchemeVariant::appendix_a: return dense_appendix_a(cfg, exec);
    case SchemeVariant::appendix_b: return dense_appendix_b(cfg, exec);
  }
  throw ConfigError("unknown scheme variant");
}

}  // namespace herald::oracle
