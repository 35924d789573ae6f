#include "herald/tpam.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "herald/elements.hpp"
#include "herald/errors.hpp"

namespace herald {

namespace {

const double kSqrt3Over2 = std::sqrt(1.5);

std::size_t resolve_medium(const ModeRegister& reg, std::string_view medium) {
  if (!medium.empty()) return reg.medium_index(medium);
  if (reg.medium_count() != 1) {
    throw LabelError("absorber needs an explicit medium label when the register has " +
                     std::to_string(reg.medium_count()) + " media");
  }
  return 0;
}

}  // namespace

// Generic ---------------------------------------------------------------------

bool GenericTpam::is_unitary(double tolerance) const {
  return std::abs(std::norm(alpha) + std::norm(beta) - 1.0) < tolerance;
}

GenericTpam GenericTpam::unitary_from_beta(Complex beta) {
  const double b2 = std::norm(beta);
  if (b2 > 1.0 + 1e-12) throw ConfigError("|beta| must not exceed 1");
  return {Complex{std::sqrt(std::max(0.0, 1.0 - b2)), 0.0}, beta, 0.0};
}

PureState apply_generic_tpam(const PureState& state, std::string_view mode, const GenericTpam& t,
                             std::string_view medium) {
  if (std::norm(t.alpha) + std::norm(t.beta) > 1.0 + 1e-12) {
    throw ConfigError("absorber coefficients violate |alpha|^2 + |beta|^2 <= 1");
  }
  const auto& reg = state.reg();
  const std::size_t m = reg.mode_index(mode);
  const std::size_t med = resolve_medium(reg, medium);
  if (reg.media()[med].dim < 2) throw ConfigError("absorber medium needs at least two levels");
  const Complex common = std::polar(1.0, t.common_phase);

  PureState out(reg);
  for (const auto& [ket, amp] : state.terms()) {
    const int n = ket.occupations[m];
    if (n > 2) {
      throw UnsupportedInputError("two-photon absorber is undefined for " + std::to_string(n) +
                                  " photons in mode '" + std::string(mode) + "'");
    }
    if (n < 2) {
      out.add(ket, amp * common);
      continue;
    }
    if (ket.medium[med] != kGround) {
      throw UnsupportedInputError("two photons reach an absorber medium that is not in its ground state");
    }
    FockKet absorbed = ket;
    absorbed.occupations[m] = 0;
    absorbed.medium[med] = kExcited;
    out.add(absorbed, amp * common * t.alpha);
    out.add(ket, amp * common * t.beta);
  }
  out.prune();
  return out;
}

Ensemble apply_generic_tpam(const Ensemble& ens, std::string_view mode, const GenericTpam& t,
                            std::string_view medium) {
  return ens.transformed([&](const PureState& s) { return apply_generic_tpam(s, mode, t, medium); });
}

// Four-wave mixing ----------------------------------------------------------------

double JfParams::phase_angle() const { return length_multiple * std::numbers::pi * kSqrt3Over2; }

bool JfParams::integer_length(double tolerance) const {
  return std::abs(length_multiple - std::round(length_multiple)) < tolerance;
}

JfCoefficients jf_coefficients(double phase_angle, double pump_phase) {
  const Complex pump_ratio = std::polar(1.0, 2.0 * pump_phase);  // Omega2 / Omega2*
  const Complex pump_root = std::polar(1.0, pump_phase);         // sqrt(Omega2 / Omega2*)
  const double half = std::sin(phase_angle / 2.0);
  JfCoefficients c;
  c.alpha0 = -(2.0 * std::numbers::sqrt2 / 3.0) * pump_ratio * half * half;
  c.alpha1 = Complex{0.0, -1.0 / std::numbers::sqrt3} * pump_root * std::sin(phase_angle);
  c.beta = (2.0 + std::cos(phase_angle)) / 3.0;
  return c;
}

JfCoefficients jf_coefficients(const JfParams& p) { return jf_coefficients(p.phase_angle(), p.pump_phase); }

PureState jf_evolve(const PureState& state, const JfModes& modes, const JfParams& p) {
  if (!(p.length_multiple > 0.0)) throw ConfigError("medium length multiple must be positive");
  const auto& reg = state.reg();
  const std::size_t w = reg.mode_index(modes.omega);
  const std::size_t e1 = reg.mode_index(modes.e1);
  const std::size_t e2 = reg.mode_index(modes.e2);
  if (reg.cutoff() < 2) throw TruncationError("four-wave-mixing medium needs cutoff >= 2");

  const double rabi = p.length_multiple * std::numbers::pi;  // kappa |Omega2| c t
  const Complex one_stay{std::cos(rabi), 0.0};
  const Complex one_convert{0.0, -std::sin(rabi)};
  const JfCoefficients c = jf_coefficients(p);

  PureState out(reg);
  for (const auto& [ket, amp] : state.terms()) {
    if (ket.occupations[e1] != 0 || ket.occupations[e2] != 0) {
      throw UnsupportedInputError("generated modes must enter the four-wave-mixing medium empty");
    }
    const int n = ket.occupations[w];
    auto with = [&](int omega, int gen) {
      FockKet k = ket;
      k.occupations[w] = omega;
      k.occupations[e1] = gen;
      k.occupations[e2] = gen;
      return k;
    };
    switch (n) {
      case 0:
        out.add(ket, amp);
        break;
      case 1:
        out.add(ket, amp * one_stay);
        out.add(with(0, 1), amp * one_convert);
        break;
      case 2:
        out.add(with(0, 2), amp * c.alpha0);
        out.add(with(1, 1), amp * c.alpha1);
        out.add(ket, amp * c.beta);
        break;
      default:
        throw UnsupportedInputError("four-wave-mixing medium is modelled for at most two photons, got " +
                                    std::to_string(n));
    }
  }
  out.prune();
  return out;
}

JfChannel jf_conditioned_channel(const JfParams& p, std::pair<int, int> condition) {
  const auto [c1, c2] = condition;
  if (c1 < 0 || c2 < 0 || c1 > 2 || c2 > 2) throw ConfigError("generated-mode condition counts must lie in [0, 2]");
  const JfModes modes{"W", "E1", "E2"};
  const ModeRegister reg({modes.omega, modes.e1, modes.e2}, 2);
  const bool compensate = p.compensate_odd_phase && p.integer_length() &&
                          (static_cast<long long>(std::llround(p.length_multiple)) % 2 != 0);

  JfChannel ch;
  for (int n = 0; n <= 2; ++n) {
    PureState out = jf_evolve(PureState::basis(reg, FockKet{{n, 0, 0}, {}}), modes, p);
    if (compensate) out = apply_phase_shifter(out, {std::numbers::pi, modes.omega});
    const auto first = project_number(out, modes.e1, c1);
    const auto second = project_number(first.state, modes.e2, c2);
    for (const auto& [ket, amp] : second.state.terms()) {
      ch.kraus[static_cast<std::size_t>(ket.occupations[0])][static_cast<std::size_t>(n)] += amp;
    }
    ch.survival[static_cast<std::size_t>(n)] = second.state.norm2();
  }
  return ch;
}

PureState apply_jf_channel(const PureState& state, std::string_view mode, const JfChannel& channel) {
  const std::size_t m = state.reg().mode_index(mode);
  PureState out(state.reg());
  for (const auto& [ket, amp] : state.terms()) {
    const int n = ket.occupations[m];
    if (n > 2) throw UnsupportedInputError("four-wave-mixing channel is modelled for at most two photons");
    for (int k = 0; k <= 2; ++k) {
      const Complex a = channel.kraus[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)];
      if (a == Complex{}) continue;
      FockKet next = ket;
      next.occupations[m] = k;
      out.add(next, amp * a);
    }
  }
  out.prune();
  return out;
}

// Spec strings ------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return v;
}

Complex parse_complex(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s.empty() || (s.back() != 'i' && s.back() != 'j')) return {parse_real(s, what), 0.0};
  s.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view t) {
    t = trim(t);
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, what);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(s)};
  return {parse_real(s.substr(0, split), what), imag_part(s.substr(split))};
}

std::map<std::string, std::string, std::less<>> parse_pairs(std::string_view body) {
  std::map<std::string, std::string, std::less<>> out;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    const auto item = trim(body.substr(start, end - start));
    if (item.empty()) return;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value in absorber spec, got '" + std::string(item) + "'");
    auto key = std::string(trim(item.substr(0, eq)));
    if (!out.emplace(key, std::string(trim(item.substr(eq + 1)))).second) {
      throw ConfigError("duplicate key '" + key + "' in absorber spec");
    }
  };
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (body[i] == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(body.size());
  return out;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  std::string im = format_real(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_real(z.real()) + im + "i";
}

}  // namespace

TpamSpec parse_tpam_spec(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const auto kind = trim(text.substr(0, colon));
  auto pairs = parse_pairs(colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));
  auto take = [&](std::string_view key) -> std::optional<std::string> {
    auto it = pairs.find(key);
    if (it == pairs.end()) return std::nullopt;
    std::string v = it->second;
    pairs.erase(it);
    return v;
  };

  TpamSpec spec;
  if (kind == "generic") {
    GenericTpam t;
    const auto alpha = take("alpha");
    const auto beta = take("beta");
    if (!beta) throw ConfigError("generic absorber spec needs beta=");
    t.beta = parse_complex(*beta, "beta");
    t.alpha = alpha ? parse_complex(*alpha, "alpha") : GenericTpam::unitary_from_beta(t.beta).alpha;
    if (auto ph = take("phase")) t.common_phase = parse_real(*ph, "phase");
    if (std::norm(t.alpha) + std::norm(t.beta) > 1.0 + 1e-12) {
      throw ConfigError("absorber coefficients violate |alpha|^2 + |beta|^2 <= 1");
    }
    spec = t;
  } else if (kind == "jf") {
    JfTpam t;
    if (auto m = take("M")) t.params.length_multiple = parse_real(*m, "M");
    if (!(t.params.length_multiple > 0.0)) throw ConfigError("jf length multiple M must be positive");
    if (auto cond = take("condition")) {
      std::string_view c = trim(*cond);
      if (c.size() < 2 || c.front() != '(' || c.back() != ')') throw ConfigError("condition must look like (i,j)");
      c = c.substr(1, c.size() - 2);
      const auto comma = c.find(',');
      if (comma == std::string_view::npos) throw ConfigError("condition must look like (i,j)");
      const double a = parse_real(c.substr(0, comma), "condition");
      const double b = parse_real(c.substr(comma + 1), "condition");
      if (a != std::floor(a) || b != std::floor(b) || a < 0 || b < 0 || a > 2 || b > 2) {
        throw ConfigError("condition counts must be integers in [0, 2]");
      }
      t.condition = {static_cast<int>(a), static_cast<int>(b)};
    }
    if (auto ph = take("pump_phase")) t.params.pump_phase = parse_real(*ph, "pump_phase");
    if (auto comp = take("compensate")) {
      if (*comp == "on" || *comp == "true" || *comp == "1") {
        t.params.compensate_odd_phase = true;
      } else if (*comp == "off" || *comp == "false" || *comp == "0") {
        t.params.compensate_odd_phase = false;
      } else {
        throw ConfigError("compensate must be on or off");
      }
    }
    spec = t;
  } else {
    throw ConfigError("unknown absorber kind '" + std::string(kind) + "' (expected generic or jf)");
  }
  if (!pairs.empty()) throw ConfigError("unknown absorber spec key '" + pairs.begin()->first + "'");
  return spec;
}

std::string format_tpam_spec(const TpamSpec& spec) {
  if (const auto* g = std::get_if<GenericTpam>(&spec)) {
    std::string s = "generic:alpha=" + format_complex(g->alpha) + ",beta=" + format_complex(g->beta);
    if (g->common_phase != 0.0) s += ",phase=" + format_real(g->common_phase);
    return s;
  }
  const auto& j = std::get<JfTpam>(spec);
  std::string s = "jf:M=" + format_real(j.params.length_multiple) + ",condition=(" +
                  std::to_string(j.condition.first) + "," + std::to_string(j.condition.second) + ")";
  if (j.params.pump_phase != 0.0) s += ",pump_phase=" + format_real(j.params.pump_phase);
  if (!j.params.compensate_odd_phase) s += ",compensate=off";
  return s;
}

Complex parse_complex_literal(std::string_view text) { return parse_complex(trim(text), "value"); }

std::string format_complex_literal(Complex z) { return format_complex(z); }

}  // namespace herald
