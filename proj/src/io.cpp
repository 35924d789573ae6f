#include "herald/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <numbers>
#include <ostream>
#include <set>

#include "herald/errors.hpp"

namespace herald::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw ConfigError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

bool ends_with(std::string_view s, std::string_view tail) {
  return s.size() >= tail.size() && s.substr(s.size() - tail.size()) == tail;
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

double angle_value(const json& v, std::string_view what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>());
  throw ConfigError(std::string(what) + " must be a number (radians) or a string like \"30deg\"");
}

double real_value(const json& v, std::string_view what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>(), what);
  throw ConfigError(std::string(what) + " must be a number");
}

Complex complex_value(const json& v, std::string_view what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) return parse_complex_literal(v.get<std::string>());
  throw ConfigError(std::string(what) + " must be a number or a complex literal string");
}

json splitter_json(const SplitterAngles& s) { return {{"theta", s.theta}, {"phi", s.phi}}; }

SplitterAngles splitter_from(const json& j, std::string_view what) {
  reject_unknown_keys(j, {"theta", "phi"}, what);
  SplitterAngles s;
  if (j.contains("theta")) s.theta = angle_value(j["theta"], "theta");
  if (j.contains("phi")) s.phi = angle_value(j["phi"], "phi");
  return s;
}

bool is_appendix(SchemeVariant v) { return v == SchemeVariant::appendix_a || v == SchemeVariant::appendix_b; }

double resolved_length(const SchemeConfig& cfg) {
  return cfg.appendix_length.value_or(cfg.variant == SchemeVariant::appendix_a ? 2.0 : 1.5);
}

template <typename T, typename Parse>
std::vector<T> axis_values(const json& j, std::string_view what, Parse parse) {
  std::vector<T> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(parse(v, what));
    return out;
  }
  if (j.is_object()) {
    reject_unknown_keys(j, {"start", "stop", "count"}, what);
    if (!j.contains("start") || !j.contains("stop") || !j.contains("count")) {
      throw ConfigError(std::string(what) + " range needs start, stop and count");
    }
    if (!j["count"].is_number_integer() || j["count"].get<long long>() < 0) {
      throw ConfigError(std::string(what) + " count must be a non-negative integer");
    }
    const auto count = j["count"].get<long long>();
    const T start = parse(j["start"], what);
    const T stop = parse(j["stop"], what);
    for (long long i = 0; i < count; ++i) {
      const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
      out.push_back(start + (stop - start) * t);
    }
    return out;
  }
  return {parse(j, what)};
}

}  // namespace

double parse_angle(std::string_view text) {
  text = trim(text);
  if (ends_with(text, "deg")) return parse_number(text.substr(0, text.size() - 3), "angle") * std::numbers::pi / 180.0;
  if (ends_with(text, "rad")) return parse_number(text.substr(0, text.size() - 3), "angle");
  return parse_number(text, "angle");
}

int default_cutoff() {
  const char* env = std::getenv("FOCK_CUTOFF");
  if (env == nullptr || *env == '\0') return kDefaultCutoff;
  const std::string_view s = trim(env);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) {
    throw ConfigError("FOCK_CUTOFF must be a positive integer, got '" + std::string(s) + "'");
  }
  return v;
}

json config_to_json(const SchemeConfig& cfg) {
  json j;
  j["scheme"] = std::string(to_string(cfg.variant));
  j["p"] = cfg.source.p;
  j["cutoff"] = cfg.cutoff;
  if (is_appendix(cfg.variant)) {
    j["appendix_length"] = resolved_length(cfg);
  } else {
    j["bs0"] = splitter_json(cfg.bs0);
    j["bs1"] = splitter_json(cfg.bs1);
    j["bs2"] = splitter_json(cfg.bs2);
    j["tpam"] = format_tpam_spec(cfg.tpam);
  }
  return j;
}

SchemeConfig config_from_json(const json& j) {
  reject_unknown_keys(j, {"scheme", "p", "cutoff", "appendix_length", "bs0", "bs1", "bs2", "tpam"}, "config");
  SchemeConfig cfg;
  cfg.cutoff = default_cutoff();
  if (j.contains("scheme")) cfg.variant = parse_scheme_variant(j["scheme"].get<std::string>());
  if (j.contains("p")) cfg.source.p = real_value(j["p"], "p");
  if (j.contains("cutoff")) {
    if (!j["cutoff"].is_number_integer() || j["cutoff"].get<int>() < 1) throw ConfigError("cutoff must be a positive integer");
    cfg.cutoff = j["cutoff"].get<int>();
  }
  if (j.contains("appendix_length")) cfg.appendix_length = real_value(j["appendix_length"], "appendix_length");
  if (j.contains("bs0")) cfg.bs0 = splitter_from(j["bs0"], "bs0");
  if (j.contains("bs1")) cfg.bs1 = splitter_from(j["bs1"], "bs1");
  if (j.contains("bs2")) cfg.bs2 = splitter_from(j["bs2"], "bs2");
  if (j.contains("tpam")) cfg.tpam = parse_tpam_spec(j["tpam"].get<std::string>());
  return cfg;
}

json result_to_json(const SchemeConfig& cfg, const SchemeResult& r) {
  json j;
  j["p_success"] = r.p_success;
  const double p2 = cfg.source.p * cfg.source.p;
  j["ps_over_p2"] = p2 > 0.0 ? json(r.p_success / p2) : json(nullptr);
  j["fidelity"] = r.fidelity;
  if (!is_appendix(cfg.variant)) {
    const ConstraintCase c = classify_constraint(cfg.bs1.phi, cfg.bs2.phi, cfg.bs1.theta, cfg.bs2.theta);
    j["constraint"] = {{"kind", std::string(to_string(c.kind))}, {"nu", c.nu}};
  }
  json log = json::array();
  for (const auto& s : r.branch_log) {
    log.push_back({{"sector", s.sector},
                   {"weight", s.weight},
                   {"conditional_probability", s.conditional_probability},
                   {"contribution", s.contribution}});
  }
  j["branch_log"] = log;
  j["detector_modes"] = r.detector_modes;
  json outcomes = json::array();
  for (const auto& [counts, prob] : r.outcomes) outcomes.push_back({{"counts", counts}, {"probability", prob}});
  j["outcomes"] = outcomes;
  j["output_number_distribution"] =
      r.conditional_state.empty() ? json::array() : json(number_distribution(r.conditional_state, kOutputMode));
  j["metadata"] = r.metadata;
  return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& canonical_config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config.dump())));
  return buf;
}

std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_manifest(std::string kind, const std::vector<std::string>& command, const json& config, json result) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["kind"] = std::move(kind);
  m["tool"] = "herald";
  m["tool_version"] = std::string(kToolVersion);
  m["command"] = command;
  m["config"] = config;
  m["config_hash"] = config_hash(config);
  m["timestamp"] = timestamp_now();
  m["result"] = std::move(result);
  return m;
}

SweepSpec sweep_from_json(const json& j) {
  reject_unknown_keys(j, {"scheme", "constraint", "theta0", "theta1", "beta", "p", "cutoff"}, "sweep spec");
  SweepSpec spec;
  spec.cutoff = default_cutoff();
  spec.theta0 = {std::numbers::pi / 4.0};
  spec.beta = {Complex{0.0, 0.0}};
  spec.p = {1.0};
  if (j.contains("scheme")) spec.scheme = parse_scheme_variant(j["scheme"].get<std::string>());
  if (j.contains("constraint")) spec.constraint = parse_constraint_kind(j["constraint"].get<std::string>());
  if (!j.contains("theta1")) throw ConfigError("sweep spec needs a theta1 axis");
  spec.theta1 = axis_values<double>(j["theta1"], "theta1", angle_value);
  if (j.contains("theta0")) spec.theta0 = axis_values<double>(j["theta0"], "theta0", angle_value);
  if (j.contains("beta")) spec.beta = axis_values<Complex>(j["beta"], "beta", complex_value);
  if (j.contains("p")) spec.p = axis_values<double>(j["p"], "p", real_value);
  if (j.contains("cutoff")) {
    if (!j["cutoff"].is_number_integer() || j["cutoff"].get<int>() < 1) throw ConfigError("cutoff must be a positive integer");
    spec.cutoff = j["cutoff"].get<int>();
  }
  validate(spec);
  return spec;
}

json sweep_to_json(const SweepSpec& spec) {
  json betas = json::array();
  for (const auto& b : spec.beta) betas.push_back(format_complex_literal(b));
  return {{"scheme", std::string(to_string(spec.scheme))},
          {"constraint", std::string(to_string(spec.constraint))},
          {"theta0", spec.theta0},
          {"theta1", spec.theta1},
          {"beta", betas},
          {"p", spec.p},
          {"cutoff", spec.cutoff}};
}

namespace {

const std::vector<std::string> kSweepColumns{"theta0_rad", "theta1_rad", "theta2_rad", "phi1_rad", "phi2_rad", "beta_re",
                                             "beta_im",    "p",          "p_success",  "ps_over_p2", "fidelity"};

std::vector<double> row_values(const SweepRow& r) {
  return {r.theta0, r.theta1, r.theta2, r.phi1, r.phi2, r.beta.real(), r.beta.imag(), r.p, r.p_success, r.ps_over_p2, r.fidelity};
}

}  // namespace

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (std::size_t i = 0; i < kSweepColumns.size(); ++i) out << (i ? "," : "") << csv_field(kSweepColumns[i]);
  out << "\r\n";
  for (const auto& r : rows) {
    const auto values = row_values(r);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << fmt_g(values[i]);
    out << "\r\n";
  }
}

void write_sweep_points(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "#";
  for (const auto& c : kSweepColumns) out << ' ' << c;
  out << '\n';
  for (const auto& r : rows) {
    const auto values = row_values(r);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << fmt_g(values[i]);
    out << '\n';
  }
}

json checks_to_json(const std::vector<verify::CheckResult>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"id", c.id},
                   {"name", c.name},
                   {"pass", c.pass},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  return out;
}

}  // namespace herald::io
