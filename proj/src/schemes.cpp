#include "herald/schemes.hpp"

#include <cmath>
#include <functional>

#include "herald/elements.hpp"
#include "herald/errors.hpp"

namespace herald {

namespace {

/// One disjoint herald event: exact counts on some detectors, "anything but
/// one photon" on others, and the mode that carries the output.
struct HeraldEvent {
  std::vector<std::pair<std::string, int>> require;
  std::vector<std::string> not_one;
  std::string output;
};

struct Sector {
  std::string label;
  double weight = 0.0;
  PureState input;
};

using Circuit = std::function<Ensemble(const PureState&)>;

void check_source(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("source efficiency p must lie in [0, 1]");
}

Ensemble apply_herald(const Ensemble& final_state, const HeraldEvent& event) {
  Ensemble e = final_state;
  for (const auto& [mode, n] : event.require) e = project_number(e, mode, n);
  for (const auto& mode : event.not_one) {
    Ensemble rest(e.reg().without_mode(mode));
    for (int n = 0; n <= e.reg().cutoff(); ++n) {
      if (n == 1) continue;
      const Ensemble projected = project_number(e, mode, n);
      for (const auto& b : projected.branches()) rest.add(b.weight, b.state);
    }
    e = std::move(rest);
  }
  return relabel(reduce_to(e, event.output), event.output, std::string(kOutputMode));
}

std::string number_label(std::string_view mode, const PureState& s) {
  if (s.terms().size() == 1) return "n_" + std::string(mode) + "=" + std::to_string(s.terms().begin()->first.occupations[0]);
  return "mixed";
}

std::vector<Sector> bs0_sectors(double p, double theta0, double phi0, int cutoff) {
  std::vector<Sector> sectors;
  const Ensemble reduced = reduce_through_bs0(p, theta0, cutoff, phi0);
  for (const auto& b : reduced.branches()) {
    sectors.push_back({number_label("B", b.state), b.weight, b.state});
  }
  return sectors;
}

SchemeResult assemble(const std::vector<Sector>& sectors, const Circuit& circuit, std::vector<std::string> detectors,
                      const std::vector<HeraldEvent>& events) {
  SchemeResult r;
  r.detector_modes = std::move(detectors);
  r.conditional_state = Ensemble(ModeRegister({std::string(kOutputMode)}, sectors.empty() ? kDefaultCutoff
                                                                                     : sectors.front().input.reg().cutoff()));
  for (const auto& sector : sectors) {
    const Ensemble final_state = circuit(sector.input);
    for (const auto& [key, prob] : joint_distribution(final_state, r.detector_modes)) {
      r.outcomes[key] += sector.weight * prob;
    }
    double conditional = 0.0;
    for (const auto& event : events) {
      const Ensemble heralded = apply_herald(final_state, event);
      conditional += heralded.total_weight();
      for (const auto& b : heralded.branches()) r.conditional_state.add(sector.weight * b.weight, b.state);
    }
    r.branch_log.push_back({sector.label, sector.weight, conditional, sector.weight * conditional});
    r.p_success += sector.weight * conditional;
  }
  if (r.p_success > 0.0 && !r.conditional_state.empty()) {
    r.conditional_state = r.conditional_state.normalized().coalesced();
    r.fidelity = fidelity_to_single_photon(r.conditional_state);
  } else {
    r.p_success = 0.0;
    r.conditional_state = Ensemble(r.conditional_state.reg());
  }
  return r;
}

/// Names of the subsystems making up one interferometer arm.
struct Arm {
  std::string path;     // carries the absorber, read by D1
  std::string partner;  // leaves as the output
  std::string medium;
  std::string e1;
  std::string e2;
};

/// Adds the arm's ancilla modes (partner, plus medium or generated modes) in
/// their ground state.
PureState attach_arm(const PureState& state, const Arm& arm, const TpamSpec& tpam) {
  const int cutoff = state.reg().cutoff();
  PureState s = tensor(state, PureState::vacuum(ModeRegister({arm.partner}, cutoff)));
  if (std::holds_alternative<GenericTpam>(tpam)) {
    s = tensor(s, PureState::vacuum(ModeRegister({}, cutoff, {MediumSpec{arm.medium, 2}})));
  } else {
    s = tensor(s, PureState::vacuum(ModeRegister({arm.e1, arm.e2}, cutoff)));
  }
  return s;
}

PureState apply_absorber(const PureState& s, const Arm& arm, const TpamSpec& tpam) {
  if (const auto* g = std::get_if<GenericTpam>(&tpam)) return apply_generic_tpam(s, arm.path, *g, arm.medium);
  const auto& jf = std::get<JfTpam>(tpam);
  PureState out = jf_evolve(s, JfModes{arm.path, arm.e1, arm.e2}, jf.params);
  const bool odd = jf.params.integer_length() && std::llround(jf.params.length_multiple) % 2 != 0;
  if (jf.params.compensate_odd_phase && odd) out = apply_phase_shifter(out, {std::numbers::pi, arm.path});
  return out;
}

PureState run_interferometer(const PureState& s, const Arm& arm, const SchemeConfig& cfg) {
  PureState out = apply_beam_splitter(s, {cfg.bs1.theta, cfg.bs1.phi, arm.path, arm.partner});
  out = apply_absorber(out, arm, cfg.tpam);
  return apply_beam_splitter(out, {cfg.bs2.theta, cfg.bs2.phi, arm.path, arm.partner});
}

void add_arm_detectors(const Arm& arm, const TpamSpec& tpam, std::vector<std::string>& detectors,
                       std::vector<std::pair<std::string, int>>& conditions) {
  detectors.push_back(arm.path);
  if (const auto* jf = std::get_if<JfTpam>(&tpam)) {
    detectors.push_back(arm.e1);
    detectors.push_back(arm.e2);
    conditions.emplace_back(arm.e1, jf->condition.first);
    conditions.emplace_back(arm.e2, jf->condition.second);
  }
}

const Arm kMainArm{"B", "C", "m", "E1", "E2"};

void check_appendix_a_length(double length) {
  if (!(length > 0.0) || std::abs(length - std::round(length)) > 1e-12) {
    throw ConfigError("appendix A needs a positive integer medium length (in units of L0)");
  }
}

void check_appendix_b_length(double length) {
  const double twice = 2.0 * length;
  if (!(length > 0.0) || std::abs(twice - std::round(twice)) > 1e-12 || std::llround(twice) % 2 == 0) {
    throw ConfigError("appendix B needs a half-odd medium length (2k-1)/2 in units of L0");
  }
}

}  // namespace

std::string_view to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::main: return "main";
    case SchemeVariant::doubled: return "doubled";
    case SchemeVariant::appendix_a: return "appendix-a";
    case SchemeVariant::appendix_b: return "appendix-b";
  }
  return "main";
}

SchemeVariant parse_scheme_variant(std::string_view name) {
  if (name == "main") return SchemeVariant::main;
  if (name == "doubled") return SchemeVariant::doubled;
  if (name == "appendix-a" || name == "appendix_a") return SchemeVariant::appendix_a;
  if (name == "appendix-b" || name == "appendix_b") return SchemeVariant::appendix_b;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

Ensemble input_mixture(double p, std::string label, int cutoff) {
  check_source(p);
  Ensemble e(ModeRegister({label}, cutoff));
  e.add(p, PureState::number(label, 1, cutoff));
  e.add(1.0 - p, PureState::number(label, 0, cutoff));
  return e;
}

namespace {

Ensemble product_input(double p, int cutoff) {
  const Ensemble a = input_mixture(p, "A", cutoff);
  const Ensemble b = input_mixture(p, "B", cutoff);
  Ensemble ab(concat(a.reg(), b.reg()));
  for (const auto& x : a.branches()) {
    for (const auto& y : b.branches()) ab.add(x.weight * y.weight, tensor(x.state, y.state));
  }
  return ab;
}

}  // namespace

Ensemble reduce_through_bs0(double p, double theta0, int cutoff, double phi0) {
  const Ensemble mixed = apply_beam_splitter(product_input(p, cutoff), {theta0, phi0, "A", "B"});
  return partial_trace_discard(mixed, "A").coalesced();
}

double single_photon_click_probability(const SchemeConfig& cfg) {
  const PureState one = attach_arm(PureState::number("B", 1, cfg.cutoff), kMainArm, cfg.tpam);
  return project_number(run_interferometer(one, kMainArm, cfg), "B", 1).probability;
}

SchemeResult run_main_scheme(const SchemeConfig& cfg) {
  check_source(cfg.source.p);
  std::vector<std::string> detectors;
  std::vector<std::pair<std::string, int>> conditions;
  add_arm_detectors(kMainArm, cfg.tpam, detectors, conditions);
  HeraldEvent click{conditions, {}, kMainArm.partner};
  click.require.emplace_back(kMainArm.path, 1);

  const Circuit circuit = [&](const PureState& in) {
    return Ensemble::pure(run_interferometer(attach_arm(in, kMainArm, cfg.tpam), kMainArm, cfg));
  };
  SchemeResult r = assemble(bs0_sectors(cfg.source.p, cfg.bs0.theta, cfg.bs0.phi, cfg.cutoff), circuit, detectors,
                            {click});
  r.metadata["single_photon_click_probability"] = single_photon_click_probability(cfg);
  return r;
}

SchemeResult run_doubled_scheme(const SchemeConfig& cfg) {
  check_source(cfg.source.p);
  const Arm upper{"A", "CA", "mA", "E1A", "E2A"};
  const Arm lower{"B", "CB", "mB", "E1B", "E2B"};
  std::vector<std::string> detectors;
  std::vector<std::pair<std::string, int>> conditions;
  add_arm_detectors(upper, cfg.tpam, detectors, conditions);
  add_arm_detectors(lower, cfg.tpam, detectors, conditions);

  HeraldEvent upper_click{conditions, {lower.path}, upper.partner};
  upper_click.require.emplace_back(upper.path, 1);
  HeraldEvent lower_click{conditions, {upper.path}, lower.partner};
  lower_click.require.emplace_back(lower.path, 1);

  std::vector<Sector> sectors;
  const Ensemble inputs = product_input(cfg.source.p, cfg.cutoff);
  for (const auto& b : inputs.branches()) {
    const auto& ket = b.state.terms().begin()->first;
    sectors.push_back({"|" + std::to_string(ket.occupations[0]) + "," + std::to_string(ket.occupations[1]) + ">",
                       b.weight, b.state});
  }
  const Circuit circuit = [&](const PureState& in) {
    PureState s = apply_beam_splitter(in, {cfg.bs0.theta, cfg.bs0.phi, "A", "B"});
    s = run_interferometer(attach_arm(s, upper, cfg.tpam), upper, cfg);
    s = run_interferometer(attach_arm(s, lower, cfg.tpam), lower, cfg);
    return Ensemble::pure(s);
  };
  SchemeResult r = assemble(sectors, circuit, detectors, {upper_click, lower_click});
  r.metadata["single_photon_click_probability"] = single_photon_click_probability(cfg);
  return r;
}

SchemeResult run_appendix_a(double p, double length_multiple, int cutoff) {
  check_source(p);
  check_appendix_a_length(length_multiple);
  const JfParams params{length_multiple, 0.0, true};
  const Circuit circuit = [&](const PureState& in) {
    const PureState s = tensor(in, PureState::vacuum(ModeRegister({"E1", "E2"}, cutoff)));
    return Ensemble::pure(jf_evolve(s, JfModes{"B", "E1", "E2"}, params));
  };
  const HeraldEvent event{{{"E1", 1}, {"E2", 1}}, {}, "B"};
  SchemeResult r = assemble(bs0_sectors(p, std::numbers::pi / 4.0, 0.0, cutoff), circuit, {"E1", "E2"}, {event});
  r.metadata["length_multiple"] = length_multiple;
  r.metadata["alpha1_abs2"] = std::norm(jf_coefficients(params).alpha1);
  return r;
}

SchemeResult run_appendix_b(double p, double length_multiple, int cutoff) {
  check_source(p);
  check_appendix_b_length(length_multiple);
  const JfParams params{length_multiple, 0.0, true};
  const Circuit circuit = [&](const PureState& in) {
    PureState s = tensor(in, PureState::vacuum(ModeRegister({"E1", "E2"}, cutoff)));
    s = jf_evolve(s, JfModes{"B", "E1", "E2"}, params);
    s = tensor(s, PureState::vacuum(ModeRegister({"F"}, cutoff)));
    return Ensemble::pure(apply_beam_splitter(s, balanced_splitter("B", "F")));
  };
  // D1 watches the B output of the final splitter; F carries the photon.
  const HeraldEvent click{{{"E1", 0}, {"E2", 0}, {"B", 1}}, {}, "F"};
  SchemeResult r = assemble(bs0_sectors(p, std::numbers::pi / 4.0, 0.0, cutoff), circuit, {"E1", "E2", "B"}, {click});

  // Alternative readings of "one photon in one of the outputs", for the record.
  double either = 0.0;
  double naive_sum = 0.0;
  const std::vector<std::string> all_modes{"E1", "E2", "B", "F"};
  for (const auto& sector : bs0_sectors(p, std::numbers::pi / 4.0, 0.0, cutoff)) {
    for (const auto& [key, prob] : joint_distribution(circuit(sector.input), all_modes)) {
      if (key[0] != 0 || key[1] != 0) continue;
      if (key[2] == 1 || key[3] == 1) either += sector.weight * prob;
      naive_sum += sector.weight * prob * ((key[2] == 1) + (key[3] == 1));
    }
  }
  r.metadata["length_multiple"] = length_multiple;
  r.metadata["beta_abs2"] = std::norm(jf_coefficients(params).beta);
  r.metadata["per_output_probability"] = r.p_success;
  r.metadata["either_output_probability"] = either;
  r.metadata["naive_sum_of_outputs"] = naive_sum;
  return r;
}

SchemeResult run_scheme(const SchemeConfig& cfg) {
  switch (cfg.variant) {
    case SchemeVariant::main: return run_main_scheme(cfg);
    case SchemeVariant::doubled: return run_doubled_scheme(cfg);
    case SchemeVariant::appendix_a: return run_appendix_a(cfg.source.p, cfg.appendix_length.value_or(2.0), cfg.cutoff);
    case SchemeVariant::appendix_b: return run_appendix_b(cfg.source.p, cfg.appendix_length.value_or(1.5), cfg.cutoff);
  }
  throw ConfigError("unknown scheme variant");
}

}  // namespace herald
