#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herald/fock.hpp"
#include "herald/tpam.hpp"

namespace herald {

/// Imperfect single-photon source: p|1><1| + (1-p)|0><0|.
struct SourceSpec {
  double p = 1.0;
};

struct SplitterAngles {
  double theta = std::numbers::pi / 4.0;
  double phi = 0.0;
};

enum class SchemeVariant { main, doubled, appendix_a, appendix_b };

std::string_view to_string(SchemeVariant v);
SchemeVariant parse_scheme_variant(std::string_view name);

struct SchemeConfig {
  SourceSpec source;
  SplitterAngles bs0;  ///< combines the two sources
  SplitterAngles bs1;  ///< interferometer input splitter
  SplitterAngles bs2;  ///< interferometer output splitter
  TpamSpec tpam = GenericTpam{};
  SchemeVariant variant = SchemeVariant::main;
  /// Medium length in units of L0 for the appendix schemes. Defaults to 2
  /// (appendix A) or 3/2 (appendix B).
  std::optional<double> appendix_length;
  int cutoff = kDefaultCutoff;
};

/// Contribution of one input branch to the success probability.
struct SectorContribution {
  std::string sector;
  double weight = 0.0;                   ///< probability of this input branch
  double conditional_probability = 0.0;  ///< herald probability given the branch
  double contribution = 0.0;             ///< weight * conditional_probability
};

struct SchemeResult {
  double p_success = 0.0;
  /// Normalized state of the heralded output mode (labelled "out"); empty
  /// when p_success is zero.
  Ensemble conditional_state;
  double fidelity = 0.0;
  std::vector<SectorContribution> branch_log;
  /// Modes read by detectors, in the order used by `outcomes` keys.
  std::vector<std::string> detector_modes;
  /// Joint detector statistics of the full run before any heralding.
  std::map<std::vector<int>, double> outcomes;
  std::map<std::string, double> metadata;
};

inline constexpr std::string_view kOutputMode = "out";

/// Two-branch ensemble {p: |1>, 1-p: |0>} on one mode.
Ensemble input_mixture(double p, std::string label = "A", int cutoff = kDefaultCutoff);

/// Both sources through BS0 (modes A, B), then A traced out. Branches are
/// coalesced, so the result is diagonal in the photon number of B.
Ensemble reduce_through_bs0(double p, double theta0, int cutoff = kDefaultCutoff, double phi0 = 0.0);

SchemeResult run_main_scheme(const SchemeConfig& cfg);
SchemeResult run_doubled_scheme(const SchemeConfig& cfg);
/// Four-wave-mixing medium of integer length M L0, heralded by one photon in
/// each generated mode.
SchemeResult run_appendix_a(double p, double length_multiple = 2.0, int cutoff = kDefaultCutoff);
/// Medium of half-odd length (2k-1) L0 / 2 heralded by empty generated modes,
/// followed by a 50/50 split against vacuum and a one-photon click.
SchemeResult run_appendix_b(double p, double length_multiple = 1.5, int cutoff = kDefaultCutoff);

/// Dispatches on cfg.variant.
SchemeResult run_scheme(const SchemeConfig& cfg);

/// D1 single-click probability for one photon entering the interferometer.
double single_photon_click_probability(const SchemeConfig& cfg);

}  // namespace herald
