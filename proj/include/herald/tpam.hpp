#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "herald/fock.hpp"

namespace herald {

/// Generic two-photon absorber acting on one mode and a two-level medium:
///   |0>|g> -> |0>|g>,  |1>|g> -> |1>|g>,  |2>|g> -> alpha|0>|e> + beta|2>|g>,
/// every rule multiplied by e^{i common_phase}. |alpha|^2 + |beta|^2 < 1 leaves
/// an unmodelled loss branch of weight 1 - |alpha|^2 - |beta|^2.
struct GenericTpam {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  double common_phase = 0.0;

  bool is_unitary(double tolerance = 1e-12) const;
  /// Unitary absorber with real non-negative alpha = sqrt(1 - |beta|^2).
  static GenericTpam unitary_from_beta(Complex beta);
};

inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;

/// Applies the absorber to `mode`, entangling it with `medium` (the register's
/// only medium when left empty). Throws UnsupportedInputError for n > 2.
PureState apply_generic_tpam(const PureState& state, std::string_view mode, const GenericTpam& t,
                             std::string_view medium = {});
Ensemble apply_generic_tpam(const Ensemble& ens, std::string_view mode, const GenericTpam& t,
                            std::string_view medium = {});

// Four-wave-mixing absorber -----------------------------------------------------

/// Resonant four-wave-mixing medium of length M * L0, where L0 is one full
/// single-photon cycle. The interaction phase is M * pi * sqrt(3/2).
struct JfParams {
  double length_multiple = 1.0;
  /// Phase of the classical pump Omega2, so Omega2/Omega2* = e^{2 i pump_phase}.
  double pump_phase = 0.0;
  /// Undo the (-1)^M single-photon sign for odd integer M with a phase shifter.
  bool compensate_odd_phase = true;

  double phase_angle() const;
  bool integer_length(double tolerance = 1e-12) const;
};

struct JfCoefficients {
  Complex alpha0;  ///< |2,0,0> -> |0,2,2>
  Complex alpha1;  ///< |2,0,0> -> |1,1,1>
  Complex beta;    ///< |2,0,0> -> |2,0,0>
};

JfCoefficients jf_coefficients(double phase_angle, double pump_phase = 0.0);
JfCoefficients jf_coefficients(const JfParams& p);

/// Names of the pump mode Omega1 and the generated modes E1, E2.
struct JfModes {
  std::string omega = "B";
  std::string e1 = "E1";
  std::string e2 = "E2";
};

/// Unitary evolution through the medium. E1 and E2 must be empty on input and
/// Omega1 may carry at most two photons.
PureState jf_evolve(const PureState& state, const JfModes& modes, const JfParams& p);

/// Effective operator on Omega1 (occupations 0..2) obtained by evolving through
/// the medium and conditioning on fixed photon counts in E1 and E2.
struct JfChannel {
  /// kraus[out][in]
  std::array<std::array<Complex, 3>, 3> kraus{};
  /// Probability that input |n> passes the condition.
  std::array<double, 3> survival{};
};

JfChannel jf_conditioned_channel(const JfParams& p, std::pair<int, int> condition);

/// Applies a JfChannel to one mode; occupations above two are unsupported.
PureState apply_jf_channel(const PureState& state, std::string_view mode, const JfChannel& channel);

// Configuration -----------------------------------------------------------------

struct JfTpam {
  JfParams params;
  std::pair<int, int> condition{0, 0};
};

using TpamSpec = std::variant<GenericTpam, JfTpam>;

/// Parses `generic:alpha=...,beta=...[,phase=...]` or
/// `jf:M=...,condition=(i,j)[,pump_phase=...][,compensate=on|off]`.
/// Complex numbers accept forms like 0.3, -1, 0.3+0.4i, 0.5i.
TpamSpec parse_tpam_spec(std::string_view text);
std::string format_tpam_spec(const TpamSpec& spec);

/// Complex literal in the same syntax as the absorber specs.
Complex parse_complex_literal(std::string_view text);
std::string format_complex_literal(Complex z);

}  // namespace herald
