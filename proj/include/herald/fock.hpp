#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace herald {

using Complex = std::complex<double>;

/// Amplitudes with modulus below this are dropped from sparse states.
inline constexpr double kPruneThreshold = 1e-14;
inline constexpr int kDefaultCutoff = 4;

/// Auxiliary non-bosonic subsystem (e.g. the absorbing medium, {g, e}).
struct MediumSpec {
  std::string label;
  int dim = 2;
  bool operator==(const MediumSpec&) const = default;
};

/// Ordered set of bosonic modes sharing one per-mode photon cutoff, followed
/// by zero or more auxiliary medium subsystems. Labels are unique across both.
class ModeRegister {
 public:
  ModeRegister() = default;
  ModeRegister(std::vector<std::string> modes, int cutoff, std::vector<MediumSpec> media = {});

  const std::vector<std::string>& modes() const { return modes_; }
  const std::vector<MediumSpec>& media() const { return media_; }
  int cutoff() const { return cutoff_; }
  std::size_t mode_count() const { return modes_.size(); }
  std::size_t medium_count() const { return media_.size(); }

  std::optional<std::size_t> find_mode(std::string_view label) const;
  std::optional<std::size_t> find_medium(std::string_view label) const;
  std::size_t mode_index(std::string_view label) const;
  std::size_t medium_index(std::string_view label) const;
  bool contains(std::string_view label) const;

  ModeRegister without_mode(std::string_view label) const;
  ModeRegister without_medium(std::string_view label) const;
  ModeRegister renamed(std::string_view from, std::string to) const;

  bool operator==(const ModeRegister&) const = default;

 private:
  std::vector<std::string> modes_;
  int cutoff_ = kDefaultCutoff;
  std::vector<MediumSpec> media_;
};

/// Concatenates two registers; labels must be disjoint and cutoffs equal.
ModeRegister concat(const ModeRegister& a, const ModeRegister& b);

/// Occupation-number basis ket. Ordering is lexicographic on occupations,
/// then on medium levels, which fixes the iteration order of every state.
struct FockKet {
  std::vector<int> occupations;
  std::vector<int> medium;
  auto operator<=>(const FockKet&) const = default;
};

/// Sparse superposition of kets over a register. May be unnormalized.
class PureState {
 public:
  using Terms = std::map<FockKet, Complex>;

  PureState() = default;
  explicit PureState(ModeRegister reg) : reg_(std::move(reg)) {}

  static PureState vacuum(ModeRegister reg);
  static PureState basis(ModeRegister reg, FockKet ket);
  /// Single-mode number state |n> on a one-mode register.
  static PureState number(std::string label, int n, int cutoff = kDefaultCutoff);

  const ModeRegister& reg() const { return reg_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Complex amplitude(const FockKet& ket) const;
  double norm2() const;
  /// <this|other>; registers must match.
  Complex inner(const PureState& other) const;

  /// Adds `amp` to the amplitude of `ket`. Validates ket shape and ranges.
  void add(const FockKet& ket, Complex amp);
  void prune(double threshold = kPruneThreshold);

  PureState scaled(Complex factor) const;
  PureState normalized() const;

 private:
  void validate(const FockKet& ket) const;

  ModeRegister reg_;
  Terms terms_;
};

/// One component of a mixture: classical weight times a normalized pure state.
struct Branch {
  double weight = 0.0;
  PureState state;
};

/// Probability-weighted list of pure states. Branch states are kept
/// normalized; after conditioning the weights sum to the event probability.
class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(ModeRegister reg) : reg_(std::move(reg)) {}

  static Ensemble pure(const PureState& state);

  const ModeRegister& reg() const { return reg_; }
  const std::vector<Branch>& branches() const { return branches_; }
  bool empty() const { return branches_.empty(); }

  /// Stores `state` normalized with `weight` scaled by its squared norm, so an
  /// unnormalized post-selected state contributes exactly its probability.
  /// Zero-weight branches are dropped.
  void add(double weight, const PureState& state);

  double total_weight() const;
  Ensemble normalized() const;
  /// Merges branches whose states coincide up to a global phase.
  Ensemble coalesced(double tolerance = 1e-12) const;

  /// Applies a (possibly trace-decreasing) pure map to every branch.
  Ensemble transformed(const std::function<PureState(const PureState&)>& map) const;

 private:
  ModeRegister reg_;
  std::vector<Branch> branches_;
};

// Operator actions ------------------------------------------------------------

/// Each ket |..n..> maps to sqrt(n+1)|..n+1..>. Throws TruncationError past cutoff.
PureState apply_creation(const PureState& state, std::string_view mode);
/// Each ket |..n..> maps to sqrt(n)|..n-1..>.
PureState apply_annihilation(const PureState& state, std::string_view mode);

PureState tensor(const PureState& a, const PureState& b);
Ensemble tensor(const Ensemble& a, const PureState& b);

PureState relabel(const PureState& state, std::string_view from, std::string to);
Ensemble relabel(const Ensemble& ens, std::string_view from, std::string to);

// Measurement -----------------------------------------------------------------

struct Projection {
  PureState state;       ///< unnormalized, measured mode removed
  double probability = 0.0;
};

/// Keeps kets with occupation n in `mode`. Probability is relative to the
/// input's squared norm.
Projection project_number(const PureState& state, std::string_view mode, int n);
/// Branch-wise projection; the returned weights sum to the outcome probability
/// times the input total weight.
Ensemble project_number(const Ensemble& ens, std::string_view mode, int n);

/// Traces out a mode or medium subsystem by splitting each branch into its
/// orthogonal sub-branches, one per level of the discarded subsystem.
Ensemble partial_trace_discard(const Ensemble& ens, std::string_view label);
/// Traces out every subsystem except `keep`.
Ensemble reduce_to(const Ensemble& ens, std::string_view keep);

/// Photon-number distribution of one mode (index n = occupation).
std::vector<double> number_distribution(const Ensemble& ens, std::string_view mode);

/// Joint occupation distribution over the listed modes, keyed by occupation
/// tuple in the listed order.
std::map<std::vector<int>, double> joint_distribution(const Ensemble& ens,
                                                      std::span<const std::string> modes);

/// |<1|psi>|^2 / <psi|psi> for a single-mode state without media.
double fidelity_to_single_photon(const PureState& state);
/// <1|rho|1> / tr(rho) for a single-mode ensemble.
double fidelity_to_single_photon(const Ensemble& ens);

}  // namespace herald
