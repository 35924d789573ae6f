#include "herald/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "herald/errors.hpp"

namespace herald {

namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

// ModeRegister ----------------------------------------------------------------

ModeRegister::ModeRegister(std::vector<std::string> modes, int cutoff, std::vector<MediumSpec> media)
    : modes_(std::move(modes)), cutoff_(cutoff), media_(std::move(media)) {
  if (cutoff_ < 0) throw ConfigError("mode register cutoff must be non-negative");
  std::set<std::string> seen;
  auto claim = [&](const std::string& label) {
    if (label.empty()) throw LabelError("empty subsystem label");
    if (!seen.insert(label).second) throw LabelError("duplicate subsystem label " + quoted(label));
  };
  for (const auto& m : modes_) claim(m);
  for (const auto& m : media_) {
    claim(m.label);
    if (m.dim < 1) throw ConfigError("medium " + quoted(m.label) + " needs dimension >= 1");
  }
}

std::optional<std::size_t> ModeRegister::find_mode(std::string_view label) const {
  auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - modes_.begin());
}

std::optional<std::size_t> ModeRegister::find_medium(std::string_view label) const {
  auto it = std::find_if(media_.begin(), media_.end(), [&](const MediumSpec& m) { return m.label == label; });
  if (it == media_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - media_.begin());
}

std::size_t ModeRegister::mode_index(std::string_view label) const {
  if (auto i = find_mode(label)) return *i;
  throw LabelError("unknown mode " + quoted(label));
}

std::size_t ModeRegister::medium_index(std::string_view label) const {
  if (auto i = find_medium(label)) return *i;
  throw LabelError("unknown medium " + quoted(label));
}

bool ModeRegister::contains(std::string_view label) const {
  return find_mode(label).has_value() || find_medium(label).has_value();
}

ModeRegister ModeRegister::without_mode(std::string_view label) const {
  auto modes = modes_;
  modes.erase(modes.begin() + static_cast<std::ptrdiff_t>(mode_index(label)));
  return ModeRegister(std::move(modes), cutoff_, media_);
}

ModeRegister ModeRegister::without_medium(std::string_view label) const {
  auto media = media_;
  media.erase(media.begin() + static_cast<std::ptrdiff_t>(medium_index(label)));
  return ModeRegister(modes_, cutoff_, std::move(media));
}

ModeRegister ModeRegister::renamed(std::string_view from, std::string to) const {
  auto modes = modes_;
  auto media = media_;
  if (auto i = find_mode(from)) {
    modes[*i] = std::move(to);
  } else {
    media[medium_index(from)].label = std::move(to);
  }
  return ModeRegister(std::move(modes), cutoff_, std::move(media));
}

ModeRegister concat(const ModeRegister& a, const ModeRegister& b) {
  if (a.cutoff() != b.cutoff()) throw ConfigError("cannot join registers with different cutoffs");
  auto modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  auto media = a.media();
  media.insert(media.end(), b.media().begin(), b.media().end());
  return ModeRegister(std::move(modes), a.cutoff(), std::move(media));
}

// PureState -------------------------------------------------------------------

PureState PureState::vacuum(ModeRegister reg) {
  FockKet ket{std::vector<int>(reg.mode_count(), 0), std::vector<int>(reg.medium_count(), 0)};
  return basis(std::move(reg), std::move(ket));
}

PureState PureState::basis(ModeRegister reg, FockKet ket) {
  PureState s(std::move(reg));
  s.add(ket, 1.0);
  return s;
}

PureState PureState::number(std::string label, int n, int cutoff) {
  return basis(ModeRegister({std::move(label)}, cutoff), FockKet{{n}, {}});
}

void PureState::validate(const FockKet& ket) const {
  if (ket.occupations.size() != reg_.mode_count() || ket.medium.size() != reg_.medium_count()) {
    throw ConfigError("ket shape does not match register");
  }
  for (std::size_t i = 0; i < ket.occupations.size(); ++i) {
    const int n = ket.occupations[i];
    if (n < 0) throw ConfigError("negative occupation in mode '" + reg_.modes()[i] + "'");
    if (n > reg_.cutoff()) {
      throw TruncationError("occupation " + std::to_string(n) + " in mode '" + reg_.modes()[i] +
                            "' exceeds cutoff " + std::to_string(reg_.cutoff()));
    }
  }
  for (std::size_t i = 0; i < ket.medium.size(); ++i) {
    if (ket.medium[i] < 0 || ket.medium[i] >= reg_.media()[i].dim) {
      throw ConfigError("medium level out of range for '" + reg_.media()[i].label + "'");
    }
  }
}

Complex PureState::amplitude(const FockKet& ket) const {
  auto it = terms_.find(ket);
  return it == terms_.end() ? Complex{} : it->second;
}

double PureState::norm2() const {
  double s = 0.0;
  for (const auto& [ket, amp] : terms_) s += std::norm(amp);
  return s;
}

Complex PureState::inner(const PureState& other) const {
  if (!(reg_ == other.reg_)) throw LabelError("inner product of states on different registers");
  Complex s{};
  for (const auto& [ket, amp] : terms_) s += std::conj(amp) * other.amplitude(ket);
  return s;
}

void PureState::add(const FockKet& ket, Complex amp) {
  validate(ket);
  terms_[ket] += amp;
}

void PureState::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
}

PureState PureState::scaled(Complex factor) const {
  PureState out(reg_);
  for (const auto& [ket, amp] : terms_) out.terms_.emplace(ket, amp * factor);
  out.prune();
  return out;
}

PureState PureState::normalized() const {
  const double n2 = norm2();
  if (n2 <= 0.0) throw std::domain_error("cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(n2));
}

// Ensemble --------------------------------------------------------------------

Ensemble Ensemble::pure(const PureState& state) {
  Ensemble e(state.reg());
  e.add(1.0, state);
  return e;
}

void Ensemble::add(double weight, const PureState& state) {
  if (weight < 0.0) throw ConfigError("negative ensemble weight");
  if (!(state.reg() == reg_)) throw LabelError("branch register does not match ensemble");
  const double n2 = state.norm2();
  const double w = weight * n2;
  if (w <= 0.0 || state.empty()) return;
  branches_.push_back({w, state.scaled(1.0 / std::sqrt(n2))});
}

double Ensemble::total_weight() const {
  double s = 0.0;
  for (const auto& b : branches_) s += b.weight;
  return s;
}

Ensemble Ensemble::normalized() const {
  const double t = total_weight();
  if (t <= 0.0) throw std::domain_error("cannot normalize an empty ensemble");
  Ensemble out(reg_);
  for (const auto& b : branches_) out.branches_.push_back({b.weight / t, b.state});
  return out;
}

Ensemble Ensemble::coalesced(double tolerance) const {
  Ensemble out(reg_);
  for (const auto& b : branches_) {
    auto same = std::find_if(out.branches_.begin(), out.branches_.end(), [&](const Branch& o) {
      return std::abs(std::norm(o.state.inner(b.state)) - 1.0) < tolerance;
    });
    if (same != out.branches_.end()) {
      same->weight += b.weight;
    } else {
      out.branches_.push_back(b);
    }
  }
  return out;
}

Ensemble Ensemble::transformed(const std::function<PureState(const PureState&)>& map) const {
  std::optional<Ensemble> out;
  for (const auto& b : branches_) {
    PureState next = map(b.state);
    if (!out) out.emplace(next.reg());
    out->add(b.weight, next);
  }
  if (!out) {
    // Empty input: run the map on a vacuum probe to learn the output register.
    return Ensemble(map(PureState::vacuum(reg_)).reg());
  }
  return *out;
}

// Operators -------------------------------------------------------------------

PureState apply_creation(const PureState& state, std::string_view mode) {
  const std::size_t m = state.reg().mode_index(mode);
  PureState out(state.reg());
  for (const auto& [ket, amp] : state.terms()) {
    FockKet next = ket;
    const int n = next.occupations[m]++;
    out.add(next, amp * std::sqrt(static_cast<double>(n + 1)));
  }
  out.prune();
  return out;
}

PureState apply_annihilation(const PureState& state, std::string_view mode) {
  const std::size_t m = state.reg().mode_index(mode);
  PureState out(state.reg());
  for (const auto& [ket, amp] : state.terms()) {
    const int n = ket.occupations[m];
    if (n == 0) continue;
    FockKet next = ket;
    --next.occupations[m];
    out.add(next, amp * std::sqrt(static_cast<double>(n)));
  }
  out.prune();
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  PureState out(concat(a.reg(), b.reg()));
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      FockKet k;
      k.occupations = ka.occupations;
      k.occupations.insert(k.occupations.end(), kb.occupations.begin(), kb.occupations.end());
      k.medium = ka.medium;
      k.medium.insert(k.medium.end(), kb.medium.begin(), kb.medium.end());
      out.add(k, va * vb);
    }
  }
  out.prune();
  return out;
}

Ensemble tensor(const Ensemble& a, const PureState& b) {
  Ensemble out(concat(a.reg(), b.reg()));
  for (const auto& br : a.branches()) out.add(br.weight, tensor(br.state, b));
  return out;
}

PureState relabel(const PureState& state, std::string_view from, std::string to) {
  PureState out(state.reg().renamed(from, std::move(to)));
  for (const auto& [ket, amp] : state.terms()) out.add(ket, amp);
  return out;
}

Ensemble relabel(const Ensemble& ens, std::string_view from, std::string to) {
  Ensemble out(ens.reg().renamed(from, to));
  for (const auto& b : ens.branches()) out.add(b.weight, relabel(b.state, from, to));
  return out;
}

// Measurement -----------------------------------------------------------------

Projection project_number(const PureState& state, std::string_view mode, int n) {
  const std::size_t m = state.reg().mode_index(mode);
  if (n < 0 || n > state.reg().cutoff()) throw ConfigError("projection outcome outside [0, cutoff]");
  Projection result{PureState(state.reg().without_mode(mode)), 0.0};
  for (const auto& [ket, amp] : state.terms()) {
    if (ket.occupations[m] != n) continue;
    FockKet k = ket;
    k.occupations.erase(k.occupations.begin() + static_cast<std::ptrdiff_t>(m));
    result.state.add(k, amp);
  }
  const double total = state.norm2();
  result.probability = total > 0.0 ? result.state.norm2() / total : 0.0;
  return result;
}

Ensemble project_number(const Ensemble& ens, std::string_view mode, int n) {
  Ensemble out(ens.reg().without_mode(mode));
  for (const auto& b : ens.branches()) out.add(b.weight, project_number(b.state, mode, n).state);
  return out;
}

Ensemble partial_trace_discard(const Ensemble& ens, std::string_view label) {
  const auto& reg = ens.reg();
  const auto mode = reg.find_mode(label);
  const auto medium = reg.find_medium(label);
  if (!mode && !medium) throw LabelError("cannot trace out unknown subsystem '" + std::string(label) + "'");
  const ModeRegister reduced = mode ? reg.without_mode(label) : reg.without_medium(label);

  Ensemble out(reduced);
  for (const auto& b : ens.branches()) {
    std::map<int, PureState> parts;
    for (const auto& [ket, amp] : b.state.terms()) {
      FockKet k = ket;
      int level = 0;
      if (mode) {
        level = k.occupations[*mode];
        k.occupations.erase(k.occupations.begin() + static_cast<std::ptrdiff_t>(*mode));
      } else {
        level = k.medium[*medium];
        k.medium.erase(k.medium.begin() + static_cast<std::ptrdiff_t>(*medium));
      }
      auto [it, inserted] = parts.try_emplace(level, reduced);
      it->second.add(k, amp);
    }
    for (const auto& [level, part] : parts) out.add(b.weight, part);
  }
  return out;
}

Ensemble reduce_to(const Ensemble& ens, std::string_view keep) {
  if (!ens.reg().contains(keep)) throw LabelError("cannot keep unknown subsystem '" + std::string(keep) + "'");
  Ensemble out = ens;
  for (const auto& m : ens.reg().modes()) {
    if (m != keep) out = partial_trace_discard(out, m);
  }
  for (const auto& m : ens.reg().media()) {
    if (m.label != keep) out = partial_trace_discard(out, m.label);
  }
  return out;
}

std::vector<double> number_distribution(const Ensemble& ens, std::string_view mode) {
  const std::size_t m = ens.reg().mode_index(mode);
  std::vector<double> dist(static_cast<std::size_t>(ens.reg().cutoff()) + 1, 0.0);
  for (const auto& b : ens.branches()) {
    for (const auto& [ket, amp] : b.state.terms()) {
      dist[static_cast<std::size_t>(ket.occupations[m])] += b.weight * std::norm(amp);
    }
  }
  return dist;
}

std::map<std::vector<int>, double> joint_distribution(const Ensemble& ens, std::span<const std::string> modes) {
  std::vector<std::size_t> idx;
  for (const auto& m : modes) idx.push_back(ens.reg().mode_index(m));
  std::map<std::vector<int>, double> dist;
  for (const auto& b : ens.branches()) {
    for (const auto& [ket, amp] : b.state.terms()) {
      std::vector<int> key;
      key.reserve(idx.size());
      for (auto i : idx) key.push_back(ket.occupations[i]);
      dist[key] += b.weight * std::norm(amp);
    }
  }
  return dist;
}

namespace {

void require_single_mode(const ModeRegister& reg) {
  if (reg.mode_count() != 1 || reg.medium_count() != 0) {
    throw ConfigError("single-photon fidelity needs a single-mode state without media");
  }
}

}  // namespace

double fidelity_to_single_photon(const PureState& state) {
  require_single_mode(state.reg());
  const double n2 = state.norm2();
  if (n2 <= 0.0) return 0.0;
  return std::norm(state.amplitude(FockKet{{1}, {}})) / n2;
}

double fidelity_to_single_photon(const Ensemble& ens) {
  require_single_mode(ens.reg());
  const double total = ens.total_weight();
  if (total <= 0.0) return 0.0;
  double f = 0.0;
  for (const auto& b : ens.branches()) f += b.weight * fidelity_to_single_photon(b.state);
  return f / total;
}

}  // namespace herald
