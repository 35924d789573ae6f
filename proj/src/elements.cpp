#include "herald/elements.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "herald/errors.hpp"

namespace herald {

namespace {

double binomial(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

double factorial(int n) { return std::tgamma(n + 1.0); }

Complex ipow(Complex z, int k) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

double BeamSplitterParams::reflectivity() const {
  const double s = std::sin(theta);
  return s * s;
}

BeamSplitterParams balanced_splitter(std::string mode1, std::string mode2) {
  return {std::numbers::pi / 4.0, 0.0, std::move(mode1), std::move(mode2)};
}

TwoModeUnitary::TwoModeUnitary(double theta, double phi, int cutoff) : cutoff_(cutoff) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex u = std::polar(s, -phi);   // a1 -> a2 coefficient
  const Complex v = -std::polar(s, phi);   // a2 -> a1 coefficient
  sectors_.resize(static_cast<std::size_t>(cutoff) + 1);
  for (int total = 0; total <= cutoff; ++total) {
    auto& block = sectors_[static_cast<std::size_t>(total)];
    block.assign(static_cast<std::size_t>((total + 1) * (total + 1)), Complex{});
    for (int n1 = 0; n1 <= total; ++n1) {
      const int n2 = total - n1;
      for (int m1 = 0; m1 <= total; ++m1) {
        // Coefficient of x^m1 y^(total-m1) in (c x + u y)^n1 (v x + c y)^n2.
        Complex coeff{};
        for (int j = std::max(0, m1 - n2); j <= std::min(n1, m1); ++j) {
          const int k = m1 - j;
          coeff += binomial(n1, j) * binomial(n2, k) * std::pow(c, j) * ipow(u, n1 - j) * ipow(v, k) *
                   std::pow(c, n2 - k);
        }
        const double norm = std::sqrt(factorial(m1) * factorial(total - m1) / (factorial(n1) * factorial(n2)));
        block[static_cast<std::size_t>(m1 * (total + 1) + n1)] = coeff * norm;
      }
    }
  }
}

Complex TwoModeUnitary::element(int total, int m1, int n1) const {
  return sectors_[static_cast<std::size_t>(total)][static_cast<std::size_t>(m1 * (total + 1) + n1)];
}

std::shared_ptr<const TwoModeUnitary> beam_splitter_unitary(double theta, double phi, int cutoff) {
  using Key = std::tuple<std::uint64_t, std::uint64_t, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const TwoModeUnitary>> cache;
  constexpr std::size_t kMaxEntries = 4096;

  const Key key{std::bit_cast<std::uint64_t>(theta), std::bit_cast<std::uint64_t>(phi), cutoff};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const TwoModeUnitary>(theta, phi, cutoff);
  std::lock_guard lock(mutex);
  if (cache.size() >= kMaxEntries) cache.clear();
  return cache.try_emplace(key, std::move(built)).first->second;
}

PureState apply_beam_splitter(const PureState& state, const BeamSplitterParams& p) {
  const auto& reg = state.reg();
  const std::size_t i1 = reg.mode_index(p.mode1);
  const std::size_t i2 = reg.mode_index(p.mode2);
  if (i1 == i2) throw LabelError("beam splitter needs two distinct modes");
  const auto unitary = beam_splitter_unitary(p.theta, p.phi, reg.cutoff());

  PureState out(reg);
  for (const auto& [ket, amp] : state.terms()) {
    const int n1 = ket.occupations[i1];
    const int total = n1 + ket.occupations[i2];
    if (total > reg.cutoff()) {
      throw TruncationError("beam splitter input carries " + std::to_string(total) + " photons in ('" + p.mode1 +
                            "', '" + p.mode2 + "'), above cutoff " + std::to_string(reg.cutoff()));
    }
    FockKet next = ket;
    for (int m1 = 0; m1 <= total; ++m1) {
      const Complex u = unitary->element(total, m1, n1);
      if (u == Complex{}) continue;
      next.occupations[i1] = m1;
      next.occupations[i2] = total - m1;
      out.add(next, amp * u);
    }
  }
  out.prune();
  return out;
}

Ensemble apply_beam_splitter(const Ensemble& ens, const BeamSplitterParams& p) {
  return ens.transformed([&](const PureState& s) { return apply_beam_splitter(s, p); });
}

PureState apply_phase_shifter(const PureState& state, const PhaseShifterParams& p) {
  const std::size_t m = state.reg().mode_index(p.mode);
  PureState out(state.reg());
  for (const auto& [ket, amp] : state.terms()) out.add(ket, amp * std::polar(1.0, p.phi * ket.occupations[m]));
  out.prune();
  return out;
}

Ensemble apply_phase_shifter(const Ensemble& ens, const PhaseShifterParams& p) {
  return ens.transformed([&](const PureState& s) { return apply_phase_shifter(s, p); });
}

double unitarity_check(const BeamSplitterParams& p, int cutoff) {
  const TwoModeUnitary u(p.theta, p.phi, cutoff);
  double worst = 0.0;
  for (int total = 0; total <= cutoff; ++total) {
    for (int a = 0; a <= total; ++a) {
      for (int b = 0; b <= total; ++b) {
        Complex s{};
        for (int m = 0; m <= total; ++m) s += std::conj(u.element(total, m, a)) * u.element(total, m, b);
        worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    }
  }
  return worst;
}

}  // namespace herald
