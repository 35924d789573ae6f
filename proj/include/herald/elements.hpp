#pragma once

#include <memory>
#include <string>
#include <vector>

#include "herald/fock.hpp"

namespace herald {

/// Lossless two-port beam splitter. The first mode of the pair takes the role
/// of a1 in the substitution
///   a1^dag -> cos(theta) a1^dag + e^{-i phi} sin(theta) a2^dag
///   a2^dag -> -e^{i phi} sin(theta) a1^dag + cos(theta) a2^dag
/// applied to the creation-operator polynomial of the input state.
struct BeamSplitterParams {
  double theta = 0.0;
  double phi = 0.0;
  std::string mode1;
  std::string mode2;

  /// Reflectivity sin^2(theta).
  double reflectivity() const;
};

/// 50/50 splitter with phi = 0: b^dag -> (b^dag + c^dag)/sqrt2, c^dag -> (-b^dag + c^dag)/sqrt2.
BeamSplitterParams balanced_splitter(std::string mode1, std::string mode2);

struct PhaseShifterParams {
  double phi = 0.0;
  std::string mode;
};

/// Fock-basis matrix of a beam splitter, block-diagonal in the total photon
/// number N of the pair. Only sectors N <= cutoff are built.
class TwoModeUnitary {
 public:
  TwoModeUnitary(double theta, double phi, int cutoff);

  int cutoff() const { return cutoff_; }
  /// <m1, N-m1| U |n1, N-n1>.
  Complex element(int total, int m1, int n1) const;

 private:
  int cutoff_;
  std::vector<std::vector<Complex>> sectors_;
};

/// Shared, build-once matrix for (theta, phi, cutoff). Safe to call from
/// concurrent sweeps.
std::shared_ptr<const TwoModeUnitary> beam_splitter_unitary(double theta, double phi, int cutoff);

PureState apply_beam_splitter(const PureState& state, const BeamSplitterParams& p);
Ensemble apply_beam_splitter(const Ensemble& ens, const BeamSplitterParams& p);

/// Each ket gains e^{i n phi}, n the occupation of the shifted mode.
PureState apply_phase_shifter(const PureState& state, const PhaseShifterParams& p);
Ensemble apply_phase_shifter(const Ensemble& ens, const PhaseShifterParams& p);

/// max |U^dag U - 1| over the number sectors up to `cutoff`.
double unitarity_check(const BeamSplitterParams& p, int cutoff);

}  // namespace herald
