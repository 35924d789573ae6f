#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "herald/execution.hpp"
#include "herald/schemes.hpp"

namespace herald {

/// Which family of null-condition solutions a (phi1, phi2, theta1, theta2)
/// choice belongs to. The single-photon click amplitude
/// cos(t1)cos(t2) - e^{i(phi2-phi1)} sin(t1)sin(t2) vanishes iff
/// phi1 - phi2 = nu*pi and t1 + t2 = +-pi/2 (nu even) or t1 - t2 = +-pi/2 (nu odd).
enum class ConstraintKind { sum_plus, sum_minus, diff_plus, diff_minus, violated };

std::string_view to_string(ConstraintKind k);
ConstraintKind parse_constraint_kind(std::string_view name);

struct ConstraintCase {
  ConstraintKind kind = ConstraintKind::violated;
  long nu = 0;  ///< (phi1 - phi2) / pi
};

inline constexpr double kAngularTolerance = 1e-10;

ConstraintCase classify_constraint(double phi1, double phi2, double theta1, double theta2,
                                   double tolerance = kAngularTolerance);

/// BS1/BS2 angles on the manifold `kind` for the given theta1 (phi1 = 0).
std::pair<SplitterAngles, SplitterAngles> constrained_splitters(double theta1, ConstraintKind kind);

/// Success probability divided by p^2:
///   |1-beta|^2 cos^6(t1) sin^2(t1)   for sum_plus / diff_plus
///   |1-beta|^2 sin^6(t1) cos^2(t1)   for sum_minus / diff_minus
double closed_form_ps(Complex beta, double theta1, ConstraintKind kind);

struct FormulaPoint {
  double theta1 = 0.0;
  Complex beta;
  ConstraintKind kind = ConstraintKind::sum_plus;
};

/// Simulated main-scheme success probability (p = 1, unitary generic absorber)
/// at one manifold point.
double simulated_ps(const FormulaPoint& point, int cutoff = kDefaultCutoff);

/// max |closed_form_ps - simulated_ps| over the grid.
double verify_formula_against_simulator(std::span<const FormulaPoint> grid, Execution exec = Execution::parallel);

/// Regular theta1 x beta grid on one manifold (beta real).
std::vector<FormulaPoint> formula_grid(std::size_t theta_steps, std::size_t beta_steps, double beta_min,
                                       double beta_max, ConstraintKind kind);

// Optimisation ------------------------------------------------------------------

struct Optimum {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
Optimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                double tolerance = 1e-11);

/// Uniform grid scan over [lo, hi) followed by golden-section refinement
/// around the best grid point.
Optimum maximize_1d(const std::function<double(double)>& f, double lo, double hi, std::size_t grid_points);

enum class Objective { closed_form, simulator };

/// Best theta1 in [0, 2pi) and the corresponding P_s / p^2.
Optimum optimize_ps(Complex beta, ConstraintKind kind, Objective objective = Objective::closed_form);

/// theta1 optima listed for each family, in radians.
std::vector<double> optimal_theta_set(ConstraintKind kind);
/// Angular distance from theta to the nearest member of the optimum set.
double distance_to_optimal_set(double theta, ConstraintKind kind);

// Medium-length scans -----------------------------------------------------------

enum class JfScanTarget {
  main_scheme,  ///< empty generated modes, beta into the interferometer at theta1 = 30 deg
  appendix_a,   ///< one photon in each generated mode, |alpha1|^2 / 2
  appendix_b,   ///< empty generated modes then a 50/50 click, |beta|^2 / 4
};

struct JfScanRow {
  double length_multiple = 0.0;
  Complex coefficient;   ///< beta or alpha1, depending on the target
  double ps_over_p2 = 0.0;
  double running_max = 0.0;
};

std::vector<JfScanRow> jf_length_scan(std::span<const double> lengths, JfScanTarget target);

/// Integer lengths 1..count (main scheme, appendix A) or half-odd lengths
/// (2k-1)/2 for k = 1..count (appendix B).
std::vector<double> jf_lengths(JfScanTarget target, std::size_t count);

// Sweeps ------------------------------------------------------------------------

struct SweepSpec {
  SchemeVariant scheme = SchemeVariant::main;
  ConstraintKind constraint = ConstraintKind::sum_plus;
  std::vector<double> theta0;
  std::vector<double> theta1;
  std::vector<Complex> beta;
  std::vector<double> p;
  int cutoff = kDefaultCutoff;
};

/// Throws ConfigError for empty or non-monotone axes, or unsupported schemes.
void validate(const SweepSpec& spec);

struct SweepRow {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  Complex beta;
  double p = 0.0;
  double p_success = 0.0;
  double ps_over_p2 = 0.0;
  double fidelity = 0.0;
};

/// Rows in grid order (theta0 slowest, then theta1, beta, p).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, Execution exec = Execution::parallel);

}  // namespace herald
