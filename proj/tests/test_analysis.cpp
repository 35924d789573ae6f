#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "herald/analysis.hpp"
#include "herald/errors.hpp"

using namespace herald;
using std::numbers::pi;

namespace {

constexpr double deg = pi / 180.0;

double plus_family(Complex beta, double t) {
  return std::norm(1.0 - beta) * std::pow(std::cos(t), 6) * std::pow(std::sin(t), 2);
}

}  // namespace

TEST_CASE("constraint classification") {
  CHECK(classify_constraint(0.0, 0.0, pi / 6.0, pi / 3.0).kind == ConstraintKind::sum_plus);
  CHECK(classify_constraint(0.0, 0.0, pi / 6.0, -2.0 * pi / 3.0).kind == ConstraintKind::sum_minus);
  CHECK(classify_constraint(0.0, 2.0 * pi, 0.2, pi / 2.0 - 0.2).kind == ConstraintKind::sum_plus);
  CHECK(classify_constraint(0.0, 2.0 * pi, 0.2, pi / 2.0 - 0.2).nu == -2);

  const ConstraintCase odd = classify_constraint(pi, 0.0, pi / 2.0 + 0.3, 0.3);
  CHECK(odd.kind == ConstraintKind::diff_plus);
  CHECK(odd.nu == 1);
  CHECK(classify_constraint(0.0, pi, 0.3, 0.3 + pi / 2.0).kind == ConstraintKind::diff_minus);

  CHECK(classify_constraint(0.0, 0.0, pi / 4.0, pi / 4.0 + 1e-6).kind == ConstraintKind::violated);
  CHECK(classify_constraint(0.1, 0.0, pi / 4.0, pi / 4.0).kind == ConstraintKind::violated);
  // wrapping: theta sums that differ by 2 pi land on the same family
  CHECK(classify_constraint(0.0, 0.0, pi / 6.0, pi / 3.0 + 2.0 * pi).kind == ConstraintKind::sum_plus);
}

TEST_CASE("constrained splitters satisfy their own classification") {
  for (auto kind : {ConstraintKind::sum_plus, ConstraintKind::sum_minus, ConstraintKind::diff_plus,
                    ConstraintKind::diff_minus}) {
    for (double t : {0.1, 0.7, 2.3, -1.0}) {
      const auto [bs1, bs2] = constrained_splitters(t, kind);
      CHECK(classify_constraint(bs1.phi, bs2.phi, bs1.theta, bs2.theta).kind == kind);
      const Complex click = std::cos(bs1.theta) * std::cos(bs2.theta) -
                            std::polar(1.0, bs2.phi - bs1.phi) * std::sin(bs1.theta) * std::sin(bs2.theta);
      CHECK(std::abs(click) < 1e-14);
    }
    CHECK(parse_constraint_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(constrained_splitters(0.3, ConstraintKind::violated), ConfigError);
  CHECK_THROWS_AS(parse_constraint_kind("sideways"), ConfigError);
}

TEST_CASE("closed form reference points") {
  CHECK(closed_form_ps(0.0, pi / 4.0, ConstraintKind::sum_plus) == doctest::Approx(1.0 / 16.0));
  CHECK(closed_form_ps(1.0, pi / 4.0, ConstraintKind::sum_plus) == 0.0);
  CHECK(closed_form_ps(-1.0, pi / 6.0, ConstraintKind::sum_plus) == doctest::Approx(27.0 / 64.0));
  CHECK(closed_form_ps(-1.0, pi / 3.0, ConstraintKind::sum_minus) == doctest::Approx(27.0 / 64.0));
  CHECK(closed_form_ps(Complex{0.0, 1.0}, pi / 6.0, ConstraintKind::diff_plus) == doctest::Approx(2.0 * 27.0 / 256.0));
  CHECK_THROWS_AS(closed_form_ps(0.0, 0.3, ConstraintKind::violated), ConfigError);
}

TEST_CASE("closed form matches the simulator on the plus families") {
  for (auto kind : {ConstraintKind::sum_plus, ConstraintKind::diff_plus}) {
    const auto grid = formula_grid(20, 20, -1.0, 1.0, kind);
    CHECK(grid.size() == 400);
    CHECK(verify_formula_against_simulator(grid) < 1e-12);
  }
  for (double t : {0.2, 0.9, 1.3}) {
    CHECK(simulated_ps({t, Complex{0.3, -0.6}, ConstraintKind::sum_plus}) ==
          doctest::Approx(plus_family(Complex{0.3, -0.6}, t)).epsilon(1e-12));
  }
}

TEST_CASE("minus families simulate like the plus families") {
  // The sin^6 cos^2 closed form for the minus families is not what the
  // circuit produces: the simulator follows cos^6 sin^2 there as well.
  for (auto kind : {ConstraintKind::sum_minus, ConstraintKind::diff_minus}) {
    for (double t : {0.2, pi / 6.0, pi / 3.0, 1.3}) {
      CHECK(simulated_ps({t, -1.0, kind}) == doctest::Approx(plus_family(-1.0, t)).epsilon(1e-12));
    }
    const auto grid = formula_grid(20, 20, -1.0, 1.0, kind);
    CHECK(verify_formula_against_simulator(grid, Execution::serial) == doctest::Approx(0.375).epsilon(1e-2));
  }
}

TEST_CASE("reflection symmetry of the closed form") {
  for (double t = 0.0; t < pi; t += 0.17) {
    for (auto kind : {ConstraintKind::sum_plus, ConstraintKind::sum_minus}) {
      const double v = closed_form_ps(Complex{0.2, 0.1}, t, kind);
      CHECK(closed_form_ps(Complex{0.2, 0.1}, pi - t, kind) == doctest::Approx(v).epsilon(1e-12));
      CHECK(closed_form_ps(Complex{0.2, 0.1}, -t, kind) == doctest::Approx(v).epsilon(1e-12));
      CHECK(closed_form_ps(Complex{0.2, 0.1}, pi + t, kind) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-dimensional maximisers") {
  const Optimum g = golden_section_maximize([](double x) { return -(x - 1.0) * (x - 1.0) + 2.0; }, -3.0, 4.0);
  CHECK(g.argmax == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(g.value == doctest::Approx(2.0));
  const Optimum s = maximize_1d([](double x) { return std::sin(x); }, 0.0, 2.0 * pi, 64);
  CHECK(s.argmax == doctest::Approx(pi / 2.0).epsilon(1e-8));
  CHECK(s.value == doctest::Approx(1.0));
}

TEST_CASE("optimisation over theta1") {
  SUBCASE("beta = 0") {
    const Optimum o = optimize_ps(0.0, ConstraintKind::sum_plus);
    CHECK(o.value == doctest::Approx(27.0 / 256.0).epsilon(1e-10));
    CHECK(distance_to_optimal_set(o.argmax, ConstraintKind::sum_plus) < 1e-6);
  }
  SUBCASE("beta = -1") {
    const Optimum o = optimize_ps(-1.0, ConstraintKind::sum_plus);
    CHECK(o.value == doctest::Approx(27.0 / 64.0).epsilon(1e-10));
  }
  SUBCASE("beta = 1/3 gives 3/64") {
    CHECK(optimize_ps(1.0 / 3.0, ConstraintKind::sum_plus).value == doctest::Approx(3.0 / 64.0).epsilon(1e-10));
  }
  SUBCASE("argmax does not depend on beta") {
    for (Complex beta : {Complex{0.9}, Complex{-0.4, 0.7}, Complex{0.0, -1.0}}) {
      for (auto kind : {ConstraintKind::sum_plus, ConstraintKind::diff_minus}) {
        CHECK(distance_to_optimal_set(optimize_ps(beta, kind).argmax, kind) < 1e-6);
      }
    }
  }
  SUBCASE("simulator objective agrees with the closed form on the plus family") {
    const Optimum sim = optimize_ps(-1.0, ConstraintKind::sum_plus, Objective::simulator);
    CHECK(sim.value == doctest::Approx(27.0 / 64.0).epsilon(1e-9));
    CHECK(distance_to_optimal_set(sim.argmax, ConstraintKind::sum_plus) < 1e-5);
  }
  SUBCASE("optimal reflectivities") {
    CHECK(std::pow(std::sin(optimal_theta_set(ConstraintKind::sum_plus)[0]), 2) == doctest::Approx(0.25));
    CHECK(std::pow(std::sin(optimal_theta_set(ConstraintKind::sum_minus)[0]), 2) == doctest::Approx(0.75));
    for (double t : optimal_theta_set(ConstraintKind::sum_plus)) CHECK(distance_to_optimal_set(t, ConstraintKind::sum_plus) < 1e-15);
  }
}

TEST_CASE("medium-length scans") {
  CHECK(jf_lengths(JfScanTarget::main_scheme, 3) == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(jf_lengths(JfScanTarget::appendix_a, 2) == std::vector<double>{1.0, 2.0});
  CHECK(jf_lengths(JfScanTarget::appendix_b, 3) == std::vector<double>{0.5, 1.5, 2.5});

  const auto lengths = jf_lengths(JfScanTarget::main_scheme, 200);
  const auto rows = jf_length_scan(lengths, JfScanTarget::main_scheme);
  REQUIRE(rows.size() == 200);
  double running = 0.0;
  for (const auto& r : rows) {
    const double beta = (2.0 + std::cos(r.length_multiple * pi * std::sqrt(1.5))) / 3.0;
    CHECK(std::abs(r.coefficient - beta) < 1e-12);
    CHECK(r.ps_over_p2 == doctest::Approx(plus_family(beta, pi / 6.0)).epsilon(1e-12));
    running = std::max(running, r.ps_over_p2);
    CHECK(r.running_max == running);
    CHECK(r.ps_over_p2 <= 3.0 / 64.0 + 1e-15);
  }
  CHECK(rows[0].ps_over_p2 == doctest::Approx(0.036338).epsilon(1e-5));
  CHECK(rows[3].ps_over_p2 == doctest::Approx(0.044563).epsilon(1e-5));

  const auto a = jf_length_scan(jf_lengths(JfScanTarget::appendix_a, 50), JfScanTarget::appendix_a);
  for (const auto& r : a) CHECK(r.ps_over_p2 <= 1.0 / 6.0 + 1e-15);
  CHECK(a[1].ps_over_p2 == doctest::Approx(0.32501015 / 2.0).epsilon(1e-8));

  const auto b = jf_length_scan(jf_lengths(JfScanTarget::appendix_b, 50), JfScanTarget::appendix_b);
  for (const auto& r : b) CHECK(r.ps_over_p2 <= 0.25 + 1e-15);
  CHECK(b[1].ps_over_p2 == doctest::Approx(0.91642835 / 4.0).epsilon(1e-8));

  const std::vector<double> bad{1.0, -2.0};
  CHECK_THROWS_AS(jf_length_scan(bad, JfScanTarget::main_scheme), ConfigError);
}

TEST_CASE("sweeps") {
  SweepSpec spec;
  spec.theta0 = {pi / 4.0};
  for (int d = 0; d <= 90; d += 5) spec.theta1.push_back(d * deg);
  spec.beta = {Complex{0.0}, Complex{-1.0}};
  spec.p = {1.0, 0.5};

  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == spec.theta1.size() * 4);

  // grid order: theta1 slower than beta, beta slower than p
  CHECK(rows[0].beta == Complex{0.0});
  CHECK(rows[0].p == 1.0);
  CHECK(rows[1].p == 0.5);
  CHECK(rows[2].beta == Complex{-1.0});
  CHECK(rows[4].theta1 == doctest::Approx(5 * deg));

  const auto best = std::max_element(rows.begin(), rows.end(),
                                     [](const SweepRow& a, const SweepRow& b) { return a.p_success < b.p_success; });
  CHECK(best->theta1 == doctest::Approx(30 * deg));
  CHECK(best->p_success == doctest::Approx(27.0 / 64.0).epsilon(1e-12));

  for (const auto& r : rows) {
    CHECK(r.ps_over_p2 == doctest::Approx(plus_family(r.beta, r.theta1)).epsilon(1e-12));
    CHECK(r.theta2 == doctest::Approx(pi / 2.0 - r.theta1));
  }
  // beta = -1 rows are four times the beta = 0 rows
  for (std::size_t i = 0; i + 2 < rows.size(); i += 4) {
    CHECK(rows[i + 2].p_success == doctest::Approx(4.0 * rows[i].p_success).epsilon(1e-12));
  }

  const auto serial = run_sweep(spec, Execution::serial);
  REQUIRE(serial.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::memcmp(&serial[i].p_success, &rows[i].p_success, sizeof(double)) == 0);
    CHECK(std::memcmp(&serial[i].fidelity, &rows[i].fidelity, sizeof(double)) == 0);
  }
}

TEST_CASE("sweep validation") {
  SweepSpec spec;
  spec.theta0 = {pi / 4.0};
  spec.theta1 = {0.1, 0.2};
  spec.beta = {Complex{0.0}};
  spec.p = {1.0};
  CHECK_NOTHROW(validate(spec));

  SweepSpec empty = spec;
  empty.theta1.clear();
  CHECK_THROWS_AS(validate(empty), ConfigError);
  CHECK_THROWS_AS(run_sweep(empty), ConfigError);

  SweepSpec descending = spec;
  descending.theta1 = {0.3, 0.2};
  CHECK_NOTHROW(validate(descending));

  SweepSpec zigzag = spec;
  zigzag.theta1 = {0.1, 0.3, 0.2};
  CHECK_THROWS_AS(validate(zigzag), ConfigError);

  SweepSpec bad_p = spec;
  bad_p.p = {1.5};
  CHECK_THROWS_AS(run_sweep(bad_p), ConfigError);
}
