#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "herald/analysis.hpp"
#include "herald/dense.hpp"
#include "herald/errors.hpp"
#include "herald/oracle.hpp"
#include "herald/schemes.hpp"

using namespace herald;
using namespace herald::dense;
using std::numbers::pi;

namespace {

DensityMatrix random_density(std::vector<Subsystem> layout, std::mt19937_64& rng) {
  DensityMatrix rho(std::move(layout));
  std::normal_distribution<double> g;
  const std::size_t n = rho.dim();
  std::vector<Complex> a(n * n);
  for (auto& x : a) x = {g(rng), g(rng)};
  // rho = A A^dag / tr
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * std::conj(a[j * n + k]);
      rho(i, j) = s;
    }
    tr += rho(i, i).real();
  }
  for (auto& x : rho.data()) x /= tr;
  return rho;
}

double max_gap(const DensityMatrix& a, const DensityMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

LocalOperator random_unitary(std::vector<std::string> sites, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> h(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const Complex z = i == j ? Complex{g(rng), 0.0} : Complex{g(rng), g(rng)};
      h[i * dim + j] = Complex{0.0, -1.0} * z;
      h[j * dim + i] = Complex{0.0, -1.0} * std::conj(z);
    }
  }
  return {std::move(sites), dim, oracle::expm(h, dim)};
}

}  // namespace

TEST_CASE("layout indexing is mixed radix with the first site most significant") {
  const DensityMatrix rho({{"A", 3}, {"B", 2}, {"m", 2}});
  CHECK(rho.dim() == 12);
  CHECK(rho.stride(0) == 4);
  CHECK(rho.stride(2) == 1);
  const std::vector<int> lv{2, 1, 0};
  CHECK(rho.index(lv) == 10);
  CHECK(rho.levels(10) == lv);
  CHECK(rho.site("B") == 1);
  CHECK_THROWS_AS(rho.site("Z"), LabelError);
}

TEST_CASE("parallel, serial and brute-force kernels agree") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 4; ++trial) {
    const DensityMatrix rho = random_density({{"A", 3}, {"B", 3}, {"C", 2}, {"m", 2}}, rng);
    const std::vector<std::vector<std::string>> site_sets{{"B"}, {"C", "A"}, {"A", "m"}, {"m", "B", "C"}};
    for (const auto& sites : site_sets) {
      std::size_t dim = 1;
      for (const auto& s : sites) dim *= static_cast<std::size_t>(rho.layout()[rho.site(s)].dim);
      const LocalOperator op = random_unitary(sites, dim, rng);
      DensityMatrix par = rho;
      DensityMatrix ser = rho;
      DensityMatrix brute = rho;
      apply_local_parallel(par, op);
      apply_local_serial(ser, op);
      apply_local_bruteforce(brute, op);
      CHECK(std::memcmp(par.data().data(), ser.data().data(), par.data().size_bytes()) == 0);
      CHECK(max_gap(ser, brute) < 1e-13);
      CHECK(ser.trace() == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("channels preserve trace when complete") {
  std::mt19937_64 rng(8);
  DensityMatrix rho = random_density({{"A", 3}, {"m", 2}}, rng);
  const double a = std::sqrt(0.3);
  const double b = std::sqrt(0.7);
  const LocalOperator k0{{"m"}, 2, {1.0, 0.0, 0.0, a}};
  const LocalOperator k1{{"m"}, 2, {0.0, b, 0.0, 0.0}};
  DensityMatrix ser = rho;
  apply_channel(rho, {k0, k1});
  apply_channel(ser, {k0, k1}, Execution::serial);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(max_gap(rho, ser) < 1e-15);
}

TEST_CASE("reductions") {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = random_density({{"A", 3}, {"B", 2}, {"C", 3}}, rng);

  SUBCASE("trace_out equals the sum of projections") {
    DensityMatrix sum = project(rho, "B", 0);
    sum = add(sum, project(rho, "B", 1));
    CHECK(max_gap(sum, trace_out(rho, "B")) < 1e-15);
    CHECK(trace_out(rho, "B").dim() == 9);
  }
  SUBCASE("append_ground then trace_out is the identity") {
    const DensityMatrix big = append_ground(rho, {"m", 2});
    CHECK(big.dim() == 36);
    CHECK(max_gap(trace_out(big, "m"), rho) < 1e-15);
    CHECK(max_gap(project(big, "m", 0), rho) < 1e-15);
    CHECK(project(big, "m", 1).trace() == 0.0);
  }
  SUBCASE("keep_only matches repeated trace_out") {
    CHECK(max_gap(keep_only(rho, "C"), trace_out(trace_out(rho, "A"), "B")) < 1e-15);
  }
  SUBCASE("joint distribution is the diagonal") {
    const std::vector<std::string> sites{"C", "A"};
    const auto dist = joint_distribution(rho, sites);
    double sum = 0.0;
    for (const auto& [k, v] : dist) sum += v;
    CHECK(sum == doctest::Approx(rho.trace()).epsilon(1e-14));
    const DensityMatrix ca = trace_out(rho, "B");
    const std::vector<int> lv{1, 2};  // A = 1, C = 2 in layout order
    CHECK(dist.at({2, 1}) == doctest::Approx(ca(ca.index(lv), ca.index(lv)).real()));
  }
  SUBCASE("diagonal mixtures") {
    const DensityMatrix d = diagonal_mixture({{"A", 3}, {"B", 3}}, {{{1, 1}, 0.25}, {{2, 0}, 0.75}});
    CHECK(d.trace() == doctest::Approx(1.0));
    const std::vector<int> lv{2, 0};
    CHECK(d(d.index(lv), d.index(lv)).real() == 0.75);
  }
}

TEST_CASE("matrix exponential") {
  SUBCASE("diagonal") {
    const std::vector<Complex> h{Complex{0.0, 1.0}, 0.0, 0.0, Complex{-2.0, 0.0}};
    const auto u = oracle::expm(h, 2);
    CHECK(std::abs(u[0] - std::polar(1.0, 1.0)) < 1e-14);
    CHECK(std::abs(u[3] - std::exp(-2.0)) < 1e-14);
    CHECK(std::abs(u[1]) < 1e-15);
  }
  SUBCASE("rotation generator") {
    for (double t : {0.1, 1.0, 7.5, 40.0}) {
      const std::vector<Complex> h{0.0, -t, t, 0.0};
      const auto u = oracle::expm(h, 2);
      CHECK(std::abs(u[0] - std::cos(t)) < 1e-12);
      CHECK(std::abs(u[1] + std::sin(t)) < 1e-12);
      CHECK(std::abs(u[2] - std::sin(t)) < 1e-12);
    }
  }
  SUBCASE("nilpotent") {
    const std::vector<Complex> h{0.0, 3.0, 0.0, 0.0};
    const auto u = oracle::expm(h, 2);
    CHECK(std::abs(u[1] - 3.0) < 1e-14);
    CHECK(std::abs(u[0] - 1.0) < 1e-14);
  }
}

TEST_CASE("dense element operators are unitary") {
  const auto check_unitary = [](const LocalOperator& op) {
    double worst = 0.0;
    for (std::size_t i = 0; i < op.dim; ++i) {
      for (std::size_t j = 0; j < op.dim; ++j) {
        Complex s{};
        for (std::size_t k = 0; k < op.dim; ++k) s += std::conj(op(k, i)) * op(k, j);
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    }
    return worst;
  };
  CHECK(check_unitary(oracle::beam_splitter_operator("A", "B", 0.7, -0.3, 4)) < 1e-12);
  CHECK(check_unitary(oracle::phase_operator("A", 0.7, 4)) < 1e-15);
  CHECK(check_unitary(oracle::jf_operator("B", "E1", "E2", JfParams{1.7, 0.4, true}, 2)) < 1e-12);

  // the absorber is only specified on |n <= 2, g>, where it is an isometry
  const auto t = oracle::generic_tpam_operator("A", "m", GenericTpam::unitary_from_beta({0.3, 0.2}), 4);
  for (std::size_t i = 0; i <= 4; i += 2) {
    for (std::size_t j = 0; j <= 4; j += 2) {
      Complex s{};
      for (std::size_t k = 0; k < t.dim; ++k) s += std::conj(t(k, i)) * t(k, j);
      CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("dense circuits agree with the sparse schemes") {
  SchemeConfig cfg;
  cfg.source.p = 0.7;
  std::tie(cfg.bs1, cfg.bs2) = constrained_splitters(0.6, ConstraintKind::sum_plus);
  cfg.tpam = GenericTpam::unitary_from_beta({-0.3, 0.5});

  for (auto variant : {SchemeVariant::main, SchemeVariant::doubled, SchemeVariant::appendix_a,
                       SchemeVariant::appendix_b}) {
    cfg.variant = variant;
    CAPTURE(to_string(variant));
    const SchemeResult sparse = run_scheme(cfg);
    const auto o = oracle::run_dense(cfg);
    CHECK(std::abs(sparse.p_success - o.p_success) < 1e-10);
    CHECK(std::abs(sparse.fidelity - o.fidelity) < 1e-10);
    CHECK(o.detector_modes.size() == sparse.detector_modes.size());
  }

  cfg.variant = SchemeVariant::main;
  cfg.tpam = JfTpam{JfParams{3.0}, {0, 0}};
  CHECK(std::abs(run_scheme(cfg).p_success - oracle::run_dense(cfg).p_success) < 1e-10);

  cfg.variant = SchemeVariant::doubled;
  CHECK_THROWS_AS(oracle::run_dense(cfg), UnsupportedInputError);
}

TEST_CASE("dense circuits are identical in serial and parallel") {
  SchemeConfig cfg;
  cfg.source.p = 0.9;
  std::tie(cfg.bs1, cfg.bs2) = constrained_splitters(0.4, ConstraintKind::diff_plus);
  cfg.tpam = GenericTpam::unitary_from_beta(0.2);
  const auto par = oracle::run_dense(cfg, Execution::parallel);
  const auto ser = oracle::run_dense(cfg, Execution::serial);
  CHECK(std::memcmp(&par.p_success, &ser.p_success, sizeof(double)) == 0);
  CHECK(par.outcomes == ser.outcomes);
}
