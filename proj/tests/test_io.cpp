#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "herald/errors.hpp"
#include "herald/io.hpp"

using namespace herald;
using namespace herald::io;
using std::numbers::pi;

namespace {

struct EnvGuard {
  std::string name;
  explicit EnvGuard(std::string n, const char* value) : name(std::move(n)) {
    if (value) {
      setenv(name.c_str(), value, 1);
    } else {
      unsetenv(name.c_str());
    }
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

SchemeConfig sample_config() {
  SchemeConfig cfg;
  cfg.source.p = 0.8;
  std::tie(cfg.bs1, cfg.bs2) = constrained_splitters(pi / 6.0, ConstraintKind::sum_plus);
  cfg.tpam = GenericTpam::unitary_from_beta({-0.5, 0.25});
  return cfg;
}

}  // namespace

TEST_CASE("angles") {
  CHECK(parse_angle("30deg") == doctest::Approx(pi / 6.0));
  CHECK(parse_angle(" 0.5rad ") == 0.5);
  CHECK(parse_angle("1.25") == 1.25);
  CHECK(parse_angle("-90deg") == doctest::Approx(-pi / 2.0));
  for (const char* bad : {"", "deg", "thirty", "30 degrees", "nan", "1e999"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_angle(bad), ConfigError);
  }
}

TEST_CASE("cutoff from the environment") {
  {
    EnvGuard g("FOCK_CUTOFF", nullptr);
    CHECK(default_cutoff() == kDefaultCutoff);
  }
  {
    EnvGuard g("FOCK_CUTOFF", "6");
    CHECK(default_cutoff() == 6);
    CHECK(config_from_json(json::object()).cutoff == 6);
  }
  for (const char* bad : {"0", "-2", "four", "3.5"}) {
    EnvGuard g("FOCK_CUTOFF", bad);
    CHECK_THROWS_AS(default_cutoff(), ConfigError);
  }
}

TEST_CASE("config round trip") {
  const SchemeConfig cfg = sample_config();
  const json j = config_to_json(cfg);
  CHECK(j["scheme"] == "main");
  CHECK(j["tpam"].get<std::string>().rfind("generic:", 0) == 0);
  const SchemeConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.bs2.theta == cfg.bs2.theta);
  CHECK(std::get<GenericTpam>(back.tpam).beta == std::get<GenericTpam>(cfg.tpam).beta);

  SchemeConfig a;
  a.variant = SchemeVariant::appendix_a;
  const json ja = config_to_json(a);
  CHECK(ja["appendix_length"] == 2.0);
  CHECK_FALSE(ja.contains("bs1"));
  CHECK_FALSE(ja.contains("tpam"));
}

TEST_CASE("config parsing accepts units and rejects junk") {
  const json j = json::parse(R"J({"scheme":"doubled","p":"0.5","bs1":{"theta":"30deg"},"bs2":{"theta":"60deg"},
                                 "tpam":"jf:M=2,condition=(0,0)"})J");
  const SchemeConfig cfg = config_from_json(j);
  CHECK(cfg.variant == SchemeVariant::doubled);
  CHECK(cfg.source.p == 0.5);
  CHECK(cfg.bs1.theta == doctest::Approx(pi / 6.0));
  CHECK(std::holds_alternative<JfTpam>(cfg.tpam));

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"colour":"red"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bs1":{"theta":1,"psi":2}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"cutoff":0})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"scheme":"nope"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse("[1,2]")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bs1":{"theta":true}})")), ConfigError);
}

TEST_CASE("FNV-1a vectors and config hashes") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);

  const json j = config_to_json(sample_config());
  const std::string h = config_hash(j);
  CHECK(h.size() == 16);
  CHECK(h == config_hash(config_to_json(config_from_json(j))));
  SchemeConfig other = sample_config();
  other.source.p = 0.81;
  CHECK(config_hash(config_to_json(other)) != h);
}

TEST_CASE("timestamps honour SOURCE_DATE_EPOCH") {
  {
    EnvGuard g("SOURCE_DATE_EPOCH", "0");
    CHECK(timestamp_now() == "1970-01-01T00:00:00Z");
  }
  {
    EnvGuard g("SOURCE_DATE_EPOCH", "1700000000");
    CHECK(timestamp_now() == "2023-11-14T22:13:20Z");
  }
  EnvGuard g("SOURCE_DATE_EPOCH", nullptr);
  const std::string now = timestamp_now();
  CHECK(now.size() == 20);
  CHECK(now.back() == 'Z');
}

TEST_CASE("result documents") {
  const SchemeConfig cfg = sample_config();
  const SchemeResult r = run_scheme(cfg);
  const json j = result_to_json(cfg, r);
  for (const char* key : {"p_success", "ps_over_p2", "fidelity", "constraint", "branch_log", "detector_modes",
                          "outcomes", "output_number_distribution", "metadata"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(j["p_success"].get<double>() == r.p_success);
  CHECK(j["ps_over_p2"].get<double>() == doctest::Approx(r.p_success / 0.64));
  CHECK(j["constraint"]["kind"] == "sum_plus");
  CHECK(j["constraint"]["nu"] == 0);
  CHECK(j["output_number_distribution"][1].get<double>() == doctest::Approx(1.0));

  SchemeConfig dark = cfg;
  dark.source.p = 0.0;
  const json jd = result_to_json(dark, run_scheme(dark));
  CHECK(jd["ps_over_p2"].is_null());
  CHECK(jd["output_number_distribution"].empty());

  EnvGuard g("SOURCE_DATE_EPOCH", "0");
  const json m = make_manifest("run", {"herald", "run"}, config_to_json(cfg), j);
  CHECK(m["schema_version"] == kSchemaVersion);
  CHECK(m["kind"] == "run");
  CHECK(m["tool_version"] == std::string(kToolVersion));
  CHECK(m["config_hash"] == config_hash(config_to_json(cfg)));
  CHECK(m["timestamp"] == "1970-01-01T00:00:00Z");
  CHECK(m["result"] == j);
}

TEST_CASE("sweep specs") {
  const json j = json::parse(R"({"theta1":{"start":"0deg","stop":"90deg","count":7},
                                 "beta":["0","-1","0.2+0.1i"], "p":[0.5,1]})");
  const SweepSpec spec = sweep_from_json(j);
  CHECK(spec.theta1.size() == 7);
  CHECK(spec.theta1[2] == doctest::Approx(pi / 6.0));
  CHECK(spec.theta0 == std::vector<double>{pi / 4.0});
  CHECK(spec.beta[2] == Complex{0.2, 0.1});
  CHECK(spec.scheme == SchemeVariant::main);

  const SweepSpec again = sweep_from_json(sweep_to_json(spec));
  CHECK(again.theta1 == spec.theta1);
  CHECK(again.beta == spec.beta);
  CHECK(again.p == spec.p);

  const json one = json::parse(R"({"theta1":"30deg"})");
  CHECK(sweep_from_json(one).theta1.size() == 1);

  for (const char* bad : {R"({})", R"({"theta1":[]})", R"({"theta1":{"start":0,"stop":1,"count":0}})",
                          R"({"theta1":[0.1,0.3,0.2]})", R"({"theta1":[0.1],"gamma":1})",
                          R"({"theta1":{"start":0,"stop":1}})", R"({"theta1":[0.1],"p":[2.0]})",
                          R"({"theta1":{"start":0,"stop":1,"count":-3}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(sweep_from_json(json::parse(bad)), ConfigError);
  }
}

TEST_CASE("CSV output") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");

  SweepSpec spec;
  spec.theta0 = {pi / 4.0};
  spec.theta1 = {pi / 6.0, pi / 4.0};
  spec.beta = {Complex{0.0}};
  spec.p = {1.0};
  const auto rows = run_sweep(spec);
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string csv = out.str();
  CHECK(csv.rfind("theta0_rad,theta1_rad,theta2_rad,phi1_rad,phi2_rad,beta_re,beta_im,p,p_success,ps_over_p2,fidelity\r\n",
                  0) == 0);
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++lines;
  CHECK(lines == 3);
  CHECK(csv.find('\n') == csv.find("\r\n") + 1);

  // %.17g survives a text round trip exactly
  const std::string second = csv.substr(csv.find("\r\n") + 2);
  std::vector<double> values;
  std::stringstream fields(second.substr(0, second.find("\r\n")));
  for (std::string f; std::getline(fields, f, ',');) values.push_back(std::stod(f));
  REQUIRE(values.size() == 11);
  CHECK(values[8] == rows[0].p_success);
  CHECK(values[1] == rows[0].theta1);

  std::ostringstream pts;
  write_sweep_points(pts, rows);
  CHECK(pts.str().rfind("# theta0_rad theta1_rad", 0) == 0);
}

TEST_CASE("check tables serialise") {
  const std::vector<verify::CheckResult> checks{{1, "one", true, 0.5, 1e-3, "ok"}, {2, "two", false, 0.1, 1e-6, "bad"}};
  const json j = checks_to_json(checks);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["id"] == 1);
  CHECK(j[1]["pass"] == false);
}
