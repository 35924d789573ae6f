#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run herald(const std::string& args) {
  const std::string cmd = "SOURCE_DATE_EPOCH=0 '" HERALD_CLI_PATH "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("run prints a manifest with the expected probability") {
  const Run r = herald("run --scheme main --p 1 --theta1 30deg");
  REQUIRE(r.status == 0);
  const json m = json::parse(r.out);
  CHECK(m["kind"] == "run");
  CHECK(m["result"]["p_success"].get<double>() == doctest::Approx(0.10547).epsilon(1e-5 / 0.10547));
  CHECK(m["result"]["fidelity"].get<double>() == doctest::Approx(1.0));
  CHECK(m["result"]["constraint"]["kind"] == "sum_plus");
  CHECK(m["timestamp"] == "1970-01-01T00:00:00Z");
}

TEST_CASE("run with a four-wave-mixing absorber and the appendix schemes") {
  Run r = herald("run --theta1 30deg --tpam 'jf:M=1,condition=(0,0)'");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["result"]["p_success"].get<double>() == doctest::Approx(0.036338).epsilon(1e-4));

  r = herald("run --scheme appendix-b --p 1");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["result"]["p_success"].get<double>() == doctest::Approx(0.2291).epsilon(5e-4 / 0.2291));

  r = herald("run --scheme main --p 0 --theta1 30deg");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["result"]["p_success"].get<double>() == 0.0);
  CHECK(json::parse(r.out)["result"]["ps_over_p2"].is_null());
}

TEST_CASE("constraint cases derive the second splitter") {
  const Run r = herald("run --theta1 30deg --tpam generic:beta=-1 --case diff_minus");
  REQUIRE(r.status == 0);
  const json m = json::parse(r.out);
  CHECK(m["result"]["constraint"]["kind"] == "diff_minus");
  CHECK(m["result"]["metadata"]["single_photon_click_probability"].get<double>() < 1e-20);
}

TEST_CASE("exit codes for bad input") {
  CHECK(herald("run --bogus").status == 2);
  CHECK(herald("run --tpam 'generic:beta=5'").status == 2);
  CHECK(herald("run --tpam 'quantum:foo=1'").status == 2);
  CHECK(herald("run --p 1.5 --theta1 30deg").status == 2);
  CHECK(herald("run --theta1 thirty").status == 2);
  CHECK(herald("verify --suite nope").status == 2);
  CHECK(herald("frobnicate").status == 2);
  CHECK(herald("run --cutoff 1 --theta1 30deg").status == 3);
  CHECK(herald("run --scheme appendix-a --length 1.5").status == 2);
}

TEST_CASE("output is deterministic apart from the timestamp") {
  const Run a = herald("run --theta1 0.4 --p 0.7 --tpam generic:beta=0.2+0.3i");
  const Run b = herald("run --theta1 0.4 --p 0.7 --tpam generic:beta=0.2+0.3i");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);

  json ma = json::parse(a.out);
  const Run c = herald("run --theta1 0.4 --p 0.7 --tpam generic:beta=0.2+0.3i");
  json mc = json::parse(c.out);
  ma.erase("timestamp");
  mc.erase("timestamp");
  CHECK(ma == mc);
}

TEST_CASE("config files round trip through the manifest") {
  const Run first = herald("run --theta1 25deg --p 0.9 --tpam generic:beta=-0.5 -o cli_first.json");
  REQUIRE(first.status == 0);
  const json m1 = json::parse(slurp("cli_first.json"));

  const Run second = herald("run --config cli_first.json");
  REQUIRE(second.status == 0);
  const json m2 = json::parse(second.out);
  CHECK(m2["config"] == m1["config"]);
  CHECK(m2["config_hash"] == m1["config_hash"]);
  CHECK(m2["result"] == m1["result"]);

  spit("cli_bad.json", R"({"scheme":"main","wavelength":800})");
  CHECK(herald("run --config cli_bad.json").status == 2);
  spit("cli_broken.json", "{not json");
  CHECK(herald("run --config cli_broken.json").status == 2);
}

TEST_CASE("sweep tables") {
  spit("cli_sweep.json", R"({"theta1":{"start":"0deg","stop":"90deg","count":19},"beta":[0,-1]})");
  REQUIRE(herald("sweep cli_sweep.json -o cli_sweep_a.csv").status == 0);
  REQUIRE(herald("sweep cli_sweep.json -o cli_sweep_b.csv").status == 0);
  REQUIRE(herald("sweep cli_sweep.json --serial -o cli_sweep_s.csv").status == 0);
  const std::string a = slurp("cli_sweep_a.csv");
  CHECK(a == slurp("cli_sweep_b.csv"));
  CHECK(a == slurp("cli_sweep_s.csv"));

  std::istringstream lines(a);
  std::string line;
  std::getline(lines, line);
  CHECK(line.back() == '\r');
  double best = -1.0;
  double best_theta = 0.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream fields(line);
    std::vector<double> v;
    for (std::string f; std::getline(fields, f, ',');) v.push_back(std::stod(f));
    REQUIRE(v.size() == 11);
    if (v[8] > best) {
      best = v[8];
      best_theta = v[1];
    }
  }
  CHECK(rows == 38);
  CHECK(best_theta * 180.0 / 3.14159265358979323846 == doctest::Approx(30.0));
  CHECK(best == doctest::Approx(27.0 / 64.0));

  REQUIRE(herald("sweep cli_sweep.json -o cli_sweep_m.csv --manifest cli_sweep_m.json").status == 0);
  const json m = json::parse(slurp("cli_sweep_m.json"));
  CHECK(m["kind"] == "sweep");

  spit("cli_empty.json", R"({"theta1":[]})");
  CHECK(herald("sweep cli_empty.json").status == 2);
  CHECK(herald("sweep does_not_exist.json").status == 2);
}

TEST_CASE("optimize and scan") {
  Run r = herald("optimize --beta -1 --case sum_plus");
  REQUIRE(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["ps_over_p2"].get<double>() == doctest::Approx(27.0 / 64.0));
  CHECK(j["theta1_deg"].get<double>() == doctest::Approx(30.0));

  r = herald("optimize --beta 0 --case sum_plus --objective simulator");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["ps_over_p2"].get<double>() == doctest::Approx(27.0 / 256.0).epsilon(1e-8));

  r = herald("scan --target main --count 4");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("length_multiple,", 0) == 0);
  CHECK(r.out.find("0.0363382") != std::string::npos);
}

TEST_CASE("verify suites") {
  CHECK(herald("verify --suite invariants --draws 10").status == 0);

  const Run ref = herald("verify --suite reference-values --json cli_ref.json");
  const json checks = json::parse(slurp("cli_ref.json"));
  REQUIRE(checks.size() == 12);
  bool all = true;
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  CHECK(ref.status == (all ? 0 : 1));

  const Run alias = herald("verify --suite paper-values --json cli_alias.json");
  CHECK(alias.status == ref.status);
  CHECK(alias.out == ref.out);
  CHECK(slurp("cli_alias.json") == slurp("cli_ref.json"));
}
