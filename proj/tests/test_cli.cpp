#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(NFOLD_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(NFOLD_FIXTURES) + "/" + name;
}

}  // namespace

TEST_CASE("coherence on 2x2: exit 0 with the expected counts") {
  auto r = run("coherence --grid 2x2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("2 trees") != std::string::npos);
  CHECK(r.out.find("1 edges") != std::string::npos);
  CHECK(r.out.find("H1=0") != std::string::npos);

  auto j = nlohmann::json::parse(run("--format json coherence --grid 2x2").out);
  CHECK(j["result"]["trees"] == 2);
  CHECK(j["result"]["edges"] == 1);
  CHECK(j["result"]["h1"] == 0);
  CHECK(j["status"] == "ok");
  CHECK(j["tool"]["name"] == "nfold");
}

TEST_CASE("identical invocations produce byte-identical JSON") {
  std::string a = run("--format json coherence --grid 2x2x2").out;
  std::string b = run("--format json coherence --grid 2x2x2").out;
  CHECK(a == b);
  std::string c = run("--format json --seed 7 axioms --shape pentagon --instances 2").out;
  std::string d = run("--format json --seed 7 axioms --shape pentagon --instances 2").out;
  CHECK(c == d);
}

TEST_CASE("dw on the torus fixture") {
  auto r = run("dw --cobordism " + fixture("torus.json") + " --group S3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Z = 3") != std::string::npos);

  auto j = nlohmann::json::parse(
      run("--format json dw --cobordism " + fixture("sphere.json") + " --group Z2").out);
  CHECK(j["result"]["Z"] == "1/2");
  CHECK(j["result"]["flat_fields"] == 1);

  // Custom group table from a file.
  auto j2 = nlohmann::json::parse(
      run("--format json dw --cobordism " + fixture("torus.json") + " --group " +
          fixture("group_s3.json"))
          .out);
  CHECK(j2["result"]["Z"] == "3");
}

TEST_CASE("dw compose glues cylinders and verifies coherence") {
  auto r = run("dw compose --left " + fixture("cylinder.json") + " --right " +
               fixture("cylinder.json") + " --dir 1 --group S3 --check-coherence");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Z = 1") != std::string::npos);
  CHECK(r.out.find("bijection") != std::string::npos);

  auto alias = run("dw-compose --left " + fixture("interval.json") + " --right " +
                   fixture("interval.json") + " --dir 1 --group Z3 --check-coherence");
  CHECK(alias.exit_code == 0);

  // Mismatched seams are an input error.
  auto bad = run("dw compose --left " + fixture("cylinder.json") + " --right " +
                 fixture("interval.json") + " --dir 1 --group Z2");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("nerve-check accepts the chain fixture and rejects the broken ones") {
  auto ok = run("nerve-check --input " + fixture("dc_chain2.json") + " --cap 2,2");
  CHECK(ok.exit_code == 0);

  auto broken = run("--format json nerve-check --input " + fixture("broken_nerve.json") +
                    " --cap 2,2");
  auto j = nlohmann::json::parse(broken.out);
  CHECK(j["status"] == "falsified");
  bool has_witness = false;
  for (const auto& w : j["witness"])
    if (w.get<std::string>().find("no filler") != std::string::npos) has_witness = true;
  CHECK(has_witness);

  auto bad_axioms = run("nerve-check --input " + fixture("dc_broken.json") + " --cap 2,2");
  CHECK(bad_axioms.exit_code == 1);
}

TEST_CASE("axioms subcommand runs pointwise checks") {
  auto r = run("--seed 5 axioms --shape hexagon1 --instances 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("hexagon-1") != std::string::npos);
}

TEST_CASE("error exit codes: input 2, capacity 3, unknown flags rejected") {
  CHECK(run("dw --cobordism /nonexistent.json --group Z2").exit_code == 2);
  CHECK(run("coherence --grid 0x2").exit_code == 2);
  CHECK(run("coherence --grid abc").exit_code == 2);
  CHECK(run("coherence --grid 12x12 --max-trees 100").exit_code == 3);
  CHECK(run("coherence --grid 2x2 --bogus-flag").exit_code == 2);
  CHECK(run("dw --group Z2").exit_code == 2);  // missing --cobordism
}

TEST_CASE("emit-complex writes a JSON 2-complex") {
  std::string out_path = "/tmp/nfold_test_complex.json";
  auto r = run("coherence --grid 2x3 --emit-complex " + out_path);
  CHECK(r.exit_code == 0);
  std::ifstream in(out_path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j["vertices"].size() == 8);
  CHECK(j["cells"].size() >= 1);
}
