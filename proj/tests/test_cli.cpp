#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "copekit/cli.hpp"
#include "copekit/io.hpp"
#include "copekit/theories.hpp"

using namespace copekit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "copekit");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("generate piped into certify") {
  auto s = run({"generate", "--theory", "spekkens"});
  REQUIRE(s.code == exit_code::ok);
  CHECK(run({"certify"}, s.out).code == exit_code::ok);

  auto b = run({"generate", "--theory", "boxworld"});
  auto cert = run({"certify"}, b.out);
  CHECK(cert.code == exit_code::contextual);
  CHECK(nlohmann::json::parse(cert.out)["evidence_kind"] == "VertexForcing");

  auto e = run({"generate", "--theory", "extended-boxworld"});
  CHECK(run({"certify"}, e.out).code == exit_code::contextual);

  auto q = run({"generate", "--theory", "qubit", "--count", "5"});
  CHECK(run({"certify"}, q.out).code == exit_code::contextual);

  CHECK(run({"certify", "--backend", "float"}, b.out).code == exit_code::undetermined);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == exit_code::usage);
  CHECK(run({"frobnicate"}).code == exit_code::usage);
  CHECK(run({"certify", "--bogus"}).code == exit_code::usage);
  CHECK(run({"certify"}, "{ not json").code == exit_code::usage);
  CHECK(run({"generate", "--theory", "nope"}).code == exit_code::usage);
}

TEST_CASE("validate") {
  auto b = run({"generate", "--theory", "boxworld"}).out;
  CHECK(run({"validate"}, b).code == exit_code::ok);
  auto j = nlohmann::json::parse(b);
  j["blocks"][0][0][0] = "1/2";
  auto bad = run({"validate"}, j.dump());
  CHECK(bad.code == exit_code::usage);
  CHECK(bad.out.find("column 0") != std::string::npos);
}

TEST_CASE("info, quotient, merge and restrict") {
  auto s = run({"generate", "--theory", "spekkens"}).out;
  auto info = run({"info"}, s);
  CHECK(info.code == exit_code::ok);
  CHECK(info.out.find("rank: 4") != std::string::npos);
  CHECK(info.out.find("fiducial states: yes") != std::string::npos);

  auto e = run({"generate", "--theory", "extended-boxworld"}).out;
  auto q = run({"quotient"}, e);
  CHECK(parse_cope(q.out).num_preparations() == 5);

  CHECK(parse_cope(run({"merge"}, s).out).num_measurements() == 1);

  auto r = run({"restrict", "--preps", "0,1,2,3", "--measurements", "0,1"}, s);
  REQUIRE(r.code == exit_code::ok);
  CHECK(parse_cope(r.out).num_preparations() == 4);
  CHECK(run({"restrict", "--preps", "9", "--measurements", "0"}, s).code == exit_code::usage);
}

TEST_CASE("factorize and verify") {
  auto s = run({"generate", "--theory", "spekkens"}).out;
  for (auto kind : {"pregpt", "gpt", "quasi", "trivial", "nmf", "enmf"}) {
    CAPTURE(kind);
    auto f = run({"factorize", "--kind", kind}, s);
    REQUIRE(f.code == exit_code::ok);
    auto m = parse_model(f.out);
    CHECK(classify_model(spekkens(), m).satisfies(m.kind));
  }
  auto b = run({"generate", "--theory", "boxworld"}).out;
  CHECK(run({"factorize", "--kind", "enmf"}, b).code == exit_code::failed);
  CHECK(run({"factorize", "--kind", "enmf", "-k", "30"}, s).code == exit_code::guard);
  CHECK(run({"certify", "--max-k", "30"}, s).code == exit_code::guard);
}

TEST_CASE("verify reads a model file") {
  auto s = run({"generate", "--theory", "spekkens"}).out;
  const auto dir = std::filesystem::temp_directory_path() / "copekit_cli_test";
  std::filesystem::create_directories(dir);
  const auto good = (dir / "gpt.json").string();
  CHECK(run({"factorize", "--kind", "gpt", "-o", good}, s).code == exit_code::ok);
  auto v = run({"verify", "--model", good}, s);
  CHECK(v.code == exit_code::ok);
  CHECK(v.out.find("satisfies declared kind: yes") != std::string::npos);

  // a GPT relabelled as ontological must fail
  auto j = nlohmann::json::parse(run({"factorize", "--kind", "gpt"}, s).out);
  j["kind"] = "Ontological";
  const auto bad = (dir / "bad.json").string();
  std::ofstream(bad) << j.dump();
  CHECK(run({"verify", "--model", bad}, s).code == exit_code::failed);
  CHECK(run({"verify", "--model", (dir / "missing.json").string()}, s).code == exit_code::usage);
  std::filesystem::remove_all(dir);
}
