#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "miso/classify.hpp"
#include "miso/io.hpp"
#include "miso/runner.hpp"
#include "multiiso.h"

using namespace miso;
using testutil::conjugate_tuple;
using testutil::random_unitary;

namespace {
std::string canonical2_instance(Complex c, Complex theta) {
  Instance inst;
  inst.tuple = canonical2_build({c, theta});
  return dump_normalized(instance_to_json(inst));
}
} // namespace

TEST_CASE("instance parse and serialize round-trip byte-identically") {
  std::string text = canonical2_instance(0.5, 1.0);
  Instance inst = parse_instance(text);
  CHECK(inst.tuple.dim_E == 2);
  CHECK(inst.tuple.n() == 2);
  CHECK(dump_normalized(instance_to_json(inst)) == text);

  std::mt19937_64 rng(501);
  Instance rnd;
  rnd.tuple = complete_tuple(
      {{random_unitary(3, rng), testutil::random_projection(3, 1, rng)}});
  std::string t2 = dump_normalized(instance_to_json(rnd));
  CHECK(dump_normalized(instance_to_json(parse_instance(t2))) == t2);
}

TEST_CASE("parser rejects malformed documents") {
  CHECK_THROWS_AS(parse_instance("not json"), InputError);
  CHECK_THROWS_AS(parse_instance("{}"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"dim":2,"n":1,"tuple":[],"extra":1})"),
                  InputError);

  nlohmann::json doc = nlohmann::json::parse(canonical2_instance(0.5, 1.0));
  doc["tuple"][0]["Q"] = doc["tuple"][0]["P"];
  CHECK_THROWS_AS(parse_instance_json(doc), InputError);

  doc = nlohmann::json::parse(canonical2_instance(0.5, 1.0));
  doc["dim"] = 3; // inconsistent with the matrices
  CHECK_THROWS_AS(parse_instance_json(doc), InputError);
}

TEST_CASE("matrix serialization uses [re, im] pairs") {
  ComplexMatrix m(1, 2);
  m << Complex(1, -2), Complex(0, 0.5);
  Json j = matrix_to_json(m);
  CHECK(j[0][0][0].get<double>() == 1.0);
  CHECK(j[0][0][1].get<double>() == -2.0);
  CHECK(frob(matrix_from_json(j, "m") - m) < 1e-15);
}

TEST_CASE("run_command validate and exit codes") {
  std::string good = canonical2_instance(0.5, 1.0);
  auto ok = run_command("validate", good, "");
  CHECK(ok.code == 0);
  auto rep = nlohmann::json::parse(ok.json);
  CHECK(rep["pass"].get<bool>());
  CHECK(rep["residuals"]["commutation"].get<double>() < 1e-10);

  auto parse_fail = run_command("validate", "{]", "");
  CHECK(parse_fail.code == 2);

  auto unknown = run_command("frobnicate", good, "");
  CHECK(unknown.code == 2);

  // checked-fail: P2 replaced by the identity breaks the resolution
  nlohmann::json doc = nlohmann::json::parse(good);
  doc["tuple"][1]["P"] =
      matrix_to_json(ComplexMatrix::Identity(2, 2));
  auto bad = run_command("validate", doc.dump(), "");
  CHECK(bad.code == 1);
  CHECK_FALSE(nlohmann::json::parse(bad.json)["pass"].get<bool>());
}

TEST_CASE("run_command equiv separates and identifies") {
  std::string a = canonical2_instance(0.5, 1.0);
  std::string b = canonical2_instance(0.5, Complex(0, 1));
  nlohmann::json opts;
  opts["instance_b"] = nlohmann::json::parse(b);
  auto diff = run_command("equiv", a, opts.dump());
  CHECK(diff.code == 1);
  CHECK(nlohmann::json::parse(diff.json)["artifacts"]["status"] ==
        "not_equivalent");

  opts["instance_b"] = nlohmann::json::parse(a);
  auto same = run_command("equiv", a, opts.dump());
  CHECK(same.code == 0);
  CHECK(nlohmann::json::parse(same.json)["artifacts"]["status"] == "equivalent");
}

TEST_CASE("reports are reproducible for a fixed seed") {
  std::string a = canonical2_instance(0.3, Complex(0, 1));
  std::mt19937_64 rng(503);
  Instance conj;
  conj.tuple = conjugate_tuple(parse_instance(a).tuple, random_unitary(2, rng));
  nlohmann::json opts;
  opts["instance_b"] = nlohmann::json::parse(dump_normalized(instance_to_json(conj)));
  opts["seed"] = 7;
  auto first = run_command("equiv", a, opts.dump());
  auto second = run_command("equiv", a, opts.dump());
  CHECK(first.code == 0);
  CHECK(first.json == second.json);

  auto p1 = run_command("pivotal", a, R"({"seed": 3})");
  auto p2 = run_command("pivotal", a, R"({"seed": 3})");
  CHECK(p1.json == p2.json);
}

TEST_CASE("parameter commands produce valid instances") {
  auto can = run_command(
      "canonical",
      R"({"params":{"kind":"canonical2","c":[0.5,0],"theta":[0,1]}})", "");
  REQUIRE(can.code == 0);
  auto rep = nlohmann::json::parse(can.json);
  Instance built = parse_instance_json(rep["artifacts"]["instance"]);
  CHECK(validate_model(built.tuple).pass);

  auto bl = run_command(
      "blaschke", R"({"params":{"phis":[{"zeros":[[0,0]]}], "trunc": 16}})",
      "");
  REQUIRE(bl.code == 0);
  auto brep = nlohmann::json::parse(bl.json);
  Instance bmodel = parse_instance_json(brep["artifacts"]["instance"]);
  CHECK(bmodel.tuple.dim_E == 2);

  auto nb = run_command("nonblaschke", "", "");
  CHECK(nb.code == 0);
  CHECK(nlohmann::json::parse(nb.json)["artifacts"]["product_multiplicity"] == 4);
}

TEST_CASE("the shared-library entry points mirror run_command") {
  std::string good = canonical2_instance(0.5, 1.0);
  miso_result* result = nullptr;
  int code = miso_run("validate", good.c_str(), "", &result);
  REQUIRE(result != nullptr);
  CHECK(code == 0);
  CHECK(miso_result_code(result) == 0);
  auto rep = nlohmann::json::parse(miso_result_json(result));
  CHECK(rep["command"] == "validate");
  CHECK(rep["pass"].get<bool>());
  miso_result_free(result);

  result = nullptr;
  code = miso_run("validate", "garbage", "", &result);
  CHECK(code == 2);
  miso_result_free(result);

  CHECK(std::string(miso_version()) == version_string());
}
