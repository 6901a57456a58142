#include "lsa/lsa.h"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

json take(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(s);
  lsa_string_free(s);
  return j;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lsa_test_capi_" + name)).string();
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(lsa_version()) == "1.0.0");
  CHECK(std::string(lsa_status_name(LSA_OK)) == "Ok");
  CHECK(std::string(lsa_status_name(LSA_BUDGET_EXCEEDED)) == "BudgetExceeded");
  CHECK(std::string(lsa_status_name(LSA_IO_ERROR)) == "IoError");
}

TEST_CASE("dictionary lifecycle") {
  const double re[] = {1, 0, 0, 1, 0.6, 0.8};
  lsa_dictionary* d = nullptr;
  REQUIRE(lsa_dictionary_create(2, 3, re, nullptr, 0, 1e-10, &d) == LSA_OK);
  CHECK(lsa_dictionary_rows(d) == 2);
  CHECK(lsa_dictionary_atoms(d) == 3);
  double mu = 0;
  CHECK(lsa_coherence(d, &mu) == LSA_OK);
  CHECK(mu == doctest::Approx(0.8));
  int spark = 0, inf = 0;
  CHECK(lsa_spark(d, 1e-10, 0, &spark, &inf) == LSA_OK);
  CHECK(spark == 3);
  CHECK(inf == 0);

  char* text = nullptr;
  REQUIRE(lsa_dictionary_to_json(d, &text) == LSA_OK);
  lsa_dictionary* back = nullptr;
  CHECK(lsa_dictionary_from_json(text, 0, &back) == LSA_OK);
  char* text2 = nullptr;
  REQUIRE(lsa_dictionary_to_json(back, &text2) == LSA_OK);
  CHECK(std::string(text) == text2);
  lsa_string_free(text);
  lsa_string_free(text2);

  const auto path = temp_path("dict.json");
  CHECK(lsa_dictionary_save(d, path.c_str()) == LSA_OK);
  lsa_dictionary* loaded = nullptr;
  CHECK(lsa_dictionary_load(path.c_str(), 0, &loaded) == LSA_OK);
  CHECK(lsa_dictionary_atoms(loaded) == 3);
  std::remove(path.c_str());

  char* report = nullptr;
  REQUIRE(lsa_analyze(d, 1, 1e-10, 0, &report) == LSA_OK);
  const auto r = take(report);
  CHECK(r["spark"] == 3);
  CHECK(r["generalized_coherence"]["1"].get<double>() == doctest::Approx(0.8));

  lsa_dictionary_free(loaded);
  lsa_dictionary_free(back);
  lsa_dictionary_free(d);
  lsa_dictionary_free(nullptr);
}

TEST_CASE("error codes cross the boundary") {
  lsa_dictionary* d = nullptr;
  const double zero[] = {0, 0, 1, 0};
  CHECK(lsa_dictionary_create(2, 2, zero, nullptr, 0, 1e-10, &d) == LSA_ZERO_COLUMN);
  CHECK(std::string(lsa_last_error()).size() > 0);
  const double unnorm[] = {2, 0};
  CHECK(lsa_dictionary_create(2, 1, unnorm, nullptr, 0, 1e-10, &d) == LSA_NOT_NORMALIZED);
  CHECK(lsa_dictionary_create(2, 1, unnorm, nullptr, 1, 1e-10, &d) == LSA_OK);
  CHECK(std::string(lsa_last_error()).empty());
  lsa_dictionary_free(d);
  const double nan[] = {NAN, 1};
  CHECK(lsa_dictionary_create(2, 1, nan, nullptr, 1, 1e-10, &d) == LSA_NON_FINITE_ENTRY);
  CHECK(lsa_dictionary_from_json("{", 0, &d) == LSA_PARSE_ERROR);
  CHECK(lsa_dictionary_load(temp_path("missing").c_str(), 0, &d) == LSA_IO_ERROR);
  CHECK(lsa_dictionary_create(2, 1, nullptr, nullptr, 0, 1e-10, &d) == LSA_INVALID_ARGUMENT);
  char* out = nullptr;
  CHECK(lsa_bound("nope", "{}", &out) == LSA_INVALID_ARGUMENT);
  CHECK(lsa_construct("kerdock", R"({"m": 3})", nullptr, nullptr) == LSA_ODD_DIMENSION);
  CHECK(lsa_construct("tight-example", R"({"m": 2, "k": 1, "eps": 0.5})", nullptr, nullptr) ==
        LSA_DIMENSION_TOO_SMALL);
  CHECK(lsa_verify_suite("nope", 1, 0, &out, nullptr, nullptr) == LSA_INVALID_ARGUMENT);
  lsa_image* img = nullptr;
  CHECK(lsa_image_synthetic_blobs(100, 1, &img) == LSA_INVALID_ARGUMENT);
}

TEST_CASE("construct and solve") {
  lsa_dictionary* d = nullptr;
  char* bundle = nullptr;
  REQUIRE(lsa_construct("tight-example", R"({"m": 9, "k": 2, "eps": 0.5})", &d, &bundle) == LSA_OK);
  const auto b = take(bundle);
  CHECK(b["construction"] == "tight-example");
  const json target = b["targets"][0]["b"];

  json req = {{"problem", "approx"}, {"k", 2}, {"eps", 0.5}, {"target", target}, {"restrict", {1}}};
  char* result = nullptr;
  REQUIRE(lsa_solve(d, req.dump().c_str(), &result) == LSA_OK);
  const auto r = take(result);
  CHECK(r["problem"] == "approx");
  CHECK(r["restricted_counts"]["1"].get<int>() >= 4);

  req = {{"problem", "sparse"}, {"k", 2}, {"target", target}, {"budget", 1}};
  CHECK(lsa_solve(d, req.dump().c_str(), &result) == LSA_BUDGET_EXCEEDED);
  req = {{"problem", "approx"}, {"k", 2}, {"eps", -0.5}, {"target", target}};
  CHECK(lsa_solve(d, req.dump().c_str(), &result) == LSA_INVALID_ARGUMENT);
  CHECK(lsa_construct("identity-bad-b", R"({"m": 4, "k": 1, "eps": 0.9})", nullptr, nullptr) ==
        LSA_EPS_OUT_OF_RANGE);
  lsa_dictionary_free(d);
}

TEST_CASE("witness and conditions") {
  const double re[] = {1, 0, 0, 1, 0.6, 0.8};
  lsa_dictionary* d = nullptr;
  REQUIRE(lsa_dictionary_create(2, 3, re, nullptr, 0, 1e-10, &d) == LSA_OK);
  char* out = nullptr;
  REQUIRE(lsa_witness(d, 1, 7, &out) == LSA_OK);
  const auto w = take(out);
  CHECK(w["verified_count"].get<int>() >= 2);
  REQUIRE(lsa_list_sparse_conditions(d, 1, 2, 0, &out) == LSA_OK);
  const auto c = take(out);
  CHECK(c["finite"] == true);
  CHECK(c["at_most_two"] == true);
  lsa_dictionary_free(d);
}

TEST_CASE("bounds by name") {
  char* out = nullptr;
  REQUIRE(lsa_bound("spherical", R"({"mu": 0.25, "eps": 0.6})", &out) == LSA_OK);
  CHECK(take(out)["value"] == 1);
  REQUIRE(lsa_bound("spherical", R"({"mu": 0.25, "eps": 0.9})", &out) == LSA_OK);
  CHECK(take(out)["value"] == "not_applicable");
  REQUIRE(lsa_bound("simplex-radius", R"({"n": 4})", &out) == LSA_OK);
  CHECK(take(out)["value"].get<double>() == doctest::Approx(std::sqrt(3.0 / 8.0)));
  REQUIRE(lsa_bound("mu-k-upper", R"({"mu": 0.1, "k": 2})", &out) == LSA_OK);
  const auto j = take(out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.2 / 0.9));
  CHECK(j["simple"].get<double>() == doctest::Approx(0.3));
}

TEST_CASE("verify suite") {
  char* out = nullptr;
  char* csv = nullptr;
  int violations = -1;
  REQUIRE(lsa_verify_suite("identity", 42, 0, &out, &csv, &violations) == LSA_OK);
  CHECK(violations == 0);
  const auto j = take(out);
  CHECK(j["suite"] == "identity");
  CHECK(std::string(csv).rfind("dictionary,k,eps,", 0) == 0);
  lsa_string_free(csv);
}

TEST_CASE("images") {
  lsa_image* img = nullptr;
  REQUIRE(lsa_image_synthetic_blobs(64, 1, &img) == LSA_OK);
  CHECK(lsa_image_side(img) == 64);
  lsa_image* rec = nullptr;
  char* stats = nullptr;
  REQUIRE(lsa_compress(img, R"({"class": 2, "keep": 1.0, "depth": 3})", &rec, &stats) == LSA_OK);
  CHECK(take(stats)["relative_error"].get<double>() <= 1e-10);
  for (int i = 0; i < 64 * 64; ++i)
    CHECK(std::abs(lsa_image_pixels(rec)[i] - lsa_image_pixels(img)[i]) < 1e-10);
  CHECK(lsa_compress(img, R"({"depth": 9})", nullptr, nullptr) == LSA_DEPTH_TOO_LARGE);

  const auto path = temp_path("img.pgm");
  REQUIRE(lsa_image_save_pgm(img, path.c_str(), 1) == LSA_OK);
  lsa_image* loaded = nullptr;
  REQUIRE(lsa_image_load_pgm(path.c_str(), &loaded) == LSA_OK);
  for (int i = 0; i < 64 * 64; ++i) CHECK(lsa_image_pixels(loaded)[i] == lsa_image_pixels(img)[i]);
  std::remove(path.c_str());

  std::vector<double> px(16, 0.5);
  lsa_image* small = nullptr;
  CHECK(lsa_image_create(4, px.data(), &small) == LSA_OK);
  CHECK(lsa_image_create(3, px.data(), &small) == LSA_INVALID_ARGUMENT);
  lsa_image_free(small);
  lsa_image_free(loaded);
  lsa_image_free(rec);
  lsa_image_free(img);
}
