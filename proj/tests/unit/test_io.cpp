#include "lsa/io.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <functional>
#include <filesystem>
#include <random>

using namespace lsa;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lsa_test_io_" + name)).string();
}

}  // namespace

TEST_CASE("dictionary json round trip is value-identical") {
  for (bool complex : {false, true}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto d = Dictionary::create(oracle::gaussian_columns(5, 9, seed, complex), false);
      const std::string text = dictionary_to_json(d).dump();
      const auto back = dictionary_from_json(parse_json(text));
      CHECK(back.is_real() == !complex);
      CHECK(back.matrix() == d.matrix());
      CHECK(dictionary_to_json(back).dump() == text);
    }
  }
  const auto j = dictionary_to_json(Dictionary::create(Matrix::Identity(2, 2), false));
  CHECK(j["schema"] == "lsa/1");
  CHECK(j["complex"] == false);
  CHECK(j["columns"][0] == Json::array({1.0, 0.0}));
}

TEST_CASE("shortest round-trip doubles survive a file") {
  Matrix b(2, 1);
  b(0, 0) = 0.1;
  b(1, 0) = std::sqrt(1.0 - 0.01);
  const auto d = Dictionary::create(b, true);
  const auto path = temp_path("dict.json");
  write_text_file(path, dictionary_to_json(d).dump(2));
  CHECK(dictionary_from_json(read_json_file(path)).matrix() == d.matrix());
  std::remove(path.c_str());
}

TEST_CASE("malformed dictionaries are parse errors") {
  CHECK(code_of([] { parse_json("{\"m\": 2,"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(Json::array()); }) == ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2,"n":1})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2,"n":2,"columns":[[1,0]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2,"n":1,"columns":[[1]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2,"n":1,"columns":[[1,"x"]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2,"n":1,"columns":[[[1,0,0],0]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2.5,"n":1,"columns":[[1,0]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { dictionary_from_json(parse_json(R"({"m":2,"n":1,"columns":[[2,0]]})")); }) !=
        ErrorCode{});
  CHECK(dictionary_from_json(parse_json(R"({"m":2,"n":1,"columns":[[2,0]]})"), true).matrix()(0, 0) ==
        Scalar(1.0));
  CHECK(code_of([] { read_json_file(temp_path("missing.json")); }) == ErrorCode::IoError);
}

TEST_CASE("targets") {
  const auto a = target_from_json(parse_json("[1, [0, 2]]"));
  CHECK(a.b(1) == Scalar(0.0, 2.0));
  const auto b = target_from_json(parse_json(R"({"label":"x","b":[0.5,0.5]})"));
  CHECK(b.label == "x");
  CHECK(target_from_json(target_to_json(a)).b == a.b);
  CHECK(code_of([] { target_from_json(parse_json(R"({"label":"x"})")); }) == ErrorCode::ParseError);
}

TEST_CASE("pgm round trips are bit-exact") {
  std::mt19937_64 rng(3);
  for (int maxval : {1, 255, 4095, 65535}) {
    for (bool binary : {false, true}) {
      PgmImage img;
      img.width = 7;
      img.height = 5;
      img.maxval = maxval;
      img.binary = binary;
      for (int i = 0; i < 35; ++i) img.data.push_back(static_cast<std::uint16_t>(rng() % (maxval + 1)));
      const std::string bytes = format_pgm(img);
      const auto back = parse_pgm(bytes);
      CHECK(back.width == 7);
      CHECK(back.height == 5);
      CHECK(back.maxval == maxval);
      CHECK(back.binary == binary);
      CHECK(back.data == img.data);
      CHECK(format_pgm(back) == bytes);
    }
  }
  const auto path = temp_path("img.pgm");
  const auto blobs = image_to_pgm(synthetic_blobs(32, 2));
  write_pgm(path, blobs);
  CHECK(read_pgm(path).data == blobs.data);
  std::remove(path.c_str());
}

TEST_CASE("pgm headers with comments") {
  const auto p = parse_pgm("P2\n# a comment\n2 # inline\n2\n# another\n9\n0 1\n8 9\n");
  CHECK(p.width == 2);
  CHECK(p.maxval == 9);
  CHECK(p.data == std::vector<std::uint16_t>{0, 1, 8, 9});
  const auto img = pgm_to_image(p);
  CHECK(img.at(1, 1) == 1.0);
  CHECK(img.at(1, 0) == 8.0 / 9.0);
  const std::string raw = std::string("P5 2 1 65535\n") + '\x01' + '\x02' + '\xff' + '\xff';
  CHECK(parse_pgm(raw).data == std::vector<std::uint16_t>{0x0102, 0xffff});
}

TEST_CASE("malformed pgm input") {
  for (const std::string bad :
       {"", "P6 1 1 255\n\x01", "P2 1 1", "P2 0 1 255\n", "P2 1 1 70000\n1", "P2 1 1 9\n10",
        "P5 2 2 255\n\x01", "P2 2 2 255\n1 2 3", "P5 1 1 255"}) {
    CHECK(code_of([&] { parse_pgm(bad); }) == ErrorCode::ParseError);
  }
  PgmImage rect;
  rect.width = 4;
  rect.height = 2;
  rect.data.assign(8, 0);
  CHECK(code_of([&] { pgm_to_image(rect); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("image to pgm clamps and rounds") {
  auto img = ImageGrid::zeros(2);
  img.at(0, 0) = -0.2;
  img.at(0, 1) = 1.4;
  img.at(1, 0) = 0.5;
  img.at(1, 1) = 1.0 / 255.0;
  CHECK(image_to_pgm(img).data == std::vector<std::uint16_t>{0, 255, 128, 1});
}

TEST_CASE("bound report json") {
  BoundReport r;
  r.bound_name = "spherical";
  r.inputs = {{"mu", 0.25}, {"eps", 0.9}};
  const auto na = bound_report_to_json(r);
  CHECK(na["bound_value"] == "not_applicable");
  CHECK(na["measured"].is_null());
  r.precondition_holds = true;
  r.bound_value = 3.0;
  r.measured = 2;
  const auto ok = bound_report_to_json(r);
  CHECK(ok["bound_value"] == 3.0);
  CHECK(ok["measured"] == 2);
  CHECK(ok["inputs"]["mu"] == 0.25);
}

TEST_CASE("suite csv") {
  SuiteResult s;
  s.suite = "x";
  SuiteCase c;
  c.dictionary = "d";
  c.k = 1;
  c.eps = 0.3;
  BoundReport r;
  r.bound_name = "coherence";
  r.measured = 4;
  c.reports.push_back(r);
  s.cases.push_back(c);
  const std::string csv = suite_result_to_csv(s);
  CHECK(csv ==
        "dictionary,k,eps,target,bound,precondition_holds,bound_value,measured,violated\n"
        "d,1,0.3,0,coherence,0,not_applicable,4,0\n");
  const auto j = suite_result_to_json(s);
  CHECK(j["cases"][0]["reports"][0]["bound"] == "coherence");
}

TEST_CASE("solution list and compression stats json") {
  const auto d = Dictionary::create(Matrix::Identity(3, 3), false);
  Vector b = Vector::Zero(3);
  b(0) = 1.0;
  const auto sparse = solution_list_to_json(solve_list_sparse(d, b, 1));
  CHECK(sparse["problem"] == "sparse");
  CHECK(sparse["support_count"] == 1);
  CHECK(sparse["solutions"][0]["support"] == Json::array({0}));
  CHECK_FALSE(sparse.contains("eps"));
  const auto approx =
      solution_list_to_json(solve_list_approx(d, b, 1, 0.5, ApproxMode::ExactSize));
  CHECK(approx["problem"] == "approx");
  CHECK(approx["eps"] == 0.5);

  CompressionParams p;
  p.depth = 2;
  const auto stats = compression_stats_to_json(compress_class(synthetic_blobs(16, 1), 3, p));
  CHECK(stats["class"] == 3);
  for (const auto& n : stats["basis_nodes"]) CHECK(n.size() == 2);
}
