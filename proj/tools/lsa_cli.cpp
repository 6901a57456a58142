#include "lsa/lsa.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kInput = 2, kBudget = 3, kViolation = 4 };

struct Failure {
  int code;
  std::string message;
};

struct DictDeleter {
  void operator()(lsa_dictionary* d) const { lsa_dictionary_free(d); }
};
struct ImageDeleter {
  void operator()(lsa_image* i) const { lsa_image_free(i); }
};
using DictPtr = std::unique_ptr<lsa_dictionary, DictDeleter>;
using ImagePtr = std::unique_ptr<lsa_image, ImageDeleter>;

void check(lsa_status s) {
  if (s == LSA_OK) return;
  const int code = s == LSA_BUDGET_EXCEEDED ? kBudget : s == LSA_INTERNAL_ERROR ? kInternal : kInput;
  throw Failure{code, std::string(lsa_status_name(s)) + ": " + lsa_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  lsa_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInput, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Failure{kInput, "malformed JSON in " + what + ": " + e.what()};
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text << '\n')) throw Failure{kInput, "cannot write '" + path + "'"};
}

void emit_json(const std::string& raw, const std::string& path) {
  emit(json::parse(raw).dump(2), path);
}

std::uint64_t env_budget(std::uint64_t fallback) {
  const char* v = std::getenv("LSA_BUDGET");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long long b = std::strtoull(v, &end, 10);
  if (*end != '\0' || v[0] == '-') throw Failure{kInput, "LSA_BUDGET must be a non-negative integer"};
  return b;
}

DictPtr load_dictionary(const std::string& path, bool normalize) {
  lsa_dictionary* d = nullptr;
  check(lsa_dictionary_load(path.c_str(), normalize ? 1 : 0, &d));
  return DictPtr(d);
}

// Accepts a bare vector, {"b": ...}, or a targets/bundle document with a
// "targets" array (selected by label, first by default).
json load_target(const std::string& path, const std::string& label) {
  const json doc = parse(read_file(path), path);
  if (doc.is_array()) return doc;
  if (doc.is_object() && doc.contains("targets")) {
    for (const auto& t : doc["targets"])
      if (label.empty() || t.value("label", "") == label) return t;
    throw Failure{kInput, "no target labelled '" + label + "' in " + path};
  }
  if (doc.is_object() && doc.contains("b")) return doc;
  throw Failure{kInput, path + " does not contain a target vector"};
}

std::string sibling(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind(".json");
  return (dot != std::string::npos && dot + 5 == path.size() ? path.substr(0, dot) : path) + suffix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List-sparse approximation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lsa_version()));

  std::string dict_path, target_path, target_label, out_path, csv_path;
  int k = 1;
  double tol = 1e-10;
  bool normalize = false;

  auto* analyze = app.add_subcommand("analyze", "Coherence, spark, rank and mu_1..mu_K");
  analyze->add_option("--dict", dict_path, "Dictionary JSON")->required();
  analyze->add_option("--k", k, "Largest k for mu_k")->check(CLI::PositiveNumber);
  analyze->add_option("--tol", tol, "Relative rank tolerance")->check(CLI::PositiveNumber);
  analyze->add_flag("--normalize", normalize, "Rescale columns to unit norm on load");
  analyze->add_option("-o,--output", out_path, "Report file (default stdout)");

  std::string name;
  std::optional<int> p_m, p_k, p_d, p_s, p_n;
  std::optional<double> p_eps, p_c;
  std::string targets_path;
  auto* construct = app.add_subcommand("construct", "Generate a dictionary construction");
  construct->add_option("name", name,
                        "identity-bad-b | tight-example | spikes-sines | picket-solutions | "
                        "kerdock | kerdock-solutions | mu-k-tight | equiangular-2d")
      ->required();
  construct->add_option("--m", p_m);
  construct->add_option("--k", p_k);
  construct->add_option("--eps", p_eps);
  construct->add_option("--d", p_d);
  construct->add_option("--s", p_s);
  construct->add_option("--c", p_c);
  construct->add_option("--n", p_n);
  construct->add_option("-o,--output", out_path, "Dictionary JSON")->required();
  construct->add_option("--targets", targets_path,
                        "Targets and predictions JSON (default <output>.targets.json)");

  std::string problem;
  std::optional<double> eps;
  std::string mode = "exact-size";
  std::vector<int> restrict;
  auto* solve = app.add_subcommand("solve", "Enumerate List-Sparse or List-Approx solutions");
  solve->add_option("problem", problem, "sparse | approx")
      ->required()
      ->check(CLI::IsMember({"sparse", "approx"}));
  solve->add_option("--dict", dict_path)->required();
  solve->add_option("--target", target_path, "Target vector or targets file")->required();
  solve->add_option("--label", target_label, "Target label inside a targets file");
  solve->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  solve->add_option("--eps", eps);
  solve->add_option("--mode", mode)->check(CLI::IsMember({"exact-size", "minimal", "minimal-supports"}));
  solve->add_option("--restrict", restrict, "R values for restricted list sizes");
  solve->add_option("-o,--output", out_path);

  std::string bound;
  std::optional<double> b_mu, b_mu_k, b_gamma, b_delta;
  std::optional<int> b_k, b_n;
  std::optional<long long> b_l;
  std::string b_spark;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a closed-form list-size bound");
  bounds->add_option("name", bound,
                     "simplex-radius | euclidean | spherical | mu-k | coherence | av-k1 | av-k | "
                     "gen-listapprox-regime | mu-k-upper | uniqueness")
      ->required();
  bounds->add_option("--mu", b_mu);
  bounds->add_option("--mu-k", b_mu_k);
  bounds->add_option("--k", b_k);
  bounds->add_option("--eps", eps);
  bounds->add_option("--gamma", b_gamma);
  bounds->add_option("--delta", b_delta);
  bounds->add_option("--n", b_n);
  bounds->add_option("--L", b_l);
  bounds->add_option("--spark", b_spark, "Integer or 'infinite'");
  bounds->add_option("-o,--output", out_path);

  std::string suite;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Check measured list sizes against every bound");
  verify->add_option("--suite", suite, "identity | tight-example | spikes | kerdock | random")
      ->required();
  verify->add_option("--seed", seed)->required();
  verify->add_option("-o,--output", out_path, "Full report JSON (default: summary on stdout)");
  verify->add_option("--csv", csv_path, "One line per bound report");

  auto* witness = app.add_subcommand("witness", "Find a target with more than k optimal solutions");
  witness->add_option("--dict", dict_path)->required();
  witness->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  witness->add_option("--seed", seed)->required();
  witness->add_option("-o,--output", out_path);

  long long list_size = 2;
  auto* conditions = app.add_subcommand("conditions", "List-Sparse existence and size conditions");
  conditions->add_option("--dict", dict_path)->required();
  conditions->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  conditions->add_option("--L", list_size)->check(CLI::PositiveNumber);
  conditions->add_option("-o,--output", out_path);

  std::string image_path, stats_path;
  int cls = 2, depth = 4;
  double keep = 0.2, large = 0.1, medium = 0.01, medium_keep = 0.5;
  bool ascii = false;
  auto* compress = app.add_subcommand("compress", "Wavelet-packet compression of a PGM image");
  compress->add_option("--image", image_path)->required();
  compress->add_option("--class", cls)->check(CLI::Range(1, 3));
  compress->add_option("--keep", keep)->check(CLI::Range(0.0, 1.0));
  compress->add_option("--depth", depth)->check(CLI::PositiveNumber);
  compress->add_option("--seed", seed)->required();
  compress->add_option("--large", large);
  compress->add_option("--medium", medium);
  compress->add_option("--medium-keep", medium_keep)->check(CLI::Range(0.0, 1.0));
  compress->add_option("-o,--output", out_path, "Reconstructed PGM")->required();
  compress->add_option("--stats", stats_path, "Stats JSON (default stdout)");
  compress->add_flag("--ascii", ascii, "Write plain P2 instead of P5");

  int side = 256;
  auto* blobs = app.add_subcommand("synth-blobs", "Write the synthetic blob test image");
  blobs->add_option("--side", side)->check(CLI::PositiveNumber);
  blobs->add_option("--seed", seed)->required();
  blobs->add_option("-o,--output", out_path)->required();
  blobs->add_flag("--ascii", ascii, "Write plain P2 instead of P5");

  std::string convert_image;
  auto* convert = app.add_subcommand("convert", "Load and rewrite a dictionary JSON or PGM image");
  auto* convert_dict = convert->add_option("--dict", dict_path, "Dictionary JSON");
  convert->add_option("--image", convert_image, "PGM image")->excludes(convert_dict);
  convert->add_flag("--normalize", normalize, "Rescale dictionary columns to unit norm");
  convert->add_flag("--ascii", ascii, "Write plain P2 instead of P5");
  convert->add_option("-o,--output", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*analyze) {
      auto d = load_dictionary(dict_path, normalize);
      char* report = nullptr;
      check(lsa_analyze(d.get(), k, tol, env_budget(0), &report));
      emit_json(take(report), out_path);
    } else if (*construct) {
      json params = json::object();
      if (p_m) params["m"] = *p_m;
      if (p_k) params["k"] = *p_k;
      if (p_eps) params["eps"] = *p_eps;
      if (p_d) params["d"] = *p_d;
      if (p_s) params["s"] = *p_s;
      if (p_c) params["c"] = *p_c;
      if (p_n) params["n"] = *p_n;
      if (const char* b = std::getenv("LSA_BUDGET"); b && *b) params["budget"] = env_budget(0);
      lsa_dictionary* raw = nullptr;
      char* bundle = nullptr;
      check(lsa_construct(name.c_str(), params.dump().c_str(), &raw, &bundle));
      DictPtr d(raw);
      const std::string bundle_text = take(bundle);
      check(lsa_dictionary_save(d.get(), out_path.c_str()));
      emit(json::parse(bundle_text).dump(2),
           targets_path.empty() ? sibling(out_path, ".targets.json") : targets_path);
    } else if (*solve) {
      auto d = load_dictionary(dict_path, false);
      json req = {{"problem", problem}, {"k", k}, {"target", load_target(target_path, target_label)},
                  {"mode", mode == "exact-size" ? "exact-size" : "minimal-supports"}};
      if (problem == "approx") {
        if (!eps) throw Failure{kInput, "approx needs --eps"};
        req["eps"] = *eps;
      }
      if (!restrict.empty()) req["restrict"] = restrict;
      if (const char* b = std::getenv("LSA_BUDGET"); b && *b) req["budget"] = env_budget(0);
      char* result = nullptr;
      check(lsa_solve(d.get(), req.dump().c_str(), &result));
      emit_json(take(result), out_path);
    } else if (*bounds) {
      json params = json::object();
      if (b_mu) params["mu"] = *b_mu;
      if (b_mu_k) params["mu_k"] = *b_mu_k;
      if (b_k) params["k"] = *b_k;
      if (eps) params["eps"] = *eps;
      if (b_gamma) params["gamma"] = *b_gamma;
      if (b_delta) params["delta"] = *b_delta;
      if (b_n) params["n"] = *b_n;
      if (b_l) params["L"] = *b_l;
      if (!b_spark.empty()) {
        if (b_spark == "infinite") params["spark"] = "infinite";
        else {
          try {
            params["spark"] = std::stoi(b_spark);
          } catch (const std::exception&) {
            throw Failure{kInput, "--spark must be an integer or 'infinite'"};
          }
        }
      }
      char* result = nullptr;
      check(lsa_bound(bound.c_str(), params.dump().c_str(), &result));
      emit_json(take(result), out_path);
    } else if (*verify) {
      char* result = nullptr;
      char* csv = nullptr;
      int violations = 0;
      check(lsa_verify_suite(suite.c_str(), seed, env_budget(0), &result,
                             csv_path.empty() ? nullptr : &csv, &violations));
      const json report = json::parse(take(result));
      if (!csv_path.empty()) {
        std::string table = take(csv);
        if (!table.empty() && table.back() == '\n') table.pop_back();
        emit(table, csv_path);
      }
      if (!out_path.empty()) emit(report.dump(2), out_path);
      const json summary = {{"schema", report["schema"]},
                            {"suite", report["suite"]},
                            {"seed", report["seed"]},
                            {"report_count", report["report_count"]},
                            {"violations", report["violations"]}};
      std::cout << summary.dump(2) << '\n';
      if (violations > 0) {
        std::cerr << "verify: " << violations << " bound violation(s)\n";
        return kViolation;
      }
    } else if (*witness) {
      auto d = load_dictionary(dict_path, false);
      char* result = nullptr;
      check(lsa_witness(d.get(), k, seed, &result));
      emit_json(take(result), out_path);
    } else if (*conditions) {
      auto d = load_dictionary(dict_path, false);
      char* result = nullptr;
      check(lsa_list_sparse_conditions(d.get(), k, list_size, env_budget(0), &result));
      emit_json(take(result), out_path);
    } else if (*compress) {
      lsa_image* raw = nullptr;
      check(lsa_image_load_pgm(image_path.c_str(), &raw));
      ImagePtr img(raw);
      const json req = {{"class", cls}, {"keep", keep}, {"depth", depth}, {"seed", seed},
                        {"large", large}, {"medium", medium}, {"medium_keep", medium_keep}};
      lsa_image* rec = nullptr;
      char* stats = nullptr;
      check(lsa_compress(img.get(), req.dump().c_str(), &rec, &stats));
      ImagePtr out(rec);
      const std::string stats_text = take(stats);
      check(lsa_image_save_pgm(out.get(), out_path.c_str(), ascii ? 0 : 1));
      emit_json(stats_text, stats_path);
    } else if (*blobs) {
      lsa_image* raw = nullptr;
      check(lsa_image_synthetic_blobs(side, seed, &raw));
      ImagePtr img(raw);
      check(lsa_image_save_pgm(img.get(), out_path.c_str(), ascii ? 0 : 1));
    } else if (*convert) {
      if (!convert_image.empty()) {
        lsa_image* raw = nullptr;
        check(lsa_image_load_pgm(convert_image.c_str(), &raw));
        ImagePtr img(raw);
        check(lsa_image_save_pgm(img.get(), out_path.c_str(), ascii ? 0 : 1));
      } else if (!dict_path.empty()) {
        auto d = load_dictionary(dict_path, normalize);
        check(lsa_dictionary_save(d.get(), out_path.c_str()));
      } else {
        throw Failure{kInput, "convert needs --dict or --image"};
      }
    }
  } catch (const Failure& f) {
    std::cerr << "lsa: " << f.message << '\n';
    return f.code;
  }
  return kOk;
}
