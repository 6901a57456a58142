#include "lsa/lsa.h"

#include "lsa/io.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct lsa_dictionary {
  lsa::Dictionary d;
};

struct lsa_image {
  lsa::ImageGrid img;
};

namespace {

thread_local std::string g_last_error;

lsa_status fail(lsa_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
lsa_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return LSA_OK;
  } catch (const lsa::Error& e) {
    return fail(static_cast<lsa_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(LSA_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LSA_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(LSA_INTERNAL_ERROR, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw lsa::Error(lsa::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lsa::Json params(const char* json) {
  if (!json || !*json) return lsa::Json::object();
  lsa::Json j = lsa::parse_json(json);
  if (!j.is_object()) throw lsa::Error(lsa::ErrorCode::InvalidArgument, "parameters must be a JSON object");
  return j;
}

const lsa::Json& field(const lsa::Json& j, const char* key) {
  if (!j.contains(key))
    throw lsa::Error(lsa::ErrorCode::InvalidArgument, std::string("missing parameter '") + key + "'");
  return j[key];
}

int int_param(const lsa::Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer())
    throw lsa::Error(lsa::ErrorCode::InvalidArgument, std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

double real_param(const lsa::Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number())
    throw lsa::Error(lsa::ErrorCode::InvalidArgument, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double real_or(const lsa::Json& j, const char* key, double fallback) {
  return j.contains(key) ? real_param(j, key) : fallback;
}

lsa::Budget budget_or(const lsa::Json& j, lsa::Budget fallback) {
  if (!j.contains("budget")) return fallback;
  const auto& v = j["budget"];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw lsa::Error(lsa::ErrorCode::InvalidArgument, "'budget' must be a non-negative integer");
  return lsa::Budget{v.get<std::uint64_t>()};
}

lsa::ConstructionBundle construct(const std::string& name, const lsa::Json& p) {
  using namespace lsa;
  if (name == "identity-bad-b")
    return identity_bad_b(int_param(p, "m"), int_param(p, "k"), real_param(p, "eps"));
  if (name == "tight-example")
    return tight_example(int_param(p, "m"), int_param(p, "k"), real_param(p, "eps"));
  if (name == "spikes-sines") return spikes_and_sines(int_param(p, "d"));
  if (name == "picket-solutions")
    return shifted_picket_solutions(int_param(p, "d"), budget_or(p, Budget{1u << 20}));
  if (name == "kerdock") return kerdock_dictionary(int_param(p, "m"));
  if (name == "kerdock-solutions")
    return kerdock_multi_solutions(int_param(p, "m"), int_param(p, "s"),
                                   budget_or(p, Budget{1'000'000}));
  if (name == "mu-k-tight") return mu_k_tight(int_param(p, "k"), real_param(p, "c"));
  if (name == "equiangular-2d") return equiangular_lines_2d(int_param(p, "n"));
  throw Error(ErrorCode::InvalidArgument, "unknown construction '" + name + "'");
}

lsa::Json bound_value(const lsa::ListBound& b) {
  return b ? lsa::Json(*b) : lsa::Json("not_applicable");
}

lsa::Json evaluate_bound(const std::string& name, const lsa::Json& p) {
  using namespace lsa;
  Json out = {{"schema", kSchema}, {"bound", name}, {"inputs", p}};
  if (name == "simplex-radius") {
    out["value"] = simplex_circumradius(int_param(p, "n"));
  } else if (name == "euclidean") {
    out["value"] = bound_value(euclidean_list_bound(real_param(p, "delta"), real_param(p, "eps")));
  } else if (name == "spherical") {
    out["value"] = bound_value(spherical_list_bound(real_param(p, "mu"), real_param(p, "eps")));
  } else if (name == "mu-k") {
    out["value"] = bound_value(list_bound_mu_k(real_param(p, "mu_k"), real_param(p, "eps")));
  } else if (name == "coherence") {
    out["value"] = bound_value(
        list_bound_coherence(real_param(p, "mu"), int_param(p, "k"), real_param(p, "eps")));
  } else if (name == "av-k1") {
    out["value"] = bound_value(av_list_bound_k1(real_param(p, "mu"), real_param(p, "eps")));
  } else if (name == "av-k") {
    out["value"] = bound_value(av_list_bound(real_param(p, "mu"), int_param(p, "k"),
                                             real_param(p, "eps"), real_or(p, "gamma", 0.0)));
  } else if (name == "gen-listapprox-regime") {
    out["value"] = gen_listapprox_regime(real_param(p, "mu"), int_param(p, "k"),
                                         field(p, "L").get<std::int64_t>());
  } else if (name == "mu-k-upper") {
    const double mu = real_param(p, "mu");
    const int k = int_param(p, "k");
    const auto upper = mu_k_upper(mu, k);
    out["value"] = upper ? Json(*upper) : Json("not_applicable");
    out["simple"] = mu_k_upper_simple(mu, k);
  } else if (name == "uniqueness") {
    const auto& s = field(p, "spark");
    Spark spark;
    if (s.is_string() && s.get<std::string>() == "infinite") spark = Spark::inf();
    else if (s.is_number_integer() && s.get<int>() >= 1) spark = Spark::finite(s.get<int>());
    else throw Error(ErrorCode::InvalidArgument, "'spark' must be a positive integer or \"infinite\"");
    const auto f = uniqueness_thresholds(real_param(p, "mu"), spark, int_param(p, "k"));
    out["value"] = {{"unique_by_mu", f.unique_by_mu},
                    {"unique_by_spark", f.unique_by_spark},
                    {"two_onb_cohbound", f.two_onb_cohbound}};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown bound '" + name + "'");
  }
  return out;
}

lsa::Json solve(const lsa::Dictionary& d, const lsa::Json& req) {
  using namespace lsa;
  const std::string problem = field(req, "problem").get<std::string>();
  const int k = int_param(req, "k");
  const Vector b = target_from_json(field(req, "target")).b;
  SolveOptions opts;
  opts.rank_tol = real_or(req, "rank_tol", opts.rank_tol);
  opts.eq_tol = real_or(req, "eq_tol", opts.eq_tol);
  opts.abs_tol = real_or(req, "abs_tol", opts.abs_tol);
  opts.budget = budget_or(req, opts.budget);
  if (req.contains("restrict")) {
    const auto& r = req["restrict"];
    if (r.is_number_integer()) opts.restrict.push_back(r.get<int>());
    else opts.restrict = r.get<std::vector<int>>();
    for (int v : opts.restrict)
      if (v < 1) throw Error(ErrorCode::InvalidArgument, "restrict values must be >= 1");
  }
  if (problem == "sparse") return solution_list_to_json(solve_list_sparse(d, b, k, opts));
  if (problem != "approx")
    throw Error(ErrorCode::InvalidArgument, "problem must be 'sparse' or 'approx'");
  ApproxMode mode = ApproxMode::ExactSize;
  if (req.contains("mode")) {
    const auto m = req["mode"].get<std::string>();
    if (m == "minimal-supports" || m == "minimal") mode = ApproxMode::MinimalSupports;
    else if (m != "exact-size") throw Error(ErrorCode::InvalidArgument, "unknown mode '" + m + "'");
  }
  return solution_list_to_json(solve_list_approx(d, b, k, real_param(req, "eps"), mode, opts));
}

}  // namespace

extern "C" {

const char* lsa_version(void) { return "1.0.0"; }

const char* lsa_status_name(lsa_status status) {
  if (status == LSA_OK) return "Ok";
  if (status == LSA_INTERNAL_ERROR) return "InternalError";
  if (status < LSA_INVALID_ARGUMENT || status > LSA_IO_ERROR) return "Unknown";
  return lsa::to_string(static_cast<lsa::ErrorCode>(status));
}

const char* lsa_last_error(void) { return g_last_error.c_str(); }

void lsa_string_free(char* s) { std::free(s); }

lsa_status lsa_dictionary_create(int m, int n, const double* real, const double* imag,
                                 int normalize, double tol, lsa_dictionary** out) {
  return guard([&] {
    need(real, "real");
    need(out, "out");
    if (m < 1 || n < 1) throw lsa::Error(lsa::ErrorCode::InvalidArgument, "m and n must be >= 1");
    lsa::Matrix a(m, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < m; ++r) {
        const std::size_t i = static_cast<std::size_t>(c) * m + r;
        a(r, c) = lsa::Scalar(real[i], imag ? imag[i] : 0.0);
      }
    *out = new lsa_dictionary{lsa::Dictionary::create(a, normalize != 0, tol)};
  });
}

lsa_status lsa_dictionary_from_json(const char* json, int normalize, lsa_dictionary** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new lsa_dictionary{lsa::dictionary_from_json(lsa::parse_json(json), normalize != 0)};
  });
}

lsa_status lsa_dictionary_load(const char* path, int normalize, lsa_dictionary** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new lsa_dictionary{lsa::dictionary_from_json(lsa::read_json_file(path), normalize != 0)};
  });
}

lsa_status lsa_dictionary_to_json(const lsa_dictionary* d, char** out) {
  return guard([&] {
    need(d, "dictionary");
    need(out, "out");
    *out = dup(lsa::dictionary_to_json(d->d).dump());
  });
}

lsa_status lsa_dictionary_save(const lsa_dictionary* d, const char* path) {
  return guard([&] {
    need(d, "dictionary");
    need(path, "path");
    lsa::write_text_file(path, lsa::dictionary_to_json(d->d).dump() + "\n");
  });
}

int lsa_dictionary_rows(const lsa_dictionary* d) { return d ? d->d.rows() : 0; }
int lsa_dictionary_atoms(const lsa_dictionary* d) { return d ? d->d.atoms() : 0; }
void lsa_dictionary_free(lsa_dictionary* d) { delete d; }

lsa_status lsa_coherence(const lsa_dictionary* d, double* out) {
  return guard([&] {
    need(d, "dictionary");
    need(out, "out");
    *out = lsa::coherence(d->d);
  });
}

lsa_status lsa_spark(const lsa_dictionary* d, double rank_tol, uint64_t budget, int* value,
                     int* infinite) {
  return guard([&] {
    need(d, "dictionary");
    need(value, "value");
    need(infinite, "infinite");
    const auto s = lsa::spark(d->d, rank_tol, lsa::Budget{budget});
    *value = s.value;
    *infinite = s.infinite ? 1 : 0;
  });
}

lsa_status lsa_generalized_coherence(const lsa_dictionary* d, int k, double rank_tol,
                                     uint64_t budget, double* out) {
  return guard([&] {
    need(d, "dictionary");
    need(out, "out");
    *out = lsa::generalized_coherence(d->d, k, rank_tol, lsa::Budget{budget});
  });
}

lsa_status lsa_analyze(const lsa_dictionary* d, int max_k, double rank_tol, uint64_t budget,
                       char** report_json) {
  return guard([&] {
    need(d, "dictionary");
    need(report_json, "report_json");
    if (max_k < 1) throw lsa::Error(lsa::ErrorCode::InvalidArgument, "k must be >= 1");
    const auto r = lsa::analyze(d->d, max_k, rank_tol, lsa::Budget{budget});
    *report_json = dup(lsa::invariant_report_to_json(r).dump());
  });
}

lsa_status lsa_construct(const char* name, const char* params_json, lsa_dictionary** dict_out,
                         char** bundle_json) {
  return guard([&] {
    need(name, "name");
    auto bundle = construct(name, params(params_json));
    std::string text = bundle_json ? lsa::bundle_to_json(bundle).dump() : std::string();
    if (dict_out) *dict_out = new lsa_dictionary{std::move(bundle.dictionary)};
    if (bundle_json) *bundle_json = dup(text);
  });
}

lsa_status lsa_solve(const lsa_dictionary* d, const char* request_json, char** result_json) {
  return guard([&] {
    need(d, "dictionary");
    need(request_json, "request_json");
    need(result_json, "result_json");
    *result_json = dup(solve(d->d, params(request_json)).dump());
  });
}

lsa_status lsa_witness(const lsa_dictionary* d, int k, uint64_t seed, char** result_json) {
  return guard([&] {
    need(d, "dictionary");
    need(result_json, "result_json");
    lsa::WitnessOptions opts;
    opts.seed = seed;
    *result_json = dup(lsa::witness_to_json(lsa::find_multi_solution_witness(d->d, k, opts), k).dump());
  });
}

lsa_status lsa_list_sparse_conditions(const lsa_dictionary* d, int k, int64_t list_size,
                                      uint64_t budget, char** result_json) {
  return guard([&] {
    need(d, "dictionary");
    need(result_json, "result_json");
    const auto c = lsa::list_sparse_conditions(d->d, k, list_size, lsa::kDefaultRankTol,
                                               lsa::Budget{budget});
    lsa::Json j = {{"schema", lsa::kSchema},     {"k", k},
                   {"L", list_size},             {"rank", c.rank},
                   {"finite", c.finite},         {"sufficient", c.sufficient},
                   {"necessary", c.necessary},   {"unique", c.unique},
                   {"at_most_two", c.at_most_two}};
    j["spark"] = c.spark.infinite ? lsa::Json("infinite") : lsa::Json(c.spark.value);
    *result_json = dup(j.dump());
  });
}

lsa_status lsa_bound(const char* name, const char* params_json, char** result_json) {
  return guard([&] {
    need(name, "name");
    need(result_json, "result_json");
    *result_json = dup(evaluate_bound(name, params(params_json)).dump());
  });
}

lsa_status lsa_verify_suite(const char* suite, uint64_t seed, uint64_t budget,
                            char** result_json, char** csv, int* violations) {
  return guard([&] {
    need(suite, "suite");
    lsa::SolveOptions opts;
    if (budget) opts.budget = lsa::Budget{budget};
    const auto r = lsa::run_suite(suite, seed, opts);
    std::string json = result_json ? lsa::suite_result_to_json(r).dump() : std::string();
    std::string table = csv ? lsa::suite_result_to_csv(r) : std::string();
    if (violations) *violations = r.violations;
    if (result_json) *result_json = dup(json);
    if (csv) *csv = dup(table);
  });
}

lsa_status lsa_image_load_pgm(const char* path, lsa_image** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new lsa_image{lsa::pgm_to_image(lsa::read_pgm(path))};
  });
}

lsa_status lsa_image_save_pgm(const lsa_image* img, const char* path, int binary) {
  return guard([&] {
    need(img, "image");
    need(path, "path");
    lsa::write_pgm(path, lsa::image_to_pgm(img->img, binary != 0));
  });
}

lsa_status lsa_image_create(int side, const double* pixels, lsa_image** out) {
  return guard([&] {
    need(pixels, "pixels");
    need(out, "out");
    if (side < 1) throw lsa::Error(lsa::ErrorCode::InvalidArgument, "side must be >= 1");
    const std::size_t n = static_cast<std::size_t>(side) * side;
    *out = new lsa_image{lsa::ImageGrid::create(side, std::vector<double>(pixels, pixels + n))};
  });
}

lsa_status lsa_image_synthetic_blobs(int side, uint64_t seed, lsa_image** out) {
  return guard([&] {
    need(out, "out");
    *out = new lsa_image{lsa::synthetic_blobs(side, seed)};
  });
}

int lsa_image_side(const lsa_image* img) { return img ? img->img.side() : 0; }
const double* lsa_image_pixels(const lsa_image* img) {
  return img ? img->img.pixels().data() : nullptr;
}
void lsa_image_free(lsa_image* img) { delete img; }

lsa_status lsa_compress(const lsa_image* img, const char* request_json, lsa_image** reconstruction,
                        char** stats_json) {
  return guard([&] {
    need(img, "image");
    const auto req = params(request_json);
    lsa::CompressionParams p;
    p.keep_fraction = real_or(req, "keep", p.keep_fraction);
    p.large = real_or(req, "large", p.large);
    p.medium = real_or(req, "medium", p.medium);
    p.medium_keep = real_or(req, "medium_keep", p.medium_keep);
    if (req.contains("depth")) p.depth = int_param(req, "depth");
    if (req.contains("seed")) p.seed = field(req, "seed").get<std::uint64_t>();
    const int cls = req.contains("class") ? int_param(req, "class") : 2;
    auto r = lsa::compress_class(img->img, cls, p);
    std::string stats = stats_json ? lsa::compression_stats_to_json(r).dump() : std::string();
    if (reconstruction) *reconstruction = new lsa_image{std::move(r.reconstruction)};
    if (stats_json) *stats_json = dup(stats);
  });
}

}  // extern "C"
