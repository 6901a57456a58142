#include "lsa/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lsa {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string("expected a number for ") + what);
  return j.get<double>();
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  parse_fail("entry must be a number or a [re, im] pair");
}

Json spark_json(const Spark& s) {
  return s.infinite ? Json("infinite") : Json(s.value);
}

}  // namespace

bool vector_is_real(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i).imag() != 0.0) return false;
  return true;
}

Json vector_to_json(const Vector& v, bool complex) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (complex) a.push_back(Json::array({v(i).real(), v(i).imag()}));
    else a.push_back(v(i).real());
  }
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("vector must be a JSON array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar_from_json(j[i]);
  return v;
}

Json dictionary_to_json(const Dictionary& d) {
  const bool complex = !d.is_real();
  Json cols = Json::array();
  for (int c = 0; c < d.atoms(); ++c) cols.push_back(vector_to_json(d.atom(c), complex));
  return {{"schema", kSchema}, {"m", d.rows()}, {"n", d.atoms()}, {"complex", complex},
          {"columns", std::move(cols)}};
}

Dictionary dictionary_from_json(const Json& j, bool normalize, double tol) {
  if (!j.is_object()) parse_fail("dictionary document must be a JSON object");
  for (const char* key : {"m", "n", "columns"})
    if (!j.contains(key)) parse_fail(std::string("dictionary is missing '") + key + "'");
  if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
    parse_fail("'m' and 'n' must be integers");
  const int m = j["m"].get<int>();
  const int n = j["n"].get<int>();
  if (m < 1 || n < 1) parse_fail("'m' and 'n' must be >= 1");
  const Json& cols = j["columns"];
  if (!cols.is_array() || cols.size() != static_cast<std::size_t>(n))
    parse_fail("'columns' must hold n columns");
  Matrix a(m, n);
  for (int c = 0; c < n; ++c) {
    const Vector col = vector_from_json(cols[static_cast<std::size_t>(c)]);
    if (col.size() != m) parse_fail("every column must have m entries");
    a.col(c) = col;
  }
  return Dictionary::create(a, normalize, tol);
}

Json target_to_json(const NamedTarget& t) {
  const bool complex = !vector_is_real(t.b);
  return {{"label", t.label}, {"complex", complex}, {"b", vector_to_json(t.b, complex)}};
}

NamedTarget target_from_json(const Json& j) {
  if (j.is_array()) return {"b", vector_from_json(j)};
  if (!j.is_object() || !j.contains("b")) parse_fail("target must be an array or an object with 'b'");
  NamedTarget t;
  t.label = j.value("label", std::string("b"));
  t.b = vector_from_json(j["b"]);
  return t;
}

Json bundle_to_json(const ConstructionBundle& b) {
  Json targets = Json::array();
  for (const auto& t : b.targets) targets.push_back(target_to_json(t));
  Json sols = Json::array();
  for (const auto& s : b.solutions) {
    const bool complex = !vector_is_real(s.coefficients);
    sols.push_back({{"label", s.label},
                    {"target", s.target},
                    {"support", s.support.indices()},
                    {"coefficients", vector_to_json(s.coefficients, complex)}});
  }
  Json approx = Json::array();
  for (const auto& s : b.approx_supports) approx.push_back(s.indices());
  return {{"schema", kSchema},      {"construction", b.name},
          {"parameters", b.parameters}, {"predicted", b.predicted},
          {"measured", b.measured},     {"targets", std::move(targets)},
          {"solutions", std::move(sols)}, {"approx_supports", std::move(approx)}};
}

Json invariant_report_to_json(const InvariantReport& r) {
  Json mu_k = Json::object();
  for (const auto& [k, v] : r.generalized_coherence) mu_k[std::to_string(k)] = v;
  return {{"schema", kSchema},
          {"coherence", r.coherence},
          {"spark", spark_json(r.spark)},
          {"generalized_coherence", std::move(mu_k)},
          {"rank", r.rank},
          {"rank_tol", r.rank_tol},
          {"column_norm_tol", r.column_norm_tol}};
}

Json solution_list_to_json(const SolutionList& l) {
  bool complex = !vector_is_real(l.target);
  for (const auto& s : l.solutions) complex = complex || !vector_is_real(s.coefficients);
  Json sols = Json::array();
  for (const auto& s : l.solutions)
    sols.push_back({{"support", s.support.indices()},
                    {"coefficients", vector_to_json(s.coefficients, complex)},
                    {"residual", s.residual},
                    {"coeffs_unique", s.coeffs_unique}});
  Json restricted = Json::object();
  for (const auto& [r, c] : l.restricted_counts) restricted[std::to_string(r)] = c;
  Json out = {{"schema", kSchema},
              {"problem", l.eps ? "approx" : "sparse"},
              {"k", l.k},
              {"optimal_residual", l.optimal_residual},
              {"finite", l.finite},
              {"support_count", l.support_count},
              {"restricted_counts", std::move(restricted)},
              {"solutions", std::move(sols)}};
  if (l.eps) {
    out["eps"] = *l.eps;
    out["mode"] = to_string(l.mode);
  }
  return out;
}

Json bound_report_to_json(const BoundReport& r) {
  Json out = {{"bound", r.bound_name},
              {"inputs", r.inputs},
              {"precondition_holds", r.precondition_holds},
              {"violated", r.violated},
              {"target", r.target}};
  out["bound_value"] = r.bound_value ? Json(*r.bound_value) : Json("not_applicable");
  out["measured"] = r.measured ? Json(*r.measured) : Json(nullptr);
  return out;
}

Json compression_stats_to_json(const CompressionResult& r) {
  Json nodes = Json::array();
  for (const auto& n : r.basis.nodes) nodes.push_back(Json::array({n.level, n.index}));
  return {{"schema", kSchema},
          {"class", r.class_label},
          {"sparsity_fraction", r.sparsity_fraction},
          {"relative_error", r.relative_error},
          {"kept_count", r.kept_count},
          {"basis_cost", r.basis.cost},
          {"basis_nodes", std::move(nodes)}};
}

Json witness_to_json(const Witness& w, int k) {
  const bool complex = !vector_is_real(w.b);
  return {{"schema", kSchema},
          {"k", k},
          {"b", vector_to_json(w.b, complex)},
          {"complex", complex},
          {"verified_count", w.verified_count},
          {"finite", w.finite},
          {"proof_case", w.proof_case}};
}

Json suite_result_to_json(const SuiteResult& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    Json reports = Json::array();
    for (const auto& b : c.reports) reports.push_back(bound_report_to_json(b));
    cases.push_back({{"dictionary", c.dictionary}, {"k", c.k}, {"eps", c.eps},
                     {"reports", std::move(reports)}});
  }
  return {{"schema", kSchema},           {"suite", r.suite},
          {"seed", r.seed},              {"report_count", r.report_count},
          {"violations", r.violations},  {"cases", std::move(cases)}};
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string suite_result_to_csv(const SuiteResult& r) {
  std::ostringstream out;
  out << "dictionary,k,eps,target,bound,precondition_holds,bound_value,measured,violated\n";
  for (const auto& c : r.cases)
    for (const auto& b : c.reports) {
      out << c.dictionary << ',' << c.k << ',' << shortest(c.eps) << ',' << b.target << ','
          << b.bound_name << ',' << (b.precondition_holds ? 1 : 0) << ',';
      if (b.bound_value) out << shortest(*b.bound_value);
      else out << "not_applicable";
      out << ',';
      if (b.measured) out << *b.measured;
      out << ',' << (b.violated ? 1 : 0) << '\n';
    }
  return out.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json read_json_file(const std::string& path) { return parse_json(read_bytes(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

PgmImage parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto integer = [&](const char* what) {
    skip();
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
      parse_fail(std::string("PGM: expected ") + what);
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1'000'000'000) parse_fail("PGM: number too large");
    }
    return static_cast<int>(v);
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    parse_fail("PGM: magic must be P2 or P5");
  PgmImage img;
  img.binary = bytes[1] == '5';
  pos = 2;
  img.width = integer("width");
  img.height = integer("height");
  img.maxval = integer("maxval");
  if (img.width < 1 || img.height < 1) parse_fail("PGM: empty image");
  if (img.maxval < 1 || img.maxval > 65535) parse_fail("PGM: maxval out of range");
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  img.data.resize(count);
  if (img.binary) {
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
      parse_fail("PGM: missing separator before raster");
    ++pos;
    const std::size_t width = img.maxval > 255 ? 2 : 1;
    if (bytes.size() - pos < count * width) parse_fail("PGM: truncated raster");
    for (std::size_t i = 0; i < count; ++i) {
      const auto hi = static_cast<unsigned char>(bytes[pos + i * width]);
      img.data[i] = width == 1 ? hi
                               : static_cast<std::uint16_t>(
                                     (hi << 8) | static_cast<unsigned char>(bytes[pos + i * 2 + 1]));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) img.data[i] = static_cast<std::uint16_t>(integer("pixel"));
  }
  for (auto v : img.data)
    if (v > img.maxval) parse_fail("PGM: pixel exceeds maxval");
  return img;
}

std::string format_pgm(const PgmImage& img) {
  std::ostringstream out;
  out << (img.binary ? "P5" : "P2") << '\n' << img.width << ' ' << img.height << '\n'
      << img.maxval << '\n';
  if (img.binary) {
    for (auto v : img.data) {
      if (img.maxval > 255) out.put(static_cast<char>(v >> 8));
      out.put(static_cast<char>(v & 0xFF));
    }
  } else {
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c)
        out << (c ? " " : "") << img.data[static_cast<std::size_t>(r) * img.width + c];
      out << '\n';
    }
  }
  return out.str();
}

PgmImage read_pgm(const std::string& path) { return parse_pgm(read_bytes(path)); }

void write_pgm(const std::string& path, const PgmImage& img) { write_text_file(path, format_pgm(img)); }

ImageGrid pgm_to_image(const PgmImage& p) {
  if (p.width != p.height) throw Error(ErrorCode::InvalidArgument, "image must be square");
  std::vector<double> px(p.data.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<double>(p.data[i]) / p.maxval;
  return ImageGrid::create(p.width, std::move(px));
}

PgmImage image_to_pgm(const ImageGrid& img, bool binary) {
  PgmImage p;
  p.width = p.height = img.side();
  p.maxval = 255;
  p.binary = binary;
  p.data.reserve(img.pixels().size());
  for (double v : img.pixels())
    p.data.push_back(static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  return p;
}

}  // namespace lsa
