#pragma once

#include "lsa/bounds.hpp"
#include "lsa/constructions.hpp"
#include "lsa/suites.hpp"
#include "lsa/waveletlab.hpp"

#include <json.hpp>

#include <string>

namespace lsa {

inline constexpr const char* kSchema = "lsa/1";

using Json = nlohmann::json;

/// Vector as a JSON array: plain numbers when `complex` is false, [re, im]
/// pairs otherwise.
Json vector_to_json(const Vector& v, bool complex);
Vector vector_from_json(const Json& j);
bool vector_is_real(const Vector& v);

Json dictionary_to_json(const Dictionary& d);
/// Columns are validated (or renormalized) as in Dictionary::create.
/// Malformed documents raise ParseError.
Dictionary dictionary_from_json(const Json& j, bool normalize = false, double tol = 1e-10);

Json target_to_json(const NamedTarget& t);
NamedTarget target_from_json(const Json& j);

Json bundle_to_json(const ConstructionBundle& b);
Json invariant_report_to_json(const InvariantReport& r);
Json solution_list_to_json(const SolutionList& l);
Json bound_report_to_json(const BoundReport& r);
Json compression_stats_to_json(const CompressionResult& r);
Json witness_to_json(const Witness& w, int k);
Json suite_result_to_json(const SuiteResult& r);
/// One header row, then one line per report.
std::string suite_result_to_csv(const SuiteResult& r);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// 8-bit or 16-bit grayscale PGM, plain (P2) or raw (P5).
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> data;  // row-major
  bool binary = true;
};

PgmImage parse_pgm(const std::string& bytes);
std::string format_pgm(const PgmImage& img);
PgmImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const PgmImage& img);

/// Pixel / maxval; the image must be square with a power-of-two side.
ImageGrid pgm_to_image(const PgmImage& p);
/// Clamps to [0, 1] and rounds to 8 bits.
PgmImage image_to_pgm(const ImageGrid& img, bool binary = true);

}  // namespace lsa
