#pragma once

#include "lsa/bounds.hpp"

#include <string>
#include <vector>

namespace lsa {

/// m x n dictionary with i.i.d. standard Gaussian entries (complex Gaussian
/// when `complex`), columns normalized.
Dictionary random_dictionary(int m, int n, std::uint64_t seed, bool complex = false);

/// `count` independent directions drawn uniformly from the unit sphere.
std::vector<Vector> random_unit_vectors(int m, int count, std::uint64_t seed,
                                        bool complex = false);

struct SuiteCase {
  std::string dictionary;
  int k = 1;
  double eps = 0.0;
  std::vector<BoundReport> reports;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteCase> cases;
  int report_count = 0;
  int violations = 0;
};

/// identity, tight-example, spikes, kerdock, random.
const std::vector<std::string>& suite_names();

/// Runs verify_bounds over the suite's fixed fixtures and seeded random
/// targets. Unknown names raise InvalidArgument.
SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      const SolveOptions& opts = {});

}  // namespace lsa
