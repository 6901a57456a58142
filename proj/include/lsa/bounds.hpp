#pragma once

#include "lsa/solvers.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lsa {

/// Integer list-size bound; nullopt means NotApplicable. Values beyond the
/// int64 range saturate.
using ListBound = std::optional<std::int64_t>;

/// sqrt((n-1)/(2n)) for the regular simplex on n unit-separated points.
double simplex_circumradius(int n);

/// floor(1 / (1 - 2 eps^2 / delta^2)) for eps < delta / sqrt(2).
ListBound euclidean_list_bound(double delta, double eps);
/// floor(1 / (1 - eps^2 / (1 - mu))) for eps < sqrt(1 - mu).
ListBound spherical_list_bound(double mu, double eps);
/// Same form with mu_k in place of mu.
ListBound list_bound_mu_k(double mu_k, double eps);
/// floor(1 / (1 - [1 - (k-1) mu] eps^2 / (1 - (2k-1) mu))) for mu < 1/(2k-1)
/// and eps below the matching threshold.
ListBound list_bound_coherence(double mu, int k, double eps);
/// floor(4 / (1 - eps^2)) when 17 mu < 1 and eps <= sqrt(1 - 17 mu).
ListBound av_list_bound_k1(double mu, double eps);
/// ceil((11 / (1 - eps^2))^{1/(1-gamma)}) when eps <= sqrt(1 - 24 (mu k)^{1-gamma}).
ListBound av_list_bound(double mu, int k, double eps, double gamma);
/// mu <= 1 / (2 k L).
bool gen_listapprox_regime(double mu, int k, std::int64_t l);

/// k mu / (1 - (k-1) mu), NotApplicable when mu >= 1/(k-1).
std::optional<double> mu_k_upper(double mu, int k);
/// (2k - 1) mu.
double mu_k_upper_simple(double mu, int k);

struct UniquenessFlags {
  bool unique_by_mu = false;      // k < (1/mu + 1) / 2
  bool unique_by_spark = false;   // k < spark / 2
  bool two_onb_cohbound = false;  // k < 1 / mu
};

UniquenessFlags uniqueness_thresholds(double mu, Spark spark, int k);

struct ListSparseConditions {
  Spark spark;
  int rank = 0;
  bool finite = false;           // k < spark
  bool sufficient = false;       // k < spark and C(N, k) <= L
  bool necessary = false;        // k = N = rank, or k < min(L, spark)
  bool unique = false;           // k = N = rank
  bool at_most_two = false;      // [k < spark and C(N, k) <= 2] or [k = 1, rank 2, spark 3]
};

ListSparseConditions list_sparse_conditions(const Dictionary& d, int k, std::int64_t l,
                                            double rank_tol = kDefaultRankTol,
                                            Budget budget = {});

struct BoundReport {
  std::string bound_name;
  std::map<std::string, double> inputs;
  bool precondition_holds = false;
  std::optional<double> bound_value;  // empty: NotApplicable
  std::optional<std::int64_t> measured;
  bool violated = false;
  std::size_t target = 0;
};

struct VerifyOptions {
  SolveOptions solve;
  /// Precomputed invariants; filled in on demand when absent.
  std::optional<double> mu;
  std::optional<double> mu_k;
};

/// Measured R = 1 list size: the largest pairwise-disjoint family among the
/// inclusion-minimal supports of size <= k with residual <= eps.
std::int64_t measured_disjoint_list_size(const Dictionary& d, const Vector& b, int k,
                                         double eps, const SolveOptions& opts = {});

/// Evaluates every R = 1 bound applicable at (k, eps) against each target:
/// spherical (k = 1), mu_k, coherence, av_k1 (k = 1) and av_k with
/// gamma = 0 (k >= 2). One report per bound per target.
std::vector<BoundReport> verify_bounds(const Dictionary& d, const std::vector<Vector>& targets,
                                       int k, double eps, const VerifyOptions& opts = {});

}  // namespace lsa
