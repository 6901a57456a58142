#pragma once

#include "lsa/core.hpp"

#include <map>
#include <optional>
#include <vector>

namespace lsa {

/// One k-sparse representation: support, minimum-norm least-squares
/// coefficients on it and the residual ||A_S x - b||_2.
struct SparseSolution {
  SupportSet support;
  Vector coefficients;
  double residual = 0.0;
  bool coeffs_unique = true;  // A_S has full column rank
};

/// How List-Approx counts supports.
enum class ApproxMode {
  ExactSize,        // supports of cardinality exactly k (default)
  MinimalSupports,  // inclusion-minimal qualifying supports of size <= k
};

const char* to_string(ApproxMode mode) noexcept;

struct SolveOptions {
  double rank_tol = kDefaultRankTol;
  /// List-Sparse tie tolerance: residual <= opt * (1 + eq_tol) + eq_tol.
  double eq_tol = 1e-9;
  /// List-Approx acceptance slack: residual <= eps + abs_tol.
  double abs_tol = 1e-9;
  /// Cap on supports enumerated (0 = unlimited). Checked before enumerating.
  Budget budget{20'000'000};
  /// R values for which restricted_counts is filled in.
  std::vector<int> restrict;
  /// Node cap for the exact restricted-list-size search.
  Budget packing_budget{5'000'000};
};

struct SolutionList {
  Vector target;
  int k = 0;
  std::optional<double> eps;  // empty: List-Sparse (optimal) query
  ApproxMode mode = ApproxMode::ExactSize;

  std::vector<SparseSolution> solutions;  // sorted by support
  double optimal_residual = 0.0;
  /// False when some optimal (List-Sparse) or qualifying (List-Approx)
  /// support of size <= k is rank-deficient: infinitely many coefficient
  /// vectors then attain the same residual.
  bool finite = true;
  int support_count = 0;
  std::map<int, int> restricted_counts;

  std::vector<SupportSet> supports() const;
};

/// Minimum-norm least squares on the columns S.
SparseSolution least_squares(const Dictionary& d, const SupportSet& s,
                             const Vector& b, double rank_tol = kDefaultRankTol);

/// All k-sparse minimizers of ||Ax - b||_2, listed by inclusion-minimal
/// support. Throws ZeroTarget for b = 0 and BudgetExceeded when the number of
/// supports of size <= k passes the budget.
SolutionList solve_list_sparse(const Dictionary& d, const Vector& b, int k,
                               const SolveOptions& opts = {});

/// All supports whose best k-sparse fit has residual <= eps.
SolutionList solve_list_approx(const Dictionary& d, const Vector& b, int k,
                               double eps, ApproxMode mode = ApproxMode::ExactSize,
                               const SolveOptions& opts = {});

/// Largest sub-collection of `supports` in which no atom occurs in more than
/// R members. Exact branch and bound; throws BudgetExceeded rather than
/// returning an unproven value.
int restricted_list_size(const std::vector<SupportSet>& supports, int r,
                         Budget node_budget = Budget{5'000'000});

/// Target vector with more than k optimal k-sparse solutions.
struct Witness {
  Vector b;
  int verified_count = 0;  // support_count of solve_list_sparse at b
  bool finite = true;
  int proof_case = 0;      // 1: dependent k-set, 2: dependent (k+1)-set, 3: search
};

struct WitnessOptions {
  std::uint64_t seed = 1;
  int max_restarts = 200;
  int max_steps = 4000;
  SolveOptions solve;
};

Witness find_multi_solution_witness(const Dictionary& d, int k,
                                    const WitnessOptions& opts = {});

struct ListStats {
  int trials = 0;
  double unique_fraction = 0.0;
  double multiple_fraction = 0.0;
  double infinite_fraction = 0.0;
  int max_list_size = 0;
};

/// Draws `trials` targets uniformly on the unit sphere (normalized Gaussian,
/// complex when the dictionary is) and classifies each List-Sparse result.
ListStats monte_carlo_list_stats(const Dictionary& d, int k, int trials,
                                 std::uint64_t seed,
                                 const SolveOptions& opts = {});

/// Smallest k for which b has an exact (residual <= tol) k-sparse
/// representation, searching k = 1..max_k; nullopt if none.
std::optional<int> min_exact_sparsity(const Dictionary& d, const Vector& b,
                                      int max_k, double tol = 1e-9,
                                      const SolveOptions& opts = {});

}  // namespace lsa
