#pragma once

#include "lsa/types.hpp"

#include <map>
#include <optional>
#include <span>

namespace lsa {

/// An m x N matrix with unit-norm columns (atoms). Immutable once built; all
/// invariants below are pure functions of it and safe to call concurrently.
class Dictionary {
 public:
  /// Builds a dictionary from raw columns. With `normalize` set, each column
  /// is rescaled to unit norm (ZeroColumn if its norm is below `tol`);
  /// otherwise every column must already be within `tol` of unit norm
  /// (NotNormalized). Non-finite entries raise NonFiniteEntry.
  static Dictionary create(const Matrix& entries, bool normalize,
                           double tol = 1e-10);

  int rows() const noexcept { return static_cast<int>(a_.rows()); }
  int atoms() const noexcept { return static_cast<int>(a_.cols()); }
  const Matrix& matrix() const noexcept { return a_; }
  auto atom(int i) const { return a_.col(i); }
  double column_norm_tol() const noexcept { return tol_; }
  /// True when every entry has zero imaginary part.
  bool is_real() const noexcept { return real_; }

  /// Columns indexed by `s`, in order.
  Matrix columns(const SupportSet& s) const;
  Matrix columns(std::span<const int> s) const;
  /// Throws InvalidSupport unless every index is in [0, N).
  void validate(const SupportSet& s) const;

 private:
  Dictionary(Matrix a, double tol, bool real)
      : a_(std::move(a)), tol_(tol), real_(real) {}
  Matrix a_;
  double tol_;
  bool real_;
};

/// Result of a spark computation: a finite value or the Infinite sentinel
/// (all N columns independent).
struct Spark {
  bool infinite = false;
  int value = 0;

  static Spark finite(int v) { return {false, v}; }
  static Spark inf() { return {true, 0}; }
  /// True when k < spark (Infinite compares greater than every k).
  bool exceeds(int k) const { return infinite || k < value; }
  friend bool operator==(const Spark&, const Spark&) = default;
};

/// Numerical rank: number of singular values above `rank_tol` times the
/// largest one.
int numerical_rank(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of the span of `cols`, with rank decided by
/// the same relative tolerance.
Matrix span_basis(const Matrix& cols, double rank_tol = kDefaultRankTol);

/// max_{i != j} |<A_i, A_j>|. Throws SingleAtom when N = 1.
double coherence(const Dictionary& d);

/// Exhaustive spark: the smallest s such that some s columns are dependent.
Spark spark(const Dictionary& d, double rank_tol = kDefaultRankTol,
            Budget budget = {});

/// Spark if it is at most `max_size`, nullopt otherwise. Examines only
/// subsets of size <= max_size.
std::optional<int> spark_at_most(const Dictionary& d, int max_size,
                                 double rank_tol = kDefaultRankTol,
                                 Budget budget = {});

/// Rank of the column submatrix A_S.
int support_rank(const Dictionary& d, const SupportSet& s,
                 double rank_tol = kDefaultRankTol);

/// Cosine of the first principal angle between span(A_I) and span(A_J).
/// I and J must be non-empty and disjoint (OverlappingSupports otherwise).
double principal_angle_cos(const Dictionary& d, const SupportSet& i,
                           const SupportSet& j,
                           double rank_tol = kDefaultRankTol);

/// Generalized coherence mu_k: max over disjoint I, J with |I| = |J| = k of
/// the first principal-angle cosine.
///
/// Only sets of size exactly k are enumerated. Growing a set can only grow
/// its span, so the maximum over |I|, |J| <= k is attained at size k whenever
/// 2k <= N. For 2k > N the operation refuses (SparsityTooLarge).
double generalized_coherence(const Dictionary& d, int k,
                             double rank_tol = kDefaultRankTol,
                             Budget budget = {});

struct InvariantReport {
  double coherence = 0.0;
  Spark spark;
  std::map<int, double> generalized_coherence;
  int rank = 0;
  double rank_tol = kDefaultRankTol;
  double column_norm_tol = 1e-10;
};

/// Coherence, spark, rank and mu_1..mu_{max_k} (mu_k skipped once 2k > N).
/// Spark budget failures propagate as BudgetExceeded.
InvariantReport analyze(const Dictionary& d, int max_k,
                        double rank_tol = kDefaultRankTol, Budget budget = {});

}  // namespace lsa
