#pragma once

#include "lsa/core.hpp"

#include <map>
#include <string>
#include <vector>

namespace lsa {

struct NamedTarget {
  std::string label;
  Vector b;
};

/// An exact representation A x = targets[target] stored sparsely.
struct BundleSolution {
  std::string label;
  std::size_t target = 0;
  SupportSet support;
  Vector coefficients;  // aligned with support
};

/// A generated dictionary with its targets and the values the construction
/// predicts for them. Keys of `predicted` in use:
///   coherence, spark, rank, mu_k, approx_count, disjoint_supports,
///   solution_count, atom_multiplicity, sparsity_min, sparsity_max,
///   x_sparsity, kernel_sparsity, block_count, eps.
struct ConstructionBundle {
  ConstructionBundle(std::string name, Dictionary d)
      : name(std::move(name)), dictionary(std::move(d)) {}

  std::string name;
  Dictionary dictionary;
  std::vector<NamedTarget> targets;
  std::vector<BundleSolution> solutions;
  /// Supports the construction predicts to qualify approximately (residual
  /// <= eps) against targets[0].
  std::vector<SupportSet> approx_supports;
  std::map<std::string, double> predicted;
  std::map<std::string, double> parameters;
  /// Construction-specific measurements that are not predictions, such as
  /// the per-basis picket sparsities of the Kerdock bundle.
  std::map<std::string, std::vector<double>> measured;

  const NamedTarget& target(const std::string& label) const;
};

/// Dense length-N coefficient vector of a bundle solution.
Vector dense_coefficients(const BundleSolution& s, int n_atoms);
/// ||A x - b|| for a bundle solution against its own target.
double solution_residual(const ConstructionBundle& bundle, const BundleSolution& s);

/// m x m identity with b_1^2 = 1 - (m-1) eps^2 / (m-k), b_i^2 = eps^2 / (m-k).
/// Requires 1 <= k < m and 0 < eps < sqrt((m-k)/m) (EpsOutOfRange).
ConstructionBundle identity_bad_b(int m, int k, double eps);

/// Coherent m x m dictionary with b = e_1 and floor((m-1)/k) disjoint
/// k-supports at residual eps / sqrt(1 + eps^2). Requires m >= k + 2.
ConstructionBundle tight_example(int m, int k, double eps);

/// [F, I] with the unitary DFT F (kernel e^{-2 pi i t j / n}), n = 4^d, and
/// the picket-fence kernel vector z = [v; -F v], v = 1 (x) e_1.
ConstructionBundle spikes_and_sines(int d);

/// The 2^k exact solutions y_c of b = A sum_i x_1^(i) on spikes and sines,
/// k = 2^d. Omega_i is the lexicographically first k-subset of supp(z^(i))
/// with k/2 indices in each block.
ConstructionBundle shifted_picket_solutions(int d, Budget budget = Budget{1u << 20});

/// Union of n = 2^m mutually unbiased bases diag(i^{x^T M_a x}) WH, with M_a
/// the trace-form Kerdock set over GF(2^m). m must be even (OddDimension)
/// and a tabulated degree (2, 4 or 6). The bundle carries the picket target z
/// and its coefficient vector x_i in every basis.
ConstructionBundle kerdock_dictionary(int m);

/// b = s z on the Kerdock dictionary with the C(n, s) solutions
/// x_S = sum_{i in S} x_i.
ConstructionBundle kerdock_multi_solutions(int m, int s,
                                           Budget budget = Budget{1'000'000});

/// [A', A''] with A' = [(c+1) I_k - J_k; J_k] / sqrt(c^2 + 2k - 1) and A'' the
/// block-swapped copy. Requires k >= 2 and c >= 2k - 1.
ConstructionBundle mu_k_tight(int k, double c);

/// 2 x N unit vectors at angles j pi / N, with a target on the bisector of
/// atoms 0 and 1.
ConstructionBundle equiangular_lines_2d(int n);

}  // namespace lsa
