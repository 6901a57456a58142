#include "lsa/solvers.hpp"

#include "lsa/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace lsa {

const char* to_string(ApproxMode mode) noexcept {
  return mode == ApproxMode::ExactSize ? "exact-size" : "minimal-supports";
}

std::vector<SupportSet> SolutionList::supports() const {
  std::vector<SupportSet> out;
  out.reserve(solutions.size());
  for (const auto& s : solutions) out.push_back(s.support);
  return out;
}

SparseSolution least_squares(const Dictionary& d, const SupportSet& s,
                             const Vector& b, double rank_tol) {
  if (b.size() != d.rows())
    throw Error(ErrorCode::InvalidArgument, "target length does not match dictionary rows");
  if (!b.allFinite())
    throw Error(ErrorCode::NonFiniteEntry, "target has non-finite entries");
  SparseSolution out;
  out.support = s;
  if (s.empty()) {
    out.residual = b.norm();
    return out;
  }
  const Matrix as = d.columns(s);
  Eigen::JacobiSVD<Matrix> svd(as, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * sv(0)) ++r;
  Vector x = Vector::Zero(as.cols());
  if (r > 0) {
    Vector ub = svd.matrixU().leftCols(r).adjoint() * b;
    for (int i = 0; i < r; ++i) ub(i) /= sv(i);
    x = svd.matrixV().leftCols(r) * ub;
  }
  out.coefficients = std::move(x);
  out.residual = (as * out.coefficients - b).norm();
  out.coeffs_unique = (r == static_cast<int>(s.size()));
  return out;
}

namespace {

struct Candidate {
  std::vector<int> support;
  double residual;
  bool full_rank;
};

// Residual of the orthogonal projection of b onto span(A_S) plus a rank flag.
struct ProjectionFit {
  double residual;
  bool full_rank;
};

ProjectionFit fit(const Dictionary& d, std::span<const int> s, const Vector& b,
                  double rank_tol) {
  const Matrix as = d.columns(s);
  Eigen::JacobiSVD<Matrix> svd(as, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * sv(0)) ++r;
  const auto u = svd.matrixU().leftCols(r);
  const Vector proj = u * (u.adjoint() * b);
  return {(b - proj).norm(), r == static_cast<int>(s.size())};
}

void check_query(const Dictionary& d, const Vector& b, int k) {
  if (b.size() != d.rows())
    throw Error(ErrorCode::InvalidArgument, "target length does not match dictionary rows");
  if (!b.allFinite())
    throw Error(ErrorCode::NonFiniteEntry, "target has non-finite entries");
  if (k < 1 || k > d.atoms()) {
    std::ostringstream os;
    os << "sparsity k = " << k << " outside [1, " << d.atoms() << "]";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (b.norm() == 0.0) throw Error(ErrorCode::ZeroTarget, "target vector is zero");
}

std::vector<Candidate> minimal_only(std::vector<Candidate> cands) {
  std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return a.support.size() < b.support.size();
  });
  std::vector<Candidate> kept;
  for (auto& c : cands) {
    bool dominated = false;
    for (const auto& m : kept) {
      if (m.support.size() >= c.support.size()) break;
      if (std::includes(c.support.begin(), c.support.end(), m.support.begin(),
                        m.support.end())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(c));
  }
  return kept;
}

void finish(const Dictionary& d, SolutionList& list,
            std::vector<Candidate> chosen, const SolveOptions& opts) {
  std::sort(chosen.begin(), chosen.end(),
            [](const auto& a, const auto& b) { return a.support < b.support; });
  for (auto& c : chosen)
    list.solutions.push_back(
        least_squares(d, SupportSet(std::move(c.support)), list.target, opts.rank_tol));
  list.support_count = static_cast<int>(list.solutions.size());
  if (!opts.restrict.empty()) {
    const auto sups = list.supports();
    for (int r : opts.restrict)
      list.restricted_counts[r] = restricted_list_size(sups, r, opts.packing_budget);
  }
}

}  // namespace

SolutionList solve_list_sparse(const Dictionary& d, const Vector& b, int k,
                               const SolveOptions& opts) {
  check_query(d, b, k);
  opts.budget.check(subsets_up_to(d.atoms(), k), "List-Sparse enumeration");

  auto tie = [&](double best) { return best * (1.0 + opts.eq_tol) + opts.eq_tol; };
  double best = std::numeric_limits<double>::infinity();
  std::vector<Candidate> pool;
  for (int s = 1; s <= k; ++s) {
    for_each_combination(d.atoms(), s, [&](std::span<const int> c) {
      const ProjectionFit f = fit(d, c, b, opts.rank_tol);
      if (f.residual < best) {
        best = f.residual;
        const double cut = tie(best);
        std::erase_if(pool, [&](const Candidate& p) { return p.residual > cut; });
      }
      if (f.residual <= tie(best))
        pool.push_back({std::vector<int>(c.begin(), c.end()), f.residual, f.full_rank});
      return true;
    });
  }

  SolutionList list;
  list.target = b;
  list.k = k;
  list.optimal_residual = best;
  list.finite = std::all_of(pool.begin(), pool.end(),
                            [](const Candidate& c) { return c.full_rank; });
  finish(d, list, minimal_only(std::move(pool)), opts);
  return list;
}

SolutionList solve_list_approx(const Dictionary& d, const Vector& b, int k,
                               double eps, ApproxMode mode,
                               const SolveOptions& opts) {
  check_query(d, b, k);
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::InvalidArgument, "eps must be a finite value >= 0");
  const int lo = mode == ApproxMode::ExactSize ? k : 1;
  const std::uint64_t total = mode == ApproxMode::ExactSize
                                  ? binomial(d.atoms(), k)
                                  : subsets_up_to(d.atoms(), k);
  opts.budget.check(total, "List-Approx enumeration");

  double best = std::numeric_limits<double>::infinity();
  std::vector<Candidate> pool;
  for (int s = lo; s <= k; ++s) {
    for_each_combination(d.atoms(), s, [&](std::span<const int> c) {
      const ProjectionFit f = fit(d, c, b, opts.rank_tol);
      best = std::min(best, f.residual);
      if (f.residual <= eps + opts.abs_tol)
        pool.push_back({std::vector<int>(c.begin(), c.end()), f.residual, f.full_rank});
      return true;
    });
  }

  SolutionList list;
  list.target = b;
  list.k = k;
  list.eps = eps;
  list.mode = mode;
  list.optimal_residual = best;
  list.finite = std::all_of(pool.begin(), pool.end(),
                            [](const Candidate& c) { return c.full_rank; });
  if (mode == ApproxMode::MinimalSupports) pool = minimal_only(std::move(pool));
  finish(d, list, std::move(pool), opts);
  return list;
}

ListStats monte_carlo_list_stats(const Dictionary& d, int k, int trials,
                                 std::uint64_t seed, const SolveOptions& opts) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool complex_draw = !d.is_real();
  ListStats st;
  st.trials = trials;
  int unique = 0, multiple = 0, infinite = 0;
  for (int t = 0; t < trials; ++t) {
    Vector b(d.rows());
    for (Eigen::Index i = 0; i < b.size(); ++i)
      b(i) = complex_draw ? Scalar(gauss(rng), gauss(rng)) : Scalar(gauss(rng), 0.0);
    b /= b.norm();
    const SolutionList list = solve_list_sparse(d, b, k, opts);
    st.max_list_size = std::max(st.max_list_size, list.support_count);
    if (!list.finite) ++infinite;
    else if (list.support_count == 1) ++unique;
    else ++multiple;
  }
  st.unique_fraction = static_cast<double>(unique) / trials;
  st.multiple_fraction = static_cast<double>(multiple) / trials;
  st.infinite_fraction = static_cast<double>(infinite) / trials;
  return st;
}

std::optional<int> min_exact_sparsity(const Dictionary& d, const Vector& b,
                                      int max_k, double tol,
                                      const SolveOptions& opts) {
  for (int k = 1; k <= std::min(max_k, d.atoms()); ++k) {
    SolveOptions o = opts;
    o.abs_tol = tol;
    if (solve_list_approx(d, b, k, 0.0, ApproxMode::ExactSize, o).support_count > 0)
      return k;
  }
  return std::nullopt;
}

}  // namespace lsa
