#include "lsa/bounds.hpp"

#include "lsa/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsa {

namespace {

std::int64_t saturate(double v) {
  constexpr double kMax = 9.2e18;
  return v >= kMax ? std::numeric_limits<std::int64_t>::max()
                   : static_cast<std::int64_t>(v);
}

void require(bool ok, const char* msg) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, msg);
}

void require_eps(double eps) { require(eps >= 0.0 && std::isfinite(eps), "eps must be >= 0"); }

}  // namespace

double simplex_circumradius(int n) {
  require(n >= 2, "simplex needs n >= 2 vertices");
  return std::sqrt((n - 1.0) / (2.0 * n));
}

ListBound euclidean_list_bound(double delta, double eps) {
  require(delta > 0.0, "delta must be > 0");
  require_eps(eps);
  if (eps >= delta / std::sqrt(2.0)) return std::nullopt;
  return saturate(std::floor(1.0 / (1.0 - 2.0 * eps * eps / (delta * delta))));
}

ListBound spherical_list_bound(double mu, double eps) {
  require(mu >= 0.0 && mu < 1.0, "spherical bound needs 0 <= mu < 1");
  require_eps(eps);
  if (eps >= std::sqrt(1.0 - mu)) return std::nullopt;
  return saturate(std::floor(1.0 / (1.0 - eps * eps / (1.0 - mu))));
}

ListBound list_bound_mu_k(double mu_k, double eps) {
  require(mu_k >= 0.0 && mu_k <= 1.0, "mu_k must lie in [0, 1]");
  require_eps(eps);
  if (mu_k >= 1.0 || eps >= std::sqrt(1.0 - mu_k)) return std::nullopt;
  return saturate(std::floor(1.0 / (1.0 - eps * eps / (1.0 - mu_k))));
}

ListBound list_bound_coherence(double mu, int k, double eps) {
  require(k >= 1, "k must be >= 1");
  require(mu >= 0.0, "mu must be >= 0");
  require_eps(eps);
  const double lead = 1.0 - (2.0 * k - 1.0) * mu;
  const double tail = 1.0 - (k - 1.0) * mu;
  if (!(lead > 0.0) || eps >= std::sqrt(lead / tail)) return std::nullopt;
  return saturate(std::floor(1.0 / (1.0 - tail * eps * eps / lead)));
}

ListBound av_list_bound_k1(double mu, double eps) {
  require(mu >= 0.0, "mu must be >= 0");
  require_eps(eps);
  if (17.0 * mu >= 1.0 || eps > std::sqrt(1.0 - 17.0 * mu)) return std::nullopt;
  return saturate(std::floor(4.0 / (1.0 - eps * eps)));
}

ListBound av_list_bound(double mu, int k, double eps, double gamma) {
  require(k >= 1, "k must be >= 1");
  require(mu >= 0.0, "mu must be >= 0");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require_eps(eps);
  const double slack = 1.0 - 24.0 * std::pow(mu * k, 1.0 - gamma);
  if (slack < 0.0 || eps > std::sqrt(slack) || eps >= 1.0) return std::nullopt;
  return saturate(std::ceil(std::pow(11.0 / (1.0 - eps * eps), 1.0 / (1.0 - gamma))));
}

bool gen_listapprox_regime(double mu, int k, std::int64_t l) {
  require(k >= 1 && l >= 1, "k and L must be >= 1");
  return 2.0 * k * static_cast<double>(l) * mu <= 1.0;
}

std::optional<double> mu_k_upper(double mu, int k) {
  require(k >= 1, "k must be >= 1");
  if ((k - 1.0) * mu >= 1.0) return std::nullopt;
  return k * mu / (1.0 - (k - 1.0) * mu);
}

double mu_k_upper_simple(double mu, int k) {
  require(k >= 1, "k must be >= 1");
  return (2.0 * k - 1.0) * mu;
}

UniquenessFlags uniqueness_thresholds(double mu, Spark spark, int k) {
  UniquenessFlags f;
  f.unique_by_mu = (2.0 * k - 1.0) * mu < 1.0;
  f.unique_by_spark = spark.infinite || 2 * k < spark.value;
  f.two_onb_cohbound = k * mu < 1.0;
  return f;
}

ListSparseConditions list_sparse_conditions(const Dictionary& d, int k, std::int64_t l,
                                            double rank_tol, Budget budget) {
  const int n = d.atoms();
  require(k >= 1 && k <= n, "k must lie in [1, N]");
  require(l >= 1, "L must be >= 1");
  ListSparseConditions c;
  c.spark = spark(d, rank_tol, budget);
  c.rank = numerical_rank(d.matrix(), rank_tol);
  c.finite = c.spark.exceeds(k);
  const auto choose = binomial(n, k);
  c.sufficient = c.finite && choose <= static_cast<std::uint64_t>(l);
  c.unique = k == n && n == c.rank;
  c.necessary = c.unique || (k < l && c.finite);
  c.at_most_two = (c.finite && choose <= 2) ||
                  (k == 1 && c.rank == 2 && !c.spark.infinite && c.spark.value == 3);
  return c;
}

std::int64_t measured_disjoint_list_size(const Dictionary& d, const Vector& b, int k,
                                         double eps, const SolveOptions& opts) {
  const SolutionList list = solve_list_approx(d, b, k, eps, ApproxMode::MinimalSupports, opts);
  return restricted_list_size(list.supports(), 1, opts.packing_budget);
}

std::vector<BoundReport> verify_bounds(const Dictionary& d, const std::vector<Vector>& targets,
                                       int k, double eps, const VerifyOptions& opts) {
  require(!targets.empty(), "verify_bounds needs at least one target");
  require(k >= 1 && k <= d.atoms(), "k must lie in [1, N]");
  require_eps(eps);
  const double mu = opts.mu ? *opts.mu : coherence(d);
  std::optional<double> mu_k = opts.mu_k;
  if (!mu_k && 2 * k <= d.atoms())
    mu_k = generalized_coherence(d, k, opts.solve.rank_tol, opts.solve.budget);

  struct Entry {
    const char* name;
    bool defined;
    ListBound value;
    std::map<std::string, double> inputs;
  };
  std::vector<Entry> entries;
  if (k == 1) {
    const bool ok = mu < 1.0;
    entries.push_back({"spherical", ok, ok ? spherical_list_bound(mu, eps) : std::nullopt,
                       {{"mu", mu}, {"eps", eps}}});
  }
  if (mu_k)
    entries.push_back({"mu_k", true, list_bound_mu_k(*mu_k, eps),
                       {{"mu_k", *mu_k}, {"k", k}, {"eps", eps}}});
  else
    entries.push_back({"mu_k", false, std::nullopt, {{"k", k}, {"eps", eps}}});
  entries.push_back({"coherence", true, list_bound_coherence(mu, k, eps),
                     {{"mu", mu}, {"k", k}, {"eps", eps}}});
  if (k == 1)
    entries.push_back({"av_k1", true, av_list_bound_k1(mu, eps), {{"mu", mu}, {"eps", eps}}});
  else
    entries.push_back({"av_k", true, av_list_bound(mu, k, eps, 0.0),
                       {{"mu", mu}, {"k", k}, {"eps", eps}, {"gamma", 0.0}}});

  std::vector<BoundReport> out;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::int64_t measured = measured_disjoint_list_size(d, targets[t], k, eps, opts.solve);
    for (const auto& e : entries) {
      BoundReport r;
      r.bound_name = e.name;
      r.inputs = e.inputs;
      r.target = t;
      r.precondition_holds = e.defined && e.value.has_value();
      if (e.value) r.bound_value = static_cast<double>(*e.value);
      r.measured = measured;
      r.violated = r.precondition_holds && measured > *e.value;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace lsa
