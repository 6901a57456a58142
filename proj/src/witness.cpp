#include "lsa/solvers.hpp"

#include "lsa/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lsa {

namespace {

using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

RVec to_real(const Vector& z) {
  const Eigen::Index n = z.size();
  RVec r(2 * n);
  r.head(n) = z.real();
  r.tail(n) = z.imag();
  return r;
}

Vector from_real(const RVec& r) {
  const Eigen::Index n = r.size() / 2;
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = Scalar(r(i), r(n + i));
  return z;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double gauss() { return normal_(gen_); }
  Vector direction(int m, bool real) {
    Vector v(m);
    for (int i = 0; i < m; ++i) v(i) = real ? Scalar(gauss(), 0.0) : Scalar(gauss(), gauss());
    return v / v.norm();
  }
  Scalar phase(bool real) {
    if (real) return gauss() < 0 ? -1.0 : 1.0;
    const double t = std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(gen_);
    return std::polar(1.0, t);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Spans of all k-subsets. For unit b, f_i(b) = 1 - ||Q_i* b||^2 is the squared
// distance from b to span i.
struct Sites {
  std::vector<Matrix> bases;

  double f(std::size_t i, const Vector& b) const {
    return std::max(0.0, 1.0 - (bases[i].adjoint() * b).squaredNorm());
  }
  RVec grad(std::size_t i, const Vector& b) const {
    const Vector c = bases[i].adjoint() * b;
    const Vector pb = bases[i] * c;
    return to_real(-2.0 * (pb - c.squaredNorm() * b));
  }
};

class SphereSearch {
 public:
  SphereSearch(const Sites& sites, std::size_t need, int max_steps)
      : s_(sites), need_(need), max_steps_(max_steps) {}

  std::optional<Vector> run(Vector b) {
    b.normalize();
    std::vector<std::size_t> active;
    {
      const auto f = values(b);
      const double lo = *std::min_element(f.begin(), f.end());
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] <= lo + kTie) active.push_back(i);
    }
    double h = 0.1;
    for (int step = 0; step < max_steps_; ++step) {
      if (!equalize(b, active)) return std::nullopt;
      if (active.size() >= need_) return b;

      RMat g(static_cast<Eigen::Index>(active.size()), 2 * b.size());
      for (std::size_t r = 0; r < active.size(); ++r)
        g.row(static_cast<Eigen::Index>(r)) = s_.grad(active[r], b).transpose();
      Eigen::CompleteOrthogonalDecomposition<RMat> cod(g);
      if (cod.rank() < g.rows()) return std::nullopt;
      const RVec delta = cod.solve(RVec::Ones(g.rows()));
      const double len = delta.norm();
      if (!std::isfinite(len) || len == 0.0 || len > 1e8) return std::nullopt;
      const Vector dir = from_real(delta / len);

      const double v0 = level(b, active);
      auto trial = [&](double t, Vector& out) {
        out = b + t * dir;
        out.normalize();
        return equalize(out, active) && level(out, active) > v0;
      };

      Vector bt;
      bool moved = false;
      while (h > 1e-12) {
        if (!trial(h, bt)) {
          h *= 0.5;
          continue;
        }
        if (gap(bt, active) >= 0.0) {
          b = bt;
          h = std::min(h * 1.5, 0.5);
          moved = true;
          break;
        }
        double lo = 0.0, hi = h;
        Vector b_hi = bt, bm;
        for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const bool ok = trial(mid, bm);
          if (ok && gap(bm, active) >= 0.0) {
            lo = mid;
          } else {
            hi = mid;
            if (ok) b_hi = bm;
          }
        }
        b = b_hi;
        active.push_back(closest_inactive(b, active));
        moved = true;
        break;
      }
      if (!moved) return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  static constexpr double kTie = 1e-12;

  std::vector<double> values(const Vector& b) const {
    std::vector<double> f(s_.bases.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = s_.f(i, b);
    return f;
  }

  double level(const Vector& b, const std::vector<std::size_t>& active) const {
    double v = 0.0;
    for (std::size_t i : active) v += s_.f(i, b);
    return v / static_cast<double>(active.size());
  }

  std::size_t closest_inactive(const Vector& b,
                               const std::vector<std::size_t>& active) const {
    std::size_t best = 0;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s_.bases.size(); ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double f = s_.f(i, b);
      if (f < lo) {
        lo = f;
        best = i;
      }
    }
    return best;
  }

  double gap(const Vector& b, const std::vector<std::size_t>& active) const {
    const std::size_t i = closest_inactive(b, active);
    if (active.size() == s_.bases.size()) return 1.0;
    return s_.f(i, b) - level(b, active);
  }

  // Newton iteration on f_i(b) = f_0(b) over the active sites.
  bool equalize(Vector& b, const std::vector<std::size_t>& active) const {
    if (active.size() < 2) return true;
    const auto n = static_cast<Eigen::Index>(active.size()) - 1;
    for (int it = 0; it < 30; ++it) {
      RVec r(n);
      const double f0 = s_.f(active[0], b);
      for (Eigen::Index i = 0; i < n; ++i)
        r(i) = s_.f(active[static_cast<std::size_t>(i + 1)], b) - f0;
      if (r.lpNorm<Eigen::Infinity>() < 1e-15) return true;
      RMat j(n, 2 * b.size());
      const RVec g0 = s_.grad(active[0], b);
      for (Eigen::Index i = 0; i < n; ++i)
        j.row(i) = (s_.grad(active[static_cast<std::size_t>(i + 1)], b) - g0).transpose();
      const RVec step = j.completeOrthogonalDecomposition().solve(-r);
      if (!step.allFinite()) return false;
      b += from_real(step);
      b.normalize();
    }
    RVec r(n);
    const double f0 = s_.f(active[0], b);
    for (Eigen::Index i = 0; i < n; ++i)
      r(i) = s_.f(active[static_cast<std::size_t>(i + 1)], b) - f0;
    return r.lpNorm<Eigen::Infinity>() < 1e-12;
  }

  const Sites& s_;
  std::size_t need_;
  int max_steps_;
};

std::optional<std::vector<int>> smallest_dependent_set(const Dictionary& d, int max_size,
                                                       double rank_tol) {
  for (int s = 1; s <= max_size; ++s) {
    std::optional<std::vector<int>> hit;
    for_each_combination(d.atoms(), s, [&](std::span<const int> c) {
      if (numerical_rank(d.columns(c), rank_tol) < s) {
        hit = std::vector<int>(c.begin(), c.end());
        return false;
      }
      return true;
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

// Incenter of the simplex spanned by the k+1 columns of S, blended with a
// random direction orthogonal to span(A_S). Distances to the k+1 facets stay
// equal under that blend.
Vector incenter_seed(const Dictionary& d, const std::vector<int>& s, Rng& rng) {
  const Matrix as = d.columns(std::span<const int>(s));
  const int n = static_cast<int>(s.size());
  Vector c(n);
  for (int j = 0; j < n; ++j) {
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (i != j) rest.push_back(s[static_cast<std::size_t>(i)]);
    const Matrix q = span_basis(d.columns(std::span<const int>(rest)));
    const Vector a = as.col(j);
    const double h = (a - q * (q.adjoint() * a)).norm();
    c(j) = rng.phase(d.is_real()) / std::max(h, 1e-300);
  }
  Vector b = as * c;
  b.normalize();
  const Matrix q = span_basis(as);
  Vector w = rng.direction(d.rows(), d.is_real());
  w -= q * (q.adjoint() * w);
  if (w.norm() > 1e-8) {
    const double t = rng.uniform(0.0, 0.5 * M_PI);
    b = std::cos(t) * b + std::sin(t) * (w / w.norm());
  }
  return b;
}

}  // namespace

Witness find_multi_solution_witness(const Dictionary& d, int k,
                                    const WitnessOptions& opts) {
  if (k < 1 || k >= d.atoms())
    throw Error(ErrorCode::InvalidArgument, "witness search needs 1 <= k < N");
  Rng rng(opts.seed);
  const bool real = d.is_real();
  const double tol = opts.solve.rank_tol;

  auto accept = [&](const Vector& b, Witness& w) {
    const SolutionList list = solve_list_sparse(d, b, k, opts.solve);
    w.b = b;
    w.verified_count = list.support_count;
    w.finite = list.finite;
    return !list.finite || list.support_count > k;
  };

  opts.solve.budget.check(subsets_up_to(d.atoms(), k + 1), "witness dependency scan");
  if (const auto dep = smallest_dependent_set(d, k + 1, tol)) {
    const Matrix as = d.columns(std::span<const int>(*dep));
    Witness w;
    w.proof_case = static_cast<int>(dep->size()) <= k ? 1 : 2;
    for (int attempt = 0; attempt < std::max(1, opts.max_restarts); ++attempt) {
      Vector c(as.cols());
      for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) = real ? Scalar(rng.gauss(), 0.0) : Scalar(rng.gauss(), rng.gauss());
      Vector b = as * c;
      if (b.norm() < 1e-8) continue;
      b.normalize();
      if (accept(b, w)) return w;
    }
    throw Error(ErrorCode::WitnessNotFound,
                "random combinations of a dependent set did not verify");
  }

  opts.solve.budget.check(binomial(d.atoms(), k), "witness site enumeration");
  Sites sites;
  for_each_combination(d.atoms(), k, [&](std::span<const int> c) {
    sites.bases.push_back(span_basis(d.columns(c), tol));
    return true;
  });

  SphereSearch search(sites, static_cast<std::size_t>(k) + 1, opts.max_steps);
  Witness w;
  w.proof_case = 3;
  std::vector<int> all(static_cast<std::size_t>(d.atoms()));
  std::iota(all.begin(), all.end(), 0);
  for (int r = 0; r < opts.max_restarts; ++r) {
    Vector seed;
    if (r % 2 == 0) {
      seed = rng.direction(d.rows(), real);
    } else {
      std::shuffle(all.begin(), all.end(), rng.engine());
      std::vector<int> s(all.begin(), all.begin() + k + 1);
      std::sort(s.begin(), s.end());
      seed = incenter_seed(d, s, rng);
    }
    const auto b = search.run(seed);
    if (b && accept(*b, w)) return w;
  }
  throw Error(ErrorCode::WitnessNotFound,
              "expanding-sphere search exhausted its restarts");
}

}  // namespace lsa
