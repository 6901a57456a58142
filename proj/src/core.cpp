#include "lsa/core.hpp"

#include "lsa/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lsa {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::SingleAtom: return "SingleAtom";
    case ErrorCode::SparsityTooLarge: return "SparsityTooLarge";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::InvalidSupport: return "InvalidSupport";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::OddSplit: return "OddSplit";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::KerdockSetInvalid: return "KerdockSetInvalid";
    case ErrorCode::SOutOfRange: return "SOutOfRange";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::ZeroTarget: return "ZeroTarget";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

SupportSet::SupportSet(std::vector<int> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  if (!idx_.empty() && idx_.front() < 0)
    throw Error(ErrorCode::InvalidSupport, "negative atom index in support");
  if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end())
    throw Error(ErrorCode::InvalidSupport, "duplicate atom index in support");
}

bool SupportSet::contains(int i) const {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

bool SupportSet::disjoint_with(const SupportSet& other) const {
  auto a = idx_.begin();
  auto b = other.idx_.begin();
  while (a != idx_.end() && b != other.idx_.end()) {
    if (*a == *b) return false;
    if (*a < *b) ++a; else ++b;
  }
  return true;
}

bool SupportSet::subset_of(const SupportSet& other) const {
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(),
                       idx_.end());
}

void Budget::check(std::uint64_t used, const char* what) const {
  if (max_subsets != 0 && used > max_subsets) {
    std::ostringstream os;
    os << what << ": examined more than " << max_subsets
       << " subsets; result not computed";
    throw Error(ErrorCode::BudgetExceeded, os.str());
  }
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t subsets_up_to(int n, int k) {
  std::uint64_t total = 0;
  for (int s = 1; s <= std::min(k, n); ++s) {
    std::uint64_t c = binomial(n, s);
    if (UINT64_MAX - total < c) return UINT64_MAX;
    total += c;
  }
  return total;
}

// ---------------------------------------------------------------------------

Dictionary Dictionary::create(const Matrix& entries, bool normalize,
                              double tol) {
  if (entries.rows() < 1 || entries.cols() < 1)
    throw Error(ErrorCode::InvalidArgument, "dictionary needs m >= 1, N >= 1");
  if (!(tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "column_norm_tol must be positive");
  for (Eigen::Index j = 0; j < entries.cols(); ++j)
    for (Eigen::Index i = 0; i < entries.rows(); ++i)
      if (!std::isfinite(entries(i, j).real()) ||
          !std::isfinite(entries(i, j).imag())) {
        std::ostringstream os;
        os << "non-finite entry at (" << i << ", " << j << ")";
        throw Error(ErrorCode::NonFiniteEntry, os.str());
      }

  Matrix a = entries;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double nrm = a.col(j).norm();
    if (normalize) {
      if (nrm < tol) {
        std::ostringstream os;
        os << "column " << j << " has norm " << nrm;
        throw Error(ErrorCode::ZeroColumn, os.str());
      }
      a.col(j) /= nrm;
    } else if (std::abs(nrm - 1.0) > tol) {
      std::ostringstream os;
      os << "column " << j << " has norm " << nrm << " (tolerance " << tol
         << ")";
      throw Error(nrm < tol ? ErrorCode::ZeroColumn : ErrorCode::NotNormalized,
                  os.str());
    }
  }
  const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0;
  return Dictionary(std::move(a), tol, real);
}

Matrix Dictionary::columns(std::span<const int> s) const {
  Matrix out(a_.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = a_.col(s[j]);
  return out;
}

Matrix Dictionary::columns(const SupportSet& s) const {
  validate(s);
  return columns(std::span<const int>(s.indices()));
}

void Dictionary::validate(const SupportSet& s) const {
  for (int i : s)
    if (i < 0 || i >= atoms()) {
      std::ostringstream os;
      os << "atom index " << i << " out of range [0, " << atoms() << ")";
      throw Error(ErrorCode::InvalidSupport, os.str());
    }
}

// ---------------------------------------------------------------------------

namespace {

// Singular values in decreasing order; a wide matrix gets zeros appended so
// that an s-column subset always yields s values.
RealVector column_singular_values(const Matrix& cols) {
  Eigen::JacobiSVD<Matrix> svd(cols);
  RealVector sv = svd.singularValues();
  if (sv.size() < cols.cols()) {
    RealVector padded = RealVector::Zero(cols.cols());
    padded.head(sv.size()) = sv;
    return padded;
  }
  return sv;
}

bool columns_dependent(const Matrix& cols, double rank_tol) {
  RealVector sv = column_singular_values(cols);
  if (sv.size() == 0) return false;
  const double smax = sv(0);
  if (smax == 0.0) return true;
  return sv(sv.size() - 1) < rank_tol * smax;
}

}  // namespace

int numerical_rank(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++r;
  return r;
}

Matrix span_basis(const Matrix& cols, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol * sv(0)) ++r;
  return svd.matrixU().leftCols(r);
}

double coherence(const Dictionary& d) {
  if (d.atoms() < 2)
    throw Error(ErrorCode::SingleAtom, "coherence needs at least two atoms");
  const Matrix gram = d.matrix().adjoint() * d.matrix();
  double mu = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) mu = std::max(mu, std::abs(gram(i, j)));
  return mu;
}

std::optional<int> spark_at_most(const Dictionary& d, int max_size,
                                 double rank_tol, Budget budget) {
  const int n = d.atoms();
  std::uint64_t used = 0;
  for (int s = 1; s <= std::min(max_size, n); ++s) {
    bool found = false;
    for_each_combination(n, s, [&](std::span<const int> c) {
      budget.check(++used, "spark");
      if (columns_dependent(d.columns(c), rank_tol)) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) return s;
  }
  return std::nullopt;
}

Spark spark(const Dictionary& d, double rank_tol, Budget budget) {
  if (auto s = spark_at_most(d, d.atoms(), rank_tol, budget)) return Spark::finite(*s);
  return Spark::inf();
}

int support_rank(const Dictionary& d, const SupportSet& s, double rank_tol) {
  if (s.empty())
    throw Error(ErrorCode::InvalidSupport, "support_rank needs a non-empty support");
  return numerical_rank(d.columns(s), rank_tol);
}

namespace {

double max_cosine(const Matrix& qi, const Matrix& qj) {
  if (qi.cols() == 0 || qj.cols() == 0) return 0.0;
  const Matrix c = qi.adjoint() * qj;
  double v;
  if (c.rows() == 1 || c.cols() == 1) {
    v = c.norm();
  } else {
    Eigen::JacobiSVD<Matrix> svd(c);
    v = svd.singularValues()(0);
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

double principal_angle_cos(const Dictionary& d, const SupportSet& i,
                           const SupportSet& j, double rank_tol) {
  if (i.empty() || j.empty())
    throw Error(ErrorCode::InvalidSupport, "principal angle needs non-empty supports");
  if (!i.disjoint_with(j))
    throw Error(ErrorCode::OverlappingSupports, "supports I and J overlap");
  return max_cosine(span_basis(d.columns(i), rank_tol),
                    span_basis(d.columns(j), rank_tol));
}

double generalized_coherence(const Dictionary& d, int k, double rank_tol,
                             Budget budget) {
  const int n = d.atoms();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "generalized coherence needs k >= 1");
  if (2 * k > n) {
    std::ostringstream os;
    os << "generalized coherence of degree " << k << " needs 2k <= N = " << n;
    throw Error(ErrorCode::SparsityTooLarge, os.str());
  }
  if (k == 1) return coherence(d);

  std::vector<std::vector<int>> sets;
  std::vector<Matrix> bases;
  std::uint64_t used = 0;
  for_each_combination(n, k, [&](std::span<const int> c) {
    budget.check(++used, "generalized coherence");
    sets.emplace_back(c.begin(), c.end());
    bases.push_back(span_basis(d.columns(c), rank_tol));
    return true;
  });

  auto disjoint = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t x = 0, y = 0;
    while (x < a.size() && y < b.size()) {
      if (a[x] == b[y]) return false;
      if (a[x] < b[y]) ++x; else ++y;
    }
    return true;
  };

  double best = 0.0;
  for (std::size_t p = 0; p < sets.size(); ++p) {
    for (std::size_t q = p + 1; q < sets.size(); ++q) {
      if (!disjoint(sets[p], sets[q])) continue;
      budget.check(++used, "generalized coherence");
      best = std::max(best, max_cosine(bases[p], bases[q]));
      if (best >= 1.0) return 1.0;
    }
  }
  return best;
}

InvariantReport analyze(const Dictionary& d, int max_k, double rank_tol,
                        Budget budget) {
  InvariantReport r;
  r.rank_tol = rank_tol;
  r.column_norm_tol = d.column_norm_tol();
  r.rank = numerical_rank(d.matrix(), rank_tol);
  r.coherence = coherence(d);
  r.spark = spark(d, rank_tol, budget);
  for (int k = 1; k <= max_k && 2 * k <= d.atoms(); ++k)
    r.generalized_coherence[k] = generalized_coherence(d, k, rank_tol, budget);
  return r;
}

}  // namespace lsa
