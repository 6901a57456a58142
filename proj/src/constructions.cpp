#include "lsa/constructions.hpp"

#include "lsa/combinatorics.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace lsa {

namespace {

constexpr double kZero = 1e-12;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

BundleSolution sparse_from_dense(std::string label, std::size_t target, const Vector& x) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > kZero) idx.push_back(static_cast<int>(i));
  BundleSolution s;
  s.label = std::move(label);
  s.target = target;
  s.coefficients.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    s.coefficients(static_cast<Eigen::Index>(j)) = x(idx[j]);
  s.support = SupportSet(std::move(idx));
  return s;
}

Vector unit(int m, int i) {
  Vector e = Vector::Zero(m);
  e(i) = 1.0;
  return e;
}

}  // namespace

const NamedTarget& ConstructionBundle::target(const std::string& label) const {
  for (const auto& t : targets)
    if (t.label == label) return t;
  fail(ErrorCode::InvalidArgument, "bundle has no target '" + label + "'");
}

Vector dense_coefficients(const BundleSolution& s, int n_atoms) {
  Vector x = Vector::Zero(n_atoms);
  for (std::size_t j = 0; j < s.support.size(); ++j)
    x(s.support[j]) = s.coefficients(static_cast<Eigen::Index>(j));
  return x;
}

double solution_residual(const ConstructionBundle& bundle, const BundleSolution& s) {
  const Vector& b = bundle.targets.at(s.target).b;
  return (bundle.dictionary.columns(s.support) * s.coefficients - b).norm();
}

ConstructionBundle identity_bad_b(int m, int k, double eps) {
  if (k < 1 || k >= m) fail(ErrorCode::ParameterOutOfRange, "identity_bad_b needs 1 <= k < m");
  const double limit = std::sqrt(static_cast<double>(m - k) / m);
  if (!(eps > 0.0) || !(eps < limit)) {
    std::ostringstream os;
    os << "eps must lie in (0, " << limit << ")";
    fail(ErrorCode::EpsOutOfRange, os.str());
  }
  ConstructionBundle out("identity-bad-b",
                         Dictionary::create(Matrix::Identity(m, m), false));
  Vector b(m);
  b(0) = std::sqrt(1.0 - (m - 1) * eps * eps / (m - k));
  for (int i = 1; i < m; ++i) b(i) = eps / std::sqrt(static_cast<double>(m - k));
  out.targets.push_back({"b", b});
  out.parameters = {{"m", m}, {"k", k}, {"eps", eps}};
  out.predicted = {{"coherence", 0.0},
                   {"rank", m},
                   {"approx_count", static_cast<double>(binomial(m - 1, k - 1))},
                   {"eps", eps}};
  for_each_combination(m - 1, k - 1, [&](std::span<const int> c) {
    std::vector<int> s{0};
    for (int j : c) s.push_back(j + 1);
    out.approx_supports.emplace_back(std::move(s));
    return true;
  });
  return out;
}

ConstructionBundle tight_example(int m, int k, double eps) {
  if (k < 1 || m < k + 2) fail(ErrorCode::DimensionTooSmall, "tight_example needs m >= k + 2");
  if (!(eps > 0.0) || !std::isfinite(eps)) fail(ErrorCode::EpsOutOfRange, "eps must be > 0");
  const double t = eps * std::sqrt(static_cast<double>(k));
  const double norm = std::sqrt(1.0 + t * t);
  Matrix a = Matrix::Zero(m, m);
  for (int j = 1; j < m; ++j) a(j, 0) = 1.0 / std::sqrt(static_cast<double>(m - 1));
  for (int i = 1; i < m; ++i) {
    a(0, i) = 1.0 / norm;
    a(i, i) = t / norm;
  }
  ConstructionBundle out("tight-example", Dictionary::create(a, false));
  out.targets.push_back({"e1", unit(m, 0)});
  const int disjoint = (m - 1) / k;
  const double cross = t / (std::sqrt(static_cast<double>(m - 1)) * norm);
  out.parameters = {{"m", m}, {"k", k}, {"eps", eps}};
  out.predicted = {{"coherence", std::max(1.0 / (1.0 + t * t), cross)},
                   {"disjoint_supports", disjoint},
                   {"eps", eps}};
  for (int j = 0; j < disjoint; ++j) {
    std::vector<int> s;
    for (int i = 0; i < k; ++i) s.push_back(1 + j * k + i);
    out.approx_supports.emplace_back(std::move(s));
  }
  return out;
}

namespace {

Matrix unitary_dft(int n) {
  Matrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int t = 0; t < n; ++t)
    for (int j = 0; j < n; ++j) {
      const long r = (static_cast<long>(t) * j) % n;
      f(t, j) = std::polar(scale, -2.0 * M_PI * static_cast<double>(r) / n);
    }
  return f;
}

struct SpikesLayout {
  int n;
  int k;
  Matrix f;
  Matrix a;
};

SpikesLayout spikes_layout(int d) {
  if (d < 1 || d > 6) fail(ErrorCode::ParameterOutOfRange, "spikes and sines needs 1 <= d <= 6");
  SpikesLayout l;
  l.k = 1 << d;
  l.n = l.k * l.k;
  l.f = unitary_dft(l.n);
  l.a.resize(l.n, 2 * l.n);
  l.a << l.f, Matrix::Identity(l.n, l.n);
  return l;
}

// Shifted picket fence v^(i) and the kernel vector z^(i) = [v^(i); -F v^(i)].
Vector shifted_kernel(const SpikesLayout& l, int shift) {
  Vector v = Vector::Zero(l.n);
  for (int a = 0; a < l.k; ++a) v(a * l.k + shift) = 1.0;
  Vector z(2 * l.n);
  z << v, -(l.f * v);
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z(i)) < kZero) z(i) = 0.0;
  return z;
}

}  // namespace

ConstructionBundle spikes_and_sines(int d) {
  const SpikesLayout l = spikes_layout(d);
  ConstructionBundle out("spikes-sines", Dictionary::create(l.a, false));
  out.targets.push_back({"zero", Vector::Zero(l.n)});
  out.solutions.push_back(sparse_from_dense("z", 0, shifted_kernel(l, 0)));
  const double mu = 1.0 / l.k;
  out.parameters = {{"d", d}, {"n", l.n}, {"k", l.k}};
  out.predicted = {{"coherence", mu},
                   {"spark", 2.0 * l.k},
                   {"rank", l.n},
                   {"kernel_sparsity", 2.0 * l.k}};
  return out;
}

ConstructionBundle shifted_picket_solutions(int d, Budget budget) {
  if (d < 1) fail(ErrorCode::OddSplit, "k = 2^d must be even: d >= 1");
  const SpikesLayout l = spikes_layout(d);
  const int k = l.k;
  if (k >= 63) fail(ErrorCode::ParameterOutOfRange, "2^k solutions do not fit a counter");
  budget.check(std::uint64_t{1} << k, "picket solution generation");

  std::vector<Vector> x1, x2;
  for (int i = 0; i < k; ++i) {
    const Vector z = shifted_kernel(l, i);
    Vector keep = Vector::Zero(z.size());
    int in_first = 0, in_second = 0;
    for (Eigen::Index t = 0; t < z.size(); ++t) {
      if (z(t) == Scalar(0.0)) continue;
      int& used = t < l.n ? in_first : in_second;
      if (used < k / 2) {
        keep(t) = z(t);
        ++used;
      }
    }
    x1.push_back(keep);
    x2.push_back(keep - z);
  }
  Vector sum1 = Vector::Zero(2 * l.n);
  for (const auto& x : x1) sum1 += x;

  ConstructionBundle out("picket-solutions", Dictionary::create(l.a, false));
  out.targets.push_back({"b", l.a * sum1});
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
    Vector y = Vector::Zero(2 * l.n);
    std::string label = "y_";
    for (int i = 0; i < k; ++i) {
      const bool one = (c >> i) & 1u;
      y += one ? x1[static_cast<std::size_t>(i)] : x2[static_cast<std::size_t>(i)];
      label += one ? '1' : '0';
    }
    out.solutions.push_back(sparse_from_dense(std::move(label), 0, y));
  }
  out.parameters = {{"d", d}, {"n", l.n}, {"k", k}};
  out.predicted = {{"coherence", 1.0 / k},
                   {"solution_count", std::ldexp(1.0, k)},
                   {"sparsity_min", k * k / 2.0},
                   {"sparsity_max", static_cast<double>(k) * k}};
  return out;
}

namespace {

// GF(2^m) in the polynomial basis 1, alpha, ..., alpha^{m-1}.
class Field {
 public:
  explicit Field(int m) : m_(m) {
    switch (m) {
      case 2: poly_ = 0b111; break;        // x^2 + x + 1
      case 4: poly_ = 0b10011; break;      // x^4 + x + 1
      case 6: poly_ = 0b1000011; break;    // x^6 + x + 1
      default:
        fail(ErrorCode::ParameterOutOfRange, "no tabulated irreducible polynomial for this m");
    }
  }

  unsigned mul(unsigned a, unsigned b) const {
    unsigned r = 0;
    while (b) {
      if (b & 1u) r ^= a;
      b >>= 1;
      a <<= 1;
      if (a >> m_) a ^= poly_;
    }
    return r;
  }

  int trace(unsigned y) const {
    unsigned t = 0, p = y;
    for (int i = 0; i < m_; ++i) {
      t ^= p;
      p = mul(p, p);
    }
    return static_cast<int>(t & 1u);  // the trace lies in GF(2)
  }

  unsigned alpha_pow(int e) const {
    unsigned r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, 0b10);
    return r;
  }

 private:
  int m_;
  unsigned poly_ = 0;
};

using BitMatrix = std::vector<std::vector<int>>;

BitMatrix kerdock_matrix(const Field& f, int m, unsigned a) {
  BitMatrix p(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          f.trace(f.mul(a, f.alpha_pow(i + j)));
  return p;
}

bool nonsingular_gf2(BitMatrix a) {
  const std::size_t n = a.size();
  for (std::size_t c = 0, r = 0; c < n; ++c, ++r) {
    std::size_t piv = r;
    while (piv < n && !a[piv][c]) ++piv;
    if (piv == n) return false;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != r && a[i][c])
        for (std::size_t j = 0; j < n; ++j) a[i][j] ^= a[r][j];
  }
  return true;
}

struct KerdockLayout {
  int m;
  int n;
  int root;  // sqrt(n)
  Matrix a;
  Vector z;
};

KerdockLayout kerdock_layout(int m) {
  if (m % 2 != 0) fail(ErrorCode::OddDimension, "Kerdock construction needs even m");
  const Field field(m);
  KerdockLayout l;
  l.m = m;
  l.n = 1 << m;
  l.root = 1 << (m / 2);
  const int n = l.n;

  std::vector<BitMatrix> sets;
  for (unsigned a = 0; a < static_cast<unsigned>(n); ++a) sets.push_back(kerdock_matrix(field, m, a));
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      BitMatrix diff = sets[a];
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          diff[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ^=
              sets[b][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!nonsingular_gf2(diff))
        fail(ErrorCode::KerdockSetInvalid, "Kerdock set has a singular difference");
    }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix wh(n, n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j)
      wh(r, j) = (std::popcount(static_cast<unsigned>(r & j)) % 2 ? -scale : scale);

  static const Scalar kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  l.a.resize(n, static_cast<Eigen::Index>(n) * n);
  for (int blk = 0; blk < n; ++blk) {
    const BitMatrix& p = sets[static_cast<std::size_t>(blk)];
    Vector phase(n);
    for (int r = 0; r < n; ++r) {
      int q = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          q += ((r >> i) & 1) * p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
               ((r >> j) & 1);
      phase(r) = kPowI[q % 4];
    }
    const Matrix block = phase.asDiagonal() * wh;
    if ((block.adjoint() * block - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
      fail(ErrorCode::KerdockSetInvalid, "Kerdock block is not unitary");
    l.a.middleCols(static_cast<Eigen::Index>(blk) * n, n) = block;
  }

  for (int blk = 0; blk < n; ++blk)
    for (int other = blk + 1; other < n; ++other) {
      const Matrix g = l.a.middleCols(static_cast<Eigen::Index>(blk) * n, n).adjoint() *
                       l.a.middleCols(static_cast<Eigen::Index>(other) * n, n);
      const double dev = (g.cwiseAbs().array() - scale).abs().maxCoeff();
      if (dev > 1e-10) fail(ErrorCode::KerdockSetInvalid, "Kerdock blocks are not mutually unbiased");
    }

  l.z = Vector::Zero(n);
  for (int j = 0; j < l.root; ++j) l.z(j * l.root) = 1.0;
  return l;
}

std::vector<Vector> picket_coefficients(const KerdockLayout& l) {
  std::vector<Vector> xs;
  for (int blk = 0; blk < l.n; ++blk) {
    Vector c = l.a.middleCols(static_cast<Eigen::Index>(blk) * l.n, l.n).adjoint() * l.z;
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (std::abs(c(i)) < kZero) c(i) = 0.0;
    xs.push_back(std::move(c));
  }
  return xs;
}

}  // namespace

ConstructionBundle kerdock_dictionary(int m) {
  const KerdockLayout l = kerdock_layout(m);
  ConstructionBundle out("kerdock", Dictionary::create(l.a, false));
  out.targets.push_back({"z", l.z});
  const auto xs = picket_coefficients(l);
  std::vector<double> sparsity;
  for (int blk = 0; blk < l.n; ++blk) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(l.n) * l.n);
    x.segment(static_cast<Eigen::Index>(blk) * l.n, l.n) = xs[static_cast<std::size_t>(blk)];
    auto sol = sparse_from_dense("x_" + std::to_string(blk), 0, x);
    sparsity.push_back(static_cast<double>(sol.support.size()));
    out.solutions.push_back(std::move(sol));
  }
  out.measured["x_sparsity"] = std::move(sparsity);
  out.parameters = {{"m", m}, {"n", l.n}};
  out.predicted = {{"coherence", 1.0 / l.root},
                   {"block_count", l.n},
                   {"x_sparsity", l.root},
                   {"rank", l.n}};
  return out;
}

ConstructionBundle kerdock_multi_solutions(int m, int s, Budget budget) {
  const KerdockLayout l = kerdock_layout(m);
  if (s < 1 || s > l.n) fail(ErrorCode::SOutOfRange, "s must lie in [1, n]");
  budget.check(binomial(l.n, s), "Kerdock solution generation");
  const auto xs = picket_coefficients(l);
  ConstructionBundle out("kerdock-solutions", Dictionary::create(l.a, false));
  out.targets.push_back({"b", static_cast<double>(s) * l.z});
  for_each_combination(l.n, s, [&](std::span<const int> blocks) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(l.n) * l.n);
    std::string label = "x_S";
    for (int blk : blocks) {
      x.segment(static_cast<Eigen::Index>(blk) * l.n, l.n) = xs[static_cast<std::size_t>(blk)];
      label += "_" + std::to_string(blk);
    }
    out.solutions.push_back(sparse_from_dense(std::move(label), 0, x));
    return true;
  });
  out.parameters = {{"m", m}, {"n", l.n}, {"s", s}};
  out.predicted = {{"coherence", 1.0 / l.root},
                   {"solution_count", static_cast<double>(binomial(l.n, s))},
                   {"atom_multiplicity", static_cast<double>(binomial(l.n - 1, s - 1))},
                   {"x_sparsity", static_cast<double>(s) * l.root}};
  return out;
}

ConstructionBundle mu_k_tight(int k, double c) {
  if (k < 2 || !(c >= 2.0 * k - 1.0) || !std::isfinite(c))
    fail(ErrorCode::ParameterOutOfRange, "mu_k_tight needs k >= 2 and c >= 2k - 1");
  const double scale = 1.0 / std::sqrt(c * c + 2.0 * k - 1.0);
  Matrix top = ((c + 1.0) * Eigen::MatrixXd::Identity(k, k) - Eigen::MatrixXd::Ones(k, k))
                   .cast<Scalar>();
  Matrix ones = Eigen::MatrixXd::Ones(k, k).cast<Scalar>();
  Matrix a(2 * k, 2 * k);
  a << top, ones, ones, top;
  a *= scale;
  ConstructionBundle out("mu-k-tight", Dictionary::create(a, false, 1e-12));
  const double mu = 2.0 * (c - k + 1.0) / (c * c + 2.0 * k - 1.0);
  out.parameters = {{"k", k}, {"c", c}};
  out.predicted = {{"coherence", mu},
                   {"mu_k", std::min(k * mu / (1.0 - (k - 1) * mu), 1.0)}};
  return out;
}

ConstructionBundle equiangular_lines_2d(int n) {
  if (n < 3) fail(ErrorCode::ParameterOutOfRange, "equiangular_lines_2d needs N >= 3");
  Matrix a(2, n);
  for (int j = 0; j < n; ++j) {
    const double t = j * M_PI / n;
    a(0, j) = std::cos(t);
    a(1, j) = std::sin(t);
  }
  ConstructionBundle out("equiangular-2d", Dictionary::create(a, false));
  Vector b(2);
  b << std::cos(M_PI / (2 * n)), std::sin(M_PI / (2 * n));
  out.targets.push_back({"bisector", b});
  out.parameters = {{"N", n}};
  out.predicted = {{"coherence", std::cos(M_PI / n)},
                   {"spark", 3},
                   {"rank", 2},
                   {"solution_count", 2}};
  return out;
}

}  // namespace lsa
