#include "lsa/waveletlab.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

using namespace lsa;

namespace {

ImageGrid random_image(int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> px(static_cast<std::size_t>(side) * side);
  for (auto& p : px) p = u(rng);
  return ImageGrid::create(side, std::move(px));
}

// All maximal anti-chains below `n` in a tree of the given depth.
std::vector<std::vector<NodeId>> antichains(NodeId n, int depth) {
  std::vector<std::vector<NodeId>> out{{n}};
  if (n.level == depth) return out;
  std::vector<std::vector<NodeId>> acc{{}};
  for (int c = 0; c < 4; ++c) {
    std::vector<std::vector<NodeId>> next;
    for (const auto& prefix : acc)
      for (const auto& tail : antichains({n.level + 1, 4 * n.index + c}, depth)) {
        auto v = prefix;
        v.insert(v.end(), tail.begin(), tail.end());
        next.push_back(std::move(v));
      }
    acc = std::move(next);
  }
  out.insert(out.end(), acc.begin(), acc.end());
  return out;
}

double oracle_cost(const Eigen::MatrixXd& b, BasisCost cost, double energy) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < b.rows(); ++r)
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      const double v = b(r, c);
      if (cost == BasisCost::L1) s += std::fabs(v);
      else if (v != 0.0) s -= (v * v / energy) * std::log(v * v / energy);
    }
  return s;
}

std::vector<NodeId> random_antichain(int depth, std::mt19937_64& rng) {
  std::vector<NodeId> out;
  std::function<void(NodeId)> go = [&](NodeId n) {
    if (n.level == depth || rng() % 3 == 0) {
      out.push_back(n);
      return;
    }
    for (int c = 0; c < 4; ++c) go({n.level + 1, 4 * n.index + c});
  };
  go({0, 0});
  return out;
}

double rel_error(const ImageGrid& a, const ImageGrid& b) {
  const double n = a.matrix().norm();
  return (a.matrix() - b.matrix()).norm() / (n > 0 ? n : 1.0);
}

}  // namespace

TEST_CASE("image grid validation") {
  CHECK_THROWS_AS(ImageGrid::create(3, std::vector<double>(9, 0.0)), Error);
  CHECK_THROWS_AS(ImageGrid::create(4, std::vector<double>(15, 0.0)), Error);
  CHECK_THROWS_AS(ImageGrid::create(2, {0.0, NAN, 0.0, 0.0}), Error);
  const auto z = ImageGrid::zeros(8);
  CHECK(z.pixels().size() == 64);
}

TEST_CASE("haar packet transform basics") {
  const auto c = ImageGrid::create(16, std::vector<double>(256, 0.7));
  const auto t = haar_wpt(c, 3);
  for (int l = 1; l <= 3; ++l)
    for (int i = 0; i < (1 << (2 * l)); ++i)
      if (i % 4 != 0 || (l >= 2 && (i / 4) % 4 != 0) || (l == 3 && i != 0))
        CHECK(t.block({l, i}).cwiseAbs().maxCoeff() < 1e-14);

  auto one = ImageGrid::zeros(8);
  one.at(3, 5) = 1.0;
  const auto t1 = haar_wpt(one, 1);
  CHECK(std::abs(t1.level_energy(1) - 1.0) < 1e-12);

  const auto r = random_image(32, 1);
  const auto tr = haar_wpt(r, 5);
  for (int l = 0; l <= 5; ++l) CHECK(tr.level_coefficient_count(l) == 1024);

  CHECK_THROWS_AS(haar_wpt(r, 6), Error);
  CHECK_THROWS_AS(haar_wpt(r, 0), Error);
  try {
    haar_wpt(r, 6);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DepthTooLarge);
  }
}

TEST_CASE("reconstruction and parseval on random images") {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto img = random_image(32, seed);
    const int depth = 1 + static_cast<int>(seed % 5);
    const auto t = haar_wpt(img, depth);
    const double e = img.matrix().squaredNorm();
    for (int l = 0; l <= depth; ++l) CHECK(std::abs(t.level_energy(l) - e) <= 1e-10 * e);
    BasisSelection leaves{t.leaves(), 0.0};
    CHECK(rel_error(img, inverse_wpt(leaves, select_blocks(t, leaves), 32)) <= 1e-10);
    BasisSelection any{random_antichain(depth, rng), 0.0};
    REQUIRE(is_maximal_antichain(any.nodes, depth));
    CHECK(rel_error(img, inverse_wpt(any, select_blocks(t, any), 32)) <= 1e-10);
  }
}

TEST_CASE("packet atoms are orthonormal") {
  std::mt19937_64 rng(9);
  const int side = 8;
  BasisSelection sel{random_antichain(3, rng), 0.0};
  std::vector<Eigen::MatrixXd> zero;
  for (const auto& n : sel.nodes) zero.push_back(Eigen::MatrixXd::Zero(side >> n.level, side >> n.level));
  Eigen::MatrixXd w(side * side, side * side);
  int col = 0;
  for (std::size_t b = 0; b < zero.size(); ++b)
    for (Eigen::Index i = 0; i < zero[b].size(); ++i) {
      auto blocks = zero;
      blocks[b].data()[i] = 1.0;
      const auto img = inverse_wpt(sel, blocks, side);
      w.col(col++) = Eigen::Map<const Eigen::VectorXd>(img.pixels().data(), side * side);
    }
  CHECK((w.transpose() * w - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-12);

  const auto zimg = inverse_wpt(sel, zero, side);
  CHECK(zimg.matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("anti-chain validation") {
  CHECK(is_maximal_antichain({{0, 0}}, 2));
  CHECK(is_maximal_antichain({{1, 0}, {1, 1}, {1, 2}, {2, 12}, {2, 13}, {2, 14}, {2, 15}}, 2));
  CHECK_FALSE(is_maximal_antichain({{1, 0}, {1, 1}, {1, 2}}, 2));
  CHECK_FALSE(is_maximal_antichain({{0, 0}, {1, 0}}, 2));
  const auto t = haar_wpt(random_image(8, 1), 2);
  BasisSelection bad{{{1, 0}, {1, 1}}, 0.0};
  CHECK_THROWS_AS(inverse_wpt(bad, select_blocks(t, bad), 8), Error);
}

TEST_CASE("best basis equals the exhaustive minimum on depth-3 trees") {
  const auto all = antichains({0, 0}, 3);
  CHECK(all.size() == 17 * 17 * 17 * 17 + 1);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto img = random_image(16, seed + 100);
    if (seed % 2) {
      for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 8; ++c) img.at(r, c) = 0.25;
    }
    const auto t = haar_wpt(img, 3);
    const double energy = img.matrix().squaredNorm();
    for (auto cost : {BasisCost::Entropy, BasisCost::L1}) {
      std::map<NodeId, double> node;
      for (int l = 0; l <= 3; ++l)
        for (int i = 0; i < (1 << (2 * l)); ++i) node[{l, i}] = oracle_cost(t.block({l, i}), cost, energy);
      double best = 1e300;
      for (const auto& chain : all) {
        double c = 0.0;
        for (const auto& n : chain) c += node[n];
        best = std::min(best, c);
      }
      const auto sel = best_basis(t, cost);
      CHECK(is_maximal_antichain(sel.nodes, 3));
      CHECK(std::abs(sel.cost - best) <= 1e-9 * std::max(1.0, best));
      double recomputed = 0.0;
      for (const auto& n : sel.nodes) recomputed += node[n];
      CHECK(std::abs(recomputed - sel.cost) <= 1e-9 * std::max(1.0, best));
    }
  }
}

TEST_CASE("best basis beats random anti-chains") {
  std::mt19937_64 rng(5);
  const auto img = random_image(32, 77);
  const auto t = haar_wpt(img, 4);
  const double energy = img.matrix().squaredNorm();
  for (auto cost : {BasisCost::Entropy, BasisCost::L1}) {
    const auto sel = best_basis(t, cost);
    for (int i = 0; i < 50; ++i) {
      double c = 0.0;
      for (const auto& n : random_antichain(4, rng)) c += node_cost(t.block(n), cost, energy);
      CHECK(sel.cost <= c + 1e-9);
    }
  }
}

TEST_CASE("best basis is no worse than the leaf basis") {
  const auto t = haar_wpt(random_image(16, 3), 2);
  const auto sel = best_basis(t, BasisCost::L1);
  double leaf = 0.0;
  for (const auto& n : t.leaves()) leaf += node_cost(t.block(n), BasisCost::L1, 1.0);
  CHECK(sel.cost <= leaf + 1e-12);
}

TEST_CASE("constant image under l1 keeps the coarsest zero details") {
  const int depth = 4;
  const auto t = haar_wpt(ImageGrid::create(32, std::vector<double>(1024, 0.5)), depth);
  const auto sel = best_basis(t, BasisCost::L1);
  std::vector<NodeId> expected;
  for (int l = 1; l <= depth; ++l)
    for (int c = 1; c < 4; ++c) expected.push_back({l, c});
  expected.push_back({depth, 0});
  std::sort(expected.begin(), expected.end());
  CHECK(sel.nodes == expected);
}

TEST_CASE("compression classes") {
  const auto img = synthetic_blobs(64, 7);
  CompressionParams p;
  p.depth = 3;
  p.keep_fraction = 1.0;
  const auto full = compress_class(img, 2, p);
  CHECK(full.relative_error <= 1e-10);

  CompressionParams none;
  none.medium_keep = 0.0;
  none.depth = 3;
  const auto c1 = compress_class(img, 1, none);
  const auto t = haar_wpt(img, 3);
  std::size_t large = 0;
  for (const auto& n : t.leaves())
    for (Eigen::Index i = 0; i < t.block(n).size(); ++i)
      if (std::fabs(t.block(n).data()[i]) > none.large) ++large;
  CHECK(c1.kept_count == large);
  CHECK(c1.basis.nodes == t.leaves());

  for (int cls = 1; cls <= 3; ++cls) {
    CompressionParams q;
    q.depth = 3;
    const auto r = compress_class(img, cls, q);
    CHECK(r.class_label == cls);
    CHECK(std::abs(r.sparsity_fraction - static_cast<double>(r.kept_count) / 4096.0) < 1e-15);
    CHECK(std::abs(r.relative_error - rel_error(img, r.reconstruction)) <= 1e-9);
    std::size_t nonzero = 0;
    for (const auto& b : r.kept) nonzero += static_cast<std::size_t>((b.array().abs() > 1e-14).count());
    CHECK(nonzero == r.kept_count);
  }
  CHECK_THROWS_AS(compress_class(img, 4), Error);
  CompressionParams bad;
  bad.keep_fraction = 1.5;
  CHECK_THROWS_AS(compress_class(img, 2, bad), Error);
}

TEST_CASE("truncation error is non-increasing in the keep fraction") {
  const auto img = synthetic_blobs(64, 3);
  for (int cls : {2, 3}) {
    double prev = 1e300;
    for (double keep = 0.0; keep <= 1.0001; keep += 0.05) {
      CompressionParams p;
      p.depth = 3;
      p.keep_fraction = std::min(keep, 1.0);
      const double e = compress_class(img, cls, p).relative_error;
      CHECK(e <= prev + 1e-12);
      prev = e;
    }
  }
}

TEST_CASE("class 1 is deterministic per seed") {
  const auto img = random_image(32, 12);
  CompressionParams p;
  p.seed = 99;
  p.depth = 3;
  const auto a = compress_class(img, 1, p);
  const auto b = compress_class(img, 1, p);
  CHECK(a.kept_count == b.kept_count);
  CHECK(a.relative_error == b.relative_error);
  CHECK(a.reconstruction.pixels() == b.reconstruction.pixels());
}

TEST_CASE("synthetic blobs") {
  const auto a = synthetic_blobs(256, 1);
  const auto b = synthetic_blobs(256, 1);
  CHECK(a.pixels() == b.pixels());
  CHECK(a.pixels().size() == 65536);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto img = synthetic_blobs(64, seed);
    double ones = 0.0;
    for (double p : img.pixels()) {
      CHECK((p == 0.0 || p == 1.0));
      ones += p;
    }
    const double frac = ones / 4096.0;
    CHECK(frac > 0.1);
    CHECK(frac < 0.9);
  }
  CHECK(synthetic_blobs(64, 1).pixels() != synthetic_blobs(64, 2).pixels());
  CHECK_THROWS_AS(synthetic_blobs(100, 1), Error);
}
