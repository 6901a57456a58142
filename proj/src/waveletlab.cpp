#include "lsa/waveletlab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace lsa {

namespace {

bool power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

using Blocks = std::vector<Eigen::MatrixXd>;

// One orthonormal Haar step: 2x2 cells map to (LL, H, V, D) / 2.
std::array<Eigen::MatrixXd, 4> split(const Eigen::MatrixXd& x) {
  const Eigen::Index h = x.rows() / 2;
  std::array<Eigen::MatrixXd, 4> out;
  for (auto& o : out) o.resize(h, h);
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < h; ++c) {
      const double a = x(2 * r, 2 * c), b = x(2 * r, 2 * c + 1);
      const double p = x(2 * r + 1, 2 * c), q = x(2 * r + 1, 2 * c + 1);
      out[0](r, c) = 0.5 * (a + b + p + q);
      out[1](r, c) = 0.5 * (a - b + p - q);
      out[2](r, c) = 0.5 * (a + b - p - q);
      out[3](r, c) = 0.5 * (a - b - p + q);
    }
  return out;
}

Eigen::MatrixXd merge(const Eigen::MatrixXd& ll, const Eigen::MatrixXd& hh,
                      const Eigen::MatrixXd& vv, const Eigen::MatrixXd& dd) {
  const Eigen::Index h = ll.rows();
  Eigen::MatrixXd x(2 * h, 2 * h);
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < h; ++c) {
      const double s = ll(r, c), u = hh(r, c), v = vv(r, c), w = dd(r, c);
      x(2 * r, 2 * c) = 0.5 * (s + u + v + w);
      x(2 * r, 2 * c + 1) = 0.5 * (s - u + v - w);
      x(2 * r + 1, 2 * c) = 0.5 * (s + u - v - w);
      x(2 * r + 1, 2 * c + 1) = 0.5 * (s - u - v + w);
    }
  return x;
}

}  // namespace

ImageGrid ImageGrid::create(int side, std::vector<double> pixels) {
  if (!power_of_two(side))
    throw Error(ErrorCode::InvalidArgument, "image side must be a power of two");
  if (pixels.size() != static_cast<std::size_t>(side) * side)
    throw Error(ErrorCode::InvalidArgument, "pixel count does not match side^2");
  for (double p : pixels)
    if (!std::isfinite(p)) throw Error(ErrorCode::NonFiniteEntry, "image has non-finite pixels");
  return ImageGrid(side, std::move(pixels));
}

ImageGrid ImageGrid::zeros(int side) {
  return create(side, std::vector<double>(static_cast<std::size_t>(side) * side, 0.0));
}

Eigen::MatrixXd ImageGrid::matrix() const {
  Eigen::MatrixXd m(side_, side_);
  for (int r = 0; r < side_; ++r)
    for (int c = 0; c < side_; ++c) m(r, c) = at(r, c);
  return m;
}

ImageGrid ImageGrid::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "image must be square");
  const int side = static_cast<int>(m.rows());
  std::vector<double> px(static_cast<std::size_t>(side) * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) px[static_cast<std::size_t>(r) * side + c] = m(r, c);
  return create(side, std::move(px));
}

const char* to_string(BasisCost c) noexcept {
  return c == BasisCost::Entropy ? "entropy" : "l1";
}

WaveletPacketTree::WaveletPacketTree(int side, int depth) : side_(side), depth_(depth) {
  if (depth < 1 || !power_of_two(side) || side % (1 << std::min(depth, 30)) != 0 || depth > 30)
    throw Error(ErrorCode::DepthTooLarge, "2^depth must divide the image side and depth >= 1");
  levels_.resize(static_cast<std::size_t>(depth) + 1);
  for (int l = 0; l <= depth; ++l) {
    const int s = side >> l;
    levels_[static_cast<std::size_t>(l)].assign(std::size_t{1} << (2 * l),
                                                Eigen::MatrixXd::Zero(s, s));
  }
}

double WaveletPacketTree::level_energy(int level) const {
  double e = 0.0;
  for (const auto& b : levels_.at(static_cast<std::size_t>(level))) e += b.squaredNorm();
  return e;
}

std::size_t WaveletPacketTree::level_coefficient_count(int level) const {
  std::size_t n = 0;
  for (const auto& b : levels_.at(static_cast<std::size_t>(level)))
    n += static_cast<std::size_t>(b.size());
  return n;
}

std::vector<NodeId> WaveletPacketTree::leaves() const {
  std::vector<NodeId> out;
  for (int i = 0; i < (1 << (2 * depth_)); ++i) out.push_back({depth_, i});
  return out;
}

WaveletPacketTree haar_wpt(const ImageGrid& image, int depth) {
  WaveletPacketTree tree(image.side(), depth);
  tree.block({0, 0}) = image.matrix();
  for (int l = 0; l < depth; ++l)
    for (int i = 0; i < (1 << (2 * l)); ++i) {
      auto parts = split(tree.block({l, i}));
      for (int c = 0; c < 4; ++c) tree.block({l + 1, 4 * i + c}) = std::move(parts[static_cast<std::size_t>(c)]);
    }
  return tree;
}

bool is_maximal_antichain(const std::vector<NodeId>& nodes, int depth) {
  // Every leaf must lie under exactly one chosen node.
  std::vector<int> cover(std::size_t{1} << (2 * depth), 0);
  for (const auto& n : nodes) {
    if (n.level < 0 || n.level > depth || n.index < 0 || n.index >= (1 << (2 * n.level)))
      return false;
    const int span = 1 << (2 * (depth - n.level));
    for (int j = 0; j < span; ++j) ++cover[static_cast<std::size_t>(n.index * span + j)];
  }
  return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
}

ImageGrid inverse_wpt(const BasisSelection& selection, const Blocks& blocks, int side) {
  if (blocks.size() != selection.nodes.size())
    throw Error(ErrorCode::InvalidArgument, "one block per selected node is required");
  int depth = 0;
  for (const auto& n : selection.nodes) depth = std::max(depth, n.level);
  if (!is_maximal_antichain(selection.nodes, depth))
    throw Error(ErrorCode::InvalidArgument, "selection is not a maximal anti-chain");
  std::map<NodeId, const Eigen::MatrixXd*> at;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int expect = side >> selection.nodes[i].level;
    if (blocks[i].rows() != expect || blocks[i].cols() != expect)
      throw Error(ErrorCode::InvalidArgument, "block size does not match its node level");
    at[selection.nodes[i]] = &blocks[i];
  }
  auto rebuild = [&](auto&& self, NodeId n) -> Eigen::MatrixXd {
    if (auto it = at.find(n); it != at.end()) return *it->second;
    const int l = n.level + 1;
    return merge(self(self, {l, 4 * n.index}), self(self, {l, 4 * n.index + 1}),
                 self(self, {l, 4 * n.index + 2}), self(self, {l, 4 * n.index + 3}));
  };
  return ImageGrid::from_matrix(rebuild(rebuild, NodeId{0, 0}));
}

Blocks select_blocks(const WaveletPacketTree& tree, const BasisSelection& selection) {
  Blocks out;
  out.reserve(selection.nodes.size());
  for (const auto& n : selection.nodes) out.push_back(tree.block(n));
  return out;
}

double node_cost(const Eigen::MatrixXd& block, BasisCost cost, double total_energy) {
  if (cost == BasisCost::L1) return block.cwiseAbs().sum();
  if (total_energy <= 0.0) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < block.size(); ++i) {
    const double p = block.data()[i] * block.data()[i] / total_energy;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

BasisSelection best_basis(const WaveletPacketTree& tree, BasisCost cost) {
  const double energy = tree.level_energy(0);
  auto solve = [&](auto&& self, NodeId n) -> BasisSelection {
    const double own = node_cost(tree.block(n), cost, energy);
    if (n.level == tree.depth()) return {{n}, own};
    BasisSelection kids;
    for (int c = 0; c < 4; ++c) {
      BasisSelection s = self(self, {n.level + 1, 4 * n.index + c});
      kids.nodes.insert(kids.nodes.end(), s.nodes.begin(), s.nodes.end());
      kids.cost += s.cost;
    }
    if (own <= kids.cost) return {{n}, own};
    return kids;
  };
  BasisSelection out = solve(solve, NodeId{0, 0});
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

namespace {

constexpr double kKeptZero = 1e-14;

struct CoefRef {
  std::size_t block;
  Eigen::Index offset;
  double magnitude;
};

std::vector<CoefRef> all_coefficients(const Blocks& blocks) {
  std::vector<CoefRef> out;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (Eigen::Index i = 0; i < blocks[b].size(); ++i)
      out.push_back({b, i, std::abs(blocks[b].data()[i])});
  return out;
}

}  // namespace

CompressionResult compress_class(const ImageGrid& image, int cls, const CompressionParams& p) {
  if (cls < 1 || cls > 3) throw Error(ErrorCode::InvalidArgument, "class must be 1, 2 or 3");
  if (!(p.keep_fraction >= 0.0 && p.keep_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "keep fraction must lie in [0, 1]");
  if (!(p.medium_keep >= 0.0 && p.medium_keep <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "medium keep probability must lie in [0, 1]");
  const WaveletPacketTree tree = haar_wpt(image, p.depth);

  CompressionResult out;
  out.class_label = cls;
  if (cls == 1) {
    out.basis.nodes = tree.leaves();
  } else {
    out.basis = best_basis(tree, cls == 2 ? BasisCost::Entropy : BasisCost::L1);
  }
  const Blocks full = select_blocks(tree, out.basis);
  out.kept.clear();
  for (const auto& b : full) out.kept.push_back(Eigen::MatrixXd::Zero(b.rows(), b.cols()));

  auto coefs = all_coefficients(full);
  std::vector<const CoefRef*> keep;
  if (cls == 1) {
    std::vector<const CoefRef*> medium;
    for (const auto& c : coefs) {
      if (c.magnitude > p.large) keep.push_back(&c);
      else if (c.magnitude > p.medium) medium.push_back(&c);
    }
    std::mt19937_64 rng(p.seed);
    std::shuffle(medium.begin(), medium.end(), rng);
    const auto take = static_cast<std::size_t>(std::llround(p.medium_keep * medium.size()));
    keep.insert(keep.end(), medium.begin(), medium.begin() + static_cast<std::ptrdiff_t>(take));
  } else {
    std::stable_sort(coefs.begin(), coefs.end(),
                     [](const CoefRef& a, const CoefRef& b) { return a.magnitude > b.magnitude; });
    const auto take = static_cast<std::size_t>(std::llround(p.keep_fraction * coefs.size()));
    for (std::size_t i = 0; i < take; ++i) keep.push_back(&coefs[i]);
  }
  for (const CoefRef* c : keep) {
    out.kept[c->block].data()[c->offset] = full[c->block].data()[c->offset];
    if (c->magnitude > kKeptZero) ++out.kept_count;
  }

  const double pixels = static_cast<double>(image.side()) * image.side();
  out.sparsity_fraction = static_cast<double>(out.kept_count) / pixels;
  out.reconstruction = inverse_wpt(out.basis, out.kept, image.side());
  const Eigen::MatrixXd x = image.matrix();
  const double norm = x.norm();
  const double diff = (out.reconstruction.matrix() - x).norm();
  out.relative_error = norm > 0.0 ? diff / norm : diff;
  return out;
}

ImageGrid synthetic_blobs(int side, std::uint64_t seed) {
  if (!power_of_two(side) || side < 8)
    throw Error(ErrorCode::InvalidArgument, "blob image side must be a power of two >= 8");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd noise(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) noise(r, c) = gauss(rng);

  const double sigma = side / 8.0;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int t = -radius; t <= radius; ++t)
    kernel[static_cast<std::size_t>(t + radius)] = std::exp(-0.5 * t * t / (sigma * sigma));

  auto wrap = [side](int i) { return ((i % side) + side) % side; };
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      for (int t = -radius; t <= radius; ++t)
        rows(r, c) += kernel[static_cast<std::size_t>(t + radius)] * noise(r, wrap(c + t));
  Eigen::MatrixXd smooth = Eigen::MatrixXd::Zero(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      for (int t = -radius; t <= radius; ++t)
        smooth(r, c) += kernel[static_cast<std::size_t>(t + radius)] * rows(wrap(r + t), c);

  std::vector<double> sorted(smooth.data(), smooth.data() + smooth.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  std::vector<double> px(static_cast<std::size_t>(side) * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      px[static_cast<std::size_t>(r) * side + c] = smooth(r, c) > median ? 1.0 : 0.0;
  return ImageGrid::create(side, std::move(px));
}

}  // namespace lsa
