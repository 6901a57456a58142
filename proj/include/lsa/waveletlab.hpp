#pragma once

#include "lsa/types.hpp"

#include <cstdint>
#include <vector>

namespace lsa {

/// Square grayscale image, row-major, side a power of two. Pixels are
/// nominally in [0, 1]; reconstructions may stray slightly outside.
class ImageGrid {
 public:
  static ImageGrid create(int side, std::vector<double> pixels);
  static ImageGrid zeros(int side);

  int side() const noexcept { return side_; }
  const std::vector<double>& pixels() const noexcept { return px_; }
  double at(int r, int c) const { return px_[static_cast<std::size_t>(r) * side_ + c]; }
  double& at(int r, int c) { return px_[static_cast<std::size_t>(r) * side_ + c]; }
  Eigen::MatrixXd matrix() const;
  static ImageGrid from_matrix(const Eigen::MatrixXd& m);

 private:
  ImageGrid(int side, std::vector<double> px) : side_(side), px_(std::move(px)) {}
  int side_;
  std::vector<double> px_;
};

/// Node of the packet quad-tree. Children of (level, index) are
/// (level + 1, 4 index + c) with c = 0 approximation, 1 horizontal,
/// 2 vertical, 3 diagonal detail.
struct NodeId {
  int level = 0;
  int index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

class WaveletPacketTree {
 public:
  WaveletPacketTree(int side, int depth);

  int side() const noexcept { return side_; }
  int depth() const noexcept { return depth_; }
  const Eigen::MatrixXd& block(NodeId n) const { return levels_.at(n.level).at(n.index); }
  Eigen::MatrixXd& block(NodeId n) { return levels_.at(n.level).at(n.index); }
  /// Sum of squared coefficients over all nodes of one level.
  double level_energy(int level) const;
  std::size_t level_coefficient_count(int level) const;
  std::vector<NodeId> leaves() const;

 private:
  int side_;
  int depth_;
  std::vector<std::vector<Eigen::MatrixXd>> levels_;
};

/// A maximal anti-chain of packet nodes and its total cost.
struct BasisSelection {
  std::vector<NodeId> nodes;
  double cost = 0.0;
};

enum class BasisCost { Entropy, L1 };

const char* to_string(BasisCost c) noexcept;

/// Full orthonormal 2D Haar packet decomposition. DepthTooLarge unless
/// 1 <= depth and 2^depth divides the side.
WaveletPacketTree haar_wpt(const ImageGrid& image, int depth);

/// True when `nodes` is a maximal anti-chain of a depth-`depth` quad-tree.
bool is_maximal_antichain(const std::vector<NodeId>& nodes, int depth);

/// Rebuilds the image from blocks on a maximal anti-chain; blocks[i] belongs
/// to selection.nodes[i].
ImageGrid inverse_wpt(const BasisSelection& selection,
                      const std::vector<Eigen::MatrixXd>& blocks, int side);

/// Blocks of `tree` on the selected nodes.
std::vector<Eigen::MatrixXd> select_blocks(const WaveletPacketTree& tree,
                                           const BasisSelection& selection);

/// Additive node cost. Entropy is -sum p log p with p = c^2 / E, E the
/// energy of the whole image (a level of the tree), and 0 log 0 = 0.
double node_cost(const Eigen::MatrixXd& block, BasisCost cost, double total_energy);

/// Bottom-up dynamic programme; a node is kept when its cost is <= the best
/// cost of its children, so ties go to the parent.
BasisSelection best_basis(const WaveletPacketTree& tree, BasisCost cost);

struct CompressionParams {
  double large = 0.1;
  double medium = 0.01;
  double medium_keep = 0.5;
  std::uint64_t seed = 1;
  double keep_fraction = 0.2;
  int depth = 4;
};

struct CompressionResult {
  int class_label = 0;
  BasisSelection basis;
  std::vector<Eigen::MatrixXd> kept;  // dropped coefficients set to 0
  std::size_t kept_count = 0;
  double sparsity_fraction = 0.0;
  double relative_error = 0.0;
  ImageGrid reconstruction = ImageGrid::zeros(1);
};

/// Class 1: leaf basis, keep |c| > large and a seeded random medium_keep
/// share of medium < |c| <= large. Class 2 / 3: entropy / l1 best basis,
/// keep the largest keep_fraction of coefficients by magnitude.
CompressionResult compress_class(const ImageGrid& image, int cls,
                                 const CompressionParams& params = {});

/// Binary blob image: seeded Gaussian noise, Gaussian-smoothed with a
/// periodic kernel, thresholded at its median.
ImageGrid synthetic_blobs(int side, std::uint64_t seed);

}  // namespace lsa
