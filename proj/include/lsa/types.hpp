#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsa {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Error categories surfaced by every module. The C API maps these one-to-one
/// onto `lsa_status` codes.
enum class ErrorCode {
  InvalidArgument = 1,
  ZeroColumn,
  NotNormalized,
  NonFiniteEntry,
  SingleAtom,
  SparsityTooLarge,
  OverlappingSupports,
  InvalidSupport,
  BudgetExceeded,
  EpsOutOfRange,
  DimensionTooSmall,
  OddSplit,
  OddDimension,
  KerdockSetInvalid,
  SOutOfRange,
  ParameterOutOfRange,
  ZeroTarget,
  WitnessNotFound,
  DepthTooLarge,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Sorted, duplicate-free column indices.
class SupportSet {
 public:
  SupportSet() = default;
  /// Sorts and validates; throws InvalidSupport on duplicates or negatives.
  explicit SupportSet(std::vector<int> indices);
  SupportSet(std::initializer_list<int> indices)
      : SupportSet(std::vector<int>(indices)) {}

  const std::vector<int>& indices() const noexcept { return idx_; }
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  int operator[](std::size_t i) const { return idx_[i]; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  bool contains(int i) const;
  bool disjoint_with(const SupportSet& other) const;
  bool subset_of(const SupportSet& other) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  friend auto operator<=>(const SupportSet& a, const SupportSet& b) {
    return a.idx_ <=> b.idx_;
  }

 private:
  std::vector<int> idx_;
};

/// Cap on the number of subsets an exhaustive search may examine.
/// A value of 0 means unlimited.
struct Budget {
  std::uint64_t max_subsets = 0;

  static Budget unlimited() { return {}; }
  /// Throws BudgetExceeded once `used` passes the cap.
  void check(std::uint64_t used, const char* what) const;
};

/// Default relative rank tolerance (smallest / largest singular value).
inline constexpr double kDefaultRankTol = 1e-10;

}  // namespace lsa
