#include "lsa/solvers.hpp"

#include <algorithm>
#include <map>

namespace lsa {

namespace {

class Packer {
 public:
  Packer(std::vector<std::vector<int>> sets, int atoms, int r, Budget budget)
      : sets_(std::move(sets)), load_(static_cast<std::size_t>(atoms), 0),
        r_(r), budget_(budget) {}

  int run(int lower) {
    best_ = lower;
    descend(0, 0);
    return best_;
  }

 private:
  bool fits(const std::vector<int>& s) const {
    return std::all_of(s.begin(), s.end(),
                       [&](int a) { return load_[static_cast<std::size_t>(a)] < r_; });
  }

  int upper_bound(std::size_t from, int current) const {
    int feasible = 0;
    std::size_t min_size = SIZE_MAX;
    for (std::size_t i = from; i < sets_.size(); ++i) {
      if (!fits(sets_[i])) continue;
      ++feasible;
      min_size = std::min(min_size, sets_[i].size());
    }
    if (feasible == 0) return current;
    long capacity = 0;
    for (int l : load_) capacity += r_ - l;
    const long by_capacity = capacity / static_cast<long>(min_size);
    return current + static_cast<int>(std::min<long>(feasible, by_capacity));
  }

  void descend(std::size_t i, int current) {
    budget_.check(++nodes_, "restricted list size search");
    if (current > best_) best_ = current;
    if (i == sets_.size()) return;
    if (upper_bound(i, current) <= best_) return;
    const auto& s = sets_[i];
    if (fits(s)) {
      for (int a : s) ++load_[static_cast<std::size_t>(a)];
      descend(i + 1, current + 1);
      for (int a : s) --load_[static_cast<std::size_t>(a)];
    }
    descend(i + 1, current);
  }

  std::vector<std::vector<int>> sets_;
  std::vector<int> load_;
  int r_;
  Budget budget_;
  std::uint64_t nodes_ = 0;
  int best_ = 0;
};

}  // namespace

int restricted_list_size(const std::vector<SupportSet>& supports, int r,
                         Budget node_budget) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "R must be >= 1");
  std::vector<SupportSet> uniq = supports;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (uniq.empty()) return 0;

  int atoms = 0;
  std::map<int, int> mult;
  for (const auto& s : uniq)
    for (int a : s) {
      atoms = std::max(atoms, a + 1);
      ++mult[a];
    }
  int max_mult = 0;
  for (const auto& [a, c] : mult) max_mult = std::max(max_mult, c);
  if (r >= max_mult) return static_cast<int>(uniq.size());

  std::vector<std::vector<int>> sets;
  sets.reserve(uniq.size());
  for (const auto& s : uniq) sets.push_back(s.indices());
  std::stable_sort(sets.begin(), sets.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });

  // Greedy by size gives a starting lower bound.
  std::vector<int> load(static_cast<std::size_t>(atoms), 0);
  int greedy = 0;
  for (const auto& s : sets) {
    if (std::all_of(s.begin(), s.end(),
                    [&](int a) { return load[static_cast<std::size_t>(a)] < r; })) {
      for (int a : s) ++load[static_cast<std::size_t>(a)];
      ++greedy;
    }
  }
  return Packer(std::move(sets), atoms, r, node_budget).run(greedy);
}

}  // namespace lsa
