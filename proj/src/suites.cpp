#include "lsa/suites.hpp"

#include "lsa/constructions.hpp"

#include <random>

namespace lsa {

namespace {

Vector gaussian(std::mt19937_64& rng, int m, bool complex) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(m);
  for (int i = 0; i < m; ++i) {
    const double re = g(rng);
    v(i) = Scalar(re, complex ? g(rng) : 0.0);
  }
  return v;
}

// Unit targets near sums of one or two random atoms, so that small-eps
// queries have non-empty lists.
std::vector<Vector> planted_targets(const Dictionary& d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> atom(0, d.atoms() - 1);
  std::vector<Vector> out;
  while (static_cast<int>(out.size()) < count) {
    Vector b = d.atom(atom(rng));
    if (out.size() % 2 == 1) b += d.atom(atom(rng));
    b += 0.1 * gaussian(rng, d.rows(), !d.is_real());
    const double n = b.norm();
    if (n > 1e-6) out.push_back(b / n);
  }
  return out;
}

std::vector<Vector> concat(std::vector<Vector> a, const std::vector<Vector>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class SuiteRunner {
 public:
  SuiteRunner(std::string name, std::uint64_t seed, const SolveOptions& opts)
      : opts_(opts) {
    result_.suite = std::move(name);
    result_.seed = seed;
  }

  void run(const std::string& label, const Dictionary& d, const std::vector<Vector>& targets,
           const std::vector<int>& ks, const std::vector<double>& eps_grid) {
    VerifyOptions v;
    v.solve = opts_;
    v.mu = coherence(d);
    for (int k : ks) {
      v.mu_k.reset();
      if (k == 1) v.mu_k = v.mu;
      for (double eps : eps_grid) {
        SuiteCase c{label, k, eps, verify_bounds(d, targets, k, eps, v)};
        for (const auto& r : c.reports) result_.violations += r.violated ? 1 : 0;
        result_.report_count += static_cast<int>(c.reports.size());
        result_.cases.push_back(std::move(c));
      }
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SolveOptions opts_;
  SuiteResult result_;
};

}  // namespace

Dictionary random_dictionary(int m, int n, std::uint64_t seed, bool complex) {
  if (m < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  Matrix a(m, n);
  for (int c = 0; c < n; ++c) a.col(c) = gaussian(rng, m, complex);
  return Dictionary::create(a, true);
}

std::vector<Vector> random_unit_vectors(int m, int count, std::uint64_t seed, bool complex) {
  if (m < 1 || count < 0) throw Error(ErrorCode::InvalidArgument, "bad vector count or size");
  std::mt19937_64 rng(seed);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Vector v = gaussian(rng, m, complex);
    const double n = v.norm();
    if (n > 1e-12) out.push_back(v / n);
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "tight-example", "spikes", "kerdock",
                                              "random"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, const SolveOptions& opts) {
  SuiteRunner run(name, seed, opts);
  const std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8};
  if (name == "identity") {
    for (int m : {4, 6}) {
      const Dictionary d = Dictionary::create(Matrix::Identity(m, m), false);
      auto targets = random_unit_vectors(m, 10, seed + static_cast<std::uint64_t>(m));
      const auto bad = identity_bad_b(m, 2, 0.5 * std::sqrt((m - 2.0) / m));
      targets.push_back(bad.targets.front().b);
      run.run("identity-" + std::to_string(m), d, targets, {1, 2}, grid);
    }
  } else if (name == "tight-example") {
    for (auto [m, k] : {std::pair{5, 1}, std::pair{9, 2}, std::pair{9, 1}}) {
      const auto b = tight_example(m, k, 0.5);
      auto targets = random_unit_vectors(m, 5, seed + static_cast<std::uint64_t>(m * 10 + k));
      targets.insert(targets.begin(), b.targets.front().b);
      run.run("tight-example-" + std::to_string(m) + "-" + std::to_string(k), b.dictionary,
              targets, {k}, {0.3, 0.5, 0.7});
    }
  } else if (name == "spikes") {
    const auto ss = spikes_and_sines(1);
    run.run("spikes-sines-1", ss.dictionary,
            concat(random_unit_vectors(4, 5, seed, true), planted_targets(ss.dictionary, 5, seed)),
            {1, 2}, grid);
    const auto ss2 = spikes_and_sines(2);
    run.run("spikes-sines-2", ss2.dictionary,
            concat(random_unit_vectors(16, 3, seed + 1, true),
                   planted_targets(ss2.dictionary, 4, seed + 1)),
            {1}, grid);
  } else if (name == "kerdock") {
    const auto kd = kerdock_dictionary(4);
    run.run("kerdock-4", kd.dictionary,
            concat(random_unit_vectors(16, 5, seed, true), planted_targets(kd.dictionary, 5, seed)),
            {1}, {0.3, 0.6, 0.8});
    const auto k2 = kerdock_dictionary(2);
    run.run("kerdock-2", k2.dictionary,
            concat(random_unit_vectors(4, 5, seed + 1, true),
                   planted_targets(k2.dictionary, 5, seed + 1)),
            {1, 2}, grid);
  } else if (name == "random") {
    for (int i = 0; i < 10; ++i) {
      const std::uint64_t s = seed * 1000 + static_cast<std::uint64_t>(i);
      const int m = 3 + i % 4;
      const int n = m + 2 + i % 3;
      const Dictionary d = random_dictionary(m, n, s);
      run.run("random-" + std::to_string(i), d,
              concat(random_unit_vectors(m, 5, s + 500), planted_targets(d, 5, s + 700)), {1, 2},
              grid);
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
  }
  return run.take();
}

}  // namespace lsa
