#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "reference.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/metrics.hpp"

using namespace tagclust;

namespace {
using Labels = std::vector<std::size_t>;
using V = std::vector<double>;

double h_of(const Labels& l, const Labels& k) { return homogeneity(LabeledPartitionPair(l, k)); }
double c_of(const Labels& l, const Labels& k) { return completeness(LabeledPartitionPair(l, k)); }
double v_of(const Labels& l, const Labels& k) { return v_measure(LabeledPartitionPair(l, k)); }

Labels random_labels(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  Labels out(n);
  for (auto& x : out) x = rng() % k;
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("shannon entropy") {
  CHECK(std::abs(shannon_entropy(V{0.5, 0.5}) - 1.0) <= 1e-12);
  CHECK(shannon_entropy(V{1.0, 0.0}) == 0.0);
  for (std::size_t k : {2, 3, 7, 16, 100}) {
    const V u(k, 1.0 / static_cast<double>(k));
    CHECK(std::abs(shannon_entropy(u) - std::log2(static_cast<double>(k))) <= 1e-9);
  }
  CHECK_THROWS_AS(shannon_entropy(V{0.5, 0.6}), InvalidInput);
  CHECK_THROWS_AS(shannon_entropy(V{-0.5, 1.5}), InvalidInput);
}

TEST_CASE("relative partition entropy") {
  CHECK(std::abs(relative_partition_entropy(Partition::singletons(10)) - 1.0) <= 1e-12);
  const double expected = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  CHECK(std::abs(relative_partition_entropy(Labels{3, 1}) - expected) <= 1e-12);
  CHECK(std::abs(relative_partition_entropy(Labels{3, 1}) - 0.81128) <= 1e-5);
  CHECK(std::abs(relative_partition_entropy(Labels{5, 5, 5, 5, 5}) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(relative_partition_entropy(Labels{4}), UndefinedEntropy);
  CHECK_THROWS_AS(relative_partition_entropy(Partition::from_labels(Labels{0, 0, 0})),
                  UndefinedEntropy);
}

TEST_CASE("restricted partition entropy") {
  CHECK(restricted_partition_entropy(Partition::singletons(10), 1) == 0.0);
  CHECK(std::abs(restricted_partition_entropy(Labels{2, 2}, 1) - 1.0) <= 1e-12);
  const double expected = -(0.625 * std::log2(0.625)) / 2.0;
  CHECK(std::abs(restricted_partition_entropy(Labels{5, 1, 1, 1}, 1) - expected) <= 1e-12);
  CHECK(std::abs(restricted_partition_entropy(Labels{5, 1, 1, 1}, 1) - 0.21190) <= 1e-5);
  CHECK_THROWS_AS(restricted_partition_entropy(Labels{8}, 1), UndefinedEntropy);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    Labels sizes(2 + rng() % 10);
    for (auto& s : sizes) s = 1 + rng() % 6;
    CHECK(std::abs(restricted_partition_entropy(sizes, 0) - relative_partition_entropy(sizes)) <=
          1e-12);
    for (std::size_t r : {0, 1, 2, 4}) {
      const double h = restricted_partition_entropy(sizes, r);
      CHECK(std::abs(h - oracle::restricted_entropy_of_sizes(sizes, r)) <= 1e-12);
      CHECK(h >= 0.0);
      CHECK(h <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("homogeneity, completeness and v-measure examples") {
  const Labels l{0, 0, 1, 1};
  CHECK(h_of(l, Labels{5, 5, 9, 9}) == doctest::Approx(1.0));
  CHECK(c_of(l, Labels{5, 5, 9, 9}) == doctest::Approx(1.0));
  CHECK(v_of(l, Labels{5, 5, 9, 9}) == doctest::Approx(1.0));

  const Labels k{0, 1, 2, 3};
  CHECK(std::abs(h_of(l, k) - 1.0) <= 1e-12);
  CHECK(std::abs(c_of(l, k) - 0.5) <= 1e-12);
  CHECK(std::abs(v_of(l, k) - 2.0 / 3.0) <= 1e-12);

  // k x k uniform overlap.
  Labels truth, pred;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      truth.push_back(a);
      pred.push_back(b);
    }
  CHECK(std::abs(h_of(truth, pred)) <= 1e-12);
  CHECK(std::abs(c_of(truth, pred)) <= 1e-12);
  CHECK(v_of(truth, pred) == 0.0);

  // Degenerate entropies.
  CHECK(h_of(Labels{0, 0, 0}, Labels{0, 1, 2}) == 1.0);
  CHECK(c_of(Labels{0, 1, 2}, Labels{4, 4, 4}) == 1.0);

  CHECK_THROWS_AS(LabeledPartitionPair(Labels{0, 1}, Labels{0}), InvalidInput);
  CHECK_THROWS_AS(LabeledPartitionPair(Labels{}, Labels{}), InvalidInput);
  CHECK_THROWS_AS(v_measure_from(0.5, 0.5, -1.0), InvalidInput);
}

TEST_CASE("contingency table") {
  const LabeledPartitionPair p(Labels{0, 0, 1, 1, 1}, Labels{7, 3, 3, 3, 7});
  CHECK(p.n_items() == 5);
  CHECK(p.n_classes() == 2);
  CHECK(p.n_clusters() == 2);
  std::size_t total = 0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) total += p.contingency(a, b);
  CHECK(total == 5);
}

TEST_CASE("v-measure of random equal-size partitions vanishes") {
  std::mt19937_64 rng(2024);
  const std::size_t n = 10000;
  for (std::size_t k : {2, 5, 15}) {
    Labels truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = pred[i] = i % k;
    std::shuffle(pred.begin(), pred.end(), rng);
    CHECK(v_of(truth, pred) < 0.05);
  }
}

TEST_CASE("v-measure properties on random partitions") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 60;
    const auto a = random_labels(rng, n, 1 + rng() % 6);
    const auto b = random_labels(rng, n, 1 + rng() % 6);
    const auto s = v_measure_scores(LabeledPartitionPair(a, b));
    CHECK(s.homogeneity >= -1e-12);
    CHECK(s.homogeneity <= 1.0 + 1e-12);
    CHECK(s.completeness >= -1e-12);
    CHECK(s.completeness <= 1.0 + 1e-12);
    CHECK(s.v_measure >= -1e-12);
    CHECK(s.v_measure <= 1.0 + 1e-12);

    // Symmetry.
    CHECK(std::abs(v_of(a, b) - v_of(b, a)) <= 1e-12);

    // Relabeling.
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Labels relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = perm[b[i]] + 100;
    CHECK(std::abs(v_of(a, relabeled) - s.v_measure) <= 1e-12);

    const auto ref = oracle::v_measure(a, b);
    CHECK(std::abs(s.homogeneity - ref.h) <= 1e-9);
    CHECK(std::abs(s.completeness - ref.c) <= 1e-9);
    CHECK(std::abs(s.v_measure - ref.v) <= 1e-9);
  }
}

TEST_CASE("v-measure beta weighting") {
  const double h = 1.0, c = 0.5;
  CHECK(v_measure_from(h, c, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(v_measure_from(h, c, 0.0) == doctest::Approx(h));
  CHECK(v_measure_from(0.0, 0.0) == 0.0);
}

TEST_CASE("mutual information examples") {
  const DenseRealMatrix product(2, 2, V{0.06, 0.14, 0.24, 0.56});
  CHECK(std::abs(mutual_information(product)) <= 1e-12);

  DenseRealMatrix diag(4, 4);
  for (std::size_t i = 0; i < 4; ++i) diag(i, i) = 0.25;
  CHECK(std::abs(mutual_information(diag) - 2.0) <= 1e-12);

  const DenseRealMatrix g(2, 2, V{0.25, 0.25, 0.0, 0.5});
  const double hy = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
  CHECK(std::abs(mutual_information(g) - (1.0 + hy - 1.5)) <= 1e-12);
  CHECK(std::abs(mutual_information(g) - 0.31128) <= 1e-5);

  // Unnormalized masses give the same value.
  const DenseRealMatrix scaled(2, 2, V{1, 1, 0, 2});
  CHECK(std::abs(mutual_information(scaled) - mutual_information(g)) <= 1e-12);

  const auto agg = build_aggregate(g, Partition::singletons(2), Partition::singletons(2));
  CHECK(std::abs(mutual_information(agg) - mutual_information(g)) <= 1e-12);

  CHECK_THROWS_AS(mutual_information(DenseRealMatrix(2, 2, 0.0)), InvalidInput);
}

TEST_CASE("mutual information bounds on random joints") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 6, m = 1 + rng() % 6;
    oracle::Matrix j = oracle::zeros(n, m);
    DenseRealMatrix d(n, m);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < m; ++b) d(a, b) = j[a][b] = u(rng) < 0.3 ? 0.0 : u(rng);
    if (d.sum() == 0.0) continue;
    const double mi = mutual_information(d);
    V px(n, 0.0), py(m, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        px[a] += d(a, b) / d.sum();
        py[b] += d(a, b) / d.sum();
      }
    CHECK(mi >= -1e-9);
    CHECK(mi <= std::min(oracle::entropy(px), oracle::entropy(py)) + 1e-9);
    CHECK(std::abs(mi - oracle::mutual_information(j)) <= 1e-9);
  }
}

}  // TEST_SUITE
