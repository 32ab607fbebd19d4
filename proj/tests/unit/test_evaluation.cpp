#include <doctest.h>

#include <random>

#include "reference.hpp"
#include "tagclust/cocluster.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/evaluation.hpp"

using namespace tagclust;

namespace {

DenseRealMatrix random_positive(std::size_t n, std::size_t m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DenseRealMatrix out(n, m);
  for (auto& v : out.values()) v = u(rng);
  return out;
}

std::vector<std::size_t> random_labels(std::size_t n, std::size_t k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out(n);
  for (auto& x : out) x = rng() % k;
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("v-measure curve matches the oracle on every cut") {
  const auto d = agglomerate(random_positive(14, 11, 9));
  const auto rl = random_labels(14, 3, 1);
  const auto cl = random_labels(11, 4, 2);
  for (Axis axis : {Axis::Row, Axis::Col}) {
    const auto& labels = axis == Axis::Row ? rl : cl;
    const auto curve = v_measure_curve(d, axis, labels);
    REQUIRE(curve.size() == d.n_items(axis));  // initial state plus one per merge
    CHECK(curve.front().step == 0);
    CHECK(curve.front().k == d.n_items(axis));
    for (const auto& pt : curve) {
      const auto p = cut(d, axis, pt.k);
      const std::vector<std::size_t> pred(p.assignment().begin(), p.assignment().end());
      const auto ref = oracle::v_measure(labels, pred);
      CHECK(std::abs(pt.homogeneity - ref.h) <= 1e-9);
      CHECK(std::abs(pt.completeness - ref.c) <= 1e-9);
      CHECK(std::abs(pt.v_measure - ref.v) <= 1e-9);
    }
    CHECK(curve.back().k == 1);
  }
  CHECK_THROWS_AS(v_measure_curve(d, Axis::Row, cl), InvalidInput);
}

TEST_CASE("run evaluation summaries") {
  const auto d = agglomerate(random_positive(12, 10, 4));
  const auto rl = random_labels(12, 3, 5);
  const auto ev = evaluate_run(d, rl, {});
  CHECK(ev.rows.labeled);
  CHECK_FALSE(ev.cols.labeled);
  CHECK(ev.rows.k_true == 3);
  double best = 0.0;
  for (const auto& pt : ev.rows.v_curve) best = std::max(best, pt.v_measure);
  CHECK(ev.rows.max_v == best);
  CHECK(ev.rows.k_hat == ev.stopping.k_star_rows);
  CHECK(ev.rows.max_h_rel >= 0.0);
  CHECK(ev.rows.max_h_rel <= 1.0 + 1e-12);
  for (const auto& t : d.trace) CHECK(t.h_rel_rows <= ev.rows.max_h_rel + 1e-12);
  CHECK(ev.cols.v_curve.empty());
}

}  // TEST_SUITE
