#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oracle_check.hpp"
#include "reference.hpp"
#include "tagclust/cocluster.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/metrics.hpp"

using namespace tagclust;

namespace {

DenseRealMatrix two_blocks() {
  return DenseRealMatrix(4, 4, std::vector<double>{1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1});
}

DenseRealMatrix positive_random(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  DenseRealMatrix out(n, m);
  for (auto& v : out.values()) v = u(rng);
  return out;
}

std::vector<std::size_t> labels_at(const Dendrogram& d, Axis axis, std::size_t k) {
  const auto p = cut(d, axis, k);
  return {p.assignment().begin(), p.assignment().end()};
}

}  // namespace

TEST_SUITE("cocluster") {

TEST_CASE("two diagonal blocks are recovered before any cross-block merge") {
  const auto d = agglomerate(two_blocks());
  REQUIRE(d.complete());
  REQUIRE(d.total_merges() == 6);
  std::size_t within = 0;
  for (std::size_t s = 0; s < 4; ++s) {
    const MergeRecord* rec = nullptr;
    for (const auto& r : d.row_merges)
      if (r.step == s + 1) rec = &r;
    for (const auto& r : d.col_merges)
      if (r.step == s + 1) rec = &r;
    REQUIRE(rec != nullptr);
    CHECK(rec->kl_cost == 0.0);
    if ((rec->left == 0 && rec->right == 1) || (rec->left == 2 && rec->right == 3)) ++within;
  }
  CHECK(within == 4);
  for (Axis axis : {Axis::Row, Axis::Col}) {
    const auto l = labels_at(d, axis, 2);
    CHECK(l[0] == l[1]);
    CHECK(l[2] == l[3]);
    CHECK(l[0] != l[2]);
  }
}

TEST_CASE("dendrogram is complete and records are consistent") {
  std::mt19937_64 rng(5);
  for (auto mode : {CostMode::Composite, CostMode::KlOnly}) {
    const auto m = positive_random(rng, 7, 5);
    EngineConfig cfg;
    cfg.cost_mode = mode;
    const auto d = agglomerate(m, cfg);
    CHECK(d.row_merges.size() == 6);
    CHECK(d.col_merges.size() == 4);
    CHECK(d.complete());
    CHECK(d.trace.size() == 10);

    std::vector<std::size_t> steps;
    for (Axis axis : {Axis::Row, Axis::Col}) {
      std::vector<std::size_t> size(d.n_items(axis), 1);
      for (const auto& r : d.merges(axis)) {
        CHECK(r.axis == axis);
        CHECK(r.left < r.right);
        CHECK(r.merged == size.size());
        CHECK(r.new_size == size.at(r.left) + size.at(r.right));
        size.push_back(r.new_size);
        CHECK(r.kl_cost >= 0.0);
        if (mode == CostMode::KlOnly) CHECK(r.merge_cost == 1.0);
        CHECK(std::abs(r.composite_cost - r.kl_cost * r.merge_cost) <=
              1e-12 * std::max(1.0, std::abs(r.composite_cost)));
        steps.push_back(r.step);
      }
      CHECK(size.back() == d.n_items(axis));
    }
    std::sort(steps.begin(), steps.end());
    for (std::size_t i = 0; i < steps.size(); ++i) CHECK(steps[i] == i + 1);
  }
}

TEST_CASE("last merge of an axis uses a unit size cost") {
  std::mt19937_64 rng(8);
  const auto d = agglomerate(positive_random(rng, 5, 4));
  for (Axis axis : {Axis::Row, Axis::Col}) {
    const auto& last = d.merges(axis).back();
    CHECK(last.merge_cost == 1.0);
    CHECK(last.new_size == d.n_items(axis));
  }
}

TEST_CASE("pair costs are symmetric at every step") {
  std::mt19937_64 rng(13);
  CoclusterEngine e(positive_random(rng, 6, 6));
  while (!e.done()) {
    for (Axis axis : {Axis::Row, Axis::Col}) {
      const auto ids = e.live_clusters(axis);
      for (ClusterId a : ids)
        for (ClusterId b : ids) {
          if (a >= b) continue;
          const auto da = e.distribution(axis, a);
          const auto db = e.distribution(axis, b);
          CHECK(std::abs(kl_j_symmetrized(da, db) - kl_j_symmetrized(db, da)) <= 1e-12);
          const double stored_ab = 0.5 * e.directed_kl(axis, a, b) + 0.5 * e.directed_kl(axis, b, a);
          const double stored_ba = 0.5 * e.directed_kl(axis, b, a) + 0.5 * e.directed_kl(axis, a, b);
          CHECK(std::abs(stored_ab - stored_ba) <= 1e-12);
        }
    }
    e.step();
  }
}

TEST_CASE("mutual information is non-increasing and matches the aggregate") {
  std::mt19937_64 rng(21);
  for (auto coupling : {Coupling::Cocluster, Coupling::Independent}) {
    EngineConfig cfg;
    cfg.coupling = coupling;
    CoclusterEngine e(positive_random(rng, 9, 8), cfg);
    const double mass = e.aggregate().total_mass();
    double prev = e.mutual_information();
    CHECK(std::abs(prev - mutual_information(e.aggregate())) <= 1e-9);
    while (!e.done()) {
      e.step();
      const double mi = e.mutual_information();
      CHECK(mi <= prev + 1e-9);
      CHECK(std::abs(mi - mutual_information(e.aggregate())) <= 1e-9);
      CHECK(std::abs(e.aggregate().total_mass() - mass) <= 1e-9 * mass);
      double sum = 0.0;
      const auto joint = e.aggregate().compact();
      for (double v : joint.values()) sum += v;
      CHECK(std::abs(sum - mass) <= 1e-9 * mass);
      prev = mi;
    }
    CHECK(e.mutual_information() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("trace matches the engine state") {
  std::mt19937_64 rng(3);
  EngineConfig cfg;
  cfg.restricted_r = 1;
  CoclusterEngine e(positive_random(rng, 6, 5), cfg);
  std::size_t idx = 0;
  while (!e.done()) {
    e.step();
    const auto& t = e.dendrogram().trace.at(idx++);
    CHECK(t.step == e.steps_taken());
    CHECK(t.k_rows == e.k(Axis::Row));
    CHECK(t.k_cols == e.k(Axis::Col));
    CHECK(t.mutual_info == doctest::Approx(e.mutual_information()).epsilon(1e-12));
    CHECK(t.h_rel_rows >= 0.0);
    CHECK(t.h_rel_rows <= 1.0 + 1e-12);
    CHECK(t.criterion_rows == doctest::Approx(t.h_rel_rows * t.mutual_info));
    CHECK(t.criterion_cols == doctest::Approx(t.h_rel_cols * t.mutual_info));
    if (t.k_rows >= 2) {
      std::vector<std::size_t> sizes;
      for (auto id : e.live_clusters(Axis::Row)) sizes.push_back(e.cluster_size(Axis::Row, id));
      CHECK(std::abs(t.h_rel_rows - oracle::restricted_entropy_of_sizes(sizes, 1)) <= 1e-12);
    }
  }
}

TEST_CASE("trace stride and disabled metrics") {
  std::mt19937_64 rng(4);
  const auto m = positive_random(rng, 6, 6);
  EngineConfig cfg;
  cfg.trace_stride = 3;
  const auto d = agglomerate(m, cfg);
  REQUIRE(d.trace.size() == 4);  // steps 3, 6, 9 and the final step 10
  CHECK(d.trace[0].step == 3);
  CHECK(d.trace.back().step == 10);
  cfg.trace_metrics = false;
  const auto quiet = agglomerate(m, cfg);
  CHECK(quiet.trace.empty());
  CHECK(quiet.row_merges == d.row_merges);
  CHECK(quiet.col_merges == d.col_merges);
}

TEST_CASE("determinism and scale invariance") {
  std::mt19937_64 rng(99);
  const auto m = positive_random(rng, 10, 8);
  const auto a = agglomerate(m);
  const auto b = agglomerate(m);
  CHECK(a == b);
  DenseRealMatrix scaled = m;
  for (auto& v : scaled.values()) v *= 37.5;
  const auto c = agglomerate(scaled);
  REQUIRE(c.row_merges.size() == a.row_merges.size());
  for (std::size_t i = 0; i < a.row_merges.size(); ++i) {
    CHECK(c.row_merges[i].left == a.row_merges[i].left);
    CHECK(c.row_merges[i].right == a.row_merges[i].right);
    CHECK(c.row_merges[i].step == a.row_merges[i].step);
  }
  for (std::size_t i = 0; i < a.col_merges.size(); ++i) {
    CHECK(c.col_merges[i].left == a.col_merges[i].left);
    CHECK(c.col_merges[i].right == a.col_merges[i].right);
    CHECK(c.col_merges[i].step == a.col_merges[i].step);
  }
}

TEST_CASE("independent mode keeps singleton features") {
  std::mt19937_64 rng(6);
  const auto m = positive_random(rng, 5, 4);
  EngineConfig cfg;
  cfg.coupling = Coupling::Independent;
  CoclusterEngine e(m, cfg);
  while (!e.done()) {
    e.step();
    for (auto id : e.live_clusters(Axis::Row)) CHECK(e.distribution(Axis::Row, id).size() == 4);
    for (auto id : e.live_clusters(Axis::Col)) CHECK(e.distribution(Axis::Col, id).size() == 5);
  }
}

TEST_CASE("engine input validation") {
  CHECK_THROWS_AS(CoclusterEngine(DenseRealMatrix(1, 3, 1.0)), InvalidInput);
  CHECK_THROWS_AS(CoclusterEngine(DenseRealMatrix(3, 3, 0.0)), InvalidInput);
  EngineConfig bad_alpha;
  bad_alpha.alpha = 1.5;
  CHECK_THROWS_AS(CoclusterEngine(DenseRealMatrix(3, 3, 1.0), bad_alpha), InvalidInput);
  EngineConfig bad_stride;
  bad_stride.trace_stride = 0;
  CHECK_THROWS_AS(CoclusterEngine(DenseRealMatrix(3, 3, 1.0), bad_stride), InvalidInput);
  DenseRealMatrix holey(3, 3, 1.0);
  for (std::size_t j = 0; j < 3; ++j) holey(1, j) = 0.0;
  CHECK_THROWS_AS(CoclusterEngine{holey}, DegenerateCluster);

  CoclusterEngine e(DenseRealMatrix(2, 2, 1.0));
  e.run();
  CHECK(e.done());
  CHECK_THROWS_AS(e.step(), InvalidInput);
}

TEST_CASE("cost mode and coupling names") {
  CHECK(parse_cost_mode("composite") == CostMode::Composite);
  CHECK(parse_cost_mode("kl_only") == CostMode::KlOnly);
  CHECK_FALSE(parse_cost_mode("fast").has_value());
  CHECK(parse_coupling("independent") == Coupling::Independent);
  CHECK(to_string(CostMode::KlOnly) == "kl-only");
  CHECK(parse_cost_mode("kl-only") == CostMode::KlOnly);
  CHECK(to_string(Coupling::Cocluster) == "cocluster");
}

TEST_CASE("engine agrees with the brute-force oracle") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 2 + rng() % 7, m = 2 + rng() % 6;
    const auto mass = testutil::random_mass(rng, n, m, trial % 3 == 0);
    const auto oracle_m = testutil::to_oracle(mass);
    for (auto mode : {CostMode::Composite, CostMode::KlOnly}) {
      for (auto coupling : {Coupling::Cocluster, Coupling::Independent}) {
        const auto r = testutil::run_lockstep(oracle_m, mode, coupling);
        INFO(r.first_mismatch);
        CHECK(r.same_sequence);
        CHECK(r.worst_kl_error <= 1e-9);
      }
    }
  }
}

}  // TEST_SUITE
