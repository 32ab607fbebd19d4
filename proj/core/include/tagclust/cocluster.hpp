#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "tagclust/divergence.hpp"
#include "tagclust/types.hpp"

namespace tagclust {

enum class CostMode { Composite, KlOnly };
enum class Coupling { Cocluster, Independent };

std::string_view to_string(CostMode m) noexcept;
std::string_view to_string(Coupling c) noexcept;
std::optional<CostMode> parse_cost_mode(std::string_view s) noexcept;
std::optional<Coupling> parse_coupling(std::string_view s) noexcept;

// Symmetrized divergences below this are treated as exactly zero.
inline constexpr double kKlZeroSnap = 1e-12;
// Candidates whose cost is within this relative distance of the minimum are
// ties and are ordered by axis (rows first) then (smaller id, larger id).
inline constexpr double kTieRelTol = 1e-10;

struct EngineConfig {
  CostMode cost_mode = CostMode::Composite;
  // Independent: each axis is clustered against the singleton partition of
  // the other axis.
  Coupling coupling = Coupling::Cocluster;
  double alpha = 0.5;  // KL^J balance
  bool trace_metrics = true;
  std::size_t trace_stride = 1;  // record one trace entry every n merges
  std::size_t restricted_r = 1;  // r of the trace's restricted entropies
};

// Greedy hierarchical co-clustering over a smoothed matrix. Every step
// merges the cheapest same-axis pair over both axes, keeps the merged axis's
// divergences by recomputing the new cluster and the opposite axis's by
// incremental update.
class CoclusterEngine {
 public:
  // Throws InvalidInput for matrices smaller than 2x2, zero total mass or a
  // bad config; DegenerateCluster when a row or column carries no mass.
  CoclusterEngine(const DenseRealMatrix& m_star, EngineConfig cfg = {});
  ~CoclusterEngine();
  CoclusterEngine(CoclusterEngine&&) noexcept;
  CoclusterEngine& operator=(CoclusterEngine&&) noexcept;

  bool done() const noexcept;
  std::size_t steps_taken() const noexcept;

  // Performs the next merge. Throws InvalidInput when done().
  const MergeRecord& step();
  // Runs to a single cluster on both axes.
  const Dendrogram& run();

  const Dendrogram& dendrogram() const noexcept;
  const EngineConfig& config() const noexcept;

  std::size_t k(Axis axis) const noexcept;
  std::vector<ClusterId> live_clusters(Axis axis) const;
  std::size_t cluster_size(Axis axis, ClusterId id) const;

  // Conditional distribution of a cluster over the features of its axis:
  // the live clusters of the opposite axis (co-clustering) or its original
  // items (independent mode), in slot order.
  std::vector<double> distribution(Axis axis, ClusterId id) const;
  // Stored KL(a || b).
  double directed_kl(Axis axis, ClusterId a, ClusterId b) const;

  const AggregatedMassMatrix& aggregate() const noexcept;
  // Maintained incrementally; matches mutual_information(aggregate()).
  double mutual_information() const noexcept;

  // Number of selected merges whose size cost hit kMergeFloor.
  std::size_t merge_floor_hits() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Dendrogram agglomerate(const DenseRealMatrix& m_star, const EngineConfig& cfg = {});

struct CriterionPoint {
  std::size_t step = 0;
  std::size_t k = 0;
  double h_rel = 0.0;        // restricted relative entropy at this step
  double mutual_info = 0.0;  // from the trace
  double value = 0.0;        // h_rel * mutual_info
};

struct StoppingEstimate {
  std::size_t k_star_rows = 0;
  std::size_t k_star_cols = 0;
  std::size_t step_rows = 0;  // trace step where the row optimum is reached
  std::size_t step_cols = 0;
  std::vector<CriterionPoint> curve_rows;
  std::vector<CriterionPoint> curve_cols;
  bool degenerate_rows = false;  // criterion identically zero
  bool degenerate_cols = false;

  std::size_t k_star(Axis a) const { return a == Axis::Row ? k_star_rows : k_star_cols; }
  std::size_t step(Axis a) const { return a == Axis::Row ? step_rows : step_cols; }
  const std::vector<CriterionPoint>& curve(Axis a) const {
    return a == Axis::Row ? curve_rows : curve_cols;
  }
};

// Per axis, the live-cluster count maximizing
//   restricted_partition_entropy(C; r) * I(C_rows, C_cols)
// over the recorded trace (entries with at least 2 clusters). Entropies are
// recomputed from the merge records for the requested r; the mutual
// information comes from the trace. Ties keep the earliest step. Throws
// InvalidInput on an empty trace or r == 0.
StoppingEstimate stopping_criterion(const Dendrogram& d, std::size_t r = 1);

}  // namespace tagclust
