#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tagclust/cocluster.hpp"
#include "tagclust/types.hpp"

namespace tagclust {

struct VCurvePoint {
  std::size_t step = 0;  // 0 is the initial singleton state
  std::size_t k = 0;
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v_measure = 0.0;
};

// V-measure of one axis against ground-truth labels after every merge on
// that axis, starting from the singleton partition. Throws InvalidInput
// when the label count differs from the axis size.
std::vector<VCurvePoint> v_measure_curve(const Dendrogram& d, Axis axis,
                                         std::span<const std::size_t> labels);

struct AxisEvaluation {
  Axis axis = Axis::Row;
  bool labeled = false;
  std::size_t k_true = 0;  // distinct labels (labeled axes only)

  std::vector<VCurvePoint> v_curve;
  double max_v = 0.0;
  std::size_t k_at_max_v = 0;

  // Stopping criterion estimate and the scores of the partition it picks.
  std::size_t k_hat = 0;
  std::size_t step_at_k_hat = 0;
  double h_rel_at_k_hat = 0.0;
  double mutual_info_at_k_hat = 0.0;
  double homogeneity_at_k_hat = 0.0;
  double completeness_at_k_hat = 0.0;
  double v_at_k_hat = 0.0;

  // Largest restricted relative entropy over the trace.
  double max_h_rel = 0.0;
  std::size_t k_at_max_h_rel = 0;
};

struct RunEvaluation {
  StoppingEstimate stopping;
  AxisEvaluation rows;
  AxisEvaluation cols;

  const AxisEvaluation& axis(Axis a) const { return a == Axis::Row ? rows : cols; }
  // Mean of the row and column max V-measures.
  double mean_max_v() const { return 0.5 * (rows.max_v + cols.max_v); }
  double mean_max_h_rel() const { return 0.5 * (rows.max_h_rel + cols.max_h_rel); }
};

// Empty label spans mark an unlabeled axis. Requires a recorded trace.
RunEvaluation evaluate_run(const Dendrogram& d, std::span<const std::size_t> row_labels,
                           std::span<const std::size_t> col_labels, std::size_t r = 1);

}  // namespace tagclust
