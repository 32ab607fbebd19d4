#include "tagclust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "tagclust/errors.hpp"
#include "tagclust/metrics.hpp"

namespace tagclust {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Contingency table kept per live cluster as label -> count, with the sums
//   S1 = sum_k g(n_k), S2 = sum_{l,k} g(n_lk), g(x) = x log2 x
// maintained across merges, so that with N items
//   H(L|K) = (S1 - S2) / N and H(K|L) = (SL - S2) / N.
class IncrementalContingency {
 public:
  explicit IncrementalContingency(std::span<const std::size_t> labels)
      : n_(labels.size()), live_(labels.size()) {
    std::unordered_map<std::size_t, std::size_t> class_sizes;
    for (std::size_t l : labels) ++class_sizes[l];
    n_classes_ = class_sizes.size();
    for (const auto& [l, c] : class_sizes) sl_ += xlog2x(static_cast<double>(c));
    h_l_ = std::log2(static_cast<double>(n_)) - sl_ / static_cast<double>(n_);
    clusters_.resize(labels.size());
    sizes_.assign(labels.size(), 1);
    for (std::size_t i = 0; i < labels.size(); ++i) clusters_[i][labels[i]] = 1;
    // Singletons: g(1) = 0, so S1 = S2 = 0.
  }

  std::size_t k() const { return live_; }

  void merge(ClusterId a, ClusterId b, ClusterId merged) {
    if (a >= clusters_.size() || b >= clusters_.size() || merged != clusters_.size() ||
        sizes_[a] == 0 || sizes_[b] == 0) {
      throw InvalidInput("dendrogram merge references unknown clusters");
    }
    if (clusters_[a].size() < clusters_[b].size()) std::swap(a, b);
    auto counts = std::move(clusters_[a]);
    for (const auto& [l, c] : clusters_[b]) {
      auto& dst = counts[l];
      s2_ -= xlog2x(static_cast<double>(dst)) + xlog2x(static_cast<double>(c));
      dst += c;
      s2_ += xlog2x(static_cast<double>(dst));
    }
    const std::size_t size = sizes_[a] + sizes_[b];
    s1_ += xlog2x(static_cast<double>(size)) - xlog2x(static_cast<double>(sizes_[a])) -
           xlog2x(static_cast<double>(sizes_[b]));
    clusters_[a].clear();
    clusters_[b].clear();
    sizes_[a] = sizes_[b] = 0;
    clusters_.push_back(std::move(counts));
    sizes_.push_back(size);
    --live_;
  }

  VCurvePoint scores(std::size_t step) const {
    VCurvePoint p;
    p.step = step;
    p.k = live_;
    const double n = static_cast<double>(n_);
    const double h_k = live_ <= 1 ? 0.0 : std::log2(n) - s1_ / n;
    p.homogeneity =
        n_classes_ <= 1 || h_l_ <= 0.0 ? 1.0 : std::clamp(1.0 - (s1_ - s2_) / n / h_l_, 0.0, 1.0);
    p.completeness =
        live_ <= 1 || h_k <= 0.0 ? 1.0 : std::clamp(1.0 - (sl_ - s2_) / n / h_k, 0.0, 1.0);
    p.v_measure = v_measure_from(p.homogeneity, p.completeness);
    return p;
  }

 private:
  std::size_t n_;
  std::size_t live_;
  std::size_t n_classes_ = 0;
  double sl_ = 0.0;
  double h_l_ = 0.0;
  double s1_ = 0.0;
  double s2_ = 0.0;
  std::vector<std::unordered_map<std::size_t, std::size_t>> clusters_;
  std::vector<std::size_t> sizes_;
};

}  // namespace

std::vector<VCurvePoint> v_measure_curve(const Dendrogram& d, Axis axis,
                                         std::span<const std::size_t> labels) {
  if (labels.size() != d.n_items(axis) || labels.empty()) {
    throw InvalidInput("v_measure_curve: " + std::to_string(labels.size()) + " labels for " +
                       std::to_string(d.n_items(axis)) + " " + std::string(to_string(axis)) +
                       " items");
  }
  IncrementalContingency table(labels);
  std::vector<VCurvePoint> curve;
  curve.reserve(d.merges(axis).size() + 1);
  curve.push_back(table.scores(0));
  for (const MergeRecord& m : d.merges(axis)) {
    table.merge(m.left, m.right, m.merged);
    curve.push_back(table.scores(m.step));
  }
  return curve;
}

RunEvaluation evaluate_run(const Dendrogram& d, std::span<const std::size_t> row_labels,
                           std::span<const std::size_t> col_labels, std::size_t r) {
  RunEvaluation ev;
  ev.stopping = stopping_criterion(d, r);
  for (Axis axis : {Axis::Row, Axis::Col}) {
    AxisEvaluation& a = axis == Axis::Row ? ev.rows : ev.cols;
    const auto labels = axis == Axis::Row ? row_labels : col_labels;
    a.axis = axis;
    a.k_hat = ev.stopping.k_star(axis);
    a.step_at_k_hat = ev.stopping.step(axis);

    const auto& crit = ev.stopping.curve(axis);
    for (const auto& p : crit) {
      if (p.step == a.step_at_k_hat) {
        a.h_rel_at_k_hat = p.h_rel;
        a.mutual_info_at_k_hat = p.mutual_info;
      }
      if (p.h_rel > a.max_h_rel || a.k_at_max_h_rel == 0) {
        a.max_h_rel = p.h_rel;
        a.k_at_max_h_rel = p.k;
      }
    }

    if (labels.empty()) continue;
    a.labeled = true;
    std::vector<std::size_t> distinct(labels.begin(), labels.end());
    std::sort(distinct.begin(), distinct.end());
    a.k_true = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) -
                                        distinct.begin());
    a.v_curve = v_measure_curve(d, axis, labels);
    for (const auto& p : a.v_curve) {
      if (p.v_measure > a.max_v || a.k_at_max_v == 0) {
        a.max_v = p.v_measure;
        a.k_at_max_v = p.k;
      }
    }
    // Last curve point at or before the k-hat step is the partition it picks.
    const VCurvePoint* at = &a.v_curve.front();
    for (const auto& p : a.v_curve) {
      if (p.step <= a.step_at_k_hat) at = &p;
    }
    a.homogeneity_at_k_hat = at->homogeneity;
    a.completeness_at_k_hat = at->completeness;
    a.v_at_k_hat = at->v_measure;
  }
  return ev;
}

}  // namespace tagclust
