#include <string>

#include "tagclust/cocluster.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/log.hpp"
#include "tagclust/metrics.hpp"

namespace tagclust {

namespace {

// Cluster sizes of one axis replayed merge by merge, indexed by id.
class SizeReplay {
 public:
  SizeReplay(std::size_t n_items, const std::vector<MergeRecord>& merges)
      : merges_(merges), sizes_(n_items, 1) {
    sizes_.reserve(2 * n_items);
  }

  // Applies merges with step <= `step`.
  void advance_to(std::size_t step) {
    while (next_ < merges_.size() && merges_[next_].step <= step) {
      const auto& m = merges_[next_++];
      if (m.left >= sizes_.size() || m.right >= sizes_.size() || sizes_[m.left] == 0 ||
          sizes_[m.right] == 0 || m.merged != sizes_.size()) {
        throw InvalidInput("dendrogram merge at step " + std::to_string(m.step) +
                           " references unknown clusters");
      }
      sizes_.push_back(sizes_[m.left] + sizes_[m.right]);
      sizes_[m.left] = 0;
      sizes_[m.right] = 0;
      --live_;
    }
  }

  std::size_t live() const { return live_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

 private:
  const std::vector<MergeRecord>& merges_;
  std::vector<std::size_t> sizes_;
  std::size_t next_ = 0;
  std::size_t live_ = sizes_.size();
};

}  // namespace

StoppingEstimate stopping_criterion(const Dendrogram& d, std::size_t r) {
  if (d.trace.empty()) throw InvalidInput("stopping criterion needs a recorded trace");
  if (r == 0) throw InvalidInput("restricted entropy threshold r must be >= 1");

  StoppingEstimate est;
  for (Axis axis : {Axis::Row, Axis::Col}) {
    SizeReplay replay(d.n_items(axis), d.merges(axis));
    auto& curve = axis == Axis::Row ? est.curve_rows : est.curve_cols;
    for (const StepTrace& t : d.trace) {
      replay.advance_to(t.step);
      if (replay.live() < 2) continue;
      const double h = restricted_partition_entropy(replay.sizes(), r);
      curve.push_back({t.step, replay.live(), h, t.mutual_info, h * t.mutual_info});
    }

    std::size_t best_k = d.n_items(axis);
    std::size_t best_step = 0;
    double best_value = 0.0;
    bool any_positive = false;
    for (const auto& p : curve) {
      if (p.value > best_value) {
        best_value = p.value;
        best_k = p.k;
        best_step = p.step;
        any_positive = true;
      }
    }
    if (!any_positive) {
      if (!curve.empty()) {
        best_k = curve.front().k;
        best_step = curve.front().step;
      }
      log::warn(std::string("stopping criterion is identically zero on the ") +
                std::string(to_string(axis)) + " axis; reporting the earliest step");
    }
    if (axis == Axis::Row) {
      est.k_star_rows = best_k;
      est.step_rows = best_step;
      est.degenerate_rows = !any_positive;
    } else {
      est.k_star_cols = best_k;
      est.step_cols = best_step;
      est.degenerate_cols = !any_positive;
    }
  }
  return est;
}

}  // namespace tagclust
