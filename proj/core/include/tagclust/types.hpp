#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

namespace tagclust {

// Linkage-style cluster ids: originals are 0..n-1, merge t creates n+t.
using ClusterId = std::size_t;

enum class Axis : std::uint8_t { Row = 0, Col = 1 };

constexpr Axis opposite(Axis a) noexcept { return a == Axis::Row ? Axis::Col : Axis::Row; }
std::string_view to_string(Axis a) noexcept;
// Accepts "row"/"rows" and "col"/"cols"/"column"/"columns"; throws InvalidInput.
Axis parse_axis(std::string_view s);

// Documents x keywords incidence matrix, stored as sorted CSR.
class SparseBinaryMatrix {
 public:
  using Entry = std::pair<std::size_t, std::size_t>;

  SparseBinaryMatrix() = default;

  // Throws InvalidInput on out-of-range or duplicate entries.
  SparseBinaryMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<Entry> entries);

  // Same as the constructor but silently collapses duplicates.
  static SparseBinaryMatrix from_entries_dedup(std::size_t n_rows, std::size_t n_cols,
                                               std::vector<Entry> entries);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return col_index_.size(); }

  // Column indices of row i, ascending.
  std::span<const std::size_t> row(std::size_t i) const;
  bool contains(std::size_t i, std::size_t j) const;

  std::vector<std::size_t> row_sums() const;
  std::vector<std::size_t> col_sums() const;
  std::vector<Entry> entries() const;

  bool operator==(const SparseBinaryMatrix&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<std::size_t> col_index_;
};

// Result of removing zero-sum rows and columns; kept_* map new index -> old.
struct FilteredMatrix {
  SparseBinaryMatrix matrix;
  std::vector<std::size_t> kept_rows;
  std::vector<std::size_t> kept_cols;
};

// Drops empty rows, then empty columns, repeating until both marginals are
// strictly positive. Logs a warning with the number of items dropped.
FilteredMatrix drop_empty(const SparseBinaryMatrix& m);

// Row-major dense matrix of nonnegative reals.
class DenseRealMatrix {
 public:
  DenseRealMatrix() = default;
  DenseRealMatrix(std::size_t n_rows, std::size_t n_cols, double fill = 0.0);
  // Throws InvalidInput when values.size() != n_rows*n_cols or a value is
  // negative or non-finite.
  DenseRealMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<double> values);

  static DenseRealMatrix identity(std::size_t n);
  static DenseRealMatrix from_binary(const SparseBinaryMatrix& m);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * n_cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * n_cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * n_cols_, n_cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n_cols_, n_cols_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double sum() const noexcept;
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  DenseRealMatrix transposed() const;

  bool operator==(const DenseRealMatrix&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> values_;
};

// Hard assignment of items to clusters with linkage-style ids.
class Partition {
 public:
  // Every item alone in its own cluster. Throws InvalidInput for n_items < 2.
  static Partition singletons(std::size_t n_items);

  // Builds a partition from arbitrary labels; ids are remapped to 0..k-1 in
  // order of first appearance and next_id is set to n_items.
  static Partition from_labels(std::span<const std::size_t> labels);

  std::size_t n_items() const noexcept { return assignment_.size(); }
  std::size_t n_clusters() const noexcept { return n_live_; }
  ClusterId next_id() const noexcept { return next_id_; }

  ClusterId cluster_of(std::size_t item) const { return assignment_.at(item); }
  std::span<const ClusterId> assignment() const noexcept { return assignment_; }

  bool is_live(ClusterId id) const noexcept;
  std::size_t size_of(ClusterId id) const;

  // Live cluster ids, ascending.
  std::vector<ClusterId> live_clusters() const;
  // Sizes of live clusters, in the order of live_clusters().
  std::vector<std::size_t> cluster_sizes() const;

  // Merges a and b into a new cluster numbered next_id(), which is returned.
  // Throws InvalidMerge when a == b or either id is not live.
  ClusterId merge(ClusterId a, ClusterId b);

  // Value-returning form of merge().
  friend Partition apply_merge(Partition p, ClusterId a, ClusterId b) {
    p.merge(a, b);
    return p;
  }

 private:
  std::vector<ClusterId> assignment_;
  std::vector<std::size_t> sizes_;  // indexed by id, 0 when retired
  std::size_t n_live_ = 0;
  ClusterId next_id_ = 0;
};

inline Partition new_singleton_partition(std::size_t n_items) {
  return Partition::singletons(n_items);
}

struct MergeRecord {
  std::size_t step = 0;  // global step over both axes, starting at 1
  Axis axis = Axis::Row;
  ClusterId left = 0;
  ClusterId right = 0;
  ClusterId merged = 0;
  double kl_cost = 0.0;
  double merge_cost = 0.0;
  double composite_cost = 0.0;
  std::size_t new_size = 0;

  bool operator==(const MergeRecord&) const = default;
};

struct StepTrace {
  std::size_t step = 0;
  std::size_t k_rows = 0;
  std::size_t k_cols = 0;
  double h_rel_rows = 0.0;
  double h_rel_cols = 0.0;
  double mutual_info = 0.0;
  double criterion_rows = 0.0;
  double criterion_cols = 0.0;

  bool operator==(const StepTrace&) const = default;
};

struct Dendrogram {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::size_t restricted_r = 1;  // r used for the trace entropies
  std::vector<MergeRecord> row_merges;
  std::vector<MergeRecord> col_merges;
  std::vector<StepTrace> trace;

  const std::vector<MergeRecord>& merges(Axis a) const {
    return a == Axis::Row ? row_merges : col_merges;
  }
  std::size_t n_items(Axis a) const { return a == Axis::Row ? n_rows : n_cols; }
  std::size_t total_merges() const { return row_merges.size() + col_merges.size(); }
  bool complete() const {
    return row_merges.size() + 1 == n_rows && col_merges.size() + 1 == n_cols;
  }

  bool operator==(const Dendrogram&) const = default;
};

// Replays the first merges of an axis until `k` clusters remain.
// Throws InvalidInput when k is 0 or exceeds the item count, or when the
// recorded merges do not reach k.
Partition cut(const Dendrogram& d, Axis axis, std::size_t k);

// Summed smoothed mass per (row cluster, column cluster). Cells are stored
// in fixed slots; merged clusters reuse the smaller slot of the pair.
class AggregatedMassMatrix {
 public:
  AggregatedMassMatrix() = default;

  std::size_t k_rows() const noexcept { return live_rows_; }
  std::size_t k_cols() const noexcept { return live_cols_; }
  double total_mass() const noexcept { return total_mass_; }

  // Live ids in slot order.
  std::vector<ClusterId> row_ids() const;
  std::vector<ClusterId> col_ids() const;

  double at(ClusterId row, ClusterId col) const;
  double row_total(ClusterId row) const;
  double col_total(ClusterId col) const;

  // Row cluster `row` as a vector over live column clusters (slot order).
  std::vector<double> row_masses(ClusterId row) const;
  std::vector<double> col_masses(ClusterId col) const;

  // Joint mass matrix over live clusters (slot order), k_rows x k_cols.
  DenseRealMatrix compact() const;

  void merge_rows(ClusterId a, ClusterId b, ClusterId merged);
  void merge_cols(ClusterId a, ClusterId b, ClusterId merged);

  friend AggregatedMassMatrix build_aggregate(const DenseRealMatrix& m_star,
                                              const Partition& rows, const Partition& cols);

 private:
  std::size_t row_slot(ClusterId id) const;
  std::size_t col_slot(ClusterId id) const;

  std::size_t n_row_slots_ = 0;
  std::size_t n_col_slots_ = 0;
  std::vector<double> g_;  // n_row_slots_ x n_col_slots_
  std::vector<double> row_totals_;
  std::vector<double> col_totals_;
  std::vector<ClusterId> row_slot_id_;
  std::vector<ClusterId> col_slot_id_;
  std::vector<char> row_live_;
  std::vector<char> col_live_;
  std::vector<std::size_t> row_slot_of_;  // id -> slot, npos when retired
  std::vector<std::size_t> col_slot_of_;
  std::size_t live_rows_ = 0;
  std::size_t live_cols_ = 0;
  double total_mass_ = 0.0;
};

// G[a][b] = sum over items of row cluster a and column cluster b of m_star.
// Throws InvalidInput on dimension mismatch.
AggregatedMassMatrix build_aggregate(const DenseRealMatrix& m_star, const Partition& rows,
                                     const Partition& cols);

}  // namespace tagclust
