#include "tagclust/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tagclust/errors.hpp"
#include "tagclust/log.hpp"

namespace tagclust {

namespace {
constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();
}

std::string_view to_string(Axis a) noexcept { return a == Axis::Row ? "row" : "col"; }

Axis parse_axis(std::string_view s) {
  if (s == "row" || s == "rows") return Axis::Row;
  if (s == "col" || s == "cols" || s == "column" || s == "columns") return Axis::Col;
  throw InvalidInput("unknown axis: " + std::string(s));
}

// ---------------------------------------------------------------------------
// SparseBinaryMatrix

namespace {

SparseBinaryMatrix build_csr(std::size_t n_rows, std::size_t n_cols,
                             std::vector<SparseBinaryMatrix::Entry>& entries, bool dedup) {
  for (const auto& [i, j] : entries) {
    if (i >= n_rows || j >= n_cols) {
      throw InvalidInput("entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
  }
  std::sort(entries.begin(), entries.end());
  auto dup = std::adjacent_find(entries.begin(), entries.end());
  if (dup != entries.end()) {
    if (!dedup) {
      throw InvalidInput("duplicate entry (" + std::to_string(dup->first) + "," +
                         std::to_string(dup->second) + ")");
    }
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  }
  return SparseBinaryMatrix(n_rows, n_cols, entries);
}

}  // namespace

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t n_rows, std::size_t n_cols,
                                       std::vector<Entry> entries)
    : n_rows_(n_rows), n_cols_(n_cols) {
  if (!std::is_sorted(entries.begin(), entries.end())) {
    *this = build_csr(n_rows, n_cols, entries, false);
    return;
  }
  row_start_.assign(n_rows + 1, 0);
  col_index_.reserve(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto [i, j] = entries[e];
    if (i >= n_rows || j >= n_cols) {
      throw InvalidInput("entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
    if (e > 0 && entries[e - 1] == entries[e]) {
      throw InvalidInput("duplicate entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ")");
    }
    ++row_start_[i + 1];
    col_index_.push_back(j);
  }
  std::partial_sum(row_start_.begin(), row_start_.end(), row_start_.begin());
}

SparseBinaryMatrix SparseBinaryMatrix::from_entries_dedup(std::size_t n_rows, std::size_t n_cols,
                                                          std::vector<Entry> entries) {
  return build_csr(n_rows, n_cols, entries, true);
}

std::span<const std::size_t> SparseBinaryMatrix::row(std::size_t i) const {
  if (i >= n_rows_) throw InvalidInput("row index out of range");
  return {col_index_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

bool SparseBinaryMatrix::contains(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

std::vector<std::size_t> SparseBinaryMatrix::row_sums() const {
  std::vector<std::size_t> out(n_rows_);
  for (std::size_t i = 0; i < n_rows_; ++i) out[i] = row_start_[i + 1] - row_start_[i];
  return out;
}

std::vector<std::size_t> SparseBinaryMatrix::col_sums() const {
  std::vector<std::size_t> out(n_cols_, 0);
  for (std::size_t j : col_index_) ++out[j];
  return out;
}

std::vector<SparseBinaryMatrix::Entry> SparseBinaryMatrix::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) out.emplace_back(i, col_index_[k]);
  }
  return out;
}

FilteredMatrix drop_empty(const SparseBinaryMatrix& m) {
  std::vector<char> keep_row(m.n_rows(), 1);
  std::vector<char> keep_col(m.n_cols(), 1);
  const auto rs = m.row_sums();
  const auto cs = m.col_sums();
  for (std::size_t i = 0; i < m.n_rows(); ++i) keep_row[i] = rs[i] > 0;
  for (std::size_t j = 0; j < m.n_cols(); ++j) keep_col[j] = cs[j] > 0;
  // Removing an empty row never empties a column (and vice versa), so one
  // pass suffices.
  FilteredMatrix out;
  std::vector<std::size_t> new_row(m.n_rows(), kNoSlot);
  std::vector<std::size_t> new_col(m.n_cols(), kNoSlot);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    if (keep_row[i]) {
      new_row[i] = out.kept_rows.size();
      out.kept_rows.push_back(i);
    }
  }
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    if (keep_col[j]) {
      new_col[j] = out.kept_cols.size();
      out.kept_cols.push_back(j);
    }
  }
  std::vector<SparseBinaryMatrix::Entry> entries;
  entries.reserve(m.nnz());
  for (const auto& [i, j] : m.entries()) entries.emplace_back(new_row[i], new_col[j]);
  out.matrix = SparseBinaryMatrix(out.kept_rows.size(), out.kept_cols.size(), std::move(entries));

  const std::size_t dropped_rows = m.n_rows() - out.kept_rows.size();
  const std::size_t dropped_cols = m.n_cols() - out.kept_cols.size();
  if (dropped_rows + dropped_cols > 0) {
    log::warn("dropped " + std::to_string(dropped_rows) + " empty rows and " +
              std::to_string(dropped_cols) + " empty columns");
  }
  return out;
}

// ---------------------------------------------------------------------------
// DenseRealMatrix

DenseRealMatrix::DenseRealMatrix(std::size_t n_rows, std::size_t n_cols, double fill)
    : n_rows_(n_rows), n_cols_(n_cols), values_(n_rows * n_cols, fill) {}

DenseRealMatrix::DenseRealMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<double> values)
    : n_rows_(n_rows), n_cols_(n_cols), values_(std::move(values)) {
  if (values_.size() != n_rows * n_cols) {
    throw InvalidInput("dense matrix expects " + std::to_string(n_rows * n_cols) + " values, got " +
                       std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("dense matrix values must be finite and >= 0");
  }
}

DenseRealMatrix DenseRealMatrix::identity(std::size_t n) {
  DenseRealMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseRealMatrix DenseRealMatrix::from_binary(const SparseBinaryMatrix& m) {
  DenseRealMatrix out(m.n_rows(), m.n_cols());
  for (const auto& [i, j] : m.entries()) out(i, j) = 1.0;
  return out;
}

double DenseRealMatrix::sum() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

std::vector<double> DenseRealMatrix::row_sums() const {
  std::vector<double> out(n_rows_, 0.0);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (double v : row(i)) out[i] += v;
  }
  return out;
}

std::vector<double> DenseRealMatrix::col_sums() const {
  std::vector<double> out(n_cols_, 0.0);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    const auto r = row(i);
    for (std::size_t j = 0; j < n_cols_; ++j) out[j] += r[j];
  }
  return out;
}

DenseRealMatrix DenseRealMatrix::transposed() const {
  DenseRealMatrix out(n_cols_, n_rows_);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t j = 0; j < n_cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partition

Partition Partition::singletons(std::size_t n_items) {
  if (n_items < 2) {
    throw InvalidInput("a partition needs at least 2 items, got " + std::to_string(n_items));
  }
  Partition p;
  p.assignment_.resize(n_items);
  std::iota(p.assignment_.begin(), p.assignment_.end(), ClusterId{0});
  p.sizes_.assign(n_items, 1);
  p.n_live_ = n_items;
  p.next_id_ = n_items;
  return p;
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  if (labels.empty()) throw InvalidInput("empty label sequence");
  Partition p;
  p.assignment_.resize(labels.size());
  // Labels can be sparse; map through a sorted lookup.
  std::vector<std::size_t> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<ClusterId> id_of(distinct.size(), kNoSlot);
  ClusterId next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
    if (id_of[pos] == kNoSlot) id_of[pos] = next++;
    p.assignment_[i] = id_of[pos];
  }
  p.sizes_.assign(std::max<std::size_t>(next, 1), 0);
  for (ClusterId c : p.assignment_) ++p.sizes_[c];
  p.n_live_ = next;
  p.next_id_ = std::max<std::size_t>(labels.size(), next);
  return p;
}

bool Partition::is_live(ClusterId id) const noexcept { return id < sizes_.size() && sizes_[id] > 0; }

std::size_t Partition::size_of(ClusterId id) const {
  if (!is_live(id)) throw InvalidInput("cluster " + std::to_string(id) + " is not live");
  return sizes_[id];
}

std::vector<ClusterId> Partition::live_clusters() const {
  std::vector<ClusterId> out;
  out.reserve(n_live_);
  for (ClusterId id = 0; id < sizes_.size(); ++id) {
    if (sizes_[id] > 0) out.push_back(id);
  }
  return out;
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> out;
  out.reserve(n_live_);
  for (std::size_t s : sizes_) {
    if (s > 0) out.push_back(s);
  }
  return out;
}

ClusterId Partition::merge(ClusterId a, ClusterId b) {
  if (a == b) throw InvalidMerge("cannot merge cluster " + std::to_string(a) + " with itself");
  if (!is_live(a) || !is_live(b)) {
    throw InvalidMerge("merge of retired or unknown cluster (" + std::to_string(a) + ", " +
                       std::to_string(b) + ")");
  }
  const ClusterId merged = next_id_++;
  if (sizes_.size() <= merged) sizes_.resize(merged + 1, 0);
  sizes_[merged] = sizes_[a] + sizes_[b];
  sizes_[a] = 0;
  sizes_[b] = 0;
  for (auto& c : assignment_) {
    if (c == a || c == b) c = merged;
  }
  --n_live_;
  return merged;
}

Partition cut(const Dendrogram& d, Axis axis, std::size_t k) {
  const std::size_t n = d.n_items(axis);
  if (k == 0 || k > n) {
    throw InvalidInput("cut at k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto& merges = d.merges(axis);
  const std::size_t needed = n - k;
  if (merges.size() < needed) {
    throw InvalidInput("dendrogram has only " + std::to_string(merges.size()) +
                       " merges on the " + std::string(to_string(axis)) + " axis; cut at k=" +
                       std::to_string(k) + " needs " + std::to_string(needed));
  }
  Partition p = Partition::singletons(n);
  for (std::size_t t = 0; t < needed; ++t) {
    const ClusterId got = p.merge(merges[t].left, merges[t].right);
    if (got != merges[t].merged) throw InvalidInput("dendrogram ids are not linkage-ordered");
  }
  return p;
}

// ---------------------------------------------------------------------------
// AggregatedMassMatrix

AggregatedMassMatrix build_aggregate(const DenseRealMatrix& m_star, const Partition& rows,
                                     const Partition& cols) {
  if (m_star.n_rows() != rows.n_items() || m_star.n_cols() != cols.n_items()) {
    throw InvalidInput("aggregate: matrix is " + std::to_string(m_star.n_rows()) + "x" +
                       std::to_string(m_star.n_cols()) + " but partitions cover " +
                       std::to_string(rows.n_items()) + "x" + std::to_string(cols.n_items()));
  }
  AggregatedMassMatrix g;
  const auto row_ids = rows.live_clusters();
  const auto col_ids = cols.live_clusters();
  g.n_row_slots_ = row_ids.size();
  g.n_col_slots_ = col_ids.size();
  g.row_slot_id_ = row_ids;
  g.col_slot_id_ = col_ids;
  g.row_live_.assign(row_ids.size(), 1);
  g.col_live_.assign(col_ids.size(), 1);
  g.live_rows_ = row_ids.size();
  g.live_cols_ = col_ids.size();
  g.row_slot_of_.assign(rows.next_id(), kNoSlot);
  g.col_slot_of_.assign(cols.next_id(), kNoSlot);
  for (std::size_t s = 0; s < row_ids.size(); ++s) g.row_slot_of_[row_ids[s]] = s;
  for (std::size_t s = 0; s < col_ids.size(); ++s) g.col_slot_of_[col_ids[s]] = s;

  g.g_.assign(g.n_row_slots_ * g.n_col_slots_, 0.0);
  for (std::size_t i = 0; i < m_star.n_rows(); ++i) {
    const std::size_t a = g.row_slot_of_[rows.cluster_of(i)];
    const auto src = m_star.row(i);
    double* dst = g.g_.data() + a * g.n_col_slots_;
    for (std::size_t j = 0; j < src.size(); ++j) dst[g.col_slot_of_[cols.cluster_of(j)]] += src[j];
  }
  g.row_totals_.assign(g.n_row_slots_, 0.0);
  g.col_totals_.assign(g.n_col_slots_, 0.0);
  for (std::size_t a = 0; a < g.n_row_slots_; ++a) {
    for (std::size_t b = 0; b < g.n_col_slots_; ++b) {
      const double v = g.g_[a * g.n_col_slots_ + b];
      g.row_totals_[a] += v;
      g.col_totals_[b] += v;
    }
  }
  g.total_mass_ = 0.0;
  for (double t : g.row_totals_) g.total_mass_ += t;
  return g;
}

std::size_t AggregatedMassMatrix::row_slot(ClusterId id) const {
  if (id >= row_slot_of_.size() || row_slot_of_[id] == kNoSlot) {
    throw InvalidInput("row cluster " + std::to_string(id) + " is not live");
  }
  return row_slot_of_[id];
}

std::size_t AggregatedMassMatrix::col_slot(ClusterId id) const {
  if (id >= col_slot_of_.size() || col_slot_of_[id] == kNoSlot) {
    throw InvalidInput("column cluster " + std::to_string(id) + " is not live");
  }
  return col_slot_of_[id];
}

std::vector<ClusterId> AggregatedMassMatrix::row_ids() const {
  std::vector<ClusterId> out;
  for (std::size_t s = 0; s < n_row_slots_; ++s) {
    if (row_live_[s]) out.push_back(row_slot_id_[s]);
  }
  return out;
}

std::vector<ClusterId> AggregatedMassMatrix::col_ids() const {
  std::vector<ClusterId> out;
  for (std::size_t s = 0; s < n_col_slots_; ++s) {
    if (col_live_[s]) out.push_back(col_slot_id_[s]);
  }
  return out;
}

double AggregatedMassMatrix::at(ClusterId row, ClusterId col) const {
  return g_[row_slot(row) * n_col_slots_ + col_slot(col)];
}

double AggregatedMassMatrix::row_total(ClusterId row) const { return row_totals_[row_slot(row)]; }
double AggregatedMassMatrix::col_total(ClusterId col) const { return col_totals_[col_slot(col)]; }

std::vector<double> AggregatedMassMatrix::row_masses(ClusterId row) const {
  const std::size_t a = row_slot(row);
  std::vector<double> out;
  out.reserve(live_cols_);
  for (std::size_t b = 0; b < n_col_slots_; ++b) {
    if (col_live_[b]) out.push_back(g_[a * n_col_slots_ + b]);
  }
  return out;
}

std::vector<double> AggregatedMassMatrix::col_masses(ClusterId col) const {
  const std::size_t b = col_slot(col);
  std::vector<double> out;
  out.reserve(live_rows_);
  for (std::size_t a = 0; a < n_row_slots_; ++a) {
    if (row_live_[a]) out.push_back(g_[a * n_col_slots_ + b]);
  }
  return out;
}

DenseRealMatrix AggregatedMassMatrix::compact() const {
  DenseRealMatrix out(live_rows_, live_cols_);
  std::size_t r = 0;
  for (std::size_t a = 0; a < n_row_slots_; ++a) {
    if (!row_live_[a]) continue;
    std::size_t c = 0;
    for (std::size_t b = 0; b < n_col_slots_; ++b) {
      if (col_live_[b]) out(r, c++) = g_[a * n_col_slots_ + b];
    }
    ++r;
  }
  return out;
}

void AggregatedMassMatrix::merge_rows(ClusterId a, ClusterId b, ClusterId merged) {
  if (a == b) throw InvalidMerge("cannot merge a row cluster with itself");
  const std::size_t sa = row_slot(a);
  const std::size_t sb = row_slot(b);
  const std::size_t keep = std::min(sa, sb);
  const std::size_t drop = std::max(sa, sb);
  double* dk = g_.data() + keep * n_col_slots_;
  double* dd = g_.data() + drop * n_col_slots_;
  for (std::size_t c = 0; c < n_col_slots_; ++c) {
    dk[c] += dd[c];
    dd[c] = 0.0;
  }
  row_totals_[keep] += row_totals_[drop];
  row_totals_[drop] = 0.0;
  row_live_[drop] = 0;
  row_slot_of_[a] = kNoSlot;
  row_slot_of_[b] = kNoSlot;
  if (row_slot_of_.size() <= merged) row_slot_of_.resize(merged + 1, kNoSlot);
  row_slot_of_[merged] = keep;
  row_slot_id_[keep] = merged;
  --live_rows_;
}

void AggregatedMassMatrix::merge_cols(ClusterId a, ClusterId b, ClusterId merged) {
  if (a == b) throw InvalidMerge("cannot merge a column cluster with itself");
  const std::size_t sa = col_slot(a);
  const std::size_t sb = col_slot(b);
  const std::size_t keep = std::min(sa, sb);
  const std::size_t drop = std::max(sa, sb);
  for (std::size_t r = 0; r < n_row_slots_; ++r) {
    double* row = g_.data() + r * n_col_slots_;
    row[keep] += row[drop];
    row[drop] = 0.0;
  }
  col_totals_[keep] += col_totals_[drop];
  col_totals_[drop] = 0.0;
  col_live_[drop] = 0;
  col_slot_of_[a] = kNoSlot;
  col_slot_of_[b] = kNoSlot;
  if (col_slot_of_.size() <= merged) col_slot_of_.resize(merged + 1, kNoSlot);
  col_slot_of_[merged] = keep;
  col_slot_id_[keep] = merged;
  --live_cols_;
}

}  // namespace tagclust
