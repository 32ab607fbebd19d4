#include "tagclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tagclust/errors.hpp"

namespace tagclust {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// sum c log2 c over integer counts.
double count_log_sum(std::span<const std::size_t> counts) {
  double s = 0.0;
  for (std::size_t c : counts) {
    if (c > 0) {
      const double x = static_cast<double>(c);
      s += x * std::log2(x);
    }
  }
  return s;
}

double restricted_impl(std::span<const std::size_t> sizes, std::size_t r) {
  std::size_t live = 0;
  std::size_t n = 0;
  for (std::size_t s : sizes) {
    if (s > 0) {
      ++live;
      n += s;
    }
  }
  if (live < 2) {
    throw UndefinedEntropy("partition entropy needs at least 2 clusters, got " +
                           std::to_string(live));
  }
  double h = 0.0;
  const double total = static_cast<double>(n);
  for (std::size_t s : sizes) {
    if (s > r) h -= plogp(static_cast<double>(s) / total);
  }
  const double rel = h / std::log2(static_cast<double>(live));
  return std::clamp(rel, 0.0, 1.0);
}

}  // namespace

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  double h = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("shannon_entropy: negative or non-finite probability");
    }
    s += v;
    h -= plogp(v);
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw InvalidInput("shannon_entropy: probabilities sum to " + std::to_string(s));
  }
  return h > 0.0 ? h : 0.0;
}

double relative_partition_entropy(std::span<const std::size_t> sizes) {
  return restricted_impl(sizes, 0);
}

double relative_partition_entropy(const Partition& p) {
  const auto sizes = p.cluster_sizes();
  return restricted_impl(sizes, 0);
}

double restricted_partition_entropy(std::span<const std::size_t> sizes, std::size_t r) {
  return restricted_impl(sizes, r);
}

double restricted_partition_entropy(const Partition& p, std::size_t r) {
  const auto sizes = p.cluster_sizes();
  return restricted_impl(sizes, r);
}

// ---------------------------------------------------------------------------

LabeledPartitionPair::LabeledPartitionPair(std::span<const std::size_t> true_labels,
                                           std::span<const std::size_t> predicted) {
  if (true_labels.size() != predicted.size()) {
    throw InvalidInput("label sequences have different lengths (" +
                       std::to_string(true_labels.size()) + " vs " +
                       std::to_string(predicted.size()) + ")");
  }
  if (true_labels.empty()) throw InvalidInput("empty label sequences");
  n_ = true_labels.size();

  auto dense_ids = [](std::span<const std::size_t> labels) {
    std::vector<std::size_t> distinct(labels.begin(), labels.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      out[i] = static_cast<std::size_t>(
          std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
    }
    return std::make_pair(std::move(out), distinct.size());
  };
  const auto [l, n_l] = dense_ids(true_labels);
  const auto [k, n_k] = dense_ids(predicted);
  class_counts_.assign(n_l, 0);
  cluster_counts_.assign(n_k, 0);
  table_.assign(n_l * n_k, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    ++class_counts_[l[i]];
    ++cluster_counts_[k[i]];
    ++table_[l[i] * n_k + k[i]];
  }
}

double LabeledPartitionPair::class_entropy() const {
  const double n = static_cast<double>(n_);
  return std::max(0.0, std::log2(n) - count_log_sum(class_counts_) / n);
}

double LabeledPartitionPair::cluster_entropy() const {
  const double n = static_cast<double>(n_);
  return std::max(0.0, std::log2(n) - count_log_sum(cluster_counts_) / n);
}

double LabeledPartitionPair::class_given_cluster() const {
  const double n = static_cast<double>(n_);
  return std::max(0.0, (count_log_sum(cluster_counts_) - count_log_sum(table_)) / n);
}

double LabeledPartitionPair::cluster_given_class() const {
  const double n = static_cast<double>(n_);
  return std::max(0.0, (count_log_sum(class_counts_) - count_log_sum(table_)) / n);
}

double homogeneity(const LabeledPartitionPair& pair) {
  const double hl = pair.class_entropy();
  if (hl <= 0.0) return 1.0;
  return std::clamp(1.0 - pair.class_given_cluster() / hl, 0.0, 1.0);
}

double completeness(const LabeledPartitionPair& pair) {
  const double hk = pair.cluster_entropy();
  if (hk <= 0.0) return 1.0;
  return std::clamp(1.0 - pair.cluster_given_class() / hk, 0.0, 1.0);
}

double v_measure_from(double h, double c, double beta) {
  if (!(beta >= 0.0)) throw InvalidInput("v_measure: beta must be >= 0");
  const double denom = beta * h + c;
  if (denom <= 0.0) return 0.0;
  return (1.0 + beta) * h * c / denom;
}

double v_measure(const LabeledPartitionPair& pair, double beta) {
  return v_measure_from(homogeneity(pair), completeness(pair), beta);
}

VMeasureScores v_measure_scores(const LabeledPartitionPair& pair, double beta) {
  VMeasureScores s;
  s.homogeneity = homogeneity(pair);
  s.completeness = completeness(pair);
  s.v_measure = v_measure_from(s.homogeneity, s.completeness, beta);
  return s;
}

double mutual_information(const DenseRealMatrix& joint) {
  const double total = joint.sum();
  if (!(total > 0.0)) throw InvalidInput("mutual_information: zero total mass");
  const auto rows = joint.row_sums();
  const auto cols = joint.col_sums();
  double hx = 0.0, hy = 0.0, hxy = 0.0;
  for (double v : rows) hx -= plogp(v / total);
  for (double v : cols) hy -= plogp(v / total);
  for (double v : joint.values()) hxy -= plogp(v / total);
  const double mi = hx + hy - hxy;
  return mi > 0.0 ? mi : 0.0;
}

double mutual_information(const AggregatedMassMatrix& g) {
  if (!(g.total_mass() > 0.0)) throw InvalidInput("mutual_information: zero total mass");
  return mutual_information(g.compact());
}

}  // namespace tagclust
