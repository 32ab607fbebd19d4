#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust {

// All entropies are in bits.

// -sum p_i log2 p_i with 0 log 0 = 0. Throws InvalidInput unless p is a
// probability vector within 1e-9.
double shannon_entropy(std::span<const double> p);

// Partition entropy over cluster sizes normalized by log2(#clusters).
// Throws UndefinedEntropy with fewer than two clusters.
double relative_partition_entropy(std::span<const std::size_t> sizes);
double relative_partition_entropy(const Partition& p);

// As above, but clusters of size <= r contribute nothing to the numerator;
// the denominator still counts every cluster.
double restricted_partition_entropy(std::span<const std::size_t> sizes, std::size_t r);
double restricted_partition_entropy(const Partition& p, std::size_t r);

// Ground-truth labels against predicted clusters, with their joint counts.
class LabeledPartitionPair {
 public:
  // Throws InvalidInput on length mismatch or empty input.
  LabeledPartitionPair(std::span<const std::size_t> true_labels,
                       std::span<const std::size_t> predicted);

  std::size_t n_items() const noexcept { return n_; }
  std::size_t n_classes() const noexcept { return class_counts_.size(); }
  std::size_t n_clusters() const noexcept { return cluster_counts_.size(); }
  // contingency(l, k): items of class l placed in cluster k.
  std::size_t contingency(std::size_t l, std::size_t k) const {
    return table_[l * cluster_counts_.size() + k];
  }

  double class_entropy() const;    // H(L)
  double cluster_entropy() const;  // H(K)
  double class_given_cluster() const;  // H(L|K)
  double cluster_given_class() const;  // H(K|L)

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> class_counts_;
  std::vector<std::size_t> cluster_counts_;
  std::vector<std::size_t> table_;
};

// h = 1 - H(L|K)/H(L), 1 when H(L) = 0.
double homogeneity(const LabeledPartitionPair& pair);
// c = 1 - H(K|L)/H(K), 1 when H(K) = 0.
double completeness(const LabeledPartitionPair& pair);
// (1+beta) h c / (beta h + c), 0 when the denominator vanishes.
double v_measure(const LabeledPartitionPair& pair, double beta = 1.0);

struct VMeasureScores {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v_measure = 0.0;
};
VMeasureScores v_measure_scores(const LabeledPartitionPair& pair, double beta = 1.0);
double v_measure_from(double h, double c, double beta = 1.0);

// I(X, Y) = H(X) + H(Y) - H(X, Y) of the joint distribution G / total.
// Throws InvalidInput when the total mass is not positive.
double mutual_information(const AggregatedMassMatrix& g);
double mutual_information(const DenseRealMatrix& joint);

}  // namespace tagclust
