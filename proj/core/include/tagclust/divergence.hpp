#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust {

// Stand-in for b_i = 0 when a_i > 0: the term becomes a_i * log2(a_i / 1e-12).
inline constexpr double kKlFloor = 1e-12;
// Lower bound of the size-based merge cost.
inline constexpr double kMergeFloor = 1e-12;

// log2(y), or log2(kKlFloor) when y is 0.
double floored_log2(double y) noexcept;

// Distribution of row cluster `row` over the live column clusters
// (G[a][b] / row_total[a]). Throws DegenerateCluster on zero mass.
std::vector<double> row_cluster_distribution(const AggregatedMassMatrix& g, ClusterId row);
std::vector<double> col_cluster_distribution(const AggregatedMassMatrix& g, ClusterId col);

// KL(A||B) in bits. Zero entries of A contribute nothing; entries where A>0
// and B=0 use kKlFloor in place of B. Throws InvalidInput on length mismatch
// or when either input is not a probability vector (tolerance 1e-9).
double kl_divergence(std::span<const double> a, std::span<const double> b);

// (1-alpha) KL(A||B) + alpha KL(B||A).
double kl_j_symmetrized(std::span<const double> a, std::span<const double> b, double alpha = 0.5);

// -Delta(p_i, p_j; k): the loss of relative partition entropy caused by
// merging clusters with size fractions p_i and p_j out of k clusters,
//   -[(p_i log p_i + p_j log p_j) / log k - (p_i+p_j) log(p_i+p_j) / log(k-1)],
// floored at kMergeFloor. Returns nullopt for k < 3, where log(k-1) <= 0.
std::optional<double> merge_size_cost(double p_i, double p_j, std::size_t k);

inline double composite_cost(double kl_j, double merge) noexcept { return kl_j * merge; }

// Square matrix of directed divergences KL(A||B) between clusters of one
// axis, indexed by engine slot. The diagonal stays 0.
class DirectedKLMatrix {
 public:
  DirectedKLMatrix() = default;
  explicit DirectedKLMatrix(std::size_t capacity)
      : capacity_(capacity), values_(capacity * capacity, 0.0) {}

  std::size_t capacity() const noexcept { return capacity_; }
  double& operator()(std::size_t a, std::size_t b) noexcept { return values_[a * capacity_ + b]; }
  double operator()(std::size_t a, std::size_t b) const noexcept {
    return values_[a * capacity_ + b];
  }

 private:
  std::size_t capacity_ = 0;
  std::vector<double> values_;
};

// Updates `kl` after features i and j of the distributions are merged.
// `dist` holds one distribution per row (rows = the clusters of `kl`,
// columns = features) as it was before the merge; `live` flags the rows to
// update. For every ordered live pair (a, b) adds
//   (a_i+a_j) log((a_i+a_j)/(b_i+b_j)) - a_i log(a_i/b_i) - a_j log(a_j/b_j)
// with the same zero conventions as kl_divergence. `dist` is not modified.
void incremental_kl_update(DirectedKLMatrix& kl, const DenseRealMatrix& dist,
                           std::span<const char> live, std::size_t i, std::size_t j);

}  // namespace tagclust
