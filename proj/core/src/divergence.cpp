#include "tagclust/divergence.hpp"

#include <cmath>
#include <string>

#include "tagclust/errors.hpp"
#include "tagclust/parallel.hpp"

namespace tagclust {

namespace {

const double kLog2Floor = std::log2(kKlFloor);

void require_distribution(std::span<const double> p, const char* name) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string(name) + " has a negative or non-finite component");
    }
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw InvalidInput(std::string(name) + " sums to " + std::to_string(s) + ", expected 1");
  }
}

std::vector<double> normalized(std::vector<double> masses, double total, ClusterId id) {
  if (!(total > 0.0)) {
    throw DegenerateCluster("cluster " + std::to_string(id) + " has zero mass");
  }
  for (double& v : masses) v /= total;
  return masses;
}

}  // namespace

double floored_log2(double y) noexcept { return y > 0.0 ? std::log2(y) : kLog2Floor; }

std::vector<double> row_cluster_distribution(const AggregatedMassMatrix& g, ClusterId row) {
  return normalized(g.row_masses(row), g.row_total(row), row);
}

std::vector<double> col_cluster_distribution(const AggregatedMassMatrix& g, ClusterId col) {
  return normalized(g.col_masses(col), g.col_total(col), col);
}

double kl_divergence(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("kl_divergence: lengths " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()) + " differ");
  }
  require_distribution(a, "first distribution");
  require_distribution(b, "second distribution");
  double kl = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) kl += a[i] * (std::log2(a[i]) - floored_log2(b[i]));
  }
  return kl > 0.0 ? kl : 0.0;
}

double kl_j_symmetrized(std::span<const double> a, std::span<const double> b, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  return (1.0 - alpha) * kl_divergence(a, b) + alpha * kl_divergence(b, a);
}

std::optional<double> merge_size_cost(double p_i, double p_j, std::size_t k) {
  if (!(p_i > 0.0 && p_i <= 1.0 && p_j > 0.0 && p_j <= 1.0) || p_i + p_j > 1.0 + 1e-12) {
    throw InvalidInput("merge_size_cost: probabilities must lie in (0, 1] and sum to at most 1");
  }
  if (k < 3) return std::nullopt;
  const double fi = p_i * std::log2(p_i);
  const double fj = p_j * std::log2(p_j);
  const double pij = p_i + p_j;
  const double fij = pij * std::log2(pij);
  const double delta = (fi + fj) / std::log2(static_cast<double>(k)) -
                       fij / std::log2(static_cast<double>(k - 1));
  const double cost = -delta;
  return cost > kMergeFloor ? cost : kMergeFloor;
}

void incremental_kl_update(DirectedKLMatrix& kl, const DenseRealMatrix& dist,
                           std::span<const char> live, std::size_t i, std::size_t j) {
  const std::size_t n = dist.n_rows();
  if (live.size() != n || kl.capacity() < n) {
    throw InvalidInput("incremental_kl_update: shape mismatch");
  }
  if (i == j || i >= dist.n_cols() || j >= dist.n_cols()) {
    throw InvalidInput("incremental_kl_update: invalid feature pair");
  }
  std::vector<std::size_t> rows;
  rows.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (live[a]) rows.push_back(a);
  }
  // Per-row values and floored logs of the two features and their sum.
  const std::size_t k = rows.size();
  std::vector<double> xi(k), xj(k), xs(k), li(k), lj(k), ls(k);
  for (std::size_t r = 0; r < k; ++r) {
    xi[r] = dist(rows[r], i);
    xj[r] = dist(rows[r], j);
    xs[r] = xi[r] + xj[r];
    li[r] = floored_log2(xi[r]);
    lj[r] = floored_log2(xj[r]);
    ls[r] = floored_log2(xs[r]);
  }
  parallel_for(0, k, 32, [&](std::size_t u) {
    const std::size_t a = rows[u];
    for (std::size_t v = 0; v < k; ++v) {
      if (v == u) continue;
      const double delta = xs[u] * (ls[u] - ls[v]) - xi[u] * (li[u] - li[v]) -
                           xj[u] * (lj[u] - lj[v]);
      kl(a, rows[v]) += delta;
    }
  });
}

}  // namespace tagclust
