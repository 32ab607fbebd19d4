#include "tagclust/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tagclust/errors.hpp"
#include "tagclust/synthgen.hpp"

namespace tagclust {

std::size_t spectral_dimensions(std::size_t k) {
  if (k < 2) throw InvalidInput("spectral co-clustering needs k >= 2");
  std::size_t l = 0;
  while ((std::size_t{1} << l) < k) ++l;
  return l;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t t = 0; t < d; ++t) {
    const double x = a[t] - b[t];
    s += x * x;
  }
  return s;
}

KMeansResult lloyd(std::span<const double> pts, std::size_t n, std::size_t d, std::size_t k,
                   std::size_t max_iters, SplitMix64& rng) {
  KMeansResult res;
  res.centers.assign(k * d, 0.0);

  // k-means++ seeding.
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  std::copy_n(pts.data() + first * d, d, res.centers.data());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], sq_dist(pts.data() + i * d, res.centers.data() + (c - 1) * d, d));
      total += dist[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(n));
    }
    std::copy_n(pts.data() + pick * d, d, res.centers.data() + c * d);
  }

  res.labels.assign(n, k);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);
  for (std::size_t it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = sq_dist(pts.data() + i * d, res.centers.data() + c * d, d);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    res.iterations = it + 1;
    if (!changed) break;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = res.labels[i];
      ++counts[c];
      for (std::size_t t = 0; t < d; ++t) sums[c * d + t] += pts[i * d + t];
    }
    // Empty clusters keep their previous center.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t t = 0; t < d; ++t) {
        res.centers[c * d + t] = sums[c * d + t] / static_cast<double>(counts[c]);
      }
    }
  }
  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res.inertia += sq_dist(pts.data() + i * d, res.centers.data() + res.labels[i] * d, d);
  }
  return res;
}

}  // namespace

KMeansResult kmeans(std::span<const double> points, std::size_t dims, std::size_t k,
                    std::size_t restarts, std::size_t max_iters, std::uint64_t seed) {
  if (dims == 0 || points.size() % dims != 0) throw InvalidInput("kmeans: bad point layout");
  const std::size_t n = points.size() / dims;
  if (k == 0 || k > n) throw InvalidInput("kmeans needs 1 <= k <= number of points");
  if (restarts == 0 || max_iters == 0) throw InvalidInput("kmeans needs restarts and iterations");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    SplitMix64 rng(derive_seed(seed, r));
    KMeansResult res = lloyd(points, n, dims, k, max_iters, rng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

SpectralResult spectral_cocluster(const SparseBinaryMatrix& m, const SpectralConfig& cfg) {
  const std::size_t n = m.n_rows();
  const std::size_t p = m.n_cols();
  const std::size_t ell = spectral_dimensions(cfg.k);
  if (cfg.k > n + p) throw InvalidInput("spectral: k exceeds the number of rows and columns");
  if (ell + 1 > std::min(n, p)) {
    throw InvalidInput("spectral: k=" + std::to_string(cfg.k) + " needs " +
                       std::to_string(ell + 1) + " singular vectors but the matrix is " +
                       std::to_string(n) + "x" + std::to_string(p));
  }
  const auto rs = m.row_sums();
  const auto cs = m.col_sums();
  for (std::size_t i = 0; i < n; ++i) {
    if (rs[i] == 0) throw InvalidInput("spectral: row " + std::to_string(i) + " is empty");
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (cs[j] == 0) throw InvalidInput("spectral: column " + std::to_string(j) + " is empty");
  }

  Eigen::VectorXd d1(static_cast<Eigen::Index>(n)), d2(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) d1[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(double(rs[i]));
  for (std::size_t j = 0; j < p; ++j) d2[static_cast<Eigen::Index>(j)] = 1.0 / std::sqrt(double(cs[j]));

  Eigen::MatrixXd mn = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (const auto& [i, j] : m.entries()) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    mn(ii, jj) = d1[ii] * d2[jj];
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(mn, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalFailure("spectral: SVD did not converge");

  SpectralResult out;
  out.first_dimension = 1;
  out.dimensions = ell;
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());

  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  std::vector<double> z((n + p) * ell);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < ell; ++t) {
      z[i * ell + t] = d1[static_cast<Eigen::Index>(i)] *
                       u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t + 1));
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t t = 0; t < ell; ++t) {
      z[(n + j) * ell + t] = d2[static_cast<Eigen::Index>(j)] *
                             v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t + 1));
    }
  }

  const auto km = kmeans(z, ell, cfg.k, cfg.kmeans_restarts, cfg.kmeans_max_iters, cfg.seed);
  out.row_labels.assign(km.labels.begin(), km.labels.begin() + static_cast<std::ptrdiff_t>(n));
  out.col_labels.assign(km.labels.begin() + static_cast<std::ptrdiff_t>(n), km.labels.end());
  return out;
}

}  // namespace tagclust
