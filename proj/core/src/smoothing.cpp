#include "tagclust/smoothing.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "tagclust/errors.hpp"
#include "tagclust/log.hpp"
#include "tagclust/parallel.hpp"

namespace tagclust {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

// Weighted cosine between items; items_of_feature[f] lists the items carrying
// feature f, which counts with weight 1/feature_count[f].
DenseRealMatrix weighted_cosine(std::size_t n_items,
                                const std::vector<std::vector<std::size_t>>& items_of_feature,
                                const std::vector<std::size_t>& feature_count) {
  DenseRealMatrix s(n_items, n_items);
  std::vector<double> norm(n_items, 0.0);
  for (std::size_t f = 0; f < items_of_feature.size(); ++f) {
    const double w = 1.0 / static_cast<double>(feature_count[f]);
    const auto& members = items_of_feature[f];
    for (std::size_t x = 0; x < members.size(); ++x) {
      const std::size_t i = members[x];
      norm[i] += w;
      for (std::size_t y = x + 1; y < members.size(); ++y) s(i, members[y]) += w;
    }
  }
  for (std::size_t i = 0; i < n_items; ++i) {
    s(i, i) = norm[i] > 0.0 ? 1.0 : 0.0;
    for (std::size_t j = i + 1; j < n_items; ++j) {
      double v = s(i, j);
      if (v > 0.0) v = std::min(1.0, v / std::sqrt(norm[i] * norm[j]));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

double max_abs_deviation_from_one(const std::vector<double>& sums) {
  double worst = 0.0;
  for (double v : sums) worst = std::max(worst, std::abs(v - 1.0));
  return worst;
}

bool is_symmetric(const DenseRealMatrix& s) {
  for (std::size_t i = 0; i < s.n_rows(); ++i) {
    for (std::size_t j = i + 1; j < s.n_cols(); ++j) {
      if (s(i, j) != s(j, i)) return false;
    }
  }
  return true;
}

}  // namespace

DenseRealMatrix document_similarity(const SparseBinaryMatrix& m) {
  const auto c = m.col_sums();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) throw InvalidInput("keyword " + std::to_string(k) + " has no document");
  }
  std::vector<std::vector<std::size_t>> docs_of_keyword(m.n_cols());
  for (const auto& [i, j] : m.entries()) docs_of_keyword[j].push_back(i);
  return weighted_cosine(m.n_rows(), docs_of_keyword, c);
}

DenseRealMatrix keyword_similarity(const SparseBinaryMatrix& m) {
  const auto r = m.row_sums();
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] == 0) throw InvalidInput("document " + std::to_string(k) + " has no keyword");
  }
  std::vector<std::vector<std::size_t>> keywords_of_doc(m.n_rows());
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    const auto row = m.row(i);
    keywords_of_doc[i].assign(row.begin(), row.end());
  }
  return weighted_cosine(m.n_cols(), keywords_of_doc, r);
}

SinkhornResult sinkhorn_knopp(const DenseRealMatrix& s, double tol, std::size_t max_iters) {
  if (s.n_rows() != s.n_cols()) {
    throw InvalidInput("sinkhorn_knopp needs a square matrix, got " + std::to_string(s.n_rows()) +
                       "x" + std::to_string(s.n_cols()));
  }
  if (!(tol > 0.0)) throw InvalidInput("sinkhorn tolerance must be positive");
  const std::size_t n = s.n_rows();
  const ConstMap S(s.values().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  Eigen::VectorXd r = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  Eigen::VectorXd c(static_cast<Eigen::Index>(n));
  Eigen::VectorXd col_mass = S.transpose() * r;  // S^T r

  SinkhornResult out;
  double residual = 0.0;
  std::size_t it = 0;
  while (it < max_iters) {
    ++it;
    for (Eigen::Index j = 0; j < col_mass.size(); ++j) {
      if (!(col_mass[j] > 0.0)) throw NumericalFailure("sinkhorn: column without support");
      c[j] = 1.0 / col_mass[j];
    }
    const Eigen::VectorXd row_mass = S * c;
    for (Eigen::Index i = 0; i < row_mass.size(); ++i) {
      if (!(row_mass[i] > 0.0)) throw NumericalFailure("sinkhorn: row without support");
      r[i] = 1.0 / row_mass[i];
    }
    // Rows now sum to one; the columns are what is left to check.
    col_mass = S.transpose() * r;
    residual = 0.0;
    for (Eigen::Index j = 0; j < col_mass.size(); ++j) {
      residual = std::max(residual, std::abs(c[j] * col_mass[j] - 1.0));
    }
    if (!std::isfinite(residual)) throw NumericalFailure("sinkhorn: non-finite scaling");
    if (residual <= tol) break;
  }

  DenseRealMatrix t(n, n);
  MutMap T(t.values().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  T = r.asDiagonal() * S * c.asDiagonal();
  if (is_symmetric(s)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = 0.5 * (t(i, j) + t(j, i));
        t(i, j) = v;
        t(j, i) = v;
      }
    }
  }

  out.max_residual = std::max(max_abs_deviation_from_one(t.row_sums()),
                              max_abs_deviation_from_one(t.col_sums()));
  out.iterations = it;
  out.converged = out.max_residual <= tol;
  out.row_scaling.assign(r.data(), r.data() + r.size());
  out.col_scaling.assign(c.data(), c.data() + c.size());
  out.transition = std::move(t);
  if (!out.converged) {
    log::warn("sinkhorn did not reach tol " + std::to_string(tol) + " in " +
              std::to_string(max_iters) + " iterations (residual " +
              std::to_string(out.max_residual) + ")");
  }
  return out;
}

DenseRealMatrix smooth_matrix(const SparseBinaryMatrix& m, const DenseRealMatrix& t_docs,
                              const DenseRealMatrix& t_keys) {
  const std::size_t n = m.n_rows();
  const std::size_t k = m.n_cols();
  if (t_docs.n_rows() != n || t_docs.n_cols() != n || t_keys.n_rows() != k ||
      t_keys.n_cols() != k) {
    throw InvalidInput("smooth_matrix: transitions must be " + std::to_string(n) + "x" +
                       std::to_string(n) + " and " + std::to_string(k) + "x" + std::to_string(k));
  }

  // A = M T_keys, accumulated from the sparse rows of M.
  DenseRealMatrix a(n, k);
  parallel_for(0, n, 64, [&](std::size_t i) {
    auto dst = a.row(i);
    for (std::size_t l : m.row(i)) {
      const auto src = t_keys.row(l);
      for (std::size_t j = 0; j < k; ++j) dst[j] += src[j];
    }
  });

  DenseRealMatrix out(n, k);
  const ConstMap Td(t_docs.values().data(), static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(n));
  const ConstMap A(a.values().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  MutMap O(out.values().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  O.noalias() = Td * A;
  for (double& v : out.values()) {
    if (v < kSmoothedZeroClamp) v = 0.0;
  }
  return out;
}

SmoothingResult smooth(const SparseBinaryMatrix& m, const SinkhornOptions& opts) {
  SmoothingResult out;
  out.docs = sinkhorn_knopp(document_similarity(m), opts.tol, opts.max_iters);
  out.keys = sinkhorn_knopp(keyword_similarity(m), opts.tol, opts.max_iters);
  out.smoothed = smooth_matrix(m, out.docs.transition, out.keys.transition);
  return out;
}

}  // namespace tagclust
