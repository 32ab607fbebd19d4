#pragma once

#include <cstddef>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust {

// Entries of the smoothed matrix below this value are set to exactly 0.
inline constexpr double kSmoothedZeroClamp = 1e-15;

struct SinkhornOptions {
  double tol = 1e-8;  // on the worst |row or column sum - 1|
  std::size_t max_iters = 10000;
};

struct SinkhornResult {
  DenseRealMatrix transition;
  std::vector<double> row_scaling;
  std::vector<double> col_scaling;
  std::size_t iterations = 0;
  double max_residual = 0.0;
  bool converged = false;
};

// Cosine similarity between documents where keyword k is weighted by 1/c_k
// (c_k = number of documents carrying k). Symmetric, unit diagonal, values
// in [0, 1]. Throws InvalidInput if a keyword has no document.
DenseRealMatrix document_similarity(const SparseBinaryMatrix& m);

// Same construction on keywords; document k contributes with weight 1/r_k
// (r_k = number of keywords of document k).
DenseRealMatrix keyword_similarity(const SparseBinaryMatrix& m);

// Scales a nonnegative square matrix to a doubly stochastic T = D(r) S D(c)
// by alternating column and row normalizations. A symmetric input yields a
// symmetric T (the result is averaged with its transpose to cancel
// round-off). Not converging within max_iters is reported through
// `converged` and a logged warning, not an exception.
SinkhornResult sinkhorn_knopp(const DenseRealMatrix& s, double tol = 1e-8,
                              std::size_t max_iters = 10000);

// Two-sided Markov smoothing M* = T_docs * M * T_keys. Global mass is
// preserved when both transitions are doubly stochastic.
DenseRealMatrix smooth_matrix(const SparseBinaryMatrix& m, const DenseRealMatrix& t_docs,
                              const DenseRealMatrix& t_keys);

struct SmoothingResult {
  DenseRealMatrix smoothed;
  SinkhornResult docs;
  SinkhornResult keys;
};

// Full chain: similarities, bistochastization of both, smoothing.
SmoothingResult smooth(const SparseBinaryMatrix& m, const SinkhornOptions& opts = {});

}  // namespace tagclust
