#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "reference.hpp"
#include "tagclust/types.hpp"

namespace testutil {

inline oracle::Matrix to_oracle(const tagclust::DenseRealMatrix& m) {
  oracle::Matrix out(m.n_rows(), std::vector<double>(m.n_cols()));
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    for (std::size_t j = 0; j < m.n_cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline oracle::Matrix to_oracle(const tagclust::SparseBinaryMatrix& m) {
  return to_oracle(tagclust::DenseRealMatrix::from_binary(m));
}

inline tagclust::DenseRealMatrix from_oracle(const oracle::Matrix& m) {
  tagclust::DenseRealMatrix out(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) out(i, j) = m[i][j];
  return out;
}

// Random binary matrix with every row and column nonempty.
inline tagclust::SparseBinaryMatrix random_binary(std::mt19937_64& rng, std::size_t n,
                                                  std::size_t m, double density) {
  std::bernoulli_distribution cell(density);
  std::vector<tagclust::SparseBinaryMatrix::Entry> e;
  std::vector<char> row_hit(n, 0), col_hit(m, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (cell(rng)) {
        e.emplace_back(i, j);
        row_hit[i] = col_hit[j] = 1;
      }
  for (std::size_t i = 0; i < n; ++i)
    if (!row_hit[i]) e.emplace_back(i, rng() % m);
  for (std::size_t j = 0; j < m; ++j)
    if (!col_hit[j]) e.emplace_back(rng() % n, j);
  return tagclust::SparseBinaryMatrix::from_entries_dedup(n, m, std::move(e));
}

// Random nonnegative matrix; `integers` draws from {0..3} (ties are likely),
// otherwise from U[0,1) with some exact zeros. Rows and columns keep mass.
inline tagclust::DenseRealMatrix random_mass(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                             bool integers) {
  tagclust::DenseRealMatrix out(n, m);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (integers) {
        out(i, j) = static_cast<double>(rng() % 4);
      } else {
        const double x = u(rng);
        out(i, j) = x < 0.2 ? 0.0 : x;
      }
    }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < m; ++j) s += out(i, j);
    if (s == 0.0) out(i, rng() % m) = 1.0;
  }
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += out(i, j);
    if (s == 0.0) out(rng() % n, j) = 1.0;
  }
  return out;
}

}  // namespace testutil
