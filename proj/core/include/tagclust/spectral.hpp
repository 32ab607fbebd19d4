#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust {

struct SpectralConfig {
  std::size_t k = 2;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_max_iters = 300;
  std::uint64_t seed = 0;
};

// ceil(log2 k): number of singular vectors used, after the leading one.
std::size_t spectral_dimensions(std::size_t k);

struct KMeansResult {
  std::vector<std::size_t> labels;
  std::vector<double> centers;  // k x dims
  double inertia = 0.0;
  std::size_t iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding on row-major points (n x dims).
// Restart r draws from SplitMix64 stream r of `seed`; the lowest-inertia
// restart wins (earliest on ties).
KMeansResult kmeans(std::span<const double> points, std::size_t dims, std::size_t k,
                    std::size_t restarts, std::size_t max_iters, std::uint64_t seed);

struct SpectralResult {
  // Joint k-means labels; rows and columns share cluster ids.
  std::vector<std::size_t> row_labels;
  std::vector<std::size_t> col_labels;
  std::size_t first_dimension = 1;  // index of the first singular vector used
  std::size_t dimensions = 0;
  std::vector<double> singular_values;
};

// Bipartite spectral co-clustering: SVD of D1^-1/2 M D2^-1/2, rows of
// D1^-1/2 U and D2^-1/2 V restricted to singular vectors
// 1..ceil(log2 k) (the leading one is skipped), joint k-means.
// Throws InvalidInput on empty rows/columns or k outside
// [2, rows + cols], NumericalFailure when the SVD fails.
SpectralResult spectral_cocluster(const SparseBinaryMatrix& m, const SpectralConfig& cfg);

}  // namespace tagclust
