#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust {

// SplitMix64 (Steele, Lea & Flood). Fixed so generated data is reproducible
// across platforms and implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t state_;
};

// Seed of an independent stream derived from a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct CheckerboardSpec {
  std::size_t n_x = 1000;
  std::size_t n_y = 1000;
  std::size_t k_x = 15;
  std::size_t k_y = 15;
  double alpha = 0.2;  // probability that a tile is filled
  double beta = 0.2;   // cap of the per-tile fill rate
  std::uint64_t seed = 0;
  bool shuffle = false;  // permute rows and columns after filling
  // Use beta itself as every filled tile's rate instead of drawing it.
  bool fixed_tile_rate = false;
};

// Throws InvalidInput when the spec is inconsistent.
void validate(const CheckerboardSpec& spec);

struct LabeledDataset {
  SparseBinaryMatrix matrix;
  std::vector<std::size_t> row_labels;
  std::vector<std::size_t> col_labels;
  DenseRealMatrix tile_rates;  // k_x x k_y, 0 for tiles left empty
  std::vector<std::size_t> empty_rows;
  std::vector<std::size_t> empty_cols;
};

// Block-structured sparse binary matrix. Rows are cut into k_x contiguous
// blocks of size floor(n_x/k_x) or one more (the larger blocks first), and
// likewise for columns. Tiles are visited in row-major order on the
// selection stream (stream 0): a tile is filled when a uniform draw is below
// alpha, and a filled tile then draws its rate uniformly in [0, beta). Cells
// of tile (a, b) come from stream 1 + a*k_y + b, row-major inside the tile.
// The optional shuffle uses stream 1 + k_x*k_y. Rows or columns left empty
// are listed, not removed.
LabeledDataset generate_checkerboard(const CheckerboardSpec& spec);

// Block label of each of n items split into k near-equal contiguous blocks.
std::vector<std::size_t> block_labels(std::size_t n, std::size_t k);

}  // namespace tagclust
