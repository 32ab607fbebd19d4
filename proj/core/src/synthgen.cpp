#include "tagclust/synthgen.hpp"

#include <numeric>
#include <string>

#include "tagclust/errors.hpp"

namespace tagclust {

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 g(seed ^ (stream * 0xd1b54a32d192ed03ULL));
  return g.next();
}

void validate(const CheckerboardSpec& s) {
  if (s.n_x == 0 || s.n_y == 0) throw InvalidInput("checkerboard dimensions must be positive");
  if (s.k_x == 0 || s.k_y == 0) throw InvalidInput("checkerboard cluster counts must be positive");
  if (s.k_x > s.n_x || s.k_y > s.n_y) {
    throw InvalidInput("checkerboard needs k_x <= n_x and k_y <= n_y");
  }
  if (!(s.alpha >= 0.0 && s.alpha <= 1.0) || !(s.beta >= 0.0 && s.beta <= 1.0)) {
    throw InvalidInput("checkerboard rates must lie in [0, 1]");
  }
}

std::vector<std::size_t> block_labels(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw InvalidInput("block_labels needs 1 <= k <= n");
  std::vector<std::size_t> labels(n);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t i = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    for (std::size_t t = 0; t < len; ++t) labels[i++] = b;
  }
  return labels;
}

namespace {

// First item of each block plus a final sentinel.
std::vector<std::size_t> block_starts(const std::vector<std::size_t>& labels, std::size_t k) {
  std::vector<std::size_t> starts(k + 1, labels.size());
  for (std::size_t i = labels.size(); i-- > 0;) starts[labels[i]] = i;
  return starts;
}

std::vector<std::size_t> shuffled_order(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace

LabeledDataset generate_checkerboard(const CheckerboardSpec& spec) {
  validate(spec);
  LabeledDataset out;
  out.row_labels = block_labels(spec.n_x, spec.k_x);
  out.col_labels = block_labels(spec.n_y, spec.k_y);
  const auto row_start = block_starts(out.row_labels, spec.k_x);
  const auto col_start = block_starts(out.col_labels, spec.k_y);

  out.tile_rates = DenseRealMatrix(spec.k_x, spec.k_y);
  SplitMix64 selection(derive_seed(spec.seed, 0));
  for (std::size_t a = 0; a < spec.k_x; ++a) {
    for (std::size_t b = 0; b < spec.k_y; ++b) {
      if (selection.uniform() < spec.alpha) {
        out.tile_rates(a, b) = spec.fixed_tile_rate ? spec.beta : spec.beta * selection.uniform();
      }
    }
  }

  std::vector<SparseBinaryMatrix::Entry> entries;
  for (std::size_t a = 0; a < spec.k_x; ++a) {
    for (std::size_t b = 0; b < spec.k_y; ++b) {
      const double rate = out.tile_rates(a, b);
      if (rate <= 0.0) continue;
      SplitMix64 cells(derive_seed(spec.seed, 1 + a * spec.k_y + b));
      for (std::size_t i = row_start[a]; i < row_start[a + 1]; ++i) {
        for (std::size_t j = col_start[b]; j < col_start[b + 1]; ++j) {
          if (cells.uniform() < rate) entries.emplace_back(i, j);
        }
      }
    }
  }

  if (spec.shuffle) {
    SplitMix64 perm(derive_seed(spec.seed, 1 + spec.k_x * spec.k_y));
    // order[new] = old
    const auto row_order = shuffled_order(spec.n_x, perm);
    const auto col_order = shuffled_order(spec.n_y, perm);
    std::vector<std::size_t> row_new(spec.n_x), col_new(spec.n_y);
    for (std::size_t t = 0; t < spec.n_x; ++t) row_new[row_order[t]] = t;
    for (std::size_t t = 0; t < spec.n_y; ++t) col_new[col_order[t]] = t;
    for (auto& [i, j] : entries) {
      i = row_new[i];
      j = col_new[j];
    }
    std::vector<std::size_t> rl(spec.n_x), cl(spec.n_y);
    for (std::size_t t = 0; t < spec.n_x; ++t) rl[t] = out.row_labels[row_order[t]];
    for (std::size_t t = 0; t < spec.n_y; ++t) cl[t] = out.col_labels[col_order[t]];
    out.row_labels = std::move(rl);
    out.col_labels = std::move(cl);
  }

  out.matrix = SparseBinaryMatrix(spec.n_x, spec.n_y, std::move(entries));
  const auto rs = out.matrix.row_sums();
  const auto cs = out.matrix.col_sums();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] == 0) out.empty_rows.push_back(i);
  }
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (cs[j] == 0) out.empty_cols.push_back(j);
  }
  return out;
}

}  // namespace tagclust
