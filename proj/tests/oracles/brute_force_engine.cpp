#include "brute_force_engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace oracle {

BruteForceEngine::BruteForceEngine(Matrix m_star, Cost cost, Couple couple, double alpha)
    : m_(std::move(m_star)), cost_(cost), couple_(couple), alpha_(alpha) {
  rows_.n = m_.size();
  cols_.n = m_[0].size();
  for (std::size_t i = 0; i < rows_.n; ++i) rows_.members.push_back({i});
  for (std::size_t j = 0; j < cols_.n; ++j) cols_.members.push_back({j});
}

std::vector<std::size_t> BruteForceEngine::live(bool row) const {
  std::vector<std::size_t> out;
  const auto& ax = axis(row);
  for (std::size_t id = 0; id < ax.members.size(); ++id)
    if (!ax.members[id].empty()) out.push_back(id);
  return out;
}

std::size_t BruteForceEngine::size_of(bool row, std::size_t id) const {
  return axis(row).members.at(id).size();
}

bool BruteForceEngine::done() const { return live(true).size() <= 1 && live(false).size() <= 1; }

std::vector<double> BruteForceEngine::distribution(bool row, std::size_t id) const {
  const auto& items = axis(row).members.at(id);
  std::vector<std::vector<std::size_t>> features;
  if (couple_ == Couple::Independent) {
    for (std::size_t f = 0; f < axis(!row).n; ++f) features.push_back({f});
  } else {
    for (std::size_t f : live(!row)) features.push_back(axis(!row).members[f]);
  }
  std::vector<double> d;
  double sum = 0.0;
  for (const auto& feat : features) {
    double v = 0.0;
    for (std::size_t i : items)
      for (std::size_t f : feat) v += row ? m_[i][f] : m_[f][i];
    d.push_back(v);
    sum += v;
  }
  for (double& v : d) v /= sum;
  return d;
}

double BruteForceEngine::directed_kl(bool row, std::size_t a, std::size_t b) const {
  return kl(distribution(row, a), distribution(row, b));
}

Matrix BruteForceEngine::aggregate() const {
  const auto r = live(true), c = live(false);
  Matrix g = zeros(r.size(), c.size());
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b)
      for (std::size_t i : rows_.members[r[a]])
        for (std::size_t j : cols_.members[c[b]]) g[a][b] += m_[i][j];
  return g;
}

double BruteForceEngine::mutual_information() const { return oracle::mutual_information(aggregate()); }

BruteMerge BruteForceEngine::step() {
  if (done()) throw std::logic_error("brute force engine is done");
  std::vector<BruteMerge> all;
  for (bool row : {true, false}) {
    const auto ids = live(row);
    const std::size_t k = ids.size();
    if (k < 2) continue;
    std::vector<std::vector<double>> dist;
    for (std::size_t id : ids) dist.push_back(distribution(row, id));
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = x + 1; y < k; ++y) {
        BruteMerge c;
        c.row = row;
        c.left = ids[x];
        c.right = ids[y];
        c.kl = kl_j(dist[x], dist[y], alpha_);
        if (c.kl < 1e-12) c.kl = 0.0;
        if (cost_ == Cost::KlOnly) {
          c.merge = 1.0;
        } else {
          const double n = static_cast<double>(axis(row).n);
          const auto mc = merge_cost(static_cast<double>(size_of(row, ids[x])) / n,
                                     static_cast<double>(size_of(row, ids[y])) / n, k);
          c.merge = mc ? *mc : 1.0;
        }
        c.cost = c.kl * c.merge;
        all.push_back(c);
      }
    }
  }
  double best = all.front().cost;
  for (const auto& c : all) best = std::min(best, c.cost);
  const double threshold = best + 1e-10 * best;
  const BruteMerge* pick = nullptr;
  for (const auto& c : all) {
    if (c.cost > threshold) continue;
    if (!pick || std::make_tuple(!c.row, c.left, c.right) <
                     std::make_tuple(!pick->row, pick->left, pick->right)) {
      pick = &c;
    }
  }
  BruteMerge out = *pick;
  auto& ax = axis(out.row);
  out.merged = ax.members.size();
  std::vector<std::size_t> joined = ax.members[out.left];
  joined.insert(joined.end(), ax.members[out.right].begin(), ax.members[out.right].end());
  std::sort(joined.begin(), joined.end());
  ax.members[out.left].clear();
  ax.members[out.right].clear();
  ax.members.push_back(std::move(joined));
  return out;
}

std::vector<BruteMerge> brute_force_agglomerate(const Matrix& m_star, Cost cost, Couple couple,
                                                double alpha) {
  BruteForceEngine e(m_star, cost, couple, alpha);
  std::vector<BruteMerge> out;
  while (!e.done()) out.push_back(e.step());
  return out;
}

}  // namespace oracle
