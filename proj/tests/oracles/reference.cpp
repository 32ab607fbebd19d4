#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oracle {

Matrix zeros(std::size_t rows, std::size_t cols) {
  return Matrix(rows, std::vector<double>(cols, 0.0));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix out = zeros(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) out[i][j] += a[i][l] * b[l][j];
  return out;
}

Matrix transpose(const Matrix& a) {
  if (a.empty()) return {};
  Matrix out = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

double total(const Matrix& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double v : row) s += v;
  return s;
}

Matrix document_similarity(const Matrix& m) {
  const std::size_t n = m.size(), f = m[0].size();
  std::vector<double> c(f, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < f; ++k) c[k] += m[i][k];
  Matrix s = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double num = 0.0, di = 0.0, dj = 0.0;
      for (std::size_t k = 0; k < f; ++k) {
        num += m[i][k] * m[j][k] / c[k];
        di += m[i][k] / c[k];
        dj += m[j][k] / c[k];
      }
      s[i][j] = num / std::sqrt(di * dj);
    }
  }
  return s;
}

Matrix keyword_similarity(const Matrix& m) {
  const Matrix t = transpose(m);
  // Rows of the transpose are keywords; their features are documents and
  // the per-document weight is 1/r_k, which is the column sum of t.
  return document_similarity(t);
}

Balanced sinkhorn(const Matrix& s, double tol, std::size_t max_iters) {
  const std::size_t n = s.size();
  Balanced out;
  out.r.assign(n, 1.0);
  out.c.assign(n, 1.0);
  auto build = [&] {
    Matrix t = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t[i][j] = out.r[i] * s[i][j] * out.c[j];
    return t;
  };
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += s[i][j] * out.r[j];
      out.c[i] = 1.0 / v;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += s[i][j] * out.c[i];
      out.r[j] = 1.0 / v;
    }
    // T = D(r) S D(c) with scalings applied column-first; for symmetric S the roles
    // of r and c are interchangeable.
    const Matrix t = build();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += t[i][j];
        col += t[j][i];
      }
      worst = std::max({worst, std::abs(row - 1.0), std::abs(col - 1.0)});
    }
    if (worst <= tol) break;
  }
  out.t = build();
  return out;
}

Matrix smooth_quadruple_sum(const Matrix& m, const Matrix& t_docs, const Matrix& t_keys) {
  const std::size_t n = m.size(), f = m[0].size();
  Matrix out = zeros(n, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < f; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < f; ++l) out[i][j] += t_docs[i][k] * t_keys[l][j] * m[k][l];
  return out;
}

double kl(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("kl: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) s += a[i] * std::log2(a[i] / std::max(b[i], kFloor));
  }
  return std::max(s, 0.0);
}

double kl_j(const std::vector<double>& a, const std::vector<double>& b, double alpha) {
  return (1.0 - alpha) * kl(a, b) + alpha * kl(b, a);
}

std::optional<double> merge_cost(double pi, double pj, std::size_t k) {
  if (k < 3) return std::nullopt;
  auto f = [](double p) { return p > 0.0 ? p * std::log2(p) : 0.0; };
  const double delta = (f(pi) + f(pj)) / std::log2(static_cast<double>(k)) -
                       f(pi + pj) / std::log2(static_cast<double>(k - 1));
  return std::max(-delta, kFloor);
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double relative_entropy_of_sizes(const std::vector<std::size_t>& sizes) {
  return restricted_entropy_of_sizes(sizes, 0);
}

double restricted_entropy_of_sizes(const std::vector<std::size_t>& sizes, std::size_t r) {
  double n = 0.0;
  for (auto s : sizes) n += static_cast<double>(s);
  double h = 0.0;
  for (auto s : sizes) {
    if (s > r) {
      const double p = static_cast<double>(s) / n;
      h -= p * std::log2(p);
    }
  }
  return h / std::log2(static_cast<double>(sizes.size()));
}

double mutual_information(const Matrix& joint) {
  const double t = total(joint);
  const std::size_t n = joint.size(), m = joint[0].size();
  std::vector<double> px(n, 0.0), py(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      px[i] += joint[i][j] / t;
      py[j] += joint[i][j] / t;
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double p = joint[i][j] / t;
      if (p > 0.0) mi += p * std::log2(p / (px[i] * py[j]));
    }
  return mi;
}

VScores v_measure(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& pred) {
  const double n = static_cast<double>(truth.size());
  std::map<std::size_t, double> nl, nk;
  std::map<std::pair<std::size_t, std::size_t>, double> nlk;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    nl[truth[i]] += 1;
    nk[pred[i]] += 1;
    nlk[{truth[i], pred[i]}] += 1;
  }
  double hl = 0.0, hk = 0.0, hl_k = 0.0, hk_l = 0.0;
  for (const auto& [l, c] : nl) hl -= c / n * std::log2(c / n);
  for (const auto& [k, c] : nk) hk -= c / n * std::log2(c / n);
  for (const auto& [lk, c] : nlk) {
    hl_k -= c / n * std::log2(c / nk[lk.second]);
    hk_l -= c / n * std::log2(c / nl[lk.first]);
  }
  VScores s;
  s.h = hl == 0.0 ? 1.0 : 1.0 - hl_k / hl;
  s.c = hk == 0.0 ? 1.0 : 1.0 - hk_l / hk;
  s.v = (s.h + s.c) == 0.0 ? 0.0 : 2.0 * s.h * s.c / (s.h + s.c);
  return s;
}

}  // namespace oracle
