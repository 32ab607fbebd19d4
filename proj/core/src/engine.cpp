#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tagclust/cocluster.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/log.hpp"
#include "tagclust/metrics.hpp"
#include "tagclust/parallel.hpp"

namespace tagclust {

std::string_view to_string(CostMode m) noexcept {
  return m == CostMode::Composite ? "composite" : "kl-only";
}

std::string_view to_string(Coupling c) noexcept {
  return c == Coupling::Cocluster ? "cocluster" : "independent";
}

std::optional<CostMode> parse_cost_mode(std::string_view s) noexcept {
  if (s == "composite") return CostMode::Composite;
  if (s == "kl-only" || s == "kl_only") return CostMode::KlOnly;
  return std::nullopt;
}

std::optional<Coupling> parse_coupling(std::string_view s) noexcept {
  if (s == "cocluster") return Coupling::Cocluster;
  if (s == "independent") return Coupling::Independent;
  return std::nullopt;
}

namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

double entropy_term(double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; }

// One side of the co-clustering: its clusters (items) described as
// distributions over features.
struct AxisState {
  Axis axis = Axis::Row;
  std::size_t n_items = 0;
  std::size_t n_features = 0;
  std::vector<double> mass;  // n_items x n_features
  DenseRealMatrix prob;      // mass / totals, row-wise
  std::vector<double> logp;  // floored_log2(prob)
  std::vector<double> totals;
  std::vector<char> live;
  std::vector<std::size_t> live_slots;  // ascending
  std::vector<char> feature_live;
  std::vector<ClusterId> slot_id;
  std::vector<std::size_t> slot_size;
  std::vector<std::size_t> slot_of_id;
  ClusterId next_id = 0;
  DirectedKLMatrix kl;
  std::vector<double> plogp_of_size;  // (s/n) log2(s/n), s = 0..n_items
  std::vector<double> costs;          // k x k scratch, upper triangle used
  std::vector<double> row_min;

  std::size_t k() const { return live_slots.size(); }

  std::size_t slot(ClusterId id) const {
    if (id >= slot_of_id.size() || slot_of_id[id] == kNoSlot) {
      throw InvalidInput(std::string(to_string(axis)) + " cluster " + std::to_string(id) +
                         " is not live");
    }
    return slot_of_id[id];
  }

  void init(const DenseRealMatrix& items_by_features, Axis which) {
    axis = which;
    n_items = items_by_features.n_rows();
    n_features = items_by_features.n_cols();
    mass.assign(items_by_features.values().begin(), items_by_features.values().end());
    prob = DenseRealMatrix(n_items, n_features);
    logp.assign(n_items * n_features, 0.0);
    totals.assign(n_items, 0.0);
    live.assign(n_items, 1);
    live_slots.resize(n_items);
    feature_live.assign(n_features, 1);
    slot_id.resize(n_items);
    slot_size.assign(n_items, 1);
    slot_of_id.assign(2 * n_items - 1, kNoSlot);
    for (std::size_t s = 0; s < n_items; ++s) {
      live_slots[s] = s;
      slot_id[s] = s;
      slot_of_id[s] = s;
      double t = 0.0;
      for (std::size_t f = 0; f < n_features; ++f) t += mass[s * n_features + f];
      if (!(t > 0.0)) {
        throw DegenerateCluster(std::string(to_string(axis)) + " " + std::to_string(s) +
                                " of the smoothed matrix has zero mass");
      }
      totals[s] = t;
      refresh_row(s);
    }
    next_id = n_items;
    kl = DirectedKLMatrix(n_items);
    plogp_of_size.assign(n_items + 1, 0.0);
    for (std::size_t s = 1; s <= n_items; ++s) {
      const double p = static_cast<double>(s) / static_cast<double>(n_items);
      plogp_of_size[s] = p * std::log2(p);
    }
    parallel_for(0, n_items, 8, [this](std::size_t u) {
      for (std::size_t v = 0; v < n_items; ++v) {
        if (v != u) kl(u, v) = pair_kl(u, v);
      }
    });
  }

  void refresh_row(std::size_t s) {
    const double t = totals[s];
    double* p = prob.row(s).data();
    double* lp = logp.data() + s * n_features;
    const double* m = mass.data() + s * n_features;
    for (std::size_t f = 0; f < n_features; ++f) {
      p[f] = m[f] / t;
      lp[f] = floored_log2(p[f]);
    }
  }

  double pair_kl(std::size_t u, std::size_t v) const {
    const double* pu = prob.row(u).data();
    const double* lu = logp.data() + u * n_features;
    const double* lv = logp.data() + v * n_features;
    double s = 0.0;
    for (std::size_t f = 0; f < n_features; ++f) s += pu[f] * (lu[f] - lv[f]);
    return s;
  }

  // Merges item slots a and b; returns the slot that survives.
  std::size_t merge_items(std::size_t a, std::size_t b, ClusterId merged) {
    const std::size_t keep = std::min(a, b);
    const std::size_t drop = std::max(a, b);
    double* mk = mass.data() + keep * n_features;
    double* md = mass.data() + drop * n_features;
    for (std::size_t f = 0; f < n_features; ++f) {
      mk[f] += md[f];
      md[f] = 0.0;
    }
    totals[keep] += totals[drop];
    totals[drop] = 0.0;
    refresh_row(keep);
    live[drop] = 0;
    live_slots.erase(std::find(live_slots.begin(), live_slots.end(), drop));
    slot_of_id[slot_id[keep]] = kNoSlot;
    slot_of_id[slot_id[drop]] = kNoSlot;
    slot_of_id[merged] = keep;
    slot_id[keep] = merged;
    slot_size[keep] += slot_size[drop];
    slot_size[drop] = 0;
    ++next_id;
    // The surviving cluster's divergences are recomputed directly.
    parallel_for(0, live_slots.size(), 64, [this, keep](std::size_t x) {
      const std::size_t v = live_slots[x];
      if (v == keep) return;
      kl(keep, v) = pair_kl(keep, v);
      kl(v, keep) = pair_kl(v, keep);
    });
    return keep;
  }

  // Features a and b (slots of the opposite axis) were merged into `keep`.
  void merge_features(std::size_t a, std::size_t b) {
    const std::size_t keep = std::min(a, b);
    const std::size_t drop = std::max(a, b);
    incremental_kl_update(kl, prob, live, keep, drop);
    for (std::size_t u : live_slots) {
      double* m = mass.data() + u * n_features;
      m[keep] += m[drop];
      m[drop] = 0.0;
      const double pk = m[keep] / totals[u];
      prob(u, keep) = pk;
      prob(u, drop) = 0.0;
      logp[u * n_features + keep] = floored_log2(pk);
      logp[u * n_features + drop] = floored_log2(0.0);
    }
    feature_live[drop] = 0;
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    out.reserve(live_slots.size());
    for (std::size_t s : live_slots) out.push_back(slot_size[s]);
    return out;
  }
};

struct PairCost {
  double kl = 0.0;
  double merge = 1.0;
  double composite = 0.0;
  bool floored = false;
};

}  // namespace

struct CoclusterEngine::Impl {
  EngineConfig cfg;
  AxisState rows;
  AxisState cols;
  AggregatedMassMatrix g;
  Dendrogram dendrogram;
  std::size_t steps = 0;
  std::size_t floor_hits = 0;
  double h_x = 0.0;
  double h_y = 0.0;
  double h_xy = 0.0;

  AxisState& state(Axis a) { return a == Axis::Row ? rows : cols; }
  const AxisState& state(Axis a) const { return a == Axis::Row ? rows : cols; }

  struct SizeLogs {
    double log_k = 0.0;
    double log_k1 = 0.0;
  };

  static SizeLogs size_logs(std::size_t k) {
    if (k < 3) return {};
    return {std::log2(static_cast<double>(k)), std::log2(static_cast<double>(k - 1))};
  }

  PairCost pair_cost(const AxisState& ax, std::size_t u, std::size_t v, SizeLogs logs) const {
    // Orientation: A is the cluster with the smaller id.
    if (ax.slot_id[u] > ax.slot_id[v]) std::swap(u, v);
    PairCost pc;
    double klj = (1.0 - cfg.alpha) * ax.kl(u, v) + cfg.alpha * ax.kl(v, u);
    if (klj < kKlZeroSnap) klj = 0.0;
    pc.kl = klj;
    const std::size_t k = ax.k();
    if (cfg.cost_mode == CostMode::Composite && k >= 3) {
      const auto& f = ax.plogp_of_size;
      const std::size_t su = ax.slot_size[u];
      const std::size_t sv = ax.slot_size[v];
      const double delta = (f[su] + f[sv]) / logs.log_k - f[su + sv] / logs.log_k1;
      const double m = -delta;
      pc.floored = !(m > kMergeFloor);
      pc.merge = pc.floored ? kMergeFloor : m;
    }
    pc.composite = composite_cost(pc.kl, pc.merge);
    return pc;
  }

  // Fills the cost scratch of an axis and returns its minimum.
  double evaluate(AxisState& ax) {
    const std::size_t k = ax.k();
    if (k < 2) return std::numeric_limits<double>::infinity();
    ax.costs.resize(k * k);
    ax.row_min.assign(k, std::numeric_limits<double>::infinity());
    const SizeLogs logs = size_logs(k);
    parallel_for(0, k - 1, 16, [&](std::size_t x) {
      const std::size_t u = ax.live_slots[x];
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t y = x + 1; y < k; ++y) {
        const double c = pair_cost(ax, u, ax.live_slots[y], logs).composite;
        ax.costs[x * k + y] = c;
        best = std::min(best, c);
      }
      ax.row_min[x] = best;
    });
    return *std::min_element(ax.row_min.begin(), ax.row_min.end());
  }

  // Among pairs with cost <= threshold, the one with the smallest
  // (min id, max id). Returns false when there is none.
  bool pick(const AxisState& ax, double threshold, std::size_t& su, std::size_t& sv) const {
    const std::size_t k = ax.k();
    if (k < 2) return false;
    bool found = false;
    std::pair<ClusterId, ClusterId> best_key{};
    for (std::size_t x = 0; x + 1 < k; ++x) {
      if (ax.row_min[x] > threshold) continue;
      for (std::size_t y = x + 1; y < k; ++y) {
        if (ax.costs[x * k + y] > threshold) continue;
        const ClusterId a = ax.slot_id[ax.live_slots[x]];
        const ClusterId b = ax.slot_id[ax.live_slots[y]];
        const std::pair<ClusterId, ClusterId> key{std::min(a, b), std::max(a, b)};
        if (!found || key < best_key) {
          found = true;
          best_key = key;
          su = ax.live_slots[x];
          sv = ax.live_slots[y];
        }
      }
    }
    return found;
  }

  void init_entropies() {
    const double total = g.total_mass();
    h_x = h_y = h_xy = 0.0;
    const auto rid = g.row_ids();
    const auto cid = g.col_ids();
    for (ClusterId r : rid) h_x += entropy_term(g.row_total(r) / total);
    for (ClusterId c : cid) h_y += entropy_term(g.col_total(c) / total);
    for (ClusterId r : rid) {
      for (double v : g.row_masses(r)) h_xy += entropy_term(v / total);
    }
  }

  void update_entropies(Axis axis, ClusterId a, ClusterId b) {
    const double total = g.total_mass();
    const bool is_row = axis == Axis::Row;
    const auto ma = is_row ? g.row_masses(a) : g.col_masses(a);
    const auto mb = is_row ? g.row_masses(b) : g.col_masses(b);
    for (std::size_t c = 0; c < ma.size(); ++c) {
      const double qa = ma[c] / total;
      const double qb = mb[c] / total;
      h_xy += entropy_term(qa + qb) - entropy_term(qa) - entropy_term(qb);
    }
    const double ta = (is_row ? g.row_total(a) : g.col_total(a)) / total;
    const double tb = (is_row ? g.row_total(b) : g.col_total(b)) / total;
    double& h = is_row ? h_x : h_y;
    h += entropy_term(ta + tb) - entropy_term(ta) - entropy_term(tb);
  }

  double mi() const {
    const double v = h_x + h_y - h_xy;
    return v > 0.0 ? v : 0.0;
  }

  bool done() const { return rows.k() <= 1 && cols.k() <= 1; }

  void record_trace() {
    StepTrace t;
    t.step = steps;
    t.k_rows = rows.k();
    t.k_cols = cols.k();
    const auto rs = rows.sizes();
    const auto cs = cols.sizes();
    t.h_rel_rows = rs.size() >= 2 ? restricted_partition_entropy(rs, cfg.restricted_r) : 0.0;
    t.h_rel_cols = cs.size() >= 2 ? restricted_partition_entropy(cs, cfg.restricted_r) : 0.0;
    t.mutual_info = mi();
    t.criterion_rows = t.h_rel_rows * t.mutual_info;
    t.criterion_cols = t.h_rel_cols * t.mutual_info;
    dendrogram.trace.push_back(t);
  }

  const MergeRecord& step() {
    if (done()) throw InvalidInput("agglomeration already complete");
    const double row_best = evaluate(rows);
    const double col_best = evaluate(cols);
    const double best = std::min(row_best, col_best);
    const double threshold = best + kTieRelTol * best;

    Axis axis = Axis::Row;
    std::size_t su = 0, sv = 0;
    if (!pick(rows, threshold, su, sv)) {
      axis = Axis::Col;
      if (!pick(cols, threshold, su, sv)) throw NumericalFailure("no merge candidate found");
    }
    AxisState& ax = state(axis);
    AxisState& other = state(opposite(axis));
    const PairCost pc = pair_cost(ax, su, sv, size_logs(ax.k()));
    if (pc.floored) {
      ++floor_hits;
      log::debug("merge cost floored at step " + std::to_string(steps + 1));
    }

    const ClusterId id_u = ax.slot_id[su];
    const ClusterId id_v = ax.slot_id[sv];
    const ClusterId merged = ax.next_id;

    update_entropies(axis, id_u, id_v);
    if (axis == Axis::Row) {
      g.merge_rows(id_u, id_v, merged);
    } else {
      g.merge_cols(id_u, id_v, merged);
    }

    const std::size_t new_size = ax.slot_size[su] + ax.slot_size[sv];
    ax.merge_items(su, sv, merged);
    if (cfg.coupling == Coupling::Cocluster) other.merge_features(su, sv);

    ++steps;
    MergeRecord rec;
    rec.step = steps;
    rec.axis = axis;
    rec.left = std::min(id_u, id_v);
    rec.right = std::max(id_u, id_v);
    rec.merged = merged;
    rec.kl_cost = pc.kl;
    rec.merge_cost = pc.merge;
    rec.composite_cost = pc.composite;
    rec.new_size = new_size;
    auto& list = axis == Axis::Row ? dendrogram.row_merges : dendrogram.col_merges;
    list.push_back(rec);

    if (cfg.trace_metrics && (steps % cfg.trace_stride == 0 || done())) record_trace();
    if (done() && floor_hits > 0) {
      log::info("size cost floored on " + std::to_string(floor_hits) + " selected merges");
    }
    return list.back();
  }
};

CoclusterEngine::CoclusterEngine(const DenseRealMatrix& m_star, EngineConfig cfg)
    : impl_(std::make_unique<Impl>()) {
  if (m_star.n_rows() < 2 || m_star.n_cols() < 2) {
    throw InvalidInput("agglomeration needs at least a 2x2 matrix, got " +
                       std::to_string(m_star.n_rows()) + "x" + std::to_string(m_star.n_cols()));
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
  if (cfg.trace_stride == 0) throw InvalidInput("trace stride must be >= 1");
  for (double v : m_star.values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("smoothed matrix must be finite and nonnegative");
    }
  }
  if (!(m_star.sum() > 0.0)) throw InvalidInput("smoothed matrix has zero total mass");

  Impl& s = *impl_;
  s.cfg = cfg;
  s.rows.init(m_star, Axis::Row);
  s.cols.init(m_star.transposed(), Axis::Col);
  s.g = build_aggregate(m_star, Partition::singletons(m_star.n_rows()),
                        Partition::singletons(m_star.n_cols()));
  s.init_entropies();
  s.dendrogram.n_rows = m_star.n_rows();
  s.dendrogram.n_cols = m_star.n_cols();
  s.dendrogram.restricted_r = cfg.restricted_r;
}

CoclusterEngine::~CoclusterEngine() = default;
CoclusterEngine::CoclusterEngine(CoclusterEngine&&) noexcept = default;
CoclusterEngine& CoclusterEngine::operator=(CoclusterEngine&&) noexcept = default;

bool CoclusterEngine::done() const noexcept { return impl_->done(); }
std::size_t CoclusterEngine::steps_taken() const noexcept { return impl_->steps; }
const MergeRecord& CoclusterEngine::step() { return impl_->step(); }

const Dendrogram& CoclusterEngine::run() {
  while (!impl_->done()) impl_->step();
  return impl_->dendrogram;
}

const Dendrogram& CoclusterEngine::dendrogram() const noexcept { return impl_->dendrogram; }
const EngineConfig& CoclusterEngine::config() const noexcept { return impl_->cfg; }
std::size_t CoclusterEngine::k(Axis axis) const noexcept { return impl_->state(axis).k(); }

std::vector<ClusterId> CoclusterEngine::live_clusters(Axis axis) const {
  const auto& ax = impl_->state(axis);
  std::vector<ClusterId> out;
  out.reserve(ax.k());
  for (std::size_t s : ax.live_slots) out.push_back(ax.slot_id[s]);
  return out;
}

std::size_t CoclusterEngine::cluster_size(Axis axis, ClusterId id) const {
  const auto& ax = impl_->state(axis);
  return ax.slot_size[ax.slot(id)];
}

std::vector<double> CoclusterEngine::distribution(Axis axis, ClusterId id) const {
  const auto& ax = impl_->state(axis);
  const std::size_t s = ax.slot(id);
  std::vector<double> out;
  for (std::size_t f = 0; f < ax.n_features; ++f) {
    if (ax.feature_live[f]) out.push_back(ax.prob(s, f));
  }
  return out;
}

double CoclusterEngine::directed_kl(Axis axis, ClusterId a, ClusterId b) const {
  const auto& ax = impl_->state(axis);
  const std::size_t sa = ax.slot(a);
  const std::size_t sb = ax.slot(b);
  return sa == sb ? 0.0 : ax.kl(sa, sb);
}

const AggregatedMassMatrix& CoclusterEngine::aggregate() const noexcept { return impl_->g; }
double CoclusterEngine::mutual_information() const noexcept { return impl_->mi(); }
std::size_t CoclusterEngine::merge_floor_hits() const noexcept { return impl_->floor_hits; }

Dendrogram agglomerate(const DenseRealMatrix& m_star, const EngineConfig& cfg) {
  CoclusterEngine engine(m_star, cfg);
  return engine.run();
}

}  // namespace tagclust
