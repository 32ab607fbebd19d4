#include "tagclust/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <functional>

#include <json.hpp>

#include "tagclust/dendrogram_io.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/io.hpp"
#include "tagclust/log.hpp"

namespace tagclust {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

template <class F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

template <class T>
std::vector<T> select(const std::vector<T>& v, const std::vector<std::size_t>& keep) {
  std::vector<T> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(v.at(i));
  return out;
}

std::vector<std::string> index_names(const std::vector<std::size_t>& original) {
  std::vector<std::string> out;
  out.reserve(original.size());
  for (std::size_t i : original) out.push_back(std::to_string(i));
  return out;
}

Json axis_json(const AxisEvaluation& a, bool degenerate) {
  Json j;
  j["k_hat"] = a.k_hat;
  j["step_at_k_hat"] = a.step_at_k_hat;
  j["h_rel_at_k_hat"] = a.h_rel_at_k_hat;
  j["mutual_info_at_k_hat"] = a.mutual_info_at_k_hat;
  j["criterion_degenerate"] = degenerate;
  j["max_h_rel"] = a.max_h_rel;
  j["k_at_max_h_rel"] = a.k_at_max_h_rel;
  j["labeled"] = a.labeled;
  if (a.labeled) {
    j["k_true"] = a.k_true;
    j["homogeneity_at_k_hat"] = a.homogeneity_at_k_hat;
    j["completeness_at_k_hat"] = a.completeness_at_k_hat;
    j["v_measure_at_k_hat"] = a.v_at_k_hat;
    j["max_v_measure"] = a.max_v;
    j["k_at_max_v_measure"] = a.k_at_max_v;
  }
  return j;
}

void write_failure(const std::filesystem::path& dir, const StageError& e) {
  if (dir.empty()) return;
  try {
    io::write_text(dir / kFailureMarker, "stage\t" + e.stage() + "\nerror\t" + e.what() + "\n");
  } catch (const std::exception& w) {
    log::error(std::string("could not write failure marker: ") + w.what());
  }
}

}  // namespace

std::string_view to_string(InputSource s) noexcept {
  switch (s) {
    case InputSource::Checkerboard: return "checkerboard";
    case InputSource::DocTags: return "doc-tags";
    case InputSource::MatrixMarket: return "matrix-market";
  }
  return "?";
}

void validate(const RunConfig& cfg) {
  if (cfg.source == InputSource::Checkerboard) {
    validate(cfg.checkerboard);
  } else if (cfg.input.empty()) {
    throw InvalidInput("an input file is required for " + std::string(to_string(cfg.source)));
  }
  if (cfg.source != InputSource::MatrixMarket &&
      (!cfg.row_labels.empty() || !cfg.col_labels.empty())) {
    throw InvalidInput("label files are only accepted with Matrix Market input");
  }
  if (cfg.min_tag_count == 0) throw InvalidInput("min tag count must be >= 1");
  if (!(cfg.sinkhorn.tol > 0.0) || cfg.sinkhorn.max_iters == 0) {
    throw InvalidInput("Sinkhorn tolerance and iteration cap must be positive");
  }
  if (!(cfg.engine.alpha >= 0.0 && cfg.engine.alpha <= 1.0)) {
    throw InvalidInput("KL balance alpha must lie in [0, 1]");
  }
  if (!cfg.engine.trace_metrics) throw InvalidInput("the pipeline needs trace metrics");
  if (cfg.engine.trace_stride == 0) throw InvalidInput("trace stride must be >= 1");
  if (cfg.engine.restricted_r == 0) throw InvalidInput("restricted r must be >= 1");
  if (cfg.cut && *cfg.cut == 0) throw InvalidInput("cut must be >= 1");
}

std::string config_json(const RunConfig& cfg) {
  Json j;
  j["tool"] = "tagclust";
  j["version"] = kVersion;
  j["source"] = std::string(to_string(cfg.source));
  if (cfg.source == InputSource::Checkerboard) {
    const auto& s = cfg.checkerboard;
    j["checkerboard"] = {{"n_x", s.n_x},     {"n_y", s.n_y},   {"k_x", s.k_x},
                         {"k_y", s.k_y},     {"alpha", s.alpha}, {"beta", s.beta},
                         {"seed", s.seed},   {"shuffle", s.shuffle},
                         {"fixed_tile_rate", s.fixed_tile_rate}};
  } else {
    j["input"] = cfg.input.string();
    if (cfg.source == InputSource::DocTags) j["min_tag_count"] = cfg.min_tag_count;
    if (!cfg.row_labels.empty()) j["row_labels"] = cfg.row_labels.string();
    if (!cfg.col_labels.empty()) j["col_labels"] = cfg.col_labels.string();
  }
  j["sinkhorn"] = {{"tol", cfg.sinkhorn.tol}, {"max_iters", cfg.sinkhorn.max_iters}};
  j["engine"] = {{"cost_mode", std::string(to_string(cfg.engine.cost_mode))},
                 {"coupling", std::string(to_string(cfg.engine.coupling))},
                 {"alpha_balance", cfg.engine.alpha},
                 {"trace_stride", cfg.engine.trace_stride},
                 {"restricted_r", cfg.engine.restricted_r}};
  j["cut"] = cfg.cut ? Json(*cfg.cut) : Json(nullptr);
  return j.dump();
}

std::string metrics_json(const RunEvaluation& ev, std::string_view config, std::string_view extra) {
  Json j;
  j["config"] = config.empty() ? Json::object() : Json::parse(config);
  if (!extra.empty()) {
    const Json parsed = Json::parse(extra);
    for (const auto& [key, value] : parsed.items()) j[key] = value;
  }
  j["rows"] = axis_json(ev.rows, ev.stopping.degenerate_rows);
  j["cols"] = axis_json(ev.cols, ev.stopping.degenerate_cols);
  return j.dump(1) + "\n";
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  const auto& dir = cfg.out_dir;
  try {
    run_stage("config", [&] {
      validate(cfg);
      if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        std::filesystem::remove(dir / kFailureMarker);
      }
      return 0;
    });
    const std::string header = config_json(cfg);
    PipelineResult res;

    // Input.
    run_stage("ingest", [&] {
      SparseBinaryMatrix raw;
      std::vector<std::size_t> row_labels, col_labels;
      std::vector<std::string> row_names, col_names;
      switch (cfg.source) {
        case InputSource::Checkerboard: {
          auto data = generate_checkerboard(cfg.checkerboard);
          raw = std::move(data.matrix);
          row_labels = std::move(data.row_labels);
          col_labels = std::move(data.col_labels);
          break;
        }
        case InputSource::DocTags: {
          auto data = io::ingest_doc_tag_pairs(cfg.input, cfg.min_tag_count);
          raw = std::move(data.matrix);
          row_names = std::move(data.documents);
          col_names = std::move(data.tags);
          break;
        }
        case InputSource::MatrixMarket: {
          raw = io::read_binary_matrix_market(cfg.input);
          if (!cfg.row_labels.empty()) row_labels = io::read_labels(cfg.row_labels);
          if (!cfg.col_labels.empty()) col_labels = io::read_labels(cfg.col_labels);
          if ((!row_labels.empty() && row_labels.size() != raw.n_rows()) ||
              (!col_labels.empty() && col_labels.size() != raw.n_cols())) {
            throw InvalidInput("label files do not match the matrix dimensions");
          }
          break;
        }
      }
      auto filtered = drop_empty(raw);
      res.matrix = std::move(filtered.matrix);
      res.row_names = row_names.empty() ? index_names(filtered.kept_rows)
                                        : select(row_names, filtered.kept_rows);
      res.col_names = col_names.empty() ? index_names(filtered.kept_cols)
                                        : select(col_names, filtered.kept_cols);
      if (!row_labels.empty()) res.row_labels = select(row_labels, filtered.kept_rows);
      if (!col_labels.empty()) res.col_labels = select(col_labels, filtered.kept_cols);
      if (!dir.empty()) {
        io::write_matrix_market(dir / "matrix.mtx", res.matrix, header);
        io::write_names(dir / "row_names.tsv", res.row_names, header);
        io::write_names(dir / "col_names.tsv", res.col_names, header);
        if (!res.row_labels.empty()) io::write_labels(dir / "row_labels.tsv", res.row_labels, header);
        if (!res.col_labels.empty()) io::write_labels(dir / "col_labels.tsv", res.col_labels, header);
      }
      return 0;
    });

    run_stage("smooth", [&] {
      res.smoothing = smooth(res.matrix, cfg.sinkhorn);
      if (!dir.empty()) io::write_matrix_market(dir / "smoothed.mtx", res.smoothing.smoothed, header);
      return 0;
    });

    run_stage("agglomerate", [&] {
      res.dendrogram = agglomerate(res.smoothing.smoothed, cfg.engine);
      if (!dir.empty()) {
        io::write_dendrogram(dir / "dendrogram.json", res.dendrogram, header);
        io::write_trace(dir / "trace.csv", res.dendrogram.trace, header);
      }
      return 0;
    });

    run_stage("evaluate", [&] {
      res.evaluation = evaluate_run(res.dendrogram, res.row_labels, res.col_labels,
                                    cfg.engine.restricted_r);
      if (!dir.empty()) {
        Json extra;
        extra["n_rows"] = res.matrix.n_rows();
        extra["n_cols"] = res.matrix.n_cols();
        extra["nnz"] = res.matrix.nnz();
        extra["smoothed_mass"] = res.smoothing.smoothed.sum();
        extra["sinkhorn"] = {
            {"docs",
             {{"iterations", res.smoothing.docs.iterations},
              {"max_residual", res.smoothing.docs.max_residual},
              {"converged", res.smoothing.docs.converged}}},
            {"keys",
             {{"iterations", res.smoothing.keys.iterations},
              {"max_residual", res.smoothing.keys.max_residual},
              {"converged", res.smoothing.keys.converged}}}};
        io::write_text(dir / "metrics.json", metrics_json(res.evaluation, header, extra.dump()));
      }
      return 0;
    });

    if (cfg.cut && !dir.empty()) {
      run_stage("export", [&] {
        const auto row_weights = [&] {
          const auto s = res.matrix.row_sums();
          return std::vector<double>(s.begin(), s.end());
        }();
        const auto col_weights = [&] {
          const auto s = res.matrix.col_sums();
          return std::vector<double>(s.begin(), s.end());
        }();
        for (Axis axis : {Axis::Row, Axis::Col}) {
          const std::size_t k = *cfg.cut;
          if (k > res.dendrogram.n_items(axis)) {
            throw InvalidInput("cut at " + std::to_string(k) + " exceeds the " +
                               std::to_string(res.dendrogram.n_items(axis)) + " " +
                               std::string(to_string(axis)) + " items");
          }
          const Partition p = tagclust::cut(res.dendrogram, axis, k);
          const bool rows = axis == Axis::Row;
          const auto& names = rows ? res.row_names : res.col_names;
          io::write_text(dir / (rows ? "cut_rows.tsv" : "cut_cols.tsv"),
                         io::cut_assignments_tsv(p, names, header));
          io::write_text(dir / (rows ? "clusters_rows.tsv" : "clusters_cols.tsv"),
                         io::cut_summary_tsv(p, names, rows ? row_weights : col_weights, 3, header));
        }
        return 0;
      });
    }
    return res;
  } catch (const StageError& e) {
    write_failure(dir, e);
    throw;
  }
}

}  // namespace tagclust
