#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagclust/cocluster.hpp"
#include "tagclust/evaluation.hpp"
#include "tagclust/smoothing.hpp"
#include "tagclust/synthgen.hpp"
#include "tagclust/types.hpp"

namespace tagclust {

enum class InputSource { Checkerboard, DocTags, MatrixMarket };

std::string_view to_string(InputSource s) noexcept;

// Everything one end-to-end run depends on.
struct RunConfig {
  InputSource source = InputSource::Checkerboard;
  CheckerboardSpec checkerboard;        // source == Checkerboard
  std::filesystem::path input;          // doc-tag TSV or Matrix Market file
  std::filesystem::path row_labels;     // optional label TSVs for Matrix Market input
  std::filesystem::path col_labels;
  std::size_t min_tag_count = 5;        // doc-tag input
  SinkhornOptions sinkhorn;
  EngineConfig engine;
  std::optional<std::size_t> cut;       // flat cut exported at this many clusters
  std::filesystem::path out_dir;        // empty: keep results in memory only
};

// Throws InvalidInput describing the first problem found.
void validate(const RunConfig& cfg);

// Canonical single-line JSON of the config; embedded in every artifact.
std::string config_json(const RunConfig& cfg);

struct PipelineResult {
  SparseBinaryMatrix matrix;  // after dropping empty rows and columns
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<std::size_t> row_labels;  // empty when unknown
  std::vector<std::size_t> col_labels;
  SmoothingResult smoothing;
  Dendrogram dendrogram;
  RunEvaluation evaluation;
};

// ingest or generate -> smooth -> agglomerate -> stopping criterion ->
// metrics. When cfg.out_dir is set, writes into it:
//   matrix.mtx, smoothed.mtx, row_names.tsv, col_names.tsv,
//   row_labels.tsv, col_labels.tsv (when labels are known),
//   dendrogram.json, trace.csv, metrics.json and, with a cut,
//   cut_rows.tsv, cut_cols.tsv, clusters_rows.tsv, clusters_cols.tsv.
// A failing stage throws StageError naming it and leaves a FAILED marker
// file in out_dir.
PipelineResult run_pipeline(const RunConfig& cfg);

// Metrics summary: per axis k-hat with the H*_rel, I, h, c and V of the
// partition it selects, plus max V and max H*_rel over the run. `extra`
// (a JSON object, may be empty) is merged in at top level.
std::string metrics_json(const RunEvaluation& ev, std::string_view config_json,
                         std::string_view extra = {});

inline constexpr const char* kFailureMarker = "FAILED";

}  // namespace tagclust
