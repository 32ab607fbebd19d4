#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tagclust/errors.hpp"
#include "tagclust/io.hpp"
#include "tagclust/pipeline.hpp"

using namespace tagclust;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig checkerboard_config(std::size_t n, std::size_t k, std::uint64_t seed) {
  RunConfig cfg;
  cfg.source = InputSource::Checkerboard;
  cfg.checkerboard.n_x = cfg.checkerboard.n_y = n;
  cfg.checkerboard.k_x = cfg.checkerboard.k_y = k;
  cfg.checkerboard.alpha = cfg.checkerboard.beta = 0.2;
  cfg.checkerboard.seed = seed;
  return cfg;
}

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("tagclust_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("pipeline outputs are byte-identical across runs") {
  auto cfg = checkerboard_config(90, 4, 42);
  cfg.checkerboard.alpha = cfg.checkerboard.beta = 0.5;
  cfg.cut = 4;
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  cfg.out_dir = a;
  run_pipeline(cfg);
  cfg.out_dir = b;
  run_pipeline(cfg);

  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    REQUIRE(fs::exists(b / name));
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name.string());
    ++files;
  }
  CHECK(files >= 12);
  for (const char* f : {"matrix.mtx", "smoothed.mtx", "dendrogram.json", "trace.csv",
                        "metrics.json", "row_labels.tsv", "cut_rows.tsv", "clusters_cols.tsv"})
    CHECK_MESSAGE(fs::exists(a / f), f);
  CHECK_FALSE(fs::exists(a / kFailureMarker));

  // Every artifact carries the run configuration.
  const auto header = io::read_header(a / "matrix.mtx");
  CHECK(header.find("\"seed\":42") != std::string::npos);
  CHECK(io::read_header(a / "trace.csv") == header);
  CHECK(io::read_header(a / "cut_rows.tsv") == header);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("different configurations give different headers") {
  auto one = checkerboard_config(60, 3, 1);
  auto two = one;
  two.engine.cost_mode = CostMode::KlOnly;
  auto three = one;
  three.checkerboard.seed = 2;
  CHECK(config_json(one) != config_json(two));
  CHECK(config_json(one) != config_json(three));
  CHECK(config_json(one) == config_json(checkerboard_config(60, 3, 1)));
}

TEST_CASE("stage failures carry the stage name and leave a marker") {
  RunConfig cfg;
  cfg.source = InputSource::MatrixMarket;
  cfg.input = "/nonexistent/input.mtx";
  cfg.out_dir = fresh_dir("fail");
  try {
    run_pipeline(cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "ingest");
  }
  CHECK(fs::exists(cfg.out_dir / kFailureMarker));
  CHECK(slurp(cfg.out_dir / kFailureMarker).find("ingest") != std::string::npos);

  // A later successful run clears the marker.
  auto ok = checkerboard_config(40, 2, 3);
  ok.checkerboard.alpha = ok.checkerboard.beta = 0.8;
  ok.out_dir = cfg.out_dir;
  run_pipeline(ok);
  CHECK_FALSE(fs::exists(cfg.out_dir / kFailureMarker));
  fs::remove_all(cfg.out_dir);

  auto bad = checkerboard_config(10, 20, 1);
  try {
    run_pipeline(bad);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
  }
}

// The two ablations below run at the generator's default scale
// (1000 x 1000, k = 15), sharing one composite co-clustering run.
const PipelineResult& default_scale_reference() {
  static const PipelineResult res = [] {
    RunConfig cfg;
    cfg.checkerboard.seed = 42;
    return run_pipeline(cfg);
  }();
  return res;
}

TEST_CASE("composite cost recovers at least as much as kl-only") {
  RunConfig cfg;
  cfg.checkerboard.seed = 42;
  cfg.engine.cost_mode = CostMode::KlOnly;
  const auto kl_only = run_pipeline(cfg);
  CHECK(default_scale_reference().evaluation.mean_max_v() >= kl_only.evaluation.mean_max_v());
}

TEST_CASE("co-clustering recovers at least as much as independent clustering at large k") {
  RunConfig cfg;
  cfg.checkerboard.seed = 42;
  cfg.engine.coupling = Coupling::Independent;
  const auto independent = run_pipeline(cfg);
  CHECK(default_scale_reference().evaluation.mean_max_v() >= independent.evaluation.mean_max_v());
}

TEST_CASE("in-memory results are consistent") {
  auto cfg = checkerboard_config(80, 3, 9);
  cfg.checkerboard.alpha = cfg.checkerboard.beta = 0.7;
  const auto res = run_pipeline(cfg);
  CHECK(res.dendrogram.complete());
  CHECK(res.dendrogram.n_rows == res.matrix.n_rows());
  CHECK(res.row_labels.size() == res.matrix.n_rows());
  CHECK(res.row_names.size() == res.matrix.n_rows());
  CHECK(res.smoothing.smoothed.n_cols() == res.matrix.n_cols());
  CHECK(res.evaluation.rows.labeled);
  CHECK(res.evaluation.rows.k_true == 3);
}

}  // TEST_SUITE
