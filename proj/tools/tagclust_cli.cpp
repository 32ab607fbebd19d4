// tagclust: command-line front end for the co-clustering pipeline.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tagclust/cocluster.hpp"
#include "tagclust/dendrogram_io.hpp"
#include "tagclust/errors.hpp"
#include "tagclust/evaluation.hpp"
#include "tagclust/io.hpp"
#include "tagclust/log.hpp"
#include "tagclust/metrics.hpp"
#include "tagclust/pipeline.hpp"
#include "tagclust/smoothing.hpp"
#include "tagclust/spectral.hpp"
#include "tagclust/synthgen.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace tagclust;

namespace {

constexpr const char* kVersion = "0.1.0";

Json header_base(const char* subcommand) {
  Json j;
  j["tool"] = "tagclust";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  return j;
}

std::string abs_str(const fs::path& p) { return p.empty() ? std::string() : p.string(); }

// Options shared by `generate` and `pipeline`.
struct GenerateOptions {
  CheckerboardSpec spec;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app, bool seed_required) {
    app->add_option("--n-x", spec.n_x, "Rows (documents)")->capture_default_str();
    app->add_option("--n-y", spec.n_y, "Columns (keywords)")->capture_default_str();
    app->add_option("--k-x", spec.k_x, "Row blocks")->capture_default_str();
    app->add_option("--k-y", spec.k_y, "Column blocks")->capture_default_str();
    app->add_option("--alpha", spec.alpha, "Probability that a tile is filled")
        ->capture_default_str();
    app->add_option("--beta", spec.beta, "Upper bound of the per-tile fill rate")
        ->capture_default_str();
    app->add_flag("--shuffle", spec.shuffle, "Permute rows and columns after filling");
    auto* s = app->add_option("--seed", seed, "Random seed");
    if (seed_required) s->required();
  }
};

struct EngineOptions {
  std::string cost_mode = "composite";
  std::string coupling = "cocluster";
  EngineConfig cfg;

  void add(CLI::App* app) {
    app->add_option("--cost-mode", cost_mode, "composite | kl-only")->capture_default_str();
    app->add_option("--coupling", coupling, "cocluster | independent")->capture_default_str();
    app->add_option("--alpha-balance", cfg.alpha, "Weight of KL(B||A) in the symmetrized KL")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--restricted-r", cfg.restricted_r,
                    "Clusters of size <= r are ignored by the restricted entropy")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--trace-stride", cfg.trace_stride, "Record a trace entry every n merges")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  EngineConfig resolve() const {
    EngineConfig out = cfg;
    const auto m = parse_cost_mode(cost_mode);
    if (!m) throw InvalidInput("unknown cost mode: " + cost_mode);
    const auto c = parse_coupling(coupling);
    if (!c) throw InvalidInput("unknown coupling: " + coupling);
    out.cost_mode = *m;
    out.coupling = *c;
    return out;
  }

  Json json() const {
    const EngineConfig e = resolve();
    return {{"cost_mode", std::string(to_string(e.cost_mode))},
            {"coupling", std::string(to_string(e.coupling))},
            {"alpha_balance", e.alpha},
            {"trace_stride", e.trace_stride},
            {"restricted_r", e.restricted_r}};
  }
};

void write_cuts(const fs::path& out, const Dendrogram& d, std::size_t k,
                const std::vector<std::string>& row_names,
                const std::vector<std::string>& col_names, const std::vector<double>& row_w,
                const std::vector<double>& col_w, const std::string& header) {
  for (Axis axis : {Axis::Row, Axis::Col}) {
    const bool rows = axis == Axis::Row;
    const Partition p = cut(d, axis, k);
    const auto& names = rows ? row_names : col_names;
    io::write_text(out / (rows ? "cut_rows.tsv" : "cut_cols.tsv"),
                   io::cut_assignments_tsv(p, names, header));
    io::write_text(out / (rows ? "clusters_rows.tsv" : "clusters_cols.tsv"),
                   io::cut_summary_tsv(p, names, rows ? row_w : col_w, 3, header));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tagclust: hierarchical co-clustering of documents and tags"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Write a synthetic checkerboard dataset");
  GenerateOptions gen_opts;
  gen_opts.add(gen, true);
  fs::path gen_out;
  gen->add_option("--out", gen_out, "Output directory")->required();

  // smooth -----------------------------------------------------------------
  auto* sm = app.add_subcommand("smooth", "Smooth a binary matrix with bistochastic transitions");
  fs::path sm_input, sm_doc_tags, sm_out;
  std::size_t sm_min_tag = 5;
  SinkhornOptions sm_sinkhorn;
  auto* sm_in_opt = sm->add_option("--input", sm_input, "Binary Matrix Market file");
  auto* sm_dt_opt = sm->add_option("--doc-tags", sm_doc_tags, "document<TAB>tag pairs");
  sm_in_opt->excludes(sm_dt_opt);
  sm->add_option("--min-tag-count", sm_min_tag, "Drop tags on fewer documents")
      ->capture_default_str();
  sm->add_option("--sinkhorn-tol", sm_sinkhorn.tol)->capture_default_str();
  sm->add_option("--sinkhorn-max-iters", sm_sinkhorn.max_iters)->capture_default_str();
  fs::path sm_row_labels, sm_col_labels;
  sm->add_option("--row-labels", sm_row_labels, "Row labels of --input, filtered alongside")
      ->excludes(sm_dt_opt);
  sm->add_option("--col-labels", sm_col_labels, "Column labels of --input, filtered alongside")
      ->excludes(sm_dt_opt);
  sm->add_option("--out", sm_out, "Output directory")->required();

  // cocluster --------------------------------------------------------------
  auto* cc = app.add_subcommand("cocluster", "Agglomerate a smoothed matrix");
  fs::path cc_input, cc_matrix, cc_row_names, cc_col_names, cc_out;
  EngineOptions cc_engine;
  std::optional<std::size_t> cc_cut;
  cc->add_option("--input", cc_input, "Smoothed (real) Matrix Market file")->required();
  cc_engine.add(cc);
  cc->add_option("--cut", cc_cut, "Export a flat cut at k clusters per axis")
      ->check(CLI::PositiveNumber);
  cc->add_option("--matrix", cc_matrix, "Binary matrix whose marginals rank cluster members");
  cc->add_option("--row-names", cc_row_names, "index<TAB>name file for rows");
  cc->add_option("--col-names", cc_col_names, "index<TAB>name file for columns");
  cc->add_option("--out", cc_out, "Output directory")->required();

  // spectral ---------------------------------------------------------------
  auto* sp = app.add_subcommand("spectral", "Spectral co-clustering baseline");
  fs::path sp_input, sp_row_labels, sp_col_labels, sp_out;
  SpectralConfig sp_cfg;
  std::optional<std::uint64_t> sp_seed;
  sp->add_option("--input", sp_input, "Binary Matrix Market file")->required();
  sp->add_option("--k", sp_cfg.k, "Number of co-clusters")->required()->check(CLI::Range(2, 1 << 30));
  sp->add_option("--seed", sp_seed, "Random seed for k-means")->required();
  sp->add_option("--restarts", sp_cfg.kmeans_restarts)->capture_default_str();
  sp->add_option("--max-iters", sp_cfg.kmeans_max_iters)->capture_default_str();
  sp->add_option("--row-labels", sp_row_labels, "Ground-truth row labels");
  sp->add_option("--col-labels", sp_col_labels, "Ground-truth column labels");
  sp->add_option("--out", sp_out, "Output directory")->required();

  // evaluate ---------------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "Stopping criterion and V-measure of a dendrogram");
  fs::path ev_dendro, ev_row_labels, ev_col_labels, ev_out;
  std::size_t ev_r = 1;
  ev->add_option("--dendrogram", ev_dendro, "Dendrogram JSON")->required();
  ev->add_option("--row-labels", ev_row_labels, "Ground-truth row labels");
  ev->add_option("--col-labels", ev_col_labels, "Ground-truth column labels");
  ev->add_option("--restricted-r", ev_r)->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_option("--out", ev_out, "Metrics JSON file")->required();

  // pipeline ---------------------------------------------------------------
  auto* pl = app.add_subcommand("pipeline", "Generate or ingest, smooth, agglomerate, evaluate");
  GenerateOptions pl_gen;
  pl_gen.add(pl, false);
  EngineOptions pl_engine;
  pl_engine.add(pl);
  RunConfig pl_cfg;
  fs::path pl_doc_tags, pl_matrix;
  std::optional<std::size_t> pl_cut;
  auto* pl_dt_opt = pl->add_option("--doc-tags", pl_doc_tags, "document<TAB>tag pairs");
  auto* pl_mm_opt = pl->add_option("--input", pl_matrix, "Binary Matrix Market file");
  pl_dt_opt->excludes(pl_mm_opt);
  pl->add_option("--row-labels", pl_cfg.row_labels, "Row labels for --input");
  pl->add_option("--col-labels", pl_cfg.col_labels, "Column labels for --input");
  pl->add_option("--min-tag-count", pl_cfg.min_tag_count)->capture_default_str();
  pl->add_option("--sinkhorn-tol", pl_cfg.sinkhorn.tol)->capture_default_str();
  pl->add_option("--sinkhorn-max-iters", pl_cfg.sinkhorn.max_iters)->capture_default_str();
  pl->add_option("--cut", pl_cut, "Export a flat cut at k clusters per axis")
      ->check(CLI::PositiveNumber);
  pl->add_option("--out", pl_cfg.out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  if (verbose) log::set_level(log::Level::Info);

  try {
    if (gen->parsed()) {
      CheckerboardSpec spec = gen_opts.spec;
      spec.seed = *gen_opts.seed;
      validate(spec);
      Json h = header_base("generate");
      h["checkerboard"] = {{"n_x", spec.n_x}, {"n_y", spec.n_y},     {"k_x", spec.k_x},
                           {"k_y", spec.k_y}, {"alpha", spec.alpha}, {"beta", spec.beta},
                           {"seed", spec.seed}, {"shuffle", spec.shuffle}};
      const std::string header = h.dump();
      const auto data = generate_checkerboard(spec);
      fs::create_directories(gen_out);
      io::write_matrix_market(gen_out / "matrix.mtx", data.matrix, header);
      io::write_labels(gen_out / "row_labels.tsv", data.row_labels, header);
      io::write_labels(gen_out / "col_labels.tsv", data.col_labels, header);
      if (!data.empty_rows.empty() || !data.empty_cols.empty()) {
        log::warn(std::to_string(data.empty_rows.size()) + " empty rows and " +
                  std::to_string(data.empty_cols.size()) + " empty columns generated");
      }
    } else if (sm->parsed()) {
      if (sm_input.empty() == sm_doc_tags.empty()) {
        throw InvalidInput("exactly one of --input or --doc-tags is required");
      }
      Json h = header_base("smooth");
      h["input"] = abs_str(sm_input.empty() ? sm_doc_tags : sm_input);
      if (!sm_doc_tags.empty()) h["min_tag_count"] = sm_min_tag;
      if (!sm_row_labels.empty()) h["row_labels"] = abs_str(sm_row_labels);
      if (!sm_col_labels.empty()) h["col_labels"] = abs_str(sm_col_labels);
      h["sinkhorn"] = {{"tol", sm_sinkhorn.tol}, {"max_iters", sm_sinkhorn.max_iters}};
      const std::string header = h.dump();
      SparseBinaryMatrix raw;
      std::vector<std::string> row_names, col_names;
      if (!sm_doc_tags.empty()) {
        auto d = io::ingest_doc_tag_pairs(sm_doc_tags, sm_min_tag);
        raw = std::move(d.matrix);
        row_names = std::move(d.documents);
        col_names = std::move(d.tags);
      } else {
        raw = io::read_binary_matrix_market(sm_input);
      }
      const auto filtered = drop_empty(raw);
      auto pick = [](const std::vector<std::string>& names, const std::vector<std::size_t>& keep) {
        std::vector<std::string> out;
        for (std::size_t i : keep) out.push_back(names.empty() ? std::to_string(i) : names[i]);
        return out;
      };
      const auto result = smooth(filtered.matrix, sm_sinkhorn);
      fs::create_directories(sm_out);
      io::write_matrix_market(sm_out / "matrix.mtx", filtered.matrix, header);
      io::write_names(sm_out / "row_names.tsv", pick(row_names, filtered.kept_rows), header);
      io::write_names(sm_out / "col_names.tsv", pick(col_names, filtered.kept_cols), header);
      io::write_matrix_market(sm_out / "smoothed.mtx", result.smoothed, header);
      auto filter_labels = [&](const fs::path& in, const std::vector<std::size_t>& keep,
                               std::size_t expected, const char* name) {
        if (in.empty()) return;
        const auto labels = io::read_labels(in);
        if (labels.size() != expected) {
          throw InvalidInput(in.string() + " has " + std::to_string(labels.size()) +
                             " labels, expected " + std::to_string(expected));
        }
        std::vector<std::size_t> kept;
        for (std::size_t i : keep) kept.push_back(labels[i]);
        io::write_labels(sm_out / name, kept, header);
      };
      filter_labels(sm_row_labels, filtered.kept_rows, raw.n_rows(), "row_labels.tsv");
      filter_labels(sm_col_labels, filtered.kept_cols, raw.n_cols(), "col_labels.tsv");
    } else if (cc->parsed()) {
      Json h = header_base("cocluster");
      h["input"] = abs_str(cc_input);
      h["engine"] = cc_engine.json();
      h["cut"] = cc_cut ? Json(*cc_cut) : Json(nullptr);
      const std::string header = h.dump();
      const auto m_star = io::read_real_matrix_market(cc_input);
      const Dendrogram d = agglomerate(m_star, cc_engine.resolve());
      fs::create_directories(cc_out);
      io::write_dendrogram(cc_out / "dendrogram.json", d, header);
      io::write_trace(cc_out / "trace.csv", d.trace, header);
      if (cc_cut) {
        std::vector<double> row_w, col_w;
        if (!cc_matrix.empty()) {
          const auto m = io::read_binary_matrix_market(cc_matrix);
          for (auto v : m.row_sums()) row_w.push_back(static_cast<double>(v));
          for (auto v : m.col_sums()) col_w.push_back(static_cast<double>(v));
        } else {
          row_w = m_star.row_sums();
          col_w = m_star.col_sums();
        }
        const auto rn = cc_row_names.empty() ? std::vector<std::string>{} : io::read_names(cc_row_names);
        const auto cn = cc_col_names.empty() ? std::vector<std::string>{} : io::read_names(cc_col_names);
        write_cuts(cc_out, d, *cc_cut, rn, cn, row_w, col_w, header);
      }
    } else if (sp->parsed()) {
      sp_cfg.seed = *sp_seed;
      Json h = header_base("spectral");
      h["input"] = abs_str(sp_input);
      h["spectral"] = {{"k", sp_cfg.k},
                       {"seed", sp_cfg.seed},
                       {"restarts", sp_cfg.kmeans_restarts},
                       {"max_iters", sp_cfg.kmeans_max_iters}};
      const std::string header = h.dump();
      const auto m = io::read_binary_matrix_market(sp_input);
      const auto res = spectral_cocluster(m, sp_cfg);
      fs::create_directories(sp_out);
      io::write_labels(sp_out / "spectral_rows.tsv", res.row_labels, header);
      io::write_labels(sp_out / "spectral_cols.tsv", res.col_labels, header);
      Json metrics;
      metrics["config"] = h;
      metrics["dimensions"] = res.dimensions;
      metrics["singular_values"] = res.singular_values;
      auto score = [&](const fs::path& labels_path, const std::vector<std::size_t>& pred,
                       const char* key) {
        if (labels_path.empty()) return;
        const auto truth = io::read_labels(labels_path);
        const auto s = v_measure_scores(LabeledPartitionPair(truth, pred));
        metrics[key] = {{"homogeneity", s.homogeneity},
                        {"completeness", s.completeness},
                        {"v_measure", s.v_measure}};
      };
      score(sp_row_labels, res.row_labels, "rows");
      score(sp_col_labels, res.col_labels, "cols");
      io::write_text(sp_out / "spectral_metrics.json", metrics.dump(1) + "\n");
    } else if (ev->parsed()) {
      Json h = header_base("evaluate");
      h["dendrogram"] = abs_str(ev_dendro);
      h["row_labels"] = abs_str(ev_row_labels);
      h["col_labels"] = abs_str(ev_col_labels);
      h["restricted_r"] = ev_r;
      const Dendrogram d = io::read_dendrogram(ev_dendro);
      const auto rl = ev_row_labels.empty() ? std::vector<std::size_t>{} : io::read_labels(ev_row_labels);
      const auto cl = ev_col_labels.empty() ? std::vector<std::size_t>{} : io::read_labels(ev_col_labels);
      const auto result = evaluate_run(d, rl, cl, ev_r);
      if (ev_out.has_parent_path()) fs::create_directories(ev_out.parent_path());
      io::write_text(ev_out, metrics_json(result, h.dump()));
    } else if (pl->parsed()) {
      if (!pl_doc_tags.empty()) {
        pl_cfg.source = InputSource::DocTags;
        pl_cfg.input = pl_doc_tags;
      } else if (!pl_matrix.empty()) {
        pl_cfg.source = InputSource::MatrixMarket;
        pl_cfg.input = pl_matrix;
      } else {
        if (!pl_gen.seed) throw InvalidInput("--seed is required when generating data");
        pl_cfg.source = InputSource::Checkerboard;
        pl_cfg.checkerboard = pl_gen.spec;
        pl_cfg.checkerboard.seed = *pl_gen.seed;
      }
      pl_cfg.engine = pl_engine.resolve();
      pl_cfg.cut = pl_cut;
      run_pipeline(pl_cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "tagclust: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
