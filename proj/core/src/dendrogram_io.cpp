#include "tagclust/dendrogram_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "tagclust/errors.hpp"
#include "tagclust/io.hpp"

namespace tagclust::io {

namespace {

using Json = nlohmann::ordered_json;

Json parse_config(std::string_view config_json) {
  if (config_json.empty()) return Json::object();
  try {
    Json j = Json::parse(config_json);
    if (!j.is_object()) throw InvalidInput("config header must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("config header is not valid JSON: ") + e.what());
  }
}

std::string one_line_config(std::string_view config_json) {
  return parse_config(config_json).dump();
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json merges_json(const std::vector<MergeRecord>& merges) {
  Json arr = Json::array();
  for (const auto& m : merges) {
    arr.push_back({{"step", m.step},
                   {"left", m.left},
                   {"right", m.right},
                   {"new", m.merged},
                   {"kl_cost", m.kl_cost},
                   {"merge_cost", m.merge_cost},
                   {"composite_cost", m.composite_cost},
                   {"new_size", m.new_size}});
  }
  return arr;
}

std::vector<MergeRecord> merges_from(const Json& arr, Axis axis) {
  std::vector<MergeRecord> out;
  for (const auto& j : arr) {
    MergeRecord m;
    m.axis = axis;
    m.step = j.at("step").get<std::size_t>();
    m.left = j.at("left").get<std::size_t>();
    m.right = j.at("right").get<std::size_t>();
    m.merged = j.at("new").get<std::size_t>();
    m.kl_cost = j.at("kl_cost").get<double>();
    m.merge_cost = j.at("merge_cost").get<double>();
    m.composite_cost = j.at("composite_cost").get<double>();
    m.new_size = j.at("new_size").get<std::size_t>();
    out.push_back(m);
  }
  return out;
}

constexpr const char* kTraceHeader =
    "step,k_rows,k_cols,h_rel_rows,h_rel_cols,mutual_info,criterion_rows,criterion_cols";

}  // namespace

std::string dendrogram_to_json(const Dendrogram& d, std::string_view config_json) {
  Json j;
  j["config"] = parse_config(config_json);
  j["n_rows"] = d.n_rows;
  j["n_cols"] = d.n_cols;
  j["restricted_r"] = d.restricted_r;
  j["dendrograms"] = Json::array({Json{{"axis", "row"}, {"merges", merges_json(d.row_merges)}},
                                  Json{{"axis", "col"}, {"merges", merges_json(d.col_merges)}}});
  Json trace = Json::array();
  for (const auto& t : d.trace) {
    trace.push_back({{"step", t.step},
                     {"k_rows", t.k_rows},
                     {"k_cols", t.k_cols},
                     {"h_rel_rows", t.h_rel_rows},
                     {"h_rel_cols", t.h_rel_cols},
                     {"mutual_info", t.mutual_info},
                     {"criterion_rows", t.criterion_rows},
                     {"criterion_cols", t.criterion_cols}});
  }
  j["trace"] = std::move(trace);
  return j.dump(1) + "\n";
}

Dendrogram dendrogram_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    Dendrogram d;
    d.n_rows = j.at("n_rows").get<std::size_t>();
    d.n_cols = j.at("n_cols").get<std::size_t>();
    d.restricted_r = j.value("restricted_r", std::size_t{1});
    for (const auto& axis_obj : j.at("dendrograms")) {
      const std::string name = axis_obj.at("axis").get<std::string>();
      const Axis axis = parse_axis(name);
      auto merges = merges_from(axis_obj.at("merges"), axis);
      (axis == Axis::Row ? d.row_merges : d.col_merges) = std::move(merges);
    }
    for (const auto& t : j.at("trace")) {
      StepTrace s;
      s.step = t.at("step").get<std::size_t>();
      s.k_rows = t.at("k_rows").get<std::size_t>();
      s.k_cols = t.at("k_cols").get<std::size_t>();
      s.h_rel_rows = t.at("h_rel_rows").get<double>();
      s.h_rel_cols = t.at("h_rel_cols").get<double>();
      s.mutual_info = t.at("mutual_info").get<double>();
      s.criterion_rows = t.at("criterion_rows").get<double>();
      s.criterion_cols = t.at("criterion_cols").get<double>();
      d.trace.push_back(s);
    }
    return d;
  } catch (const Json::exception& e) {
    throw ParseError("dendrogram", 0, e.what());
  }
}

std::string dendrogram_config(std::string_view text) {
  try {
    return Json::parse(text).value("config", Json::object()).dump();
  } catch (const Json::exception& e) {
    throw ParseError("dendrogram", 0, e.what());
  }
}

void write_dendrogram(const std::filesystem::path& path, const Dendrogram& d,
                      std::string_view config_json) {
  write_text(path, dendrogram_to_json(d, config_json));
}

Dendrogram read_dendrogram(const std::filesystem::path& path) {
  return dendrogram_from_json(read_all(path));
}

// ---------------------------------------------------------------------------

std::string trace_to_csv(const std::vector<StepTrace>& trace, std::string_view config_json) {
  std::string out = "# " + one_line_config(config_json) + "\n";
  out += kTraceHeader;
  out += '\n';
  for (const auto& t : trace) {
    out += std::to_string(t.step) + ',' + std::to_string(t.k_rows) + ',' +
           std::to_string(t.k_cols) + ',' + fmt(t.h_rel_rows) + ',' + fmt(t.h_rel_cols) + ',' +
           fmt(t.mutual_info) + ',' + fmt(t.criterion_rows) + ',' + fmt(t.criterion_cols) + '\n';
  }
  return out;
}

std::vector<StepTrace> trace_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<StepTrace> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kTraceHeader) throw ParseError("trace", line_no, "unexpected column header");
      header_seen = true;
      continue;
    }
    StepTrace t;
    char tail = 0;
    const int got = std::sscanf(line.c_str(), "%zu,%zu,%zu,%lf,%lf,%lf,%lf,%lf%c", &t.step,
                                &t.k_rows, &t.k_cols, &t.h_rel_rows, &t.h_rel_cols,
                                &t.mutual_info, &t.criterion_rows, &t.criterion_cols, &tail);
    if (got != 8) throw ParseError("trace", line_no, "expected 8 comma-separated fields");
    out.push_back(t);
  }
  if (!header_seen) throw ParseError("trace", line_no, "missing column header");
  return out;
}

void write_trace(const std::filesystem::path& path, const std::vector<StepTrace>& trace,
                 std::string_view config_json) {
  write_text(path, trace_to_csv(trace, config_json));
}

std::vector<StepTrace> read_trace(const std::filesystem::path& path) {
  return trace_from_csv(read_all(path));
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> dense_labels(const Partition& p) {
  std::vector<std::size_t> out(p.n_items());
  std::unordered_map<ClusterId, std::size_t> index;
  for (std::size_t i = 0; i < p.n_items(); ++i) {
    const auto [it, inserted] = index.try_emplace(p.cluster_of(i), index.size());
    out[i] = it->second;
  }
  return out;
}

std::string cut_assignments_tsv(const Partition& p, const std::vector<std::string>& names,
                                std::string_view config_json) {
  if (!names.empty() && names.size() != p.n_items()) {
    throw InvalidInput("names do not match partition size");
  }
  const auto labels = dense_labels(p);
  std::string out = "# " + one_line_config(config_json) + "\n";
  out += "item\tname\tcluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i) + '\t' + (names.empty() ? std::to_string(i) : names[i]) + '\t' +
           std::to_string(labels[i]) + '\n';
  }
  return out;
}

std::string cut_summary_tsv(const Partition& p, const std::vector<std::string>& names,
                            const std::vector<double>& weights, std::size_t top,
                            std::string_view config_json) {
  if ((!names.empty() && names.size() != p.n_items()) ||
      (!weights.empty() && weights.size() != p.n_items())) {
    throw InvalidInput("names/weights do not match partition size");
  }
  const auto labels = dense_labels(p);
  const std::size_t k = p.n_clusters();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  std::string out = "# " + one_line_config(config_json) + "\n";
  out += "cluster\tsize\ttop_members\n";
  for (std::size_t c = 0; c < k; ++c) {
    auto& mem = members[c];
    const std::size_t n_top = std::min(top, mem.size());
    std::partial_sort(mem.begin(), mem.begin() + static_cast<std::ptrdiff_t>(n_top), mem.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double wa = weights.empty() ? 0.0 : weights[a];
                        const double wb = weights.empty() ? 0.0 : weights[b];
                        return wa != wb ? wa > wb : a < b;
                      });
    out += std::to_string(c) + '\t' + std::to_string(mem.size()) + '\t';
    for (std::size_t t = 0; t < n_top; ++t) {
      if (t) out += ',';
      out += names.empty() ? std::to_string(mem[t]) : names[mem[t]];
    }
    out += '\n';
  }
  return out;
}

}  // namespace tagclust::io
