#include "tagclust/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tagclust/errors.hpp"
#include "tagclust/log.hpp"

namespace tagclust::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::string one_line(std::string_view header) {
  std::string h(header);
  std::replace(h.begin(), h.end(), '\n', ' ');
  return h;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct MmTriplet {
  std::size_t i, j;
  double v;
};

struct MmData {
  std::size_t rows = 0, cols = 0;
  std::vector<MmTriplet> entries;
};

MmData parse_mm(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty Matrix Market file");
  ++line_no;
  line = strip_cr(line);
  const auto banner = split_ws(line);
  if (banner.size() != 5 || banner[0] != "%%MatrixMarket" || lower(banner[1]) != "matrix") {
    throw ParseError(source, line_no, "missing %%MatrixMarket matrix banner");
  }
  const std::string format = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string symmetry = lower(banner[4]);
  if (symmetry != "general") throw ParseError(source, line_no, "only general matrices are supported");
  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array") throw ParseError(source, line_no, "unknown format " + format);
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer" && field != "double") {
    throw ParseError(source, line_no, "unsupported field " + field);
  }
  if (pattern && !coordinate) throw ParseError(source, line_no, "array matrices cannot be pattern");

  // Size line.
  std::vector<std::string_view> tok;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    break;
  }
  std::string size_line = line;
  tok = split_ws(size_line);
  MmData d;
  std::size_t nnz = 0;
  if (tok.size() != (coordinate ? 3u : 2u) || !parse_number(tok[0], d.rows) ||
      !parse_number(tok[1], d.cols) || (coordinate && !parse_number(tok[2], nnz))) {
    throw ParseError(source, line_no, "bad size line");
  }
  if (!coordinate) nnz = d.rows * d.cols;
  d.entries.reserve(nnz);
  std::size_t seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    tok = split_ws(line);
    MmTriplet t{0, 0, 1.0};
    if (coordinate) {
      const std::size_t want = pattern ? 2 : 3;
      if (tok.size() != want || !parse_number(tok[0], t.i) || !parse_number(tok[1], t.j) ||
          (!pattern && !parse_number(tok[2], t.v))) {
        throw ParseError(source, line_no, "bad coordinate entry");
      }
      if (t.i == 0 || t.j == 0 || t.i > d.rows || t.j > d.cols) {
        throw ParseError(source, line_no, "index out of range");
      }
      --t.i;
      --t.j;
    } else {
      if (tok.size() != 1 || !parse_number(tok[0], t.v)) throw ParseError(source, line_no, "bad value");
      // Array storage is column-major.
      t.i = seen % d.rows;
      t.j = seen / d.rows;
    }
    d.entries.push_back(t);
    ++seen;
  }
  if (seen != nnz) {
    throw ParseError(source, line_no, "expected " + std::to_string(nnz) + " entries, found " +
                                          std::to_string(seen));
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------

DocTagData parse_doc_tag_pairs(std::istream& in, const std::string& source,
                               std::size_t min_tag_count) {
  std::unordered_map<std::string, std::size_t> doc_index, tag_index;
  std::vector<std::string> docs, tags;
  std::vector<SparseBinaryMatrix::Entry> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#' || blank(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected 'document<TAB>tag'");
    }
    std::string doc = line.substr(0, tab);
    std::string tag = line.substr(tab + 1);
    if (doc.empty() || tag.empty()) throw ParseError(source, line_no, "empty document or tag");
    auto [di, dnew] = doc_index.try_emplace(doc, docs.size());
    if (dnew) docs.push_back(std::move(doc));
    auto [ti, tnew] = tag_index.try_emplace(tag, tags.size());
    if (tnew) tags.push_back(std::move(tag));
    pairs.emplace_back(di->second, ti->second);
  }
  if (pairs.empty()) throw InvalidInput(source + ": no document/tag pairs");

  DocTagData out;
  const std::size_t raw = pairs.size();
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  out.duplicate_pairs = raw - pairs.size();

  std::vector<std::size_t> tag_count(tags.size(), 0);
  for (const auto& p : pairs) ++tag_count[p.second];
  std::vector<std::size_t> new_tag(tags.size(), SIZE_MAX);
  for (std::size_t t = 0; t < tags.size(); ++t) {
    if (tag_count[t] >= min_tag_count) {
      new_tag[t] = out.tags.size();
      out.tags.push_back(tags[t]);
    }
  }
  out.dropped_tags = tags.size() - out.tags.size();

  std::vector<char> has_tag(docs.size(), 0);
  for (const auto& p : pairs) {
    if (new_tag[p.second] != SIZE_MAX) has_tag[p.first] = 1;
  }
  std::vector<std::size_t> new_doc(docs.size(), SIZE_MAX);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (has_tag[d]) {
      new_doc[d] = out.documents.size();
      out.documents.push_back(docs[d]);
    }
  }
  out.dropped_documents = docs.size() - out.documents.size();
  if (out.documents.empty() || out.tags.empty()) {
    throw InvalidInput(source + ": nothing left after dropping tags with fewer than " +
                       std::to_string(min_tag_count) + " documents");
  }

  std::vector<SparseBinaryMatrix::Entry> entries;
  for (const auto& p : pairs) {
    if (new_tag[p.second] != SIZE_MAX) entries.emplace_back(new_doc[p.first], new_tag[p.second]);
  }
  out.matrix = SparseBinaryMatrix(out.documents.size(), out.tags.size(), std::move(entries));
  if (out.dropped_tags > 0 || out.dropped_documents > 0) {
    log::info(source + ": dropped " + std::to_string(out.dropped_tags) + " rare tags and " +
              std::to_string(out.dropped_documents) + " documents left without tags");
  }
  return out;
}

DocTagData ingest_doc_tag_pairs(const std::filesystem::path& path, std::size_t min_tag_count) {
  auto in = open_in(path);
  return parse_doc_tag_pairs(in, path.string(), min_tag_count);
}

// ---------------------------------------------------------------------------

void write_matrix_market(const std::filesystem::path& path, const SparseBinaryMatrix& m,
                         std::string_view header) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix coordinate pattern general\n";
  if (!header.empty()) out << '%' << one_line(header) << '\n';
  out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  for (const auto& [i, j] : m.entries()) out << i + 1 << ' ' << j + 1 << '\n';
  finish(out, path);
}

void write_matrix_market(const std::filesystem::path& path, const DenseRealMatrix& m,
                         std::string_view header) {
  auto out = open_out(path);
  std::size_t nnz = 0;
  for (double v : m.values()) nnz += v != 0.0;
  out << "%%MatrixMarket matrix coordinate real general\n";
  if (!header.empty()) out << '%' << one_line(header) << '\n';
  out << m.n_rows() << ' ' << m.n_cols() << ' ' << nnz << '\n';
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
      const double v = m(i, j);
      if (v != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << format_real(v) << '\n';
    }
  }
  finish(out, path);
}

SparseBinaryMatrix parse_binary_matrix_market(std::istream& in, const std::string& source) {
  const MmData d = parse_mm(in, source);
  std::vector<SparseBinaryMatrix::Entry> entries;
  for (const auto& t : d.entries) {
    if (t.v != 0.0) entries.emplace_back(t.i, t.j);
  }
  return SparseBinaryMatrix(d.rows, d.cols, std::move(entries));
}

DenseRealMatrix parse_real_matrix_market(std::istream& in, const std::string& source) {
  const MmData d = parse_mm(in, source);
  std::vector<double> values(d.rows * d.cols, 0.0);
  for (const auto& t : d.entries) values[t.i * d.cols + t.j] += t.v;
  return DenseRealMatrix(d.rows, d.cols, std::move(values));
}

SparseBinaryMatrix read_binary_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_binary_matrix_market(in, path.string());
}

DenseRealMatrix read_real_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_real_matrix_market(in, path.string());
}

// ---------------------------------------------------------------------------

void write_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels,
                  std::string_view header) {
  auto out = open_out(path);
  if (!header.empty()) out << "# " << one_line(header) << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << '\t' << labels[i] << '\n';
  finish(out, path);
}

std::vector<std::size_t> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#' || blank(line)) continue;
    const auto tok = split_ws(line);
    std::size_t item = 0, label = 0;
    if (tok.size() != 2 || !parse_number(tok[0], item) || !parse_number(tok[1], label)) {
      throw ParseError(path.string(), line_no, "expected 'item<TAB>cluster'");
    }
    rows.emplace_back(item, label);
  }
  std::vector<std::size_t> labels(rows.size(), SIZE_MAX);
  for (const auto& [item, label] : rows) {
    if (item >= labels.size() || labels[item] != SIZE_MAX) {
      throw InvalidInput(path.string() + ": items must be 0..n-1, each once");
    }
    labels[item] = label;
  }
  return labels;
}

void write_names(const std::filesystem::path& path, const std::vector<std::string>& names,
                 std::string_view header) {
  auto out = open_out(path);
  if (!header.empty()) out << "# " << one_line(header) << '\n';
  for (std::size_t i = 0; i < names.size(); ++i) out << i << '\t' << names[i] << '\n';
  finish(out, path);
}

std::vector<std::string> read_names(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    std::size_t idx = 0;
    if (tab == std::string::npos || !parse_number(std::string_view(line).substr(0, tab), idx) ||
        idx != names.size()) {
      throw ParseError(path.string(), line_no, "expected 'index<TAB>name' in order");
    }
    names.push_back(line.substr(tab + 1));
  }
  return names;
}

std::string read_header(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.rfind("%%MatrixMarket", 0) == 0) continue;
    if (line.rfind("# ", 0) == 0) return line.substr(2);
    if (!line.empty() && line[0] == '%') return line.substr(1);
    break;
  }
  return {};
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  auto out = open_out(path);
  out << content;
  finish(out, path);
}

}  // namespace tagclust::io
