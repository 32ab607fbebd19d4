#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust::io {

// Documents x tags matrix read from `document<TAB>tag` lines.
struct DocTagData {
  SparseBinaryMatrix matrix;
  std::vector<std::string> documents;  // row names
  std::vector<std::string> tags;       // column names
  std::size_t duplicate_pairs = 0;
  std::size_t dropped_tags = 0;
  std::size_t dropped_documents = 0;
};

// Ids are interned in order of first appearance, duplicate pairs collapse,
// tags carried by fewer than min_tag_count documents are dropped, and so are
// documents left without tags. Lines starting with '#' and blank lines are
// skipped. Throws ParseError on a malformed line, InvalidInput when nothing
// is left, IoError when the file cannot be read.
DocTagData parse_doc_tag_pairs(std::istream& in, const std::string& source,
                               std::size_t min_tag_count = 5);
DocTagData ingest_doc_tag_pairs(const std::filesystem::path& path, std::size_t min_tag_count = 5);

// Matrix Market. `header` (a single line, typically JSON) is written as a
// '%' comment right after the banner.
void write_matrix_market(const std::filesystem::path& path, const SparseBinaryMatrix& m,
                         std::string_view header);
// Real-valued coordinate output, nonzero entries only, 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const DenseRealMatrix& m,
                         std::string_view header);

// Reads coordinate (pattern, integer, real) or array (integer, real) general
// matrices. Nonzero values become ones in the binary variant.
SparseBinaryMatrix read_binary_matrix_market(const std::filesystem::path& path);
DenseRealMatrix read_real_matrix_market(const std::filesystem::path& path);
SparseBinaryMatrix parse_binary_matrix_market(std::istream& in, const std::string& source);
DenseRealMatrix parse_real_matrix_market(std::istream& in, const std::string& source);

// Two-column TSV `item<TAB>cluster`, preceded by `# header`.
void write_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels,
                  std::string_view header);
// Items must be 0..n-1, each exactly once (any order).
std::vector<std::size_t> read_labels(const std::filesystem::path& path);

// Two-column TSV `index<TAB>name`.
void write_names(const std::filesystem::path& path, const std::vector<std::string>& names,
                 std::string_view header);
std::vector<std::string> read_names(const std::filesystem::path& path);

// First comment line of a file written by this module ('%' or '#'
// stripped), or an empty string.
std::string read_header(const std::filesystem::path& path);

// Writes `content` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace tagclust::io
