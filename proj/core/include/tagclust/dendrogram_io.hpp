#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagclust/types.hpp"

namespace tagclust::io {

// `config_json` is a JSON object (text) stored verbatim under "config" so
// that every artifact records the run that produced it. Empty means {}.
std::string dendrogram_to_json(const Dendrogram& d, std::string_view config_json = {});
Dendrogram dendrogram_from_json(std::string_view text);
// Returns the "config" object of a serialized dendrogram as JSON text.
std::string dendrogram_config(std::string_view text);

void write_dendrogram(const std::filesystem::path& path, const Dendrogram& d,
                      std::string_view config_json = {});
Dendrogram read_dendrogram(const std::filesystem::path& path);

// CSV with a leading `# <config>` line and a column header.
std::string trace_to_csv(const std::vector<StepTrace>& trace, std::string_view config_json = {});
std::vector<StepTrace> trace_from_csv(std::string_view text);
void write_trace(const std::filesystem::path& path, const std::vector<StepTrace>& trace,
                 std::string_view config_json = {});
std::vector<StepTrace> read_trace(const std::filesystem::path& path);

// Flat cut of one axis: `item<TAB>name<TAB>cluster` per item, with clusters
// renumbered 0..k-1 in order of their smallest member.
std::string cut_assignments_tsv(const Partition& p, const std::vector<std::string>& names,
                                std::string_view config_json = {});
// Per-cluster summary `cluster<TAB>size<TAB>top members`, listing up to
// `top` members with the largest `weights` (ties by index), comma-separated.
std::string cut_summary_tsv(const Partition& p, const std::vector<std::string>& names,
                            const std::vector<double>& weights, std::size_t top = 3,
                            std::string_view config_json = {});

// Dense 0..k-1 labels for a partition, numbered by smallest member.
std::vector<std::size_t> dense_labels(const Partition& p);

}  // namespace tagclust::io
