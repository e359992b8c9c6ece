#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gralp/graph.hpp"

namespace gralp {

/// Edge-list file: one `i j w` triple per line (0-based indices, real
/// weight), `#` comments and blank lines allowed. Node count is the largest
/// index + 1. Duplicate or asymmetric entries are symmetrized by max.
/// Self-loops and negative weights are rejected.
Graph load_edge_list(const std::string& path);

struct FeatureFile {
    Mat samples;
    std::vector<int> labels; // -1 where unknown; empty when has_labels is false
    bool has_labels = false;
};

/// CSV with one sample per row. When label_column is set, the trailing
/// column holds an integer class id (-1 = unknown).
FeatureFile load_feature_csv(const std::string& path, bool label_column);

/// Match file: one `m n` pair per line, `#` comments allowed.
std::vector<std::pair<int, int>> load_match_file(const std::string& path);

/// Label file: one integer class id per line (node order), -1 = unknown.
std::vector<int> load_label_file(const std::string& path);

/// `key=value` lines with `#` comments; used for config files and manifests.
/// Returns pairs in file order.
std::vector<std::pair<std::string, std::string>> load_key_value_file(const std::string& path);

} // namespace gralp
