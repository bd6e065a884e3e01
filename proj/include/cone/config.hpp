#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cone/model.hpp"
#include "cone/planted.hpp"

namespace cone {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; `#` starts a comment line. Throws ParseError on lines without '='.
KeyValues parse_key_values(std::istream& in, const std::string& source);

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

std::string model_config_to_text(const ModelConfig& config);
ModelConfig model_config_from_text(const std::string& text, const std::string& source = "<model config>");

/// Every knob of a pipeline run. Resolution order: command line, then config file, then these defaults.
struct RunConfig {
  // dataset inputs
  std::string edges;
  std::string attrs;
  std::string nodes;
  std::string communities;
  std::string ego_dir;
  bool directed = false;

  // artifacts from earlier stages
  std::string train;
  std::string test;
  std::string model_path;
  std::string detected;
  std::string truth;

  std::string out = "out";
  std::uint64_t seed = 1;

  PlantedConfig planted;
  ModelConfig model;  // seed, vocab_size and num_communities are filled in per run

  double train_fraction = 0.5;
  std::size_t k_clusters = 0;  // 0 selects the count by cross-validation
  std::optional<std::vector<std::size_t>> candidates;  // "auto": {ceil(M/2), M, 2M}
  std::size_t folds = 5;
  std::size_t min_size = 1;
  bool exclude_train = false;
  std::string metric = "both";
  std::size_t bins = 10;

  /// Throws Error for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// All keys, one `key=value` line each, in a fixed order.
  std::string to_text() const;
  static RunConfig from_text(const std::string& text, const std::string& source = "<config>");
  static RunConfig from_file(const std::string& path);
  void apply_file(const std::string& path);

  static const std::vector<std::string>& keys();

  bool operator==(const RunConfig&) const = default;
};

}  // namespace cone
