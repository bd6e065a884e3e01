#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cone/graph.hpp"
#include "cone/rng.hpp"

namespace cone::test {

inline Graph graph_of(const std::vector<std::pair<std::string, std::string>>& pairs, bool directed = false,
                      const std::vector<std::string>& nodes = {}) {
  std::vector<EdgeRecord> recs;
  for (const auto& [a, b] : pairs) recs.push_back({a, b, 1.0, 0});
  return Graph::build(recs, directed, nodes);
}

/// Nodes "0".."n-1" with the given index pairs.
inline Graph indexed_graph(std::size_t n, const std::vector<std::pair<int, int>>& pairs, bool directed = false) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  std::vector<EdgeRecord> recs;
  for (auto [a, b] : pairs) recs.push_back({ids[a], ids[b], 1.0, 0});
  return Graph::build(recs, directed, ids);
}

inline Graph random_graph(std::size_t n, double p, Rng& rng, bool directed = false, bool weighted = false) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  std::vector<EdgeRecord> recs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j || uniform(rng, 0, 1) >= p) continue;
      recs.push_back({ids[i], ids[j], weighted ? uniform(rng, 0.1, 3.0) : 1.0, 0});
    }
  return Graph::build(recs, directed, ids);
}

/// Fresh empty directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("cone-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace cone::test
