#include "cone/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "cone/error.hpp"

namespace cone {

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

namespace {

NodeIndex intern(const std::string& id, std::vector<std::string>& ids,
                 std::unordered_map<std::string, NodeIndex>& index) {
  auto [it, inserted] = index.emplace(id, static_cast<NodeIndex>(ids.size()));
  if (inserted) ids.push_back(id);
  return it->second;
}

std::string describe(const EdgeRecord& r) {
  std::string s = "(" + r.src + ", " + r.dst + ")";
  if (r.line > 0) s += " at line " + std::to_string(r.line);
  return s;
}

}  // namespace

Graph Graph::build(std::span<const EdgeRecord> records, bool directed,
                   std::span<const std::string> nodes) {
  Graph g;
  g.directed_ = directed;
  for (const auto& id : nodes) {
    if (g.index_.count(id)) throw Error("duplicate node in node list: " + id);
    intern(id, g.ids_, g.index_);
  }

  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  for (const auto& r : records) {
    if (!std::isfinite(r.weight)) throw Error("non-finite weight on edge " + describe(r));
    if (r.weight < 0) throw Error("negative weight on edge " + describe(r));
    NodeIndex s = intern(r.src, g.ids_, g.index_);
    NodeIndex d = intern(r.dst, g.ids_, g.index_);
    if (s == d) continue;
    auto key = directed ? std::pair{s, d} : std::pair{std::min(s, d), std::max(s, d)};
    if (!seen.insert(key).second) throw Error("duplicate edge " + describe(r));
    if (r.weight == 0.0) continue;
    g.edges_.push_back({s, d, r.weight});
  }
  g.finalize();
  return g;
}

void Graph::finalize() {
  const std::size_t n = ids_.size();
  std::vector<std::vector<Neighbor>> rows(n);
  for (const auto& e : edges_) {
    rows[e.src].push_back({e.dst, e.weight});
    if (!directed_) rows[e.dst].push_back({e.src, e.weight});
  }
  offsets_.assign(n + 1, 0);
  adj_.clear();
  degree_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    for (const auto& nb : row) degree_[i] += nb.weight;
    adj_.insert(adj_.end(), row.begin(), row.end());
    offsets_[i + 1] = adj_.size();
  }
}

bool Graph::has_edge(NodeIndex i, NodeIndex j) const {
  auto row = out_neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Neighbor& nb, NodeIndex v) { return nb.node < v; });
  return it != row.end() && it->node == j;
}

std::optional<NodeIndex> Graph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<EdgeRecord> read_edge_list(std::istream& in, const std::string& source) {
  std::vector<EdgeRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(std::move(t));
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError(source, lineno, "expected `src dst [weight]`, got " + std::to_string(tok.size()) + " fields");
    }
    EdgeRecord r{tok[0], tok[1], 1.0, lineno};
    if (tok.size() == 3) {
      std::size_t used = 0;
      try {
        r.weight = std::stod(tok[2], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[2].size()) throw ParseError(source, lineno, "bad weight '" + tok[2] + "'");
      if (!std::isfinite(r.weight)) throw ParseError(source, lineno, "non-finite weight");
      if (r.weight < 0) throw ParseError(source, lineno, "negative weight " + tok[2]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EdgeRecord> read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge file " + path);
  return read_edge_list(in, path);
}

Graph symmetrize(const Graph& g) {
  if (!g.directed()) return g;
  std::map<std::pair<NodeIndex, NodeIndex>, double> merged;
  for (const auto& e : g.edges()) {
    auto key = std::pair{std::min(e.src, e.dst), std::max(e.src, e.dst)};
    auto [it, inserted] = merged.emplace(key, e.weight);
    if (!inserted) it->second = std::max(it->second, e.weight);
  }
  std::vector<EdgeRecord> records;
  records.reserve(merged.size());
  for (const auto& [key, w] : merged) records.push_back({g.id(key.first), g.id(key.second), w, 0});
  auto ids = g.ids();
  return Graph::build(records, false, {ids.begin(), ids.end()});
}

}  // namespace cone
