#include "cone/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cone/error.hpp"

namespace fs = std::filesystem;

namespace cone {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_uint(const std::string& s, std::uint64_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::vector<std::string> read_node_list(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> nodes;
  std::string line;
  while (std::getline(in, line)) {
    auto f = split_ws(line);
    if (f.empty() || f[0][0] == '#') continue;
    nodes.push_back(f[0]);
  }
  return nodes;
}

}  // namespace

NodeAttributes read_attributes(std::istream& in, const Graph& g, const std::string& source) {
  NodeAttributes attrs(g.num_nodes(), 0);
  std::vector<std::string> unknown;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = split_ws(line);
    if (f.empty()) continue;
    if (f[0][0] == '#') {
      std::uint64_t width = 0;
      if (f.size() == 3 && f[1] == "columns" && parse_uint(f[2], width) && width > 0 && attrs.rows() > 0)
        attrs.set(0, static_cast<std::uint32_t>(width - 1), 0.0);
      continue;
    }
    auto node = g.index_of(f[0]);
    if (!node) {
      unknown.push_back(f[0]);
      continue;
    }
    for (std::size_t i = 1; i < f.size(); ++i) {
      std::uint64_t col = 0;
      if (!parse_uint(f[i], col) || col > UINT32_MAX - 1)
        throw ParseError(source, lineno, "bad attribute index '" + f[i] + "'");
      attrs.set(*node, static_cast<std::uint32_t>(col), 1.0);
    }
  }
  if (!unknown.empty()) {
    std::string msg = source + ": attributes reference nodes not in the graph:";
    for (const auto& u : unknown) msg += " " + u;
    throw Error(msg);
  }
  return attrs;
}

NodeAttributes read_attributes_file(const std::string& path, const Graph& g) {
  auto in = open_in(path);
  return read_attributes(in, g, path);
}

void write_attributes(std::ostream& out, const NodeAttributes& attrs, const Graph& g) {
  out << "# columns " << attrs.columns() << '\n';
  for (std::size_t i = 0; i < attrs.rows(); ++i) {
    out << g.id(static_cast<NodeIndex>(i));
    for (const auto& [col, value] : attrs.row(i))
      if (value != 0.0) out << ' ' << col;
    out << '\n';
  }
}

Dataset load_generic(const GenericPaths& paths, bool directed) {
  if (paths.edges.empty()) throw Error("an edge list is required");
  Dataset ds;
  ds.name = fs::path(paths.edges).parent_path().filename().string();
  std::vector<std::string> nodes;
  if (!paths.nodes.empty()) nodes = read_node_list(paths.nodes);
  const auto records = read_edge_list_file(paths.edges);
  ds.graph = Graph::build(records, directed, nodes);
  ds.attrs = paths.attrs.empty() ? NodeAttributes(ds.graph.num_nodes(), 0)
                                 : read_attributes_file(paths.attrs, ds.graph);
  if (!paths.communities.empty()) ds.communities = read_communities_file(paths.communities, ds.graph);
  return ds;
}

GenericPaths write_generic(const Dataset& ds, const std::string& dir) {
  fs::create_directories(dir);
  GenericPaths p{(fs::path(dir) / "edges.txt").string(), (fs::path(dir) / "attrs.txt").string(),
                 (fs::path(dir) / "communities.txt").string(), (fs::path(dir) / "nodes.txt").string()};
  {
    auto out = open_out(p.nodes);
    for (const auto& id : ds.graph.ids()) out << id << '\n';
  }
  {
    auto out = open_out(p.edges);
    out.precision(17);
    for (const auto& e : ds.graph.edges()) {
      out << ds.graph.id(e.src) << ' ' << ds.graph.id(e.dst);
      if (e.weight != 1.0) out << ' ' << e.weight;
      out << '\n';
    }
  }
  {
    auto out = open_out(p.attrs);
    write_attributes(out, ds.attrs, ds.graph);
  }
  write_communities_file(p.communities, ds.communities, ds.graph);
  return p;
}

namespace {

struct EgoFiles {
  std::string ego;
  fs::path edges, feat, egofeat, circles, featnames;
};

struct EgoData {
  std::string ego;
  std::vector<std::string> columns;  // local column -> feature name
  std::vector<std::pair<std::string, std::vector<bool>>> features;  // node (incl. ego) -> bits
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::vector<std::string>>> circles;
};

EgoData read_ego(const EgoFiles& files, const EgoLoadOptions& options) {
  EgoData d;
  d.ego = files.ego;
  const std::string prefix = options.namespace_ids ? files.ego + ":" : "";
  auto node_id = [&](const std::string& raw) { return prefix + raw; };
  const std::string ego_id = options.namespace_ids ? node_id(files.ego) : files.ego;

  std::string line;
  {
    auto in = open_in(files.featnames.string());
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto f = split_ws(line);
      if (f.empty()) continue;
      if (f.size() < 2) throw ParseError(files.featnames.string(), lineno, "expected 'index name'");
      std::string name = f[1];
      for (std::size_t i = 2; i < f.size(); ++i) name += " " + f[i];
      d.columns.push_back(name);
    }
  }
  const std::size_t width = d.columns.size();
  auto parse_bits = [&](const std::vector<std::string>& f, std::size_t from, const fs::path& src, std::size_t lineno) {
    if (f.size() - from != width)
      throw ParseError(src.string(), lineno,
                       "inconsistent feature width: " + std::to_string(f.size() - from) + " values, " +
                           std::to_string(width) + " feature names");
    std::vector<bool> bits(width);
    for (std::size_t i = 0; i < width; ++i) bits[i] = f[from + i] != "0";
    return bits;
  };
  {
    auto in = open_in(files.egofeat.string());
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto f = split_ws(line);
      if (f.empty()) continue;
      d.features.emplace_back(ego_id, parse_bits(f, 0, files.egofeat, lineno));
      break;
    }
  }
  std::vector<std::string> alters;
  {
    auto in = open_in(files.feat.string());
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto f = split_ws(line);
      if (f.empty()) continue;
      alters.push_back(node_id(f[0]));
      d.features.emplace_back(alters.back(), parse_bits(f, 1, files.feat, lineno));
    }
  }
  {
    auto in = open_in(files.edges.string());
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto f = split_ws(line);
      if (f.empty()) continue;
      if (f.size() != 2) throw ParseError(files.edges.string(), lineno, "expected 'src dst'");
      d.edges.emplace_back(node_id(f[0]), node_id(f[1]));
    }
  }
  for (const auto& a : alters) d.edges.emplace_back(ego_id, a);
  {
    auto in = open_in(files.circles.string());
    while (std::getline(in, line)) {
      auto f = split_ws(line);
      if (f.empty()) continue;
      std::vector<std::string> members;
      for (std::size_t i = 1; i < f.size(); ++i) members.push_back(node_id(f[i]));
      d.circles.emplace_back(files.ego + "/" + f[0], std::move(members));
    }
  }
  return d;
}

}  // namespace

Dataset load_ego_dataset(const std::string& dir, const EgoLoadOptions& options) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<std::string> egos;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".edges") egos.push_back(entry.path().stem().string());
  // numeric ego IDs sort numerically, the rest lexicographically after them
  std::sort(egos.begin(), egos.end(), [](const std::string& a, const std::string& b) {
    std::uint64_t x = 0, y = 0;
    const bool na = parse_uint(a, x), nb = parse_uint(b, y);
    if (na && nb) return x < y;
    if (na != nb) return na;
    return a < b;
  });
  if (!options.only_ego.empty()) {
    if (std::find(egos.begin(), egos.end(), options.only_ego) == egos.end())
      throw Error("ego " + options.only_ego + " not found in " + dir);
    egos = {options.only_ego};
  }

  std::vector<EgoData> loaded;
  for (const auto& ego : egos) {
    EgoFiles files{ego, fs::path(dir) / (ego + ".edges"), fs::path(dir) / (ego + ".feat"),
                   fs::path(dir) / (ego + ".egofeat"), fs::path(dir) / (ego + ".circles"),
                   fs::path(dir) / (ego + ".featnames")};
    std::string missing;
    for (const auto* p : {&files.feat, &files.egofeat, &files.circles, &files.featnames})
      if (!fs::exists(*p)) missing += " " + p->filename().string();
    if (!missing.empty()) {
      warn("skipping ego " + ego + ": missing" + missing);
      continue;
    }
    loaded.push_back(read_ego(files, options));
  }
  if (loaded.empty()) throw Error("no complete ego network in " + dir);

  // nodes in order of first appearance: each ego's feature rows, then edge endpoints
  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  auto note = [&](const std::string& id) {
    if (seen.emplace(id, nodes.size()).second) nodes.push_back(id);
  };
  std::vector<EdgeRecord> records;
  std::set<std::pair<std::string, std::string>> edge_keys;
  for (const auto& d : loaded) {
    for (const auto& [id, bits] : d.features) note(id);
    for (const auto& [a, b] : d.edges) {
      if (a == b) continue;
      note(a);
      note(b);
      auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      if (edge_keys.insert(key).second) records.push_back({a, b, 1.0, 0});
    }
  }

  Dataset ds;
  ds.name = fs::path(dir).filename().string();
  ds.graph = Graph::build(records, false, nodes);

  std::map<std::string, std::uint32_t> column_of;
  std::vector<std::string> names;
  for (const auto& d : loaded)
    for (const auto& name : d.columns)
      if (column_of.emplace(name, static_cast<std::uint32_t>(names.size())).second) names.push_back(name);
  ds.attrs = NodeAttributes(ds.graph.num_nodes(), names.size());
  ds.attrs.names() = names;
  for (const auto& d : loaded) {
    for (const auto& [id, bits] : d.features) {
      const NodeIndex node = *ds.graph.index_of(id);
      for (std::size_t c = 0; c < bits.size(); ++c)
        if (bits[c]) ds.attrs.set(node, column_of.at(d.columns[c]), 1.0);
    }
  }

  ds.communities.split = Split::kAll;
  std::size_t empty = 0;
  for (const auto& d : loaded) {
    for (const auto& [cid, members] : d.circles) {
      std::vector<NodeIndex> idx;
      for (const auto& m : members) {
        auto node = ds.graph.index_of(m);
        if (!node) {
          warn("circle " + cid + " names unknown node " + m + "; dropped");
          continue;
        }
        idx.push_back(*node);
      }
      if (idx.empty()) {
        ++empty;
        continue;
      }
      ds.communities.communities.push_back(make_community(cid, std::move(idx)));
    }
  }
  if (empty > 0) warn("dropped " + std::to_string(empty) + " empty circle(s)");
  return ds;
}

}  // namespace cone
