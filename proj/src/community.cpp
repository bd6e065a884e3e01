#include "cone/community.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cone/error.hpp"

namespace cone {

bool Community::contains(NodeIndex v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

Community make_community(std::string id, std::vector<NodeIndex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return {std::move(id), std::move(members)};
}

CommunitySet read_communities(std::istream& in, const Graph& g, const std::string& source) {
  CommunitySet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string id;
    if (!(ss >> id) || id[0] == '#') continue;
    std::vector<NodeIndex> members;
    for (std::string m; ss >> m;) {
      auto idx = g.index_of(m);
      if (!idx) throw ParseError(source, lineno, "community " + id + " references unknown node " + m);
      members.push_back(*idx);
    }
    if (members.empty()) throw ParseError(source, lineno, "community " + id + " has no members");
    set.communities.push_back(make_community(std::move(id), std::move(members)));
  }
  return set;
}

CommunitySet read_communities_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open community file " + path);
  return read_communities(in, g, path);
}

void write_communities(std::ostream& out, const CommunitySet& set, const Graph& g) {
  for (const auto& c : set.communities) {
    out << c.id;
    for (NodeIndex v : c.members) out << ' ' << g.id(v);
    out << '\n';
  }
}

void write_communities_file(const std::string& path, const CommunitySet& set, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_communities(out, set, g);
}

}  // namespace cone
