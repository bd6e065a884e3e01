#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cone/graph.hpp"

namespace cone {

/// A named set of nodes. Members are kept sorted and unique.
struct Community {
  std::string id;
  std::vector<NodeIndex> members;

  std::size_t size() const { return members.size(); }
  bool contains(NodeIndex v) const;

  bool operator==(const Community&) const = default;
};

enum class Split { kAll, kTrain, kTest, kDetected };

struct CommunitySet {
  std::vector<Community> communities;
  Split split = Split::kAll;

  std::size_t size() const { return communities.size(); }
  bool empty() const { return communities.empty(); }

  bool operator==(const CommunitySet&) const = default;
};

/// Sorts and deduplicates members.
Community make_community(std::string id, std::vector<NodeIndex> members);

/// Reads `community_id member_id ...` lines. Members must name nodes of `g`;
/// unknown IDs raise ParseError naming the node. Empty communities are rejected.
CommunitySet read_communities(std::istream& in, const Graph& g, const std::string& source = "<communities>");
CommunitySet read_communities_file(const std::string& path, const Graph& g);

void write_communities(std::ostream& out, const CommunitySet& set, const Graph& g);
void write_communities_file(const std::string& path, const CommunitySet& set, const Graph& g);

}  // namespace cone
