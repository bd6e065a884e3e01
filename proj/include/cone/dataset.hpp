#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "cone/analysis.hpp"
#include "cone/community.hpp"
#include "cone/graph.hpp"

namespace cone {

struct Dataset {
  std::string name;
  Graph graph;
  NodeAttributes attrs;  // one row per graph node
  CommunitySet communities;

  bool operator==(const Dataset&) const = default;
};

/// Sparse attribute lines `node_id attr_index ...` (0-based column indices).
/// An optional `# columns N` header fixes the attribute width. Node IDs missing
/// from the graph raise Error listing every offender.
NodeAttributes read_attributes(std::istream& in, const Graph& g, const std::string& source = "<attrs>");
NodeAttributes read_attributes_file(const std::string& path, const Graph& g);
void write_attributes(std::ostream& out, const NodeAttributes& attrs, const Graph& g);

/// Paths of a dataset in the generic text formats. Empty paths are optional inputs.
struct GenericPaths {
  std::string edges;
  std::string attrs;
  std::string communities;
  std::string nodes;  // one node ID per line; fixes node order and declares isolated nodes
};

Dataset load_generic(const GenericPaths& paths, bool directed = false);

/// Writes nodes.txt, edges.txt, attrs.txt and communities.txt into `dir`.
GenericPaths write_generic(const Dataset& ds, const std::string& dir);

struct EgoLoadOptions {
  bool namespace_ids = false;  // prefix node IDs with "<ego>:" instead of merging on global IDs
  std::string only_ego;        // load a single ego network when non-empty
};

/// Merges SNAP ego networks (`<ego>.edges/.feat/.egofeat/.circles/.featnames`)
/// found in `dir`. Every ego is linked to its alters, circles become communities
/// named `<ego>/<circle>`, and feature columns are aligned by feature name.
Dataset load_ego_dataset(const std::string& dir, const EgoLoadOptions& options = {});

}  // namespace cone
