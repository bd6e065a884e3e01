#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "cone/dataset.hpp"

namespace cone {

enum class PlantedPattern { kStar, kCoStar, kBridge };

std::string to_string(PlantedPattern p);
PlantedPattern parse_pattern(const std::string& name);

/// Synthetic graph with planted communities.
///
/// star: one center linked to every member. co-star: two linked centers, each
/// linked to every member. bridge: pairs of stars whose centers share an extra
/// bridge node that belongs to neither community.
///
/// Centers of community c carry an exclusive signature of attributes. Every node
/// of the community, centers included, carries the community's block (each
/// attribute kept with probability 1 - dropout), and every node draws a few
/// attributes from a noise pool shared by the whole graph.
struct PlantedConfig {
  PlantedPattern pattern = PlantedPattern::kCoStar;
  std::size_t num_communities = 6;
  std::size_t community_size = 8;  // centers included; at least 3 (star, bridge) or 4 (co-star)
  std::size_t noise_edges = 0;     // random edges between different communities
  std::size_t signature_size = 4;
  std::size_t member_block_size = 4;
  std::size_t noise_pool = 16;
  std::size_t noise_per_node = 1;
  double dropout = 0.0;
  std::uint64_t seed = 1;

  bool operator==(const PlantedConfig&) const = default;
};

/// Node IDs are "0".."n-1" and community IDs "c0".."c<K-1>".
/// Throws Error for impossible parameter combinations.
Dataset generate_planted(const PlantedConfig& config);

}  // namespace cone
