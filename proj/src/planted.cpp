#include "cone/planted.hpp"

#include <algorithm>
#include <set>

#include "cone/error.hpp"
#include "cone/rng.hpp"

namespace cone {

std::string to_string(PlantedPattern p) {
  switch (p) {
    case PlantedPattern::kStar: return "star";
    case PlantedPattern::kCoStar: return "co-star";
    case PlantedPattern::kBridge: return "bridge";
  }
  return "?";
}

PlantedPattern parse_pattern(const std::string& name) {
  if (name == "star") return PlantedPattern::kStar;
  if (name == "co-star" || name == "costar") return PlantedPattern::kCoStar;
  if (name == "bridge") return PlantedPattern::kBridge;
  throw Error("unknown planted pattern '" + name + "' (star, co-star, bridge)");
}

Dataset generate_planted(const PlantedConfig& cfg) {
  const std::size_t K = cfg.num_communities;
  const std::size_t centers = cfg.pattern == PlantedPattern::kCoStar ? 2 : 1;
  if (K < 1) throw Error("need at least one community");
  const std::size_t min_size = cfg.pattern == PlantedPattern::kCoStar ? 4 : 3;
  if (cfg.community_size < min_size)
    throw Error("community size " + std::to_string(cfg.community_size) + " too small for pattern " +
                to_string(cfg.pattern) + " (minimum " + std::to_string(min_size) + ")");
  if (cfg.pattern == PlantedPattern::kBridge && K % 2 != 0)
    throw Error("bridge pattern pairs communities; num_communities must be even");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw Error("dropout must lie in [0, 1)");
  if (cfg.noise_per_node > cfg.noise_pool) throw Error("noise_per_node exceeds noise_pool");
  if (cfg.member_block_size == 0 && cfg.signature_size == 0) throw Error("communities need some attributes");
  if (cfg.member_block_size == 0 && cfg.noise_per_node == 0)
    warn("members carry no attributes; only centers are distinguishable by content");

  Rng rng(sub_seed(cfg.seed, "planted"));

  // group[v]: community of v, or K + b for the b-th bridge node
  std::vector<std::size_t> group;
  std::vector<std::vector<NodeIndex>> members(K);
  std::vector<std::vector<NodeIndex>> center_of(K);
  std::set<std::pair<NodeIndex, NodeIndex>> edges;
  auto link = [&](NodeIndex a, NodeIndex b) { edges.insert({std::min(a, b), std::max(a, b)}); };

  std::size_t bridges = 0;
  for (std::size_t c = 0; c < K; ++c) {
    for (std::size_t j = 0; j < cfg.community_size; ++j) {
      const auto v = static_cast<NodeIndex>(group.size());
      group.push_back(c);
      members[c].push_back(v);
      if (j < centers) center_of[c].push_back(v);
    }
    for (std::size_t a = 0; a < centers; ++a)
      for (std::size_t j = a + 1; j < cfg.community_size; ++j) link(center_of[c][a], members[c][j]);
    if (cfg.pattern == PlantedPattern::kBridge && c % 2 == 1) {
      const auto b = static_cast<NodeIndex>(group.size());
      group.push_back(K + bridges++);
      link(b, center_of[c - 1][0]);
      link(b, center_of[c][0]);
    }
  }
  const std::size_t n = group.size();

  if (cfg.noise_edges > 0) {
    std::vector<std::size_t> group_size(K + bridges, 0);
    for (std::size_t g : group) ++group_size[g];
    std::size_t cross = 0;
    for (std::size_t g = 0; g < group_size.size(); ++g) cross += group_size[g] * (n - group_size[g]);
    cross /= 2;
    std::size_t existing_cross = 0;
    for (const auto& [a, b] : edges) existing_cross += group[a] != group[b];
    const std::size_t available = cross - existing_cross;
    if (cfg.noise_edges > available)
      throw Error("cannot place " + std::to_string(cfg.noise_edges) + " noise edges; only " +
                  std::to_string(available) + " node pairs are free");
    if (cfg.noise_edges * 2 <= available) {
      std::size_t placed = 0;
      while (placed < cfg.noise_edges) {
        auto a = static_cast<NodeIndex>(uniform_index(rng, n));
        auto b = static_cast<NodeIndex>(uniform_index(rng, n));
        if (group[a] == group[b]) continue;
        if (edges.insert({std::min(a, b), std::max(a, b)}).second) ++placed;
      }
    } else {
      std::vector<std::pair<NodeIndex, NodeIndex>> free;
      for (NodeIndex a = 0; a < n; ++a)
        for (NodeIndex b = a + 1; b < n; ++b)
          if (group[a] != group[b] && !edges.count({a, b})) free.emplace_back(a, b);
      shuffle(free.begin(), free.end(), rng);
      for (std::size_t i = 0; i < cfg.noise_edges; ++i) edges.insert(free[i]);
    }
  }

  std::vector<std::string> ids(n);
  for (std::size_t v = 0; v < n; ++v) ids[v] = std::to_string(v);
  std::vector<EdgeRecord> records;
  records.reserve(edges.size());
  for (const auto& [a, b] : edges) records.push_back({ids[a], ids[b], 1.0, 0});

  Dataset ds;
  ds.name = "planted-" + to_string(cfg.pattern);
  ds.graph = Graph::build(records, false, ids);

  // columns: per community [signature | block], then the shared noise pool
  const std::size_t stride = cfg.signature_size + cfg.member_block_size;
  const std::size_t pool_base = K * stride;
  ds.attrs = NodeAttributes(n, pool_base + cfg.noise_pool);
  std::vector<std::uint32_t> pool(cfg.noise_pool);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<std::uint32_t>(pool_base + i);

  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t g = group[v];
    if (g < K) {
      const auto base = static_cast<std::uint32_t>(g * stride);
      const bool is_center = std::find(center_of[g].begin(), center_of[g].end(), v) != center_of[g].end();
      if (is_center)
        for (std::size_t a = 0; a < cfg.signature_size; ++a) ds.attrs.set(v, base + static_cast<std::uint32_t>(a), 1.0);
      // the block is common to the whole community, centers included
      const auto block_base = base + static_cast<std::uint32_t>(cfg.signature_size);
      std::size_t kept = 0;
      for (std::size_t a = 0; a < cfg.member_block_size; ++a) {
        if (uniform(rng, 0.0, 1.0) < cfg.dropout) continue;
        ds.attrs.set(v, block_base + static_cast<std::uint32_t>(a), 1.0);
        ++kept;
      }
      if (kept == 0 && cfg.member_block_size > 0)
        ds.attrs.set(v, block_base + static_cast<std::uint32_t>(uniform_index(rng, cfg.member_block_size)), 1.0);
    }
    // partial Fisher-Yates draws noise_per_node distinct pool attributes
    for (std::size_t i = 0; i < cfg.noise_per_node; ++i) {
      const std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      ds.attrs.set(v, pool[i], 1.0);
    }
  }

  ds.communities.split = Split::kAll;
  for (std::size_t c = 0; c < K; ++c)
    ds.communities.communities.push_back(make_community("c" + std::to_string(c), members[c]));
  return ds;
}

}  // namespace cone
