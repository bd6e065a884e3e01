#include "cone/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "cone/error.hpp"
#include "cone/rng.hpp"

namespace cone {

Dataset load_dataset(const RunConfig& config) {
  if (!config.ego_dir.empty()) return load_ego_dataset(config.ego_dir);
  if (config.edges.empty()) throw Error("no dataset given (set edges or ego_dir)");
  return load_generic({config.edges, config.attrs, config.communities, config.nodes}, config.directed);
}

SplitResult split_communities(const CommunitySet& all, double train_fraction, std::uint64_t seed) {
  const std::size_t M = all.size();
  if (M < 2) throw Error("need at least two communities to split, got " + std::to_string(M));
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("train_fraction must lie in (0, 1)");
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(M)));
  n_train = std::clamp<std::size_t>(n_train, 1, M - 1);

  std::vector<std::size_t> order(M);
  for (std::size_t i = 0; i < M; ++i) order[i] = i;
  Rng rng(sub_seed(seed, "split"));
  shuffle(order.begin(), order.end(), rng);
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

  SplitResult out;
  out.train.split = Split::kTrain;
  out.test.split = Split::kTest;
  for (std::size_t i = 0; i < M; ++i)
    (i < n_train ? out.train : out.test).communities.push_back(all.communities[order[i]]);
  return out;
}

DetectionResult detect_communities(const EmbeddingMatrix& s, const CommunitySet& train, const DetectOptions& options) {
  DetectionResult out;
  if (options.k_clusters > 0) {
    out.k = options.k_clusters;
  } else {
    if (options.candidates && options.candidates->empty())
      throw Error("empty cluster-count candidate list (give candidates or k_clusters)");
    if (train.empty()) throw Error("choosing the cluster count needs training communities (or set k_clusters)");
    auto candidates = options.candidates ? *options.candidates : default_candidates(train.size());
    out.selection = select_k(s, train, candidates, options.folds, options.seed, options.kmeans);
    out.k = out.selection.best;
  }
  out.clustering = kmeans(s, out.k, options.seed, options.kmeans);

  std::vector<bool> known(s.nodes(), false);
  if (options.exclude_train)
    for (const auto& c : train.communities)
      for (NodeIndex v : c.members) known[v] = true;
  std::vector<std::vector<NodeIndex>> members(out.k);
  for (std::size_t i = 0; i < s.nodes(); ++i)
    if (!known[i]) members[out.clustering.assignment[i]].push_back(static_cast<NodeIndex>(i));

  out.detected.split = Split::kDetected;
  for (std::size_t c = 0; c < out.k; ++c) {
    if (members[c].empty() || members[c].size() < std::max<std::size_t>(1, options.min_size)) continue;
    out.detected.communities.push_back(make_community("detected" + std::to_string(c), std::move(members[c])));
  }
  return out;
}

DetectOptions detect_options(const RunConfig& config) {
  DetectOptions o;
  o.k_clusters = config.k_clusters;
  o.candidates = config.candidates;
  o.folds = config.folds;
  o.min_size = config.min_size;
  o.exclude_train = config.exclude_train;
  o.seed = config.seed;
  return o;
}

ModelConfig model_config(const RunConfig& config) {
  ModelConfig m = config.model;
  m.seed = config.seed;
  return m;
}

}  // namespace cone
