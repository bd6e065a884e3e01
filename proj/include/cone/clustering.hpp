#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cone/community.hpp"
#include "cone/model.hpp"

namespace cone {

struct Clustering {
  std::vector<std::size_t> assignment;  // node -> cluster id in [0, num_clusters)
  std::size_t num_clusters = 0;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per Lloyd iteration of the kept run
  std::size_t iterations = 0;
};

struct KMeansOptions {
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  // stop once no centroid moves further than this
  std::size_t restarts = 10;  // independent k-means++ seedings; the lowest inertia wins
};

/// k-means++ seeding plus Lloyd iterations over the columns of `s`.
/// Ties in the nearest centroid go to the lowest cluster id; a cluster that
/// empties out is re-seeded with the point farthest from its own centroid.
Clustering kmeans(const EmbeddingMatrix& s, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

/// Turns clusters into communities named `<prefix><id>`, dropping clusters below min_size.
CommunitySet clusters_to_communities(const Clustering& clustering, std::size_t min_size = 1,
                                     const std::string& prefix = "detected");

/// {ceil(M/2), M, 2M} without duplicates.
std::vector<std::size_t> default_candidates(std::size_t num_train_communities);

struct SelectKResult {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, double>> scores;  // candidate -> mean validation F1
  std::size_t folds = 0;
};

/// Cross-validated choice of the cluster count. Training communities are split
/// into folds; each candidate clusters the whole embedding once and is scored by
/// mean aggregate F1 against every validation fold. Ties go to the smaller count.
SelectKResult select_k(const EmbeddingMatrix& s, const CommunitySet& train, const std::vector<std::size_t>& candidates,
                       std::size_t folds, std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace cone
