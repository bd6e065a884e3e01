#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cone/clustering.hpp"
#include "cone/config.hpp"
#include "cone/dataset.hpp"
#include "cone/model.hpp"

namespace cone {

/// Ego directory when `ego_dir` is set, generic text files otherwise.
Dataset load_dataset(const RunConfig& config);

struct SplitResult {
  CommunitySet train;
  CommunitySet test;
};

/// Shuffles communities and puts round(fraction * M) of them, clamped to [1, M-1], in train.
SplitResult split_communities(const CommunitySet& all, double train_fraction, std::uint64_t seed);

struct DetectOptions {
  std::size_t k_clusters = 0;  // 0: choose by cross-validation against the training communities
  std::optional<std::vector<std::size_t>> candidates;  // unset: {ceil(M/2), M, 2M}
  std::size_t folds = 5;
  std::size_t min_size = 1;
  bool exclude_train = false;  // detect on the remainder: drop training-community members
  std::uint64_t seed = 1;
  KMeansOptions kmeans;
};

struct DetectionResult {
  std::size_t k = 0;
  SelectKResult selection;  // empty scores when k was given
  Clustering clustering;
  CommunitySet detected;
};

/// Clusters S and turns clusters into communities. With exclude_train, members of
/// training communities are removed afterwards so only new communities remain.
DetectionResult detect_communities(const EmbeddingMatrix& s, const CommunitySet& train, const DetectOptions& options);

DetectOptions detect_options(const RunConfig& config);

/// ModelConfig of a run with the run seed applied.
ModelConfig model_config(const RunConfig& config);

}  // namespace cone
