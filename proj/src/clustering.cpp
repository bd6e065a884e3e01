#include "cone/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cone/error.hpp"
#include "cone/rng.hpp"
#include "cone/scoring.hpp"

namespace cone {

namespace {

using Points = std::vector<std::vector<double>>;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(const std::vector<double>& x, const Points& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = sq_dist(x, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Points seed_plus_plus(const Points& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.size();
  Points centroids;
  centroids.push_back(x[uniform_index(rng, n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(x[i], centroids[0]);
  while (centroids.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = uniform_index(rng, n);
    } else {
      double r = uniform(rng, 0.0, total);
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        if (r < d2[i]) {
          pick = i;
          break;
        }
        r -= d2[i];
      }
      while (d2[pick] <= 0.0 && pick > 0) --pick;
    }
    centroids.push_back(x[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x[i], centroids.back()));
  }
  return centroids;
}

Clustering lloyd(const Points& x, std::size_t k, Rng& rng, const KMeansOptions& options) {
  const std::size_t n = x.size();
  const std::size_t dim = x.empty() ? 0 : x[0].size();
  Points centroids = seed_plus_plus(x, k, rng);
  Clustering out;
  out.num_clusters = k;
  out.assignment.assign(n, 0);
  std::vector<std::size_t> sizes(k);

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++sizes[out.assignment[i] = nearest(x[i], centroids)];

    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[out.assignment[i]] < 2) continue;
        const double d = sq_dist(x[i], centroids[out.assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) throw Error("k-means cannot fill every cluster");
      --sizes[out.assignment[far]];
      out.assignment[far] = c;
      sizes[c] = 1;
      centroids[c] = x[far];
    }

    Points next(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < dim; ++r) next[out.assignment[i]][r] += x[i][r];
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t r = 0; r < dim; ++r) next[c][r] /= static_cast<double>(sizes[c]);

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) inertia += sq_dist(x[i], next[out.assignment[i]]);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(sq_dist(next[c], centroids[c])));
    centroids = std::move(next);
    out.inertia = inertia;
    out.inertia_history.push_back(inertia);
    out.iterations = iter + 1;
    if (shift < options.tolerance) break;
  }
  return out;
}

}  // namespace

Clustering kmeans(const EmbeddingMatrix& s, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  const std::size_t n = s.nodes();
  if (k < 1) throw Error("k-means needs at least one cluster");
  if (k > n) throw Error("cannot form " + std::to_string(k) + " clusters from " + std::to_string(n) + " points");
  Points x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = s.column(i);

  Rng rng(sub_seed(seed, "kmeans"));
  Clustering best;
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    Clustering run = lloyd(x, k, rng, options);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

CommunitySet clusters_to_communities(const Clustering& clustering, std::size_t min_size, const std::string& prefix) {
  std::vector<std::vector<NodeIndex>> members(clustering.num_clusters);
  for (std::size_t i = 0; i < clustering.assignment.size(); ++i)
    members[clustering.assignment[i]].push_back(static_cast<NodeIndex>(i));
  CommunitySet set;
  set.split = Split::kDetected;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].empty() || members[c].size() < min_size) continue;
    set.communities.push_back(make_community(prefix + std::to_string(c), std::move(members[c])));
  }
  return set;
}

std::vector<std::size_t> default_candidates(std::size_t m) {
  std::vector<std::size_t> out{(m + 1) / 2, m, 2 * m};
  out.erase(std::remove(out.begin(), out.end(), std::size_t{0}), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SelectKResult select_k(const EmbeddingMatrix& s, const CommunitySet& train, const std::vector<std::size_t>& candidates,
                       std::size_t folds, std::uint64_t seed, const KMeansOptions& options) {
  if (candidates.empty()) throw Error("select_k needs at least one candidate");
  SelectKResult result;
  if (candidates.size() == 1) {
    result.best = candidates[0];
    return result;
  }
  if (train.size() < 2) throw Error("select_k needs at least two training communities");
  if (folds < 1) throw Error("fold count must be positive");
  if (train.size() < folds) {
    warn("only " + std::to_string(train.size()) + " training communities; using " + std::to_string(train.size()) +
         " folds instead of " + std::to_string(folds));
    folds = train.size();
  }
  result.folds = folds;

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(sub_seed(seed, "folds"));
  shuffle(order.begin(), order.end(), rng);
  std::vector<CommunitySet> validation(folds);
  for (std::size_t i = 0; i < order.size(); ++i) validation[i % folds].communities.push_back(train.communities[order[i]]);

  std::vector<std::size_t> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  double best_score = -1.0;
  for (std::size_t k : sorted) {
    if (k < 1 || k > s.nodes()) {
      warn("skipping cluster count " + std::to_string(k) + " (graph has " + std::to_string(s.nodes()) + " nodes)");
      continue;
    }
    const CommunitySet detected = clusters_to_communities(kmeans(s, k, sub_seed(seed, "select_k"), options));
    double total = 0.0;
    for (const auto& fold : validation) total += aggregate_score(detected, fold, Metric::kF1);
    const double score = total / static_cast<double>(folds);
    result.scores.emplace_back(k, score);
    if (score > best_score) {
      best_score = score;
      result.best = k;
    }
  }
  if (result.scores.empty()) throw Error("no usable cluster-count candidate");
  return result;
}

}  // namespace cone
