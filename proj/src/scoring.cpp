#include "cone/scoring.hpp"

#include <algorithm>

#include "cone/error.hpp"

namespace cone {

std::string to_string(Metric m) { return m == Metric::kF1 ? "f1" : "jaccard"; }

Metric parse_metric(const std::string& name) {
  if (name == "f1") return Metric::kF1;
  if (name == "jaccard") return Metric::kJaccard;
  throw Error("unknown metric '" + name + "'");
}

namespace {

std::size_t intersection_size(const Community& a, const Community& b) {
  std::size_t count = 0;
  auto p = a.members.begin(), q = b.members.begin();
  while (p != a.members.end() && q != b.members.end()) {
    if (*p < *q) {
      ++p;
    } else if (*q < *p) {
      ++q;
    } else {
      ++count;
      ++p;
      ++q;
    }
  }
  return count;
}

}  // namespace

double pair_f1(const Community& detected, const Community& truth) {
  const std::size_t common = intersection_size(detected, truth);
  if (common == 0) return 0.0;
  // 2PR/(P+R) with P = common/|truth|, R = common/|detected| reduces to this
  return 2.0 * static_cast<double>(common) / static_cast<double>(detected.size() + truth.size());
}

double pair_jaccard(const Community& detected, const Community& truth) {
  const std::size_t common = intersection_size(detected, truth);
  const std::size_t uni = detected.size() + truth.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

double pair_score(const Community& detected, const Community& truth, Metric metric) {
  return metric == Metric::kF1 ? pair_f1(detected, truth) : pair_jaccard(detected, truth);
}

double aggregate_score(const CommunitySet& detected, const CommunitySet& truth, Metric metric) {
  if (detected.empty()) throw Error("aggregate score needs at least one detected community");
  if (truth.empty()) throw Error("aggregate score needs at least one ground-truth community");
  const std::size_t N = detected.size(), M = truth.size();
  std::vector<double> best_detected(N, 0.0), best_truth(M, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const double v = pair_score(detected.communities[i], truth.communities[j], metric);
      best_detected[i] = std::max(best_detected[i], v);
      best_truth[j] = std::max(best_truth[j], v);
    }
  }
  double a = 0.0, b = 0.0;
  for (double v : best_detected) a += v;
  for (double v : best_truth) b += v;
  return a / (2.0 * static_cast<double>(N)) + b / (2.0 * static_cast<double>(M));
}

std::vector<BestMatch> best_matches(const CommunitySet& detected, const CommunitySet& truth, Metric metric) {
  std::vector<BestMatch> out;
  for (const auto& c : detected.communities) {
    BestMatch m{"detected", c.id, "", 0.0};
    for (const auto& t : truth.communities) {
      const double v = pair_score(c, t, metric);
      if (m.match_id.empty() || v > m.value) m = {"detected", c.id, t.id, v};
    }
    out.push_back(m);
  }
  for (const auto& t : truth.communities) {
    BestMatch m{"truth", t.id, "", 0.0};
    for (const auto& c : detected.communities) {
      const double v = pair_score(c, t, metric);
      if (m.match_id.empty() || v > m.value) m = {"truth", t.id, c.id, v};
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace cone
