#pragma once

#include <string>
#include <vector>

#include "cone/community.hpp"

namespace cone {

enum class Metric { kF1, kJaccard };

std::string to_string(Metric m);
Metric parse_metric(const std::string& name);

/// Harmonic mean of precision |c ∩ c*| / |c*| and recall |c ∩ c*| / |c|; 0 when disjoint.
double pair_f1(const Community& detected, const Community& truth);

/// |c ∩ c*| / |c ∪ c*|
double pair_jaccard(const Community& detected, const Community& truth);

double pair_score(const Community& detected, const Community& truth, Metric metric);

/// Symmetric best-match average:
///   1/(2|C|) sum_{c in C} max_{c*} eval(c, c*) + 1/(2|C*|) sum_{c* in C*} max_{c} eval(c, c*)
/// Throws Error if either set is empty.
double aggregate_score(const CommunitySet& detected, const CommunitySet& truth, Metric metric);

/// Best match for one community of a set, as reported in the evaluation table.
struct BestMatch {
  std::string side;  // "detected" or "truth"
  std::string id;
  std::string match_id;
  double value = 0.0;
};

std::vector<BestMatch> best_matches(const CommunitySet& detected, const CommunitySet& truth, Metric metric);

}  // namespace cone
