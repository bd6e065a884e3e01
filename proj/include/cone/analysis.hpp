#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cone/community.hpp"
#include "cone/graph.hpp"

namespace cone {

/// Sparse node content matrix: row i holds (column, value) pairs for node i.
class NodeAttributes {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  NodeAttributes() = default;
  NodeAttributes(std::size_t rows, std::size_t columns);

  std::size_t rows() const { return rows_.size(); }
  std::size_t columns() const { return columns_; }

  /// Sets a_ij; columns beyond the current width grow the matrix. Zero erases.
  void set(std::size_t row, std::uint32_t column, double value);
  double get(std::size_t row, std::uint32_t column) const;
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }

  double dot(std::size_t i, std::size_t j) const;

  std::vector<std::string>& names() { return names_; }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const NodeAttributes&) const = default;

 private:
  std::size_t columns_ = 0;
  std::vector<std::vector<Entry>> rows_;  // sorted by column
  std::vector<std::string> names_;
};

/// D(C) = 2|E_C| / (|V_C|(|V_C|-1)); an unordered pair counts once if linked in
/// either direction. Throws UndefinedMetric for communities with fewer than two members.
double density(const Community& c, const Graph& g);

/// Network-wide mean of a_i . a_j over ordered pairs i != j.
struct PairSimilarityAverage {
  double value = 0.0;
  std::uint64_t pairs = 0;  // number of ordered pairs averaged over
};

/// Exact, via |sum_i a_i|^2 - sum_i |a_i|^2, so it costs O(nnz) rather than O(n^2).
PairSimilarityAverage average_pair_similarity(const NodeAttributes& attrs);

/// sigma(t) = (1 - e^-t) / (1 + e^-t)
double half_sigmoid(double t);

/// H(C): mean over ordered member pairs of sigma(a_i . a_j / avg).
/// Throws UndefinedMetric for singletons and Error when avg is not positive.
double homogeneity(const Community& c, const NodeAttributes& attrs, const PairSimilarityAverage& avg);
double homogeneity(const Community& c, const NodeAttributes& attrs);

struct Histogram {
  std::vector<double> edges;  // bins + 1 boundaries over [0, 1]
  std::vector<std::size_t> counts;
};

/// Per-community values plus their histogram.
struct AnalysisReport {
  std::vector<std::pair<std::string, double>> values;
  Histogram histogram;
  std::size_t excluded = 0;  // communities the metric is undefined on

  void write_values_csv(std::ostream& out) const;
  void write_histogram_csv(std::ostream& out) const;
};

/// Equal-width bins over [0, 1]. Bins are [lo, hi) except the last, which is closed.
Histogram distribution(const std::vector<double>& values, std::size_t bins);

AnalysisReport analyze_density(const CommunitySet& set, const Graph& g, std::size_t bins);
AnalysisReport analyze_homogeneity(const CommunitySet& set, const NodeAttributes& attrs, std::size_t bins);

}  // namespace cone
