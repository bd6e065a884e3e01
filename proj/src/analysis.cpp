#include "cone/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cone/error.hpp"

namespace cone {

NodeAttributes::NodeAttributes(std::size_t rows, std::size_t columns) : columns_(columns), rows_(rows) {}

void NodeAttributes::set(std::size_t row, std::uint32_t column, double value) {
  if (!std::isfinite(value)) throw Error("non-finite attribute value");
  if (row >= rows_.size()) throw Error("attribute row out of range");
  auto& r = rows_[row];
  auto it = std::lower_bound(r.begin(), r.end(), column,
                             [](const Entry& e, std::uint32_t c) { return e.first < c; });
  if (it != r.end() && it->first == column) {
    if (value == 0.0)
      r.erase(it);
    else
      it->second = value;
  } else if (value != 0.0) {
    r.insert(it, {column, value});
  }
  columns_ = std::max<std::size_t>(columns_, column + 1);
}

double NodeAttributes::get(std::size_t row, std::uint32_t column) const {
  const auto& r = rows_[row];
  auto it = std::lower_bound(r.begin(), r.end(), column,
                             [](const Entry& e, std::uint32_t c) { return e.first < c; });
  return it != r.end() && it->first == column ? it->second : 0.0;
}

double NodeAttributes::dot(std::size_t i, std::size_t j) const {
  const auto& a = rows_[i];
  const auto& b = rows_[j];
  double s = 0.0;
  std::size_t p = 0, q = 0;
  while (p < a.size() && q < b.size()) {
    if (a[p].first < b[q].first) {
      ++p;
    } else if (b[q].first < a[p].first) {
      ++q;
    } else {
      s += a[p++].second * b[q++].second;
    }
  }
  return s;
}

double density(const Community& c, const Graph& g) {
  const std::size_t m = c.size();
  if (m < 2) throw UndefinedMetric("density is undefined for community " + c.id + " with fewer than 2 members");
  std::size_t induced = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      NodeIndex u = c.members[a], v = c.members[b];
      if (g.has_edge(u, v) || (g.directed() && g.has_edge(v, u))) ++induced;
    }
  }
  return 2.0 * static_cast<double>(induced) / (static_cast<double>(m) * static_cast<double>(m - 1));
}

PairSimilarityAverage average_pair_similarity(const NodeAttributes& attrs) {
  const std::size_t n = attrs.rows();
  PairSimilarityAverage out;
  if (n < 2) return out;
  std::vector<double> total(attrs.columns(), 0.0);
  double self = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [col, v] : attrs.row(i)) {
      total[col] += v;
      self += v * v;
    }
  }
  double all = 0.0;
  for (double t : total) all += t * t;
  out.pairs = static_cast<std::uint64_t>(n) * (n - 1);
  out.value = (all - self) / static_cast<double>(out.pairs);
  return out;
}

double half_sigmoid(double t) {
  const double e = std::exp(-t);
  return (1.0 - e) / (1.0 + e);
}

double homogeneity(const Community& c, const NodeAttributes& attrs, const PairSimilarityAverage& avg) {
  const std::size_t m = c.size();
  if (m < 2) throw UndefinedMetric("homogeneity is undefined for community " + c.id + " with fewer than 2 members");
  if (!(avg.value > 0.0)) throw Error("degenerate content: average pair similarity is not positive");
  double sum = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) sum += half_sigmoid(attrs.dot(c.members[a], c.members[b]) / avg.value);
  return sum / (static_cast<double>(m) * static_cast<double>(m - 1));
}

double homogeneity(const Community& c, const NodeAttributes& attrs) {
  return homogeneity(c, attrs, average_pair_similarity(attrs));
}

Histogram distribution(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw Error("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error("histogram value outside [0, 1]: " + std::to_string(v));
    auto b = static_cast<std::size_t>(std::floor(v * static_cast<double>(bins)));
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

namespace {

template <typename Metric>
AnalysisReport analyze(const CommunitySet& set, std::size_t bins, Metric&& metric) {
  AnalysisReport report;
  std::vector<double> values;
  for (const auto& c : set.communities) {
    try {
      double v = metric(c);
      report.values.emplace_back(c.id, v);
      values.push_back(v);
    } catch (const UndefinedMetric&) {
      ++report.excluded;
    }
  }
  report.histogram = distribution(values, bins);
  return report;
}

}  // namespace

AnalysisReport analyze_density(const CommunitySet& set, const Graph& g, std::size_t bins) {
  return analyze(set, bins, [&](const Community& c) { return density(c, g); });
}

AnalysisReport analyze_homogeneity(const CommunitySet& set, const NodeAttributes& attrs, std::size_t bins) {
  const auto avg = average_pair_similarity(attrs);
  return analyze(set, bins, [&](const Community& c) { return homogeneity(c, attrs, avg); });
}

void AnalysisReport::write_values_csv(std::ostream& out) const {
  out << "community_id,value\n";
  out.precision(17);
  for (const auto& [id, v] : values) out << id << ',' << v << '\n';
}

void AnalysisReport::write_histogram_csv(std::ostream& out) const {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < histogram.counts.size(); ++b)
    out << histogram.edges[b] << ',' << histogram.edges[b + 1] << ',' << histogram.counts[b] << '\n';
}

}  // namespace cone
