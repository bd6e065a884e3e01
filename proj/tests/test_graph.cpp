#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cone/error.hpp"
#include "cone/graph.hpp"
#include "cone/transition.hpp"
#include "test_util.hpp"

namespace cone {
namespace {

using test::graph_of;
using test::indexed_graph;

// Dense oracle: T built straight from the edge list, powers by naive products.
using Dense = std::vector<std::vector<double>>;

Dense oracle_transition(const Graph& g) {
  const std::size_t n = g.num_nodes();
  Dense w(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) {
    w[e.src][e.dst] += e.weight;
    if (!g.directed()) w[e.dst][e.src] += e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0;
    for (double x : w[i]) d += x;
    if (d == 0) {
      w[i][i] = 1;
      continue;
    }
    for (double& x : w[i]) x /= d;
  }
  return w;
}

Dense oracle_mul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

Dense oracle_power(const Graph& g, int k) {
  Dense t = oracle_transition(g), r = t;
  for (int s = 1; s < k; ++s) r = oracle_mul(r, t);
  return r;
}

void expect_matches(const TransitionMatrix& m, const Dense& want, double tol) {
  ASSERT_EQ(m.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    for (std::size_t j = 0; j < want.size(); ++j) EXPECT_NEAR(m.at(i, j), want[i][j], tol) << i << "," << j;
}

TEST(Graph, BuildReindexesAndCountsDegrees) {
  auto g = graph_of({{"a", "b"}, {"b", "c"}});
  ASSERT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.id(0), "a");
  EXPECT_EQ(g.id(2), "c");
  EXPECT_DOUBLE_EQ(g.degree(0), 1);
  EXPECT_DOUBLE_EQ(g.degree(1), 2);
  EXPECT_DOUBLE_EQ(g.degree(2), 1);
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(Graph, NodeListDeclaresIsolatedNodes) {
  auto g = graph_of({}, false, {"a"});
  EXPECT_EQ(g.num_nodes(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
  EXPECT_DOUBLE_EQ(g.degree(0), 0);
}

TEST(Graph, DuplicateEdgeIsRejected) {
  std::vector<EdgeRecord> recs{{"a", "b", 2.0, 1}, {"a", "b", 3.0, 2}};
  EXPECT_THROW(Graph::build(recs, false), Error);
  std::vector<EdgeRecord> reversed{{"a", "b", 2.0, 1}, {"b", "a", 3.0, 2}};
  EXPECT_THROW(Graph::build(reversed, false), Error);
  EXPECT_NO_THROW(Graph::build(reversed, true));
}

TEST(Graph, SelfLoopsAndZeroWeightsAreDropped) {
  std::vector<EdgeRecord> recs{{"a", "a", 1.0, 1}, {"a", "b", 0.0, 2}, {"b", "c", 1.0, 3}};
  auto g = Graph::build(recs, false);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(Graph, NegativeWeightIsRejected) {
  std::vector<EdgeRecord> recs{{"a", "b", -1.0, 1}};
  EXPECT_THROW(Graph::build(recs, false), Error);
}

TEST(EdgeList, ParsesCommentsAndWeights) {
  std::istringstream in("# header\n\na b\nb c 2.5\n");
  auto recs = read_edge_list(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_DOUBLE_EQ(recs[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(recs[1].weight, 2.5);
  EXPECT_EQ(recs[1].line, 4u);
}

TEST(EdgeList, MalformedLineNamesTheLine) {
  std::istringstream in("a b\nlonely\n");
  try {
    read_edge_list(in, "e.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream neg("a b -2\n");
  EXPECT_THROW(read_edge_list(neg), ParseError);
  std::istringstream junk("a b 2x\n");
  EXPECT_THROW(read_edge_list(junk), ParseError);
}

TEST(Graph, SymmetrizeKeepsLargerWeight) {
  std::vector<EdgeRecord> recs{{"a", "b", 2.0, 0}, {"b", "a", 5.0, 0}, {"b", "c", 1.0, 0}};
  auto g = symmetrize(Graph::build(recs, true));
  EXPECT_FALSE(g.directed());
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_DOUBLE_EQ(g.degree(0), 5.0);
  EXPECT_DOUBLE_EQ(g.degree(1), 6.0);
}

TEST(Transition, TwoNodes) {
  auto t = transition_matrix(graph_of({{"a", "b"}}));
  EXPECT_DOUBLE_EQ(t.at(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(t.at(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.at(0, 0), 0.0);
}

TEST(Transition, Triangle) {
  auto t = transition_matrix(indexed_graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(t.at(i, j), i == j ? 0.0 : 0.5);
}

TEST(Transition, Star) {
  auto t = transition_matrix(indexed_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
  for (std::size_t j = 1; j < 5; ++j) {
    EXPECT_DOUBLE_EQ(t.at(0, j), 0.25);
    EXPECT_DOUBLE_EQ(t.at(j, 0), 1.0);
  }
}

TEST(Transition, DanglingNodeGetsSelfLoop) {
  auto g = indexed_graph(3, {{0, 1}, {1, 2}}, true);
  auto t = transition_matrix(g);
  EXPECT_DOUBLE_EQ(t.at(2, 2), 1.0);
  auto iso = transition_matrix(graph_of({}, false, {"x"}));
  EXPECT_DOUBLE_EQ(iso.at(0, 0), 1.0);
}

TEST(Transition, PathSquaredIsIdentity) {
  auto t = transition_matrix(graph_of({{"a", "b"}}));
  auto t2 = k_step(t, 2);
  EXPECT_EQ(t2.steps(), 2);
  EXPECT_DOUBLE_EQ(t2.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(t2.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(t2.at(1, 1), 1.0);
}

TEST(Transition, TriangleSquared) {
  auto t2 = k_step(transition_matrix(indexed_graph(3, {{0, 1}, {1, 2}, {0, 2}})), 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(t2.at(i, j), i == j ? 0.5 : 0.25, 1e-15);
}

TEST(Transition, KStepRejectsBadInput) {
  auto t = transition_matrix(graph_of({{"a", "b"}}));
  EXPECT_THROW(k_step(t, 0), Error);
  EXPECT_THROW(k_step(k_step(t, 2), 2), Error);
}

TEST(Transition, MatchesDenseOracleOnRandomGraphs) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const bool directed = trial % 2 == 1;
    auto g = test::random_graph(12 + trial % 5, 0.1 + 0.03 * trial, rng, directed, true);
    auto t = transition_matrix(g);
    expect_matches(t, oracle_transition(g), 1e-14);
    for (int k : {2, 3, 5}) expect_matches(k_step(t, k), oracle_power(g, k), 1e-12);
  }
}

TEST(Transition, RowsSumToOne) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = test::random_graph(25, uniform(rng, 0.02, 0.5), rng, trial % 3 == 0, trial % 2 == 0);
    auto t = transition_matrix(g);
    for (int k : {1, 2, 3, 5}) {
      auto tk = k == 1 ? t : k_step(t, k);
      for (std::size_t i = 0; i < tk.size(); ++i) {
        EXPECT_NEAR(tk.row_sum(i), 1.0, 1e-12);
        tk.for_each_in_row(i, [](std::size_t, double v) { EXPECT_GE(v, 0.0); });
      }
    }
  }
}

TEST(Transition, PowersAreAssociative) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = test::random_graph(15, 0.2, rng);
    auto t = transition_matrix(g);
    for (auto [a, b] : {std::pair{1, 1}, {1, 2}, {2, 3}}) {
      auto lhs = k_step(t, a + b);
      auto rhs = multiply(a == 1 ? t : k_step(t, a), b == 1 ? t : k_step(t, b));
      EXPECT_EQ(rhs.steps(), a + b);
      for (std::size_t i = 0; i < lhs.size(); ++i)
        for (std::size_t j = 0; j < lhs.size(); ++j) EXPECT_NEAR(lhs.at(i, j), rhs.at(i, j), 1e-9);
    }
  }
}

TEST(Transition, DetailedBalanceOnUndirectedGraphs) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = test::random_graph(20, 0.25, rng, false, true);
    auto t = transition_matrix(g);
    for (int k : {1, 2, 3}) {
      auto tk = k == 1 ? t : k_step(t, k);
      for (NodeIndex i = 0; i < g.num_nodes(); ++i)
        for (NodeIndex j = 0; j < g.num_nodes(); ++j) {
          if (g.degree(i) == 0 || g.degree(j) == 0) continue;
          EXPECT_NEAR(g.degree(i) * tk.at(i, j), g.degree(j) * tk.at(j, i), 1e-12);
        }
    }
  }
}

TEST(Transition, DenseFallbackAgreesWithSparse) {
  // a clique's square fills in completely, a long path's stays sparse
  std::vector<std::pair<int, int>> clique;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) clique.emplace_back(i, j);
  auto g = indexed_graph(6, clique);
  auto t2 = k_step(transition_matrix(g), 2);
  EXPECT_TRUE(t2.is_dense());
  expect_matches(t2, oracle_power(g, 2), 1e-14);

  std::vector<std::pair<int, int>> path;
  for (int i = 0; i + 1 < 60; ++i) path.emplace_back(i, i + 1);
  auto p = indexed_graph(60, path);
  auto p2 = k_step(transition_matrix(p), 2);
  EXPECT_FALSE(p2.is_dense());
  expect_matches(p2, oracle_power(p, 2), 1e-14);
}

}  // namespace
}  // namespace cone
