// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cone/analysis.hpp"
#include "cone/commands.hpp"
#include "cone/gradcheck.hpp"
#include "cone/model.hpp"
#include "cone/pipeline.hpp"
#include "cone/planted.hpp"
#include "cone/scoring.hpp"
#include "cone/transition.hpp"
#include "test_util.hpp"

namespace {

using namespace cone;
using Clock = std::chrono::steady_clock;

constexpr int kSeeds = 5;
const std::vector<std::uint64_t> kSeedList{1, 2, 3, 4, 5};

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v[i], 3);
  return out + "]";
}

// Six co-star communities of eight with signatures of four and some cross-community noise edges.
PlantedConfig benchmark(std::uint64_t seed) {
  PlantedConfig pc;
  pc.pattern = PlantedPattern::kCoStar;
  pc.num_communities = 6;
  pc.community_size = 8;
  pc.signature_size = 4;
  pc.noise_edges = 12;
  pc.seed = seed;
  return pc;
}

// Same structure, but wide signatures, attribute dropout and a large shared noise vocabulary.
PlantedConfig noisy_benchmark(std::uint64_t seed) {
  PlantedConfig pc = benchmark(seed);
  pc.signature_size = 12;
  pc.member_block_size = 12;
  pc.dropout = 0.3;
  pc.noise_pool = 96;
  pc.noise_per_node = 6;
  return pc;
}

struct TransferRun {
  double f1 = 0.0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::size_t k = 0;
};

// Train on two communities, detect on the rest of the graph, score against the held-out four.
TransferRun transfer(const PlantedConfig& pc, ModelConfig mc) {
  const Dataset ds = generate_planted(pc);
  const auto split = split_communities(ds.communities, 2.0 / 6.0, pc.seed);
  const auto seqs = attrs_to_sequences(ds.attrs, mc.max_length);
  mc.seed = pc.seed;
  const auto trained = train(ds.graph, seqs, split.train, mc);
  const auto s = embed(trained.model, ds.graph, seqs);

  DetectOptions opts;
  opts.candidates = std::vector<std::size_t>{2, 4, 6, 8, 12};
  opts.exclude_train = true;
  opts.seed = pc.seed;
  const auto det = detect_communities(s, split.train, opts);

  TransferRun r;
  r.f1 = det.detected.empty() ? 0.0 : aggregate_score(det.detected, split.test, Metric::kF1);
  r.initial_loss = trained.loss_trace.front();
  r.final_loss = trained.loss_trace.back();
  r.k = det.k;
  return r;
}

void gradient_correctness() {
  const auto start = Clock::now();
  Rng rng(2024);
  const Graph g = test::random_graph(20, 0.2, rng);
  const std::size_t vocab = 10;
  std::vector<ContentSequence> seqs(20);
  for (std::size_t i = 0; i < 20; ++i) {
    seqs[i].node = static_cast<NodeIndex>(i);
    const auto len = 1 + uniform_index(rng, 5);
    for (std::size_t t = 0; t < len; ++t) seqs[i].tokens.push_back(static_cast<std::uint32_t>(1 + uniform_index(rng, vocab)));
  }
  CommunitySet train_set;
  std::vector<NodeIndex> a, b;
  for (NodeIndex v = 0; v < 20; ++v) {
    if (v < 8) a.push_back(v);
    if (v >= 6 && v < 14) b.push_back(v);
  }
  train_set.communities = {make_community("a", a), make_community("b", b)};

  ModelConfig cfg;
  cfg.encoder = EncoderKind::kLstm;
  cfg.cells = 2;
  cfg.hidden = 4;
  cfg.input_dim = 4;
  cfg.k_transitions = 2;
  cfg.vocab_size = vocab;
  cfg.num_communities = 2;
  ConeModel model(cfg);
  // nonzero softmax weights so every encoder block receives gradient
  for (double& w : model.softmax_weights().value.data()) w = uniform(rng, -1, 1);

  const auto labels = build_labels(20, train_set);
  const auto tk = regularization_matrix(g, cfg.k_transitions);
  const auto params = model.parameters();
  const auto rep = nn::grad_check([&](nn::Tape& t) { return model.loss(t, seqs, tk, labels); }, params, 1e-4);
  const double secs = seconds_since(start);
  std::size_t entries = 0;
  for (const auto& blk : rep.blocks) entries += blk.entries_checked;
  report(rep.passed() && rep.max_relative_error < 1e-4 && secs < 30.0, "gradient-correctness",
         "max relative error " + fmt(rep.max_relative_error, 3) + " over " + std::to_string(entries) +
             " entries (< 1e-4), " + fmt(secs, 3) + " s (< 30 s)");
}

void stochasticity() {
  Rng rng(77);
  double worst = 0.0;
  std::size_t rows = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + uniform_index(rng, 96);  // n <= 100
    const double p = uniform(rng, 0.01, 0.3);
    const Graph g = test::random_graph(n, p, rng, trial % 3 == 0, trial % 2 == 0);
    const auto t = transition_matrix(g);
    for (int k : {1, 2, 3, 5}) {
      const auto tk = k == 1 ? t : k_step(t, k);
      for (std::size_t i = 0; i < n; ++i, ++rows) worst = std::max(worst, std::abs(tk.row_sum(i) - 1.0));
    }
  }
  report(worst < 1e-9, "transition-stochasticity",
         "max |row sum - 1| = " + fmt(worst, 3) + " over " + std::to_string(rows) + " rows of T^k, k in {1,2,3,5}");
}

void metric_suite() {
  const auto c = make_community("c", {1, 2, 3}), t = make_community("t", {2, 3, 4});
  const double f1 = pair_f1(c, t), jac = pair_jaccard(c, t);

  CommunitySet det, truth;
  det.communities = {make_community("a", {0, 1, 2})};
  truth.communities = {make_community("a", {0, 1, 2}), make_community("b", {3, 4})};
  const double agg = aggregate_score(det, truth, Metric::kF1);

  NodeAttributes attrs(4, 2);
  for (std::size_t i = 0; i < 4; ++i) attrs.set(i, 0, 1.0);
  const double h = homogeneity(make_community("same", {0, 1, 2, 3}), attrs);

  const bool ok = f1 == 2.0 / 3.0 && jac == 0.5 && std::abs(agg - 0.75) < 1e-12 && std::abs(h - 0.4621) <= 0.001;
  report(ok, "metric-unit-suite",
         "pair_f1 " + fmt(f1, 17) + ", pair_jaccard " + fmt(jac, 17) + ", aggregate " + fmt(agg, 17) +
             ", homogeneity " + fmt(h, 6));
}

void transfer_and_descent() {
  const auto start = Clock::now();
  std::vector<double> f1;
  std::vector<std::string> descent_fail;
  std::string losses;
  for (auto seed : kSeedList) {
    const auto r = transfer(benchmark(seed), ModelConfig{});
    f1.push_back(r.f1);
    if (!(r.final_loss < 0.5 * r.initial_loss)) descent_fail.push_back(std::to_string(seed));
    losses += " " + fmt(r.initial_loss, 3) + "->" + fmt(r.final_loss, 3);
  }
  const double secs = seconds_since(start);
  report(mean(f1) >= 0.8 && secs < 300.0, "planted-transfer",
         "mean aggregate F1 " + fmt(mean(f1)) + " (>= 0.8 required) per seed " + list(f1) + ", " + fmt(secs, 3) +
             " s (< 300 s)");
  report(descent_fail.empty(), "training-descent",
         "final < 0.5 x initial loss on every seed; losses" + losses);
}

void regularization_ablation() {
  std::vector<double> k2, k0;
  for (auto seed : kSeedList) {
    ModelConfig with;
    with.k_transitions = 2;
    ModelConfig without;
    without.k_transitions = 0;
    k2.push_back(transfer(benchmark(seed), with).f1);
    k0.push_back(transfer(benchmark(seed), without).f1);
  }
  report(mean(k2) > mean(k0), "regularization-ablation",
         "mean F1 k=2 " + fmt(mean(k2)) + " " + list(k2) + " vs k=0 " + fmt(mean(k0)) + " " + list(k0));
}

void encoder_ablation() {
  std::vector<double> lstm, ff;
  for (auto seed : kSeedList) {
    ModelConfig l;
    l.encoder = EncoderKind::kLstm;
    ModelConfig f;
    f.encoder = EncoderKind::kFeedforward;
    lstm.push_back(transfer(noisy_benchmark(seed), l).f1);
    ff.push_back(transfer(noisy_benchmark(seed), f).f1);
  }
  report(mean(lstm) >= mean(ff) - 0.05, "encoder-ablation",
         "mean F1 lstm " + fmt(mean(lstm)) + " " + list(lstm) + " vs feedforward " + fmt(mean(ff)) + " " + list(ff) +
             " (lstm >= ff - 0.05 required)");
}

// Runs synth -> split -> train -> detect -> evaluate into `dir` and returns the config used.
bool pipeline_run(const std::string& dir) {
  RunConfig base;
  base.seed = 11;
  base.planted = benchmark(11);
  base.train_fraction = 2.0 / 6.0;
  base.exclude_train = true;

  auto stage = [&](const std::string& name, const std::function<void(const RunConfig&)>& body,
                   const std::function<void(RunConfig&)>& tweak) {
    RunConfig c = base;
    c.out = dir + "/" + name;
    tweak(c);
    return run_command(name, c, true, body) == 0;
  };
  const std::string data = dir + "/synth";
  auto with_data = [&](RunConfig& c) {
    c.edges = data + "/edges.txt";
    c.attrs = data + "/attrs.txt";
    c.nodes = data + "/nodes.txt";
    c.communities = data + "/communities.txt";
  };
  return stage("synth", cmd_synth, [](RunConfig&) {}) && stage("split", cmd_split, with_data) &&
         stage("train", cmd_train, [&](RunConfig& c) {
           with_data(c);
           c.train = dir + "/split/train.txt";
         }) &&
         stage("detect", cmd_detect, [&](RunConfig& c) {
           with_data(c);
           c.train = dir + "/split/train.txt";
           c.model_path = dir + "/train/model.cone";
         }) &&
         stage("evaluate", cmd_evaluate, [&](RunConfig& c) {
           with_data(c);
           c.detected = dir + "/detect/detected.txt";
           c.test = dir + "/split/test.txt";
         });
}

void determinism() {
  unsetenv("CONE_THREADS");
  test::TempDir a("accept-a"), b("accept-b");
  const bool ran = pipeline_run(a.str()) && pipeline_run(b.str());
  bool same = ran;
  std::string detail;
  for (const char* file : {"train/model.cone", "train/loss.csv", "detect/detected.txt", "evaluate/scores.csv",
                           "evaluate/matches.csv"}) {
    const auto x = test::slurp(a.file(file)), y = test::slurp(b.file(file));
    const bool eq = !x.empty() && x == y;
    same = same && eq;
    detail += std::string(detail.empty() ? "" : ", ") + file + (eq ? " identical" : " DIFFERS");
  }
  report(same, "determinism", ran ? detail : "pipeline run failed; " + detail);
}

void facebook() {
  const char* dir = std::getenv("CONE_FACEBOOK_DIR");
  if (!dir || !*dir) {
    std::cout << "SKIP facebook-ego: set CONE_FACEBOOK_DIR to the SNAP facebook/ directory to run" << std::endl;
    return;
  }
  const auto start = Clock::now();
  Dataset ds;
  try {
    ds = load_ego_dataset(dir);
  } catch (const std::exception& e) {
    report(false, "facebook-ego", std::string("loader failed: ") + e.what());
    return;
  }
  const bool counts = ds.graph.num_nodes() == 4039 && ds.communities.size() == 192 && ds.graph.num_edges() == 88234;
  report(counts, "facebook-ego-counts",
         std::to_string(ds.graph.num_nodes()) + " nodes (4039), " + std::to_string(ds.communities.size()) +
             " communities (192), " + std::to_string(ds.graph.num_edges()) + " links (88234)");

  const auto split = split_communities(ds.communities, 0.1, 1);
  ModelConfig mc;
  mc.epochs = 100;
  const auto seqs = attrs_to_sequences(ds.attrs, mc.max_length);
  const auto trained = train(ds.graph, seqs, split.train, mc);
  DetectOptions opts;
  opts.seed = 1;
  const auto det = detect_communities(embed(trained.model, ds.graph, seqs), split.train, opts);
  const double f1 = aggregate_score(det.detected, split.test, Metric::kF1);
  report(f1 > 0.1, "facebook-ego-end-to-end",
         "aggregate F1 " + fmt(f1) + " (> 0.1), k=" + std::to_string(det.k) + ", " + fmt(seconds_since(start), 3) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)()>> criteria{
      {"gradient-correctness", gradient_correctness},
      {"transition-stochasticity", stochasticity},
      {"metric-unit-suite", metric_suite},
      {"planted-transfer", transfer_and_descent},
      {"regularization-ablation", regularization_ablation},
      {"encoder-ablation", encoder_ablation},
      {"determinism", determinism},
      {"facebook-ego", facebook},
  };
  for (const auto& [name, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(false, name, std::string("threw: ") + e.what());
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
