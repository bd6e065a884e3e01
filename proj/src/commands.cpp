#include "cone/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cone/analysis.hpp"
#include "cone/archive.hpp"
#include "cone/content.hpp"
#include "cone/error.hpp"
#include "cone/pipeline.hpp"
#include "cone/planted.hpp"
#include "cone/scoring.hpp"

namespace fs = std::filesystem;

namespace cone {

namespace {

std::string out_path(const RunConfig& c, const std::string& file) { return (fs::path(c.out) / file).string(); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  return out;
}

const std::string& require(const std::string& value, const std::string& key) {
  if (value.empty()) throw Error("missing required setting '" + key + "'");
  return value;
}

CommunitySet read_set(const std::string& path, const Graph& g, Split split) {
  CommunitySet s = read_communities_file(path, g);
  s.split = split;
  return s;
}

std::vector<ContentSequence> sequences_of(const Dataset& ds, const ModelConfig& m) {
  return attrs_to_sequences(ds.attrs, m.max_length);
}

}  // namespace

void prepare_output_dir(const std::string& dir, bool force) {
  if (dir.empty()) throw Error("output directory is empty");
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw Error(dir + " exists and is not a directory");
    if (!fs::is_empty(dir) && !force)
      throw Error("output directory " + dir + " is not empty (pass --force to overwrite)");
  }
  fs::create_directories(dir);
}

void write_resolved_config(const RunConfig& config) {
  auto out = open_out(out_path(config, "config.txt"));
  out << config.to_text();
}

void cmd_synth(const RunConfig& c) {
  PlantedConfig p = c.planted;
  p.seed = c.seed;
  const Dataset ds = generate_planted(p);
  write_generic(ds, c.out);
  std::cout << "wrote " << ds.graph.num_nodes() << " nodes, " << ds.graph.num_edges() << " edges, "
            << ds.communities.size() << " communities to " << c.out << '\n';
}

void cmd_split(const RunConfig& c) {
  const Dataset ds = load_dataset(c);
  const auto split = split_communities(ds.communities, c.train_fraction, c.seed);
  write_communities_file(out_path(c, "train.txt"), split.train, ds.graph);
  write_communities_file(out_path(c, "test.txt"), split.test, ds.graph);
  std::cout << split.train.size() << " train / " << split.test.size() << " test communities\n";
}

void cmd_analyze(const RunConfig& c) {
  const Dataset ds = load_dataset(c);
  if (ds.communities.empty()) throw Error("no communities to analyze");
  const auto dens = analyze_density(ds.communities, ds.graph, c.bins);
  {
    auto out = open_out(out_path(c, "density.csv"));
    dens.write_values_csv(out);
  }
  {
    auto out = open_out(out_path(c, "density_hist.csv"));
    dens.write_histogram_csv(out);
  }
  auto summary = open_out(out_path(c, "summary.txt"));
  summary << "communities=" << ds.communities.size() << '\n' << "density_excluded=" << dens.excluded << '\n';
  if (ds.attrs.columns() > 0) {
    const auto hom = analyze_homogeneity(ds.communities, ds.attrs, c.bins);
    {
      auto out = open_out(out_path(c, "homogeneity.csv"));
      hom.write_values_csv(out);
    }
    {
      auto out = open_out(out_path(c, "homogeneity_hist.csv"));
      hom.write_histogram_csv(out);
    }
    summary << "homogeneity_excluded=" << hom.excluded << '\n';
  } else {
    warn("dataset has no attributes; skipping homogeneity");
  }
}

void cmd_train(const RunConfig& c) {
  const Dataset ds = load_dataset(c);
  const CommunitySet train_set = read_set(require(c.train, "train"), ds.graph, Split::kTrain);
  const ModelConfig mc = model_config(c);
  const auto seqs = sequences_of(ds, mc);

  auto loss_csv = open_out(out_path(c, "loss.csv"));
  loss_csv << "epoch,loss\n";
  const auto result = train(ds.graph, seqs, train_set, mc, [&](std::size_t epoch, double loss) {
    loss_csv << epoch << ',' << format_double(loss) << '\n';
  });
  save_model(out_path(c, "model.cone"), result.model);
  std::cout << "trained " << result.loss_trace.size() << " epochs; loss " << result.loss_trace.front() << " -> "
            << result.loss_trace.back() << '\n';
}

void cmd_embed(const RunConfig& c) {
  const Dataset ds = load_dataset(c);
  const ConeModel model = load_model(require(c.model_path, "model"));
  const auto seqs = sequences_of(ds, model.config());
  EmbeddingFile file{embed(model, ds.graph, seqs), {ds.graph.ids().begin(), ds.graph.ids().end()}};
  save_embeddings(out_path(c, "embeddings.cemb"), file);
}

void cmd_detect(const RunConfig& c) {
  const Dataset ds = load_dataset(c);
  const ConeModel model = load_model(require(c.model_path, "model"));
  CommunitySet train_set;
  if (!c.train.empty()) train_set = read_set(c.train, ds.graph, Split::kTrain);
  const auto s = embed(model, ds.graph, sequences_of(ds, model.config()));
  const auto result = detect_communities(s, train_set, detect_options(c));
  write_communities_file(out_path(c, "detected.txt"), result.detected, ds.graph);

  auto summary = open_out(out_path(c, "summary.txt"));
  summary << "k_clusters=" << result.k << '\n'
          << "selected_by=" << (c.k_clusters > 0 ? "override" : "cross-validation") << '\n'
          << "folds=" << result.selection.folds << '\n'
          << "detected_communities=" << result.detected.size() << '\n'
          << "inertia=" << format_double(result.clustering.inertia) << '\n';
  if (!result.selection.scores.empty()) {
    auto sel = open_out(out_path(c, "selection.csv"));
    sel << "k,mean_f1\n";
    for (const auto& [k, score] : result.selection.scores) sel << k << ',' << format_double(score) << '\n';
  }
  std::cout << "k=" << result.k << ", " << result.detected.size() << " communities\n";
}

void cmd_evaluate(const RunConfig& c) {
  const Dataset ds = load_dataset(c);
  const CommunitySet detected = read_set(require(c.detected, "detected"), ds.graph, Split::kDetected);
  const std::string& truth_path = !c.truth.empty() ? c.truth : require(c.test, "truth");
  const CommunitySet truth = read_set(truth_path, ds.graph, Split::kTest);

  std::vector<Metric> metrics;
  if (c.metric == "both") metrics = {Metric::kF1, Metric::kJaccard};
  else metrics = {parse_metric(c.metric)};

  auto scores = open_out(out_path(c, "scores.csv"));
  auto matches = open_out(out_path(c, "matches.csv"));
  scores << "metric,value\n";
  matches << "metric,side,community,best_match,value\n";
  for (Metric m : metrics) {
    const double v = aggregate_score(detected, truth, m);
    scores << to_string(m) << ',' << format_double(v) << '\n';
    for (const auto& b : best_matches(detected, truth, m))
      matches << to_string(m) << ',' << b.side << ',' << b.id << ',' << b.match_id << ',' << format_double(b.value)
              << '\n';
    std::cout << to_string(m) << ' ' << v << '\n';
  }
}

int run_command(const std::string& name, const RunConfig& config, bool force,
                const std::function<void(const RunConfig&)>& body) {
  try {
    prepare_output_dir(config.out, force);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::string status = "ok", message;
  try {
    write_resolved_config(config);
    body(config);
  } catch (const std::exception& e) {
    status = "error";
    message = e.what();
    std::cerr << "error: " << message << '\n';
  }
  std::ofstream st(out_path(config, "status.txt"));
  st << "command=" << name << '\n' << "status=" << status << '\n';
  if (!message.empty()) st << "message=" << message << '\n';
  return status == "ok" ? 0 : 1;
}

}  // namespace cone
