// cone: command-line front end for the community detection pipeline.
#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <memory>
#include <map>
#include <string>
#include <vector>

#include "cone/commands.hpp"
#include "cone/config.hpp"
#include "cone/error.hpp"

namespace {

struct Sub {
  CLI::App* app = nullptr;
  std::function<void(const cone::RunConfig&)> body;
  std::map<std::string, std::string> values;  // config key -> raw CLI value
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, bool> flags;
  std::string config_file;
  bool force = false;
};

std::string flag_name(std::string key) {
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

void add_options(Sub& s, const std::vector<std::pair<std::string, std::string>>& keys) {
  for (const auto& [key, help] : keys) s.options[key] = s.app->add_option(flag_name(key), s.values[key], help);
}

void add_flags(Sub& s, const std::vector<std::pair<std::string, std::string>>& keys) {
  for (const auto& [key, help] : keys) s.options[key] = s.app->add_flag(flag_name(key), s.flags[key], help);
}

const std::vector<std::pair<std::string, std::string>> kDataset = {
    {"edges", "edge list (src dst [weight])"},
    {"attrs", "sparse attribute file"},
    {"nodes", "node list fixing node order"},
    {"communities", "community file"},
    {"ego_dir", "directory of SNAP ego networks (overrides --edges)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cone: content-based community detection with graph regularization"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Sub>> subs;
  auto make = [&](const std::string& name, const std::string& help, auto body, bool dataset) -> Sub& {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, help);
    s->body = body;
    s->app->add_option("--config", s->config_file, "key=value config file (command line wins)");
    s->app->add_flag("--force", s->force, "write into a non-empty output directory");
    add_options(*s, {{"out", "output directory"}, {"seed", "run seed"}});
    if (dataset) {
      add_options(*s, kDataset);
      add_flags(*s, {{"directed", "treat the edge list as directed"}});
    }
    subs.push_back(std::move(s));
    return *subs.back();
  };

  auto& synth = make("synth", "generate a planted-community dataset", cone::cmd_synth, false);
  add_options(synth, {{"pattern", "star, co-star or bridge"},
                      {"num_communities", "number of planted communities"},
                      {"community_size", "nodes per community"},
                      {"noise_edges", "random edges between communities"},
                      {"signature_size", "exclusive attributes of community centers"},
                      {"member_block_size", "attributes shared by community members"},
                      {"noise_pool", "attributes shared by all nodes"},
                      {"noise_per_node", "pool attributes per node"},
                      {"dropout", "chance a member drops a block attribute"}});

  auto& split = make("split", "split communities into train and test", cone::cmd_split, true);
  add_options(split, {{"train_fraction", "fraction of communities used for training"}});

  auto& analyze = make("analyze", "density and homogeneity of communities", cone::cmd_analyze, true);
  add_options(analyze, {{"bins", "histogram bins"}});

  auto& train = make("train", "train the model on training communities", cone::cmd_train, true);
  add_options(train, {{"train", "training community file"},
                      {"encoder", "lstm or feedforward"},
                      {"k_transitions", "random-walk steps k"},
                      {"hidden", "embedding width p"},
                      {"cells", "LSTM cells d"},
                      {"input_dim", "token embedding width"},
                      {"ff_widths", "feedforward layer widths, comma separated"},
                      {"rho", "AdaGrad learning rate"},
                      {"epochs", "training epochs"},
                      {"max_length", "content sequence cap"}});

  auto& embed = make("embed", "write regularized node embeddings", cone::cmd_embed, true);
  add_options(embed, {{"model", "model archive"}});

  auto& detect = make("detect", "cluster embeddings into communities", cone::cmd_detect, true);
  add_options(detect, {{"model", "model archive"},
                       {"train", "training communities (cluster-count selection)"},
                       {"k_clusters", "fixed cluster count, skipping selection"},
                       {"candidates", "cluster-count candidates, comma separated, or auto"},
                       {"folds", "cross-validation folds"},
                       {"min_size", "drop detected communities smaller than this"}});
  add_flags(detect, {{"exclude_train", "detect on the remainder: drop members of training communities"}});

  auto& evaluate = make("evaluate", "score detected communities against ground truth", cone::cmd_evaluate, true);
  add_options(evaluate, {{"detected", "detected community file"},
                         {"truth", "ground-truth community file"},
                         {"test", "test split used as ground truth when --truth is absent"},
                         {"metric", "f1, jaccard or both"}});

  CLI11_PARSE(app, argc, argv);

  for (auto& s : subs) {
    if (!s->app->parsed()) continue;
    cone::RunConfig config;
    try {
      if (!s->config_file.empty()) config.apply_file(s->config_file);
      for (const auto& [key, opt] : s->options) {
        if (opt->count() == 0) continue;
        if (s->flags.count(key))
          config.set(key, s->flags[key] ? "true" : "false");
        else
          config.set(key, s->values[key]);
      }
    } catch (const cone::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    return cone::run_command(s->app->get_name(), config, s->force, s->body);
  }
  return 2;
}
