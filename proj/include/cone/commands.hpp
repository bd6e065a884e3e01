#pragma once

#include <functional>
#include <string>

#include "cone/config.hpp"

namespace cone {

/// Creates `dir`, refusing a non-empty existing directory unless `force` is set.
void prepare_output_dir(const std::string& dir, bool force);

/// Writes `<out>/config.txt` with the fully resolved configuration.
void write_resolved_config(const RunConfig& config);

void cmd_synth(const RunConfig& config);
void cmd_split(const RunConfig& config);
void cmd_analyze(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_embed(const RunConfig& config);
void cmd_detect(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);

/// Prepares the output directory, runs `body`, and records the outcome in
/// `<out>/status.txt`. Returns the process exit code (0 ok, 1 failure).
int run_command(const std::string& name, const RunConfig& config, bool force,
                const std::function<void(const RunConfig&)>& body);

}  // namespace cone
