#ifndef GSAMPLER_APP_HPP
#define GSAMPLER_APP_HPP

#include <string>

#include "gsampler/mh.hpp"
#include "gsampler/script.hpp"

namespace gsampler {

// Script-driven sampling run: loads data and priors, runs the chains,
// writes the output file set under prefix. Returns the pooled result.
RunResult run_script(const ScriptConfig& cfg, const std::string& prefix);

int run_command(const std::string& script_path, const std::string& prefix);
int simulate_command(const std::string& script_path, const std::string& prefix);
int probe_command(const std::string& script_path, const std::string& prefix);

// argv contract: graph_sampler [input-file [output-prefix]] with optional
// leading subcommand run|simulate|probe, plus `count-dags N`.
int main_cli(int argc, char** argv);

} // namespace gsampler

#endif
