#ifndef GSAMPLER_SCRIPT_HPP
#define GSAMPLER_SCRIPT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "gsampler/likelihood.hpp"

namespace gsampler {

// Everything a `key = value;` script can set, with the documented
// defaults. Cross-field requirements (e.g. data_file unless prior_only)
// are enforced when a command assembles its inputs, not at parse time.
struct ScriptConfig {
    // problem
    int n_nodes = 0; // required
    std::string data_file;
    std::optional<DataKind> data_kind; // default: discrete iff likelihood = dirichlet
    Family likelihood = Family::NormalGamma;
    bool prior_only = false;

    // chain
    std::int64_t n_iterations = 1000000;
    std::int64_t burn_in = -1; // default: n_iterations / 10
    int n_chains = 3;
    std::uint64_t seed = 42;
    std::int64_t sample_stride = 0;
    std::int64_t batch_length = 10000;
    bool random_scan = false;
    std::optional<bool> rhat; // default: on iff n_chains >= 2
    double rhat_threshold = 1.05;
    std::string initial_graph_file;

    // model
    double alpha = 1.0;
    double omega = 1.0;
    double beta0 = 0.0;
    double n0_scale = 1.0;
    double g = 1.0;
    double pseudo_count = 1.0;

    // structure priors
    double bernoulli_p = 0.5;
    std::string bernoulli_file;   // overrides the flat bernoulli_p
    std::string concordance_file; // enables the concordance prior
    double rho = 1.0;
    std::optional<double> degree_gamma; // enables the degree prior
    std::optional<int> data_arity;      // floor for inferred arities

    // evaluation
    std::string true_graph_file; // enables accuracy.out

    // simulation
    std::string network = "tree"; // tree | file
    std::string network_file;
    int n_obs = 100;
    double beta = 1.0;
    double intercept = 0.0;
    double lambda = 1.0;
    double p_root = 0.5;
    double p_active = 0.8;
    double p_inactive = 0.2;

    // probe
    std::optional<int> probe_i; // 1-based in scripts
    std::optional<int> probe_j;
};

// Parses `key = value;` statements with `#` line comments and quoted
// string values. Unknown keys and syntax problems raise ParseError with
// line/column; known keys with out-of-range values raise ValidationError
// naming the key and the legal range. Never returns a partial config.
ScriptConfig parse_script(const std::string& text);

ScriptConfig parse_script_file(const std::string& path);

} // namespace gsampler

#endif
