#ifndef GSAMPLER_IO_HPP
#define GSAMPLER_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsampler/graph.hpp"
#include "gsampler/likelihood.hpp"
#include "gsampler/mh.hpp"

namespace gsampler {

// Whitespace-delimited numeric matrix; `#` starts a line comment. All
// rows must have the same field count.
Eigen::MatrixXd load_matrix(const std::string& path);

// One row per observation, one column per node. Discrete files must hold
// non-negative integers; arities are inferred as max+1 per column, floored
// at min_arity when given. A constant discrete column without an arity
// floor is rejected (it would get arity 1 and carry no signal).
DataSet load_data(const std::string& path, DataKind kind, int n_nodes,
                  std::optional<int> min_arity = std::nullopt);

Graph load_graph_file(const std::string& path);

void write_matrix(const std::string& path, const Eigen::MatrixXd& m, int precision = 6);
void write_graph_file(const std::string& path, const Graph& g);
void write_data(const std::string& path, const DataSet& data);

// The named output set: edge_p.out, best_graph.out, degree_count.out,
// motifs_count.out, results_mcmc.bin, plus graph_samples.out (when strided
// samples exist), rhat.out (multi-chain), accuracy.out (when truth given).
// Every name gets the prefix prepended.
void write_outputs(const RunResult& result, const std::string& prefix,
                   const std::optional<Graph>& true_graph);

struct BinRecord {
    std::int32_t n_nodes = 0;
    std::int32_t n_chains = 0;
    std::int64_t n_iterations = 0;
    std::int64_t burn_in = 0;
    Eigen::MatrixXd edge_probability;
    std::vector<std::uint8_t> best_adjacency;
    double best_log_posterior = 0.0;
};

// Versioned little-endian dump: magic "GSMC", u32 version, then the
// record fields in declaration order.
void write_results_bin(const std::string& path, const RunResult& result);
BinRecord read_results_bin(const std::string& path);

} // namespace gsampler

#endif
