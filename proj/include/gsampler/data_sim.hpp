#ifndef GSAMPLER_DATA_SIM_HPP
#define GSAMPLER_DATA_SIM_HPP

#include <cstdint>

#include "gsampler/graph.hpp"
#include "gsampler/likelihood.hpp"

namespace gsampler {

struct SimSpec {
    int n_obs = 100;
    // linear-Gaussian parameters
    double beta = 1.0;       // shared edge coefficient
    double intercept = 0.0;
    double lambda = 1.0;     // noise precision; sd = 1/sqrt(lambda)
    // binary-network parameters
    double p_root = 0.5;
    double p_active = 0.8;   // P(child = 1 | some parent = 1)
    double p_inactive = 0.2; // P(child = 1 | all parents = 0)
    std::uint64_t seed = 0;
    void validate() const;
};

// Deterministic descending tree: node j (1-based, j > 1) hangs under
// ceil((j-1)/2), so each node fans out to at most two children and the
// first-n subgraph of a larger tree is exactly the n-node tree.
Graph gen_tree_network(int n_nodes);

// Linear-Gaussian data, nodes sampled in topological order:
// x_j = intercept + beta * sum(parents) + N(0, 1/lambda).
DataSet sim_continuous(const Graph& g, const SimSpec& spec);

// Binary data: roots ~ Bernoulli(p_root); a child fires with p_active when
// any parent fired, else p_inactive.
DataSet sim_discrete(const Graph& g, const SimSpec& spec);

} // namespace gsampler

#endif
